#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tempocast/ops.hpp"
#include "tempocast/params.hpp"
#include "tempocast/random.hpp"

namespace tempocast {

/// Affine map x[N,in] -> x.W + b.
struct Dense {
    Tensor W;  // [in, out]
    Tensor b;  // [out] when biased
    int in = 0, out = 0;
    bool has_bias = true;

    static Dense create(ParameterSet& ps, const std::string& name, int in, int out, Rng& rng,
                        bool bias = true);
    Tensor operator()(const Tensor& x) const;
};

struct LayerNormParams {
    Tensor gain, bias;

    static LayerNormParams create(ParameterSet& ps, const std::string& name, int dim);
    Tensor operator()(const Tensor& x) const { return layer_norm(x, gain, bias); }
};

/// Gated linear unit: sigmoid(gate(x)) * lin(x).
struct Glu {
    Dense gate, lin;

    static Glu create(ParameterSet& ps, const std::string& name, int in, int out, Rng& rng);
    Tensor operator()(const Tensor& x) const { return mul(sigmoid(gate(x)), lin(x)); }
};

/// Gated residual network:
///   GRN(a, c) = LayerNorm(skip(a) + GLU(dense2(ELU(dense1(a) + dense_c(c)))))
/// with dropout on the GLU input while training. The skip is the identity when
/// in == out and a learned projection otherwise.
struct Grn {
    int in = 0, hidden = 0, out = 0;
    bool has_context = false;
    double dropout_rate = 0.0;
    Dense d1;       // in -> hidden
    Dense dc;       // context -> hidden, bias-free
    Dense d2;       // hidden -> hidden
    Glu glu;        // hidden -> out
    bool projected_skip = false;
    Dense skip;     // in -> out when projected
    LayerNormParams ln;

    static Grn create(ParameterSet& ps, const std::string& name, int in, int hidden, int out,
                      int context_size, double dropout, Rng& rng);
    Tensor forward(const Tensor& a, const Tensor* context, bool training, Rng& rng) const;
};

/// Variable selection network: per-variable GRN transforms mixed by softmax
/// weights computed from the flattened variable embeddings.
struct Vsn {
    int d = 0;
    int num_vars = 0;
    Grn flat;                  // num_vars*d -> d hidden -> num_vars logits
    std::vector<Grn> per_var;  // d -> d

    struct Result {
        Tensor combined;  // [N, d]
        Tensor weights;   // [N, num_vars]
    };

    static Vsn create(ParameterSet& ps, const std::string& name, int num_vars, int d,
                      int context_size, double dropout, Rng& rng);
    Result forward(const std::vector<Tensor>& vars, const Tensor* context, bool training, Rng& rng) const;
};

/// One LSTM layer's weights; gate order in the 4h block is (input, forget,
/// candidate, output). Forget-gate bias starts at 1.
struct LstmCell {
    Tensor Wx;  // [in, 4h]
    Tensor Wh;  // [h, 4h]
    Tensor b;   // [4h]
    int in = 0, h = 0;

    static LstmCell create(ParameterSet& ps, const std::string& name, int in, int h, Rng& rng,
                           double forget_bias = 1.0);
    /// x[B,in], h/c[B,h] -> (h', c')
    std::pair<Tensor, Tensor> step(const Tensor& x, const Tensor& h_prev, const Tensor& c_prev) const;
};

struct LstmState {
    std::vector<Tensor> h, c;  // per layer, [B, hidden]
};

struct LstmStack {
    std::vector<LstmCell> cells;
    int in = 0, hidden = 0;

    static LstmStack create(ParameterSet& ps, const std::string& name, int in, int hidden,
                            int num_layers, Rng& rng);
    LstmState zero_state(int batch) const;
    /// x[B,T,in] -> (top-layer hidden sequence [B,T,h], final state). Dropout
    /// is applied to each layer's output sequence before the next layer.
    std::pair<Tensor, LstmState> forward(const Tensor& x, const LstmState& init,
                                         double inter_layer_dropout, bool training, Rng& rng) const;
};

/// Interpretable multi-head attention: per-head query/key maps, one value map
/// shared by all heads, head outputs averaged and then projected.
struct Mha {
    int d = 0, heads = 0, dh = 0;
    Tensor Wq, Wk;  // [d, heads*dh]
    Tensor Wv;      // [d, dh]
    Tensor Wo;      // [dh, d]

    struct Result {
        Tensor output;                     // [B, L, d]
        std::vector<Tensor> head_weights;  // per head [B, Lq, Lk]
    };

    static Mha create(ParameterSet& ps, const std::string& name, int d, int heads, Rng& rng);
    Result forward(const Tensor& q_in, const Tensor& k_in, const Tensor& v_in,
                   const AttnMask& mask) const;
    Result self_attention(const Tensor& x, const AttnMask& mask) const {
        return forward(x, x, x, mask);
    }
};

}  // namespace tempocast
