#include "tempocast/layers.hpp"

#include <cmath>

#include "tempocast/error.hpp"

namespace tempocast {

Dense Dense::create(ParameterSet& ps, const std::string& name, int in, int out, Rng& rng, bool bias) {
    Dense d;
    d.in = in;
    d.out = out;
    d.has_bias = bias;
    d.W = ps.add(name + ".W", {in, out}, glorot_uniform(rng, in, out, static_cast<std::size_t>(in) * out));
    if (bias) d.b = ps.add(name + ".b", {out}, std::vector<double>(out, 0.0));
    return d;
}

Tensor Dense::operator()(const Tensor& x) const {
    Tensor y = matmul(x, W);
    return has_bias ? add(y, b) : y;
}

LayerNormParams LayerNormParams::create(ParameterSet& ps, const std::string& name, int dim) {
    LayerNormParams p;
    p.gain = ps.add(name + ".gain", {dim}, std::vector<double>(dim, 1.0));
    p.bias = ps.add(name + ".bias", {dim}, std::vector<double>(dim, 0.0));
    return p;
}

Glu Glu::create(ParameterSet& ps, const std::string& name, int in, int out, Rng& rng) {
    Glu g;
    g.gate = Dense::create(ps, name + ".gate", in, out, rng);
    g.lin = Dense::create(ps, name + ".lin", in, out, rng);
    return g;
}

Grn Grn::create(ParameterSet& ps, const std::string& name, int in, int hidden, int out,
                int context_size, double dropout, Rng& rng) {
    Grn g;
    g.in = in;
    g.hidden = hidden;
    g.out = out;
    g.has_context = context_size > 0;
    g.dropout_rate = dropout;
    g.d1 = Dense::create(ps, name + ".d1", in, hidden, rng);
    if (g.has_context) g.dc = Dense::create(ps, name + ".ctx", context_size, hidden, rng, /*bias=*/false);
    g.d2 = Dense::create(ps, name + ".d2", hidden, hidden, rng);
    g.glu = Glu::create(ps, name + ".glu", hidden, out, rng);
    g.projected_skip = in != out;
    if (g.projected_skip) g.skip = Dense::create(ps, name + ".skip", in, out, rng);
    g.ln = LayerNormParams::create(ps, name + ".ln", out);
    return g;
}

Tensor Grn::forward(const Tensor& a, const Tensor* context, bool training, Rng& rng) const {
    if (context && !has_context)
        throw ConfigError("GRN: context supplied to a context-free block");
    if (!context && has_context)
        throw ConfigError("GRN: context-aware block called without context");
    Tensor pre = d1(a);
    if (context) pre = add(pre, dc(*context));
    Tensor gamma = d2(elu(pre));
    gamma = dropout(gamma, dropout_rate, training, rng);
    Tensor gated = glu(gamma);
    Tensor skipped = projected_skip ? skip(a) : a;
    return ln(add(skipped, gated));
}

Vsn Vsn::create(ParameterSet& ps, const std::string& name, int num_vars, int d, int context_size,
                double dropout, Rng& rng) {
    if (num_vars < 1) throw ConfigError("variable selection needs at least one variable");
    Vsn v;
    v.d = d;
    v.num_vars = num_vars;
    v.flat = Grn::create(ps, name + ".flat", num_vars * d, d, num_vars, context_size, dropout, rng);
    v.per_var.reserve(num_vars);
    for (int i = 0; i < num_vars; ++i)
        v.per_var.push_back(Grn::create(ps, name + ".var" + std::to_string(i), d, d, d, 0, dropout, rng));
    return v;
}

Vsn::Result Vsn::forward(const std::vector<Tensor>& vars, const Tensor* context, bool training,
                         Rng& rng) const {
    if (static_cast<int>(vars.size()) != num_vars)
        throw ConfigError("variable selection built for " + std::to_string(num_vars) + " variables, got " +
                          std::to_string(vars.size()));
    Tensor flat_in = num_vars == 1 ? vars[0] : concat(vars, 1);
    Tensor weights = softmax(flat.forward(flat_in, context, training, rng), 1);
    Tensor combined;
    for (int i = 0; i < num_vars; ++i) {
        Tensor contrib = scale_rows(per_var[i].forward(vars[i], nullptr, training, rng),
                                    slice(weights, 1, i, 1));
        combined = i == 0 ? contrib : add(combined, contrib);
    }
    return Result{combined, weights};
}

LstmCell LstmCell::create(ParameterSet& ps, const std::string& name, int in, int h, Rng& rng,
                          double forget_bias) {
    LstmCell c;
    c.in = in;
    c.h = h;
    c.Wx = ps.add(name + ".Wx", {in, 4 * h}, glorot_uniform(rng, in, 4 * h, static_cast<std::size_t>(in) * 4 * h));
    c.Wh = ps.add(name + ".Wh", {h, 4 * h}, glorot_uniform(rng, h, 4 * h, static_cast<std::size_t>(h) * 4 * h));
    std::vector<double> bias(static_cast<std::size_t>(4) * h, 0.0);
    for (int i = h; i < 2 * h; ++i) bias[i] = forget_bias;
    c.b = ps.add(name + ".b", {4 * h}, std::move(bias));
    return c;
}

std::pair<Tensor, Tensor> LstmCell::step(const Tensor& x, const Tensor& h_prev,
                                         const Tensor& c_prev) const {
    Tensor pre = add(add(matmul(x, Wx), matmul(h_prev, Wh)), b);
    Tensor gi = sigmoid(slice(pre, 1, 0, h));
    Tensor gf = sigmoid(slice(pre, 1, h, h));
    Tensor gg = tanh(slice(pre, 1, 2 * h, h));
    Tensor go = sigmoid(slice(pre, 1, 3 * h, h));
    Tensor c_next = add(mul(gf, c_prev), mul(gi, gg));
    Tensor h_next = mul(go, tanh(c_next));
    return {h_next, c_next};
}

LstmStack LstmStack::create(ParameterSet& ps, const std::string& name, int in, int hidden,
                            int num_layers, Rng& rng) {
    if (num_layers < 1) throw ConfigError("LSTM stack needs at least one layer");
    LstmStack s;
    s.in = in;
    s.hidden = hidden;
    for (int l = 0; l < num_layers; ++l)
        s.cells.push_back(
            LstmCell::create(ps, name + ".l" + std::to_string(l), l == 0 ? in : hidden, hidden, rng));
    return s;
}

LstmState LstmStack::zero_state(int batch) const {
    LstmState st;
    for (std::size_t l = 0; l < cells.size(); ++l) {
        st.h.push_back(Tensor::zeros({batch, hidden}));
        st.c.push_back(Tensor::zeros({batch, hidden}));
    }
    return st;
}

std::pair<Tensor, LstmState> LstmStack::forward(const Tensor& x, const LstmState& init,
                                                double inter_layer_dropout, bool training,
                                                Rng& rng) const {
    if (x.rank() != 3 || x.dim(2) != in)
        throw ShapeError("LSTM stack expects [B,T," + std::to_string(in) + "], got " + shape_str(x.shape()));
    if (init.h.size() != cells.size() || init.c.size() != cells.size())
        throw ShapeError("LSTM stack: initial state has wrong layer count");
    const int B = x.dim(0), T = x.dim(1);
    Tensor layer_in = x;
    LstmState final_state;
    Tensor top_seq;
    for (std::size_t l = 0; l < cells.size(); ++l) {
        Tensor h = init.h[l];
        Tensor c = init.c[l];
        std::vector<Tensor> outs;
        outs.reserve(static_cast<std::size_t>(T));
        const int width = layer_in.dim(2);
        for (int t = 0; t < T; ++t) {
            Tensor xt = reshape(slice(layer_in, 1, t, 1), {B, width});
            auto [hn, cn] = cells[l].step(xt, h, c);
            h = hn;
            c = cn;
            outs.push_back(reshape(hn, {B, 1, hidden}));
        }
        final_state.h.push_back(h);
        final_state.c.push_back(c);
        Tensor seq = T == 1 ? outs[0] : concat(outs, 1);
        top_seq = seq;
        if (l + 1 < cells.size())
            layer_in = dropout(seq, inter_layer_dropout, training, rng);
    }
    return {top_seq, final_state};
}

Mha Mha::create(ParameterSet& ps, const std::string& name, int d, int heads, Rng& rng) {
    if (heads < 1 || d % heads != 0)
        throw ConfigError("attention: model dim " + std::to_string(d) + " not divisible by " +
                          std::to_string(heads) + " heads");
    Mha m;
    m.d = d;
    m.heads = heads;
    m.dh = d / heads;
    auto init = [&](int rows, int cols) {
        return glorot_uniform(rng, rows, cols, static_cast<std::size_t>(rows) * cols);
    };
    m.Wq = ps.add(name + ".Wq", {d, heads * m.dh}, init(d, heads * m.dh));
    m.Wk = ps.add(name + ".Wk", {d, heads * m.dh}, init(d, heads * m.dh));
    m.Wv = ps.add(name + ".Wv", {d, m.dh}, init(d, m.dh));
    m.Wo = ps.add(name + ".Wo", {m.dh, d}, init(m.dh, d));
    return m;
}

Mha::Result Mha::forward(const Tensor& q_in, const Tensor& k_in, const Tensor& v_in,
                         const AttnMask& mask) const {
    if (q_in.rank() != 3 || k_in.rank() != 3 || v_in.rank() != 3)
        throw ShapeError("attention expects [B,L,d] inputs");
    const int B = q_in.dim(0), Lq = q_in.dim(1), Lk = k_in.dim(1);
    if (mask.rows != Lq || mask.cols != Lk)
        throw ShapeError("attention mask " + std::to_string(mask.rows) + "x" + std::to_string(mask.cols) +
                         " does not fit sequence lengths " + std::to_string(Lq) + "/" + std::to_string(Lk));
    Tensor qf = matmul(reshape(q_in, {B * Lq, d}), Wq);
    Tensor kf = matmul(reshape(k_in, {B * Lk, d}), Wk);
    Tensor vf = reshape(matmul(reshape(v_in, {B * Lk, d}), Wv), {B, Lk, dh});
    const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
    Result res;
    Tensor mean_heads;
    for (int h = 0; h < heads; ++h) {
        Tensor qh = reshape(slice(qf, 1, h * dh, dh), {B, Lq, dh});
        Tensor kh = reshape(slice(kf, 1, h * dh, dh), {B, Lk, dh});
        Tensor scores = mul_scalar(bmm_nt(qh, kh), scale);
        Tensor w = masked_softmax(scores, mask);
        res.head_weights.push_back(w);
        Tensor oh = bmm(w, vf);  // [B, Lq, dh]
        mean_heads = h == 0 ? oh : add(mean_heads, oh);
    }
    if (heads > 1) mean_heads = mul_scalar(mean_heads, 1.0 / heads);
    res.output = reshape(matmul(reshape(mean_heads, {B * Lq, dh}), Wo), {B, Lq, d});
    return res;
}

}  // namespace tempocast
