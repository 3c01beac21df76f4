#pragma once

#include <cstdint>
#include <vector>

#include "tempocast/random.hpp"
#include "tempocast/tensor.hpp"

namespace tempocast {

// ---- linear algebra ----
Tensor matmul(const Tensor& a, const Tensor& b);  // [m,k]x[k,n]
Tensor transpose(const Tensor& a);                // rank-2
Tensor bmm(const Tensor& a, const Tensor& b);     // [B,m,k]x[B,k,n]
Tensor bmm_nt(const Tensor& a, const Tensor& b);  // [B,m,k]x[B,n,k] -> a.b^T per batch

// ---- elementwise; binary ops broadcast a trailing-dim suffix ----
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor add_scalar(const Tensor& a, double c);
Tensor mul_scalar(const Tensor& a, double c);
Tensor sigmoid(const Tensor& x);
Tensor tanh(const Tensor& x);
Tensor relu(const Tensor& x);
Tensor elu(const Tensor& x);

// ---- normalization ----
Tensor softmax(const Tensor& x, int axis);

/// Visibility pattern for attention: entry (r,c) true means query r may read
/// key c. Invisible entries are excluded from the softmax entirely, so their
/// weights are exactly zero and cannot perturb visible ones.
struct AttnMask {
    int rows = 0;
    int cols = 0;
    std::vector<std::uint8_t> visible;

    static AttnMask causal(int len);
    static AttnMask all_visible(int rows, int cols);
    bool at(int r, int c) const { return visible[static_cast<std::size_t>(r) * cols + c] != 0; }
};

/// Row-wise softmax over the last axis of x[..., R, C] restricted to mask.
Tensor masked_softmax(const Tensor& x, const AttnMask& mask);

/// Normalizes the last axis to mean 0 / variance 1 (epsilon inside the root),
/// then applies the affine gain/bias.
Tensor layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias, double eps = 1e-5);

/// Inverted dropout: kept entries scaled by 1/(1-rate). Identity when not
/// training or rate == 0.
Tensor dropout(const Tensor& x, double rate, bool training, Rng& rng);

// ---- shape surgery ----
Tensor reshape(const Tensor& x, Shape new_shape);
Tensor slice(const Tensor& x, int axis, int start, int len);
Tensor concat(const std::vector<Tensor>& xs, int axis);

/// [N,D] -> [N*times, D]; row i lands on rows i*times .. i*times+times-1.
Tensor repeat_rows(const Tensor& x, int times);

/// diag(s) . x for x[N,D], s[N] (or [N,1]).
Tensor scale_rows(const Tensor& x, const Tensor& s);

// ---- reductions ----
Tensor sum_all(const Tensor& x);
Tensor mean_all(const Tensor& x);

// ---- convolution ----
/// Causal dilated 1-D convolution: x[B,T,Cin] * w[K,Cin,Cout] + bias[Cout],
/// left-padded by (K-1)*dilation so the output keeps length T and position t
/// reads inputs at t, t-dilation, ..., t-(K-1)*dilation only.
Tensor conv1d_causal(const Tensor& x, const Tensor& w, const Tensor& bias, int dilation);

}  // namespace tempocast
