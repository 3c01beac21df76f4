#include "tempocast/ops.hpp"

#include <cmath>
#include <cstring>

#include "tempocast/error.hpp"

namespace tempocast {

namespace {

using detail::TensorNode;
using NodePtr = std::shared_ptr<TensorNode>;

/// Marks `out` as tracked and registers the backward step when a tape is live
/// and any input is tracked.
template <typename Back>
void record_step(Tensor& out, std::initializer_list<const Tensor*> inputs, Back&& back) {
    Graph* g = Graph::current();
    if (!g) return;
    bool any = false;
    for (const Tensor* t : inputs) any = any || t->requires_grad();
    if (!any) return;
    out.set_requires_grad();
    g->record(out.node(), std::forward<Back>(back));
}

void check_rank2(const Tensor& t, const char* who) {
    if (t.rank() != 2) throw ShapeError(std::string(who) + ": expected rank-2 tensor, got " + shape_str(t.shape()));
}

/// a op b where the smaller operand's shape must be a trailing suffix of the
/// larger's (or a single element). Returns true if `b` is the broadcast side.
bool broadcast_layout(const Tensor& a, const Tensor& b, const char* who) {
    if (a.shape() == b.shape()) return true;  // either; rep == 1
    const Tensor& big = a.numel() >= b.numel() ? a : b;
    const Tensor& small = a.numel() >= b.numel() ? b : a;
    bool ok = small.numel() == 1;
    if (!ok && small.rank() <= big.rank()) {
        ok = true;
        for (int i = 0; i < small.rank(); ++i)
            if (small.dim(small.rank() - 1 - i) != big.dim(big.rank() - 1 - i)) ok = false;
    }
    if (!ok || big.numel() % small.numel() != 0)
        throw ShapeError(std::string(who) + ": shapes not broadcast-compatible: " + shape_str(a.shape()) +
                         " vs " + shape_str(b.shape()));
    return a.numel() >= b.numel();
}

struct AxisSplit {
    std::size_t outer = 1, len = 1, inner = 1;
};

AxisSplit split_at(const Shape& s, int axis, const char* who) {
    if (axis < 0 || axis >= static_cast<int>(s.size()))
        throw ShapeError(std::string(who) + ": axis " + std::to_string(axis) + " invalid for " + shape_str(s));
    AxisSplit sp;
    for (int i = 0; i < axis; ++i) sp.outer *= static_cast<std::size_t>(s[i]);
    sp.len = static_cast<std::size_t>(s[axis]);
    for (std::size_t i = axis + 1; i < s.size(); ++i) sp.inner *= static_cast<std::size_t>(s[i]);
    return sp;
}

void matmul_kernel(const double* A, const double* B, double* C, std::size_t m, std::size_t k, std::size_t n) {
    for (std::size_t i = 0; i < m; ++i) {
        double* Ci = C + i * n;
        const double* Ai = A + i * k;
        for (std::size_t l = 0; l < k; ++l) {
            const double a = Ai[l];
            const double* Bl = B + l * n;
            for (std::size_t j = 0; j < n; ++j) Ci[j] += a * Bl[j];
        }
    }
}

// dA += dC . B^T
void matmul_back_a(const double* dC, const double* B, double* dA, std::size_t m, std::size_t k, std::size_t n) {
    for (std::size_t i = 0; i < m; ++i) {
        const double* dCi = dC + i * n;
        double* dAi = dA + i * k;
        for (std::size_t l = 0; l < k; ++l) {
            const double* Bl = B + l * n;
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += dCi[j] * Bl[j];
            dAi[l] += acc;
        }
    }
}

// dB += A^T . dC
void matmul_back_b(const double* A, const double* dC, double* dB, std::size_t m, std::size_t k, std::size_t n) {
    for (std::size_t i = 0; i < m; ++i) {
        const double* Ai = A + i * k;
        const double* dCi = dC + i * n;
        for (std::size_t l = 0; l < k; ++l) {
            const double a = Ai[l];
            if (a == 0.0) continue;
            double* dBl = dB + l * n;
            for (std::size_t j = 0; j < n; ++j) dBl[j] += a * dCi[j];
        }
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// linear algebra
// ---------------------------------------------------------------------------

Tensor matmul(const Tensor& a, const Tensor& b) {
    check_rank2(a, "matmul");
    check_rank2(b, "matmul");
    const std::size_t m = a.dim(0), k = a.dim(1), k2 = b.dim(0), n = b.dim(1);
    if (k != k2)
        throw ShapeError("matmul: inner dimensions disagree: " + shape_str(a.shape()) + " vs " +
                         shape_str(b.shape()));
    std::vector<double> out(m * n, 0.0);
    matmul_kernel(a.values().data(), b.values().data(), out.data(), m, k, n);
    Tensor c = Tensor::from_values({static_cast<int>(m), static_cast<int>(n)}, std::move(out));
    record_step(c, {&a, &b}, [an = a.node(), bn = b.node(), cn = c.node(), m, k, n]() {
        if (an->requires_grad) matmul_back_a(cn->grad.data(), bn->value.data(), an->grad.data(), m, k, n);
        if (bn->requires_grad) matmul_back_b(an->value.data(), cn->grad.data(), bn->grad.data(), m, k, n);
    });
    return c;
}

Tensor transpose(const Tensor& a) {
    check_rank2(a, "transpose");
    const std::size_t m = a.dim(0), n = a.dim(1);
    std::vector<double> out(m * n);
    const auto& v = a.values();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) out[j * m + i] = v[i * n + j];
    Tensor t = Tensor::from_values({static_cast<int>(n), static_cast<int>(m)}, std::move(out));
    record_step(t, {&a}, [an = a.node(), tn = t.node(), m, n]() {
        if (!an->requires_grad) return;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) an->grad[i * n + j] += tn->grad[j * m + i];
    });
    return t;
}

namespace {

Tensor bmm_impl(const Tensor& a, const Tensor& b, bool b_transposed) {
    const char* who = b_transposed ? "bmm_nt" : "bmm";
    if (a.rank() != 3 || b.rank() != 3)
        throw ShapeError(std::string(who) + ": expected rank-3 operands, got " + shape_str(a.shape()) +
                         " and " + shape_str(b.shape()));
    const std::size_t B = a.dim(0), m = a.dim(1), k = a.dim(2);
    const std::size_t Bb = b.dim(0);
    const std::size_t n = b_transposed ? b.dim(1) : b.dim(2);
    const std::size_t kb = b_transposed ? b.dim(2) : b.dim(1);
    if (B != Bb || k != kb)
        throw ShapeError(std::string(who) + ": incompatible shapes " + shape_str(a.shape()) + " vs " +
                         shape_str(b.shape()));
    std::vector<double> out(B * m * n, 0.0);
    const double* A = a.values().data();
    const double* Bv = b.values().data();
    for (std::size_t bi = 0; bi < B; ++bi) {
        const double* Ab = A + bi * m * k;
        const double* Bb_ = Bv + bi * k * n;
        double* Cb = out.data() + bi * m * n;
        if (!b_transposed) {
            matmul_kernel(Ab, Bb_, Cb, m, k, n);
        } else {
            // C = A . B^T with B stored [n,k]
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    double acc = 0.0;
                    for (std::size_t l = 0; l < k; ++l) acc += Ab[i * k + l] * Bb_[j * k + l];
                    Cb[i * n + j] = acc;
                }
        }
    }
    Tensor c = Tensor::from_values({static_cast<int>(B), static_cast<int>(m), static_cast<int>(n)}, std::move(out));
    record_step(c, {&a, &b}, [an = a.node(), bn = b.node(), cn = c.node(), B, m, k, n, b_transposed]() {
        for (std::size_t bi = 0; bi < B; ++bi) {
            const double* Ab = an->value.data() + bi * m * k;
            const double* Bb_ = bn->value.data() + bi * (b_transposed ? n * k : k * n);
            const double* dCb = cn->grad.data() + bi * m * n;
            if (!b_transposed) {
                if (an->requires_grad) matmul_back_a(dCb, Bb_, an->grad.data() + bi * m * k, m, k, n);
                if (bn->requires_grad) matmul_back_b(Ab, dCb, bn->grad.data() + bi * k * n, m, k, n);
            } else {
                if (an->requires_grad) {
                    // dA += dC . B  (B stored [n,k])
                    double* dAb = an->grad.data() + bi * m * k;
                    matmul_kernel(dCb, Bb_, dAb, m, n, k);
                }
                if (bn->requires_grad) {
                    // dB += dC^T . A  (dB stored [n,k])
                    double* dBb = bn->grad.data() + bi * n * k;
                    for (std::size_t j = 0; j < n; ++j)
                        for (std::size_t i = 0; i < m; ++i) {
                            const double d = dCb[i * n + j];
                            if (d == 0.0) continue;
                            for (std::size_t l = 0; l < k; ++l) dBb[j * k + l] += d * Ab[i * k + l];
                        }
                }
            }
        }
    });
    return c;
}

}  // namespace

Tensor bmm(const Tensor& a, const Tensor& b) { return bmm_impl(a, b, false); }
Tensor bmm_nt(const Tensor& a, const Tensor& b) { return bmm_impl(a, b, true); }

// ---------------------------------------------------------------------------
// elementwise
// ---------------------------------------------------------------------------

namespace {

enum class BinOp { Add, Sub, Mul };

Tensor binary_op(const Tensor& a, const Tensor& b, BinOp op, const char* who) {
    const bool a_big = broadcast_layout(a, b, who);
    const Tensor& big = a_big ? a : b;
    const Tensor& small = a_big ? b : a;
    const std::size_t N = big.numel(), Ns = small.numel();
    std::vector<double> out(N);
    const double* bv = big.values().data();
    const double* sv = small.values().data();
    for (std::size_t i = 0; i < N; ++i) {
        const double x = a_big ? bv[i] : sv[i % Ns];
        const double y = a_big ? sv[i % Ns] : bv[i];
        out[i] = op == BinOp::Add ? x + y : op == BinOp::Sub ? x - y : x * y;
    }
    Tensor c = Tensor::from_values(big.shape(), std::move(out));
    record_step(c, {&a, &b}, [an = a.node(), bn = b.node(), cn = c.node(), a_big, Ns, op]() {
        const std::size_t N = cn->grad.size();
        const double* d = cn->grad.data();
        auto& big_n = a_big ? an : bn;
        auto& small_n = a_big ? bn : an;
        const double sign_small = (op == BinOp::Sub && a_big) ? -1.0 : 1.0;
        const double sign_big = (op == BinOp::Sub && !a_big) ? -1.0 : 1.0;
        switch (op) {
            case BinOp::Add:
            case BinOp::Sub:
                if (big_n->requires_grad)
                    for (std::size_t i = 0; i < N; ++i) big_n->grad[i] += sign_big * d[i];
                if (small_n->requires_grad)
                    for (std::size_t i = 0; i < N; ++i) small_n->grad[i % Ns] += sign_small * d[i];
                break;
            case BinOp::Mul:
                if (big_n->requires_grad)
                    for (std::size_t i = 0; i < N; ++i) big_n->grad[i] += d[i] * small_n->value[i % Ns];
                if (small_n->requires_grad)
                    for (std::size_t i = 0; i < N; ++i) small_n->grad[i % Ns] += d[i] * big_n->value[i];
                break;
        }
    });
    return c;
}

template <typename Fwd, typename Bwd>
Tensor unary_op(const Tensor& x, Fwd fwd, Bwd bwd_factor_from /* (x,y) -> dy/dx */) {
    const std::size_t N = x.numel();
    std::vector<double> out(N);
    const double* xv = x.values().data();
    for (std::size_t i = 0; i < N; ++i) out[i] = fwd(xv[i]);
    Tensor y = Tensor::from_values(x.shape(), std::move(out));
    record_step(y, {&x}, [xn = x.node(), yn = y.node(), bwd_factor_from]() {
        if (!xn->requires_grad) return;
        const std::size_t N = yn->grad.size();
        for (std::size_t i = 0; i < N; ++i)
            xn->grad[i] += yn->grad[i] * bwd_factor_from(xn->value[i], yn->value[i]);
    });
    return y;
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) { return binary_op(a, b, BinOp::Add, "add"); }
Tensor sub(const Tensor& a, const Tensor& b) { return binary_op(a, b, BinOp::Sub, "sub"); }
Tensor mul(const Tensor& a, const Tensor& b) { return binary_op(a, b, BinOp::Mul, "mul"); }

Tensor add_scalar(const Tensor& a, double c) {
    return unary_op(a, [c](double x) { return x + c; }, [](double, double) { return 1.0; });
}

Tensor mul_scalar(const Tensor& a, double c) {
    return unary_op(a, [c](double x) { return x * c; }, [c](double, double) { return c; });
}

Tensor sigmoid(const Tensor& x) {
    return unary_op(
        x,
        [](double v) {
            if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
            const double e = std::exp(v);
            return e / (1.0 + e);
        },
        [](double, double y) { return y * (1.0 - y); });
}

Tensor tanh(const Tensor& x) {
    return unary_op(x, [](double v) { return std::tanh(v); },
                    [](double, double y) { return 1.0 - y * y; });
}

Tensor relu(const Tensor& x) {
    return unary_op(x, [](double v) { return v > 0.0 ? v : 0.0; },
                    [](double v, double) { return v > 0.0 ? 1.0 : 0.0; });
}

Tensor elu(const Tensor& x) {
    return unary_op(x, [](double v) { return v > 0.0 ? v : std::expm1(v); },
                    [](double v, double y) { return v > 0.0 ? 1.0 : y + 1.0; });
}

// ---------------------------------------------------------------------------
// softmax / layer norm / dropout
// ---------------------------------------------------------------------------

Tensor softmax(const Tensor& x, int axis) {
    const AxisSplit sp = split_at(x.shape(), axis, "softmax");
    const std::size_t O = sp.outer, L = sp.len, I = sp.inner;
    std::vector<double> out(x.numel());
    const double* xv = x.values().data();
    for (std::size_t o = 0; o < O; ++o)
        for (std::size_t in = 0; in < I; ++in) {
            const std::size_t base = o * L * I + in;
            double m = xv[base];
            for (std::size_t l = 1; l < L; ++l) m = std::max(m, xv[base + l * I]);
            double s = 0.0;
            for (std::size_t l = 0; l < L; ++l) {
                const double e = std::exp(xv[base + l * I] - m);
                out[base + l * I] = e;
                s += e;
            }
            for (std::size_t l = 0; l < L; ++l) out[base + l * I] /= s;
        }
    Tensor y = Tensor::from_values(x.shape(), std::move(out));
    record_step(y, {&x}, [xn = x.node(), yn = y.node(), O, L, I]() {
        if (!xn->requires_grad) return;
        for (std::size_t o = 0; o < O; ++o)
            for (std::size_t in = 0; in < I; ++in) {
                const std::size_t base = o * L * I + in;
                double dot = 0.0;
                for (std::size_t l = 0; l < L; ++l) dot += yn->grad[base + l * I] * yn->value[base + l * I];
                for (std::size_t l = 0; l < L; ++l)
                    xn->grad[base + l * I] += yn->value[base + l * I] * (yn->grad[base + l * I] - dot);
            }
    });
    return y;
}

AttnMask AttnMask::causal(int len) {
    AttnMask m;
    m.rows = m.cols = len;
    m.visible.assign(static_cast<std::size_t>(len) * len, 0);
    for (int r = 0; r < len; ++r)
        for (int c = 0; c <= r; ++c) m.visible[static_cast<std::size_t>(r) * len + c] = 1;
    return m;
}

AttnMask AttnMask::all_visible(int rows, int cols) {
    AttnMask m;
    m.rows = rows;
    m.cols = cols;
    m.visible.assign(static_cast<std::size_t>(rows) * cols, 1);
    return m;
}

Tensor masked_softmax(const Tensor& x, const AttnMask& mask) {
    if (x.rank() < 2) throw ShapeError("masked_softmax: expected rank >= 2, got " + shape_str(x.shape()));
    const int C = x.dim(x.rank() - 1);
    const int R = x.dim(x.rank() - 2);
    if (R != mask.rows || C != mask.cols)
        throw ShapeError("masked_softmax: mask " + std::to_string(mask.rows) + "x" + std::to_string(mask.cols) +
                         " does not fit " + shape_str(x.shape()));
    const std::size_t lanes = x.numel() / static_cast<std::size_t>(C);
    std::vector<double> out(x.numel(), 0.0);
    const double* xv = x.values().data();
    for (std::size_t l = 0; l < lanes; ++l) {
        const int r = static_cast<int>(l % static_cast<std::size_t>(R));
        const std::uint8_t* vis = mask.visible.data() + static_cast<std::size_t>(r) * C;
        const std::size_t base = l * C;
        double m = 0.0;
        bool seen = false;
        for (int c = 0; c < C; ++c)
            if (vis[c]) {
                m = seen ? std::max(m, xv[base + c]) : xv[base + c];
                seen = true;
            }
        if (!seen) throw ContractError("masked_softmax: row " + std::to_string(r) + " has no visible entries");
        double s = 0.0;
        for (int c = 0; c < C; ++c)
            if (vis[c]) {
                const double e = std::exp(xv[base + c] - m);
                out[base + c] = e;
                s += e;
            }
        for (int c = 0; c < C; ++c)
            if (vis[c]) out[base + c] /= s;
    }
    Tensor y = Tensor::from_values(x.shape(), std::move(out));
    record_step(y, {&x}, [xn = x.node(), yn = y.node(), lanes, R, C, vis_all = mask.visible]() {
        if (!xn->requires_grad) return;
        for (std::size_t l = 0; l < lanes; ++l) {
            const int r = static_cast<int>(l % static_cast<std::size_t>(R));
            const std::uint8_t* vis = vis_all.data() + static_cast<std::size_t>(r) * C;
            const std::size_t base = l * C;
            double dot = 0.0;
            for (int c = 0; c < C; ++c)
                if (vis[c]) dot += yn->grad[base + c] * yn->value[base + c];
            for (int c = 0; c < C; ++c)
                if (vis[c]) xn->grad[base + c] += yn->value[base + c] * (yn->grad[base + c] - dot);
        }
    });
    return y;
}

Tensor layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias, double eps) {
    if (x.rank() < 1) throw ShapeError("layer_norm: empty shape");
    const std::size_t D = static_cast<std::size_t>(x.dim(x.rank() - 1));
    if (gain.numel() != D || bias.numel() != D)
        throw ShapeError("layer_norm: gain/bias must have " + std::to_string(D) + " entries, got " +
                         shape_str(gain.shape()) + " and " + shape_str(bias.shape()));
    const std::size_t lanes = x.numel() / D;
    std::vector<double> out(x.numel());
    auto norm = std::make_shared<std::vector<double>>(x.numel());  // saved (x-mu)/sigma
    auto inv_sigma = std::make_shared<std::vector<double>>(lanes);
    const double* xv = x.values().data();
    const double* gv = gain.values().data();
    const double* bv = bias.values().data();
    for (std::size_t l = 0; l < lanes; ++l) {
        const std::size_t base = l * D;
        double mu = 0.0;
        for (std::size_t j = 0; j < D; ++j) mu += xv[base + j];
        mu /= static_cast<double>(D);
        double var = 0.0;
        for (std::size_t j = 0; j < D; ++j) {
            const double d = xv[base + j] - mu;
            var += d * d;
        }
        var /= static_cast<double>(D);
        const double is = 1.0 / std::sqrt(var + eps);
        (*inv_sigma)[l] = is;
        for (std::size_t j = 0; j < D; ++j) {
            const double nrm = (xv[base + j] - mu) * is;
            (*norm)[base + j] = nrm;
            out[base + j] = gv[j] * nrm + bv[j];
        }
    }
    Tensor y = Tensor::from_values(x.shape(), std::move(out));
    record_step(y, {&x, &gain, &bias},
                [xn = x.node(), gn = gain.node(), bn = bias.node(), yn = y.node(), norm, inv_sigma, lanes, D]() {
                    const double* d = yn->grad.data();
                    for (std::size_t l = 0; l < lanes; ++l) {
                        const std::size_t base = l * D;
                        if (gn->requires_grad)
                            for (std::size_t j = 0; j < D; ++j) gn->grad[j] += d[base + j] * (*norm)[base + j];
                        if (bn->requires_grad)
                            for (std::size_t j = 0; j < D; ++j) bn->grad[j] += d[base + j];
                        if (xn->requires_grad) {
                            double mean_gd = 0.0, mean_gdn = 0.0;
                            for (std::size_t j = 0; j < D; ++j) {
                                const double gd = d[base + j] * gn->value[j];
                                mean_gd += gd;
                                mean_gdn += gd * (*norm)[base + j];
                            }
                            mean_gd /= static_cast<double>(D);
                            mean_gdn /= static_cast<double>(D);
                            const double is = (*inv_sigma)[l];
                            for (std::size_t j = 0; j < D; ++j) {
                                const double gd = d[base + j] * gn->value[j];
                                xn->grad[base + j] += is * (gd - mean_gd - (*norm)[base + j] * mean_gdn);
                            }
                        }
                    }
                });
    return y;
}

Tensor dropout(const Tensor& x, double rate, bool training, Rng& rng) {
    if (rate < 0.0 || rate >= 1.0)
        throw ConfigError("dropout rate must lie in [0, 1), got " + std::to_string(rate));
    if (!training || rate == 0.0) return x;
    const std::size_t N = x.numel();
    const double scale = 1.0 / (1.0 - rate);
    auto mask = std::make_shared<std::vector<std::uint8_t>>(N);
    std::vector<double> out(N);
    const double* xv = x.values().data();
    for (std::size_t i = 0; i < N; ++i) {
        const bool keep = rng.uniform(0.0, 1.0) >= rate;
        (*mask)[i] = keep;
        out[i] = keep ? xv[i] * scale : 0.0;
    }
    Tensor y = Tensor::from_values(x.shape(), std::move(out));
    record_step(y, {&x}, [xn = x.node(), yn = y.node(), mask, scale]() {
        if (!xn->requires_grad) return;
        const std::size_t N = yn->grad.size();
        for (std::size_t i = 0; i < N; ++i)
            if ((*mask)[i]) xn->grad[i] += yn->grad[i] * scale;
    });
    return y;
}

// ---------------------------------------------------------------------------
// shape surgery
// ---------------------------------------------------------------------------

Tensor reshape(const Tensor& x, Shape new_shape) {
    if (shape_numel(new_shape) != x.numel())
        throw ShapeError("reshape: cannot view " + shape_str(x.shape()) + " as " + shape_str(new_shape));
    Tensor y = Tensor::from_values(std::move(new_shape), x.values());
    record_step(y, {&x}, [xn = x.node(), yn = y.node()]() {
        if (!xn->requires_grad) return;
        for (std::size_t i = 0; i < yn->grad.size(); ++i) xn->grad[i] += yn->grad[i];
    });
    return y;
}

Tensor slice(const Tensor& x, int axis, int start, int len) {
    const AxisSplit sp = split_at(x.shape(), axis, "slice");
    if (start < 0 || len <= 0 || static_cast<std::size_t>(start + len) > sp.len)
        throw ShapeError("slice: range [" + std::to_string(start) + ", " + std::to_string(start + len) +
                         ") exceeds axis " + std::to_string(axis) + " of " + shape_str(x.shape()));
    Shape out_shape = x.shape();
    out_shape[axis] = len;
    std::vector<double> out(sp.outer * static_cast<std::size_t>(len) * sp.inner);
    const double* xv = x.values().data();
    const std::size_t L = sp.len, I = sp.inner, LL = static_cast<std::size_t>(len);
    for (std::size_t o = 0; o < sp.outer; ++o)
        std::memcpy(out.data() + o * LL * I, xv + (o * L + start) * I, LL * I * sizeof(double));
    Tensor y = Tensor::from_values(std::move(out_shape), std::move(out));
    record_step(y, {&x}, [xn = x.node(), yn = y.node(), sp, start, LL]() {
        if (!xn->requires_grad) return;
        const std::size_t L = sp.len, I = sp.inner;
        for (std::size_t o = 0; o < sp.outer; ++o) {
            double* dst = xn->grad.data() + (o * L + static_cast<std::size_t>(start)) * I;
            const double* src = yn->grad.data() + o * LL * I;
            for (std::size_t i = 0; i < LL * I; ++i) dst[i] += src[i];
        }
    });
    return y;
}

Tensor concat(const std::vector<Tensor>& xs, int axis) {
    if (xs.empty()) throw ShapeError("concat: no inputs");
    const Shape& first = xs.front().shape();
    int total = 0;
    for (const Tensor& t : xs) {
        if (t.rank() != static_cast<int>(first.size()))
            throw ShapeError("concat: rank mismatch " + shape_str(first) + " vs " + shape_str(t.shape()));
        for (int i = 0; i < t.rank(); ++i)
            if (i != axis && t.dim(i) != first[i])
                throw ShapeError("concat: off-axis dims differ: " + shape_str(first) + " vs " +
                                 shape_str(t.shape()));
        total += t.dim(axis);
    }
    Shape out_shape = first;
    out_shape[axis] = total;
    const AxisSplit sp = split_at(out_shape, axis, "concat");
    std::vector<double> out(shape_numel(out_shape));
    std::size_t offset = 0;  // in axis units
    for (const Tensor& t : xs) {
        const std::size_t tl = static_cast<std::size_t>(t.dim(axis));
        const double* xv = t.values().data();
        for (std::size_t o = 0; o < sp.outer; ++o)
            std::memcpy(out.data() + (o * sp.len + offset) * sp.inner, xv + o * tl * sp.inner,
                        tl * sp.inner * sizeof(double));
        offset += tl;
    }
    Tensor y = Tensor::from_values(std::move(out_shape), std::move(out));

    Graph* g = Graph::current();
    bool any = false;
    for (const Tensor& t : xs) any = any || t.requires_grad();
    if (g && any) {
        y.set_requires_grad();
        std::vector<NodePtr> nodes;
        nodes.reserve(xs.size());
        std::vector<std::size_t> axis_len;
        for (const Tensor& t : xs) {
            nodes.push_back(t.node());
            axis_len.push_back(static_cast<std::size_t>(t.dim(axis)));
        }
        g->record(y.node(), [nodes, axis_len, yn = y.node(), sp]() {
            std::size_t offset = 0;
            for (std::size_t idx = 0; idx < nodes.size(); ++idx) {
                const std::size_t tl = axis_len[idx];
                if (nodes[idx]->requires_grad) {
                    for (std::size_t o = 0; o < sp.outer; ++o) {
                        const double* src = yn->grad.data() + (o * sp.len + offset) * sp.inner;
                        double* dst = nodes[idx]->grad.data() + o * tl * sp.inner;
                        for (std::size_t i = 0; i < tl * sp.inner; ++i) dst[i] += src[i];
                    }
                }
                offset += tl;
            }
        });
    }
    return y;
}

Tensor repeat_rows(const Tensor& x, int times) {
    check_rank2(x, "repeat_rows");
    if (times <= 0) throw ShapeError("repeat_rows: times must be positive");
    const std::size_t N = x.dim(0), D = x.dim(1), T = static_cast<std::size_t>(times);
    std::vector<double> out(N * T * D);
    const double* xv = x.values().data();
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t r = 0; r < T; ++r)
            std::memcpy(out.data() + (i * T + r) * D, xv + i * D, D * sizeof(double));
    Tensor y = Tensor::from_values({static_cast<int>(N * T), static_cast<int>(D)}, std::move(out));
    record_step(y, {&x}, [xn = x.node(), yn = y.node(), N, D, T]() {
        if (!xn->requires_grad) return;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t r = 0; r < T; ++r) {
                const double* src = yn->grad.data() + (i * T + r) * D;
                double* dst = xn->grad.data() + i * D;
                for (std::size_t j = 0; j < D; ++j) dst[j] += src[j];
            }
    });
    return y;
}

Tensor scale_rows(const Tensor& x, const Tensor& s) {
    check_rank2(x, "scale_rows");
    const std::size_t N = x.dim(0), D = x.dim(1);
    if (s.numel() != N)
        throw ShapeError("scale_rows: scale has " + std::to_string(s.numel()) + " entries for " +
                         std::to_string(N) + " rows");
    std::vector<double> out(N * D);
    const double* xv = x.values().data();
    const double* sv = s.values().data();
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < D; ++j) out[i * D + j] = xv[i * D + j] * sv[i];
    Tensor y = Tensor::from_values(x.shape(), std::move(out));
    record_step(y, {&x, &s}, [xn = x.node(), sn = s.node(), yn = y.node(), N, D]() {
        for (std::size_t i = 0; i < N; ++i) {
            const double* d = yn->grad.data() + i * D;
            if (xn->requires_grad) {
                double* dx = xn->grad.data() + i * D;
                for (std::size_t j = 0; j < D; ++j) dx[j] += d[j] * sn->value[i];
            }
            if (sn->requires_grad) {
                double acc = 0.0;
                for (std::size_t j = 0; j < D; ++j) acc += d[j] * xn->value[i * D + j];
                sn->grad[i] += acc;
            }
        }
    });
    return y;
}

// ---------------------------------------------------------------------------
// reductions
// ---------------------------------------------------------------------------

namespace {

Tensor reduce_all(const Tensor& x, bool mean) {
    const std::size_t N = x.numel();
    double s = 0.0;
    for (double v : x.values()) s += v;
    if (mean) s /= static_cast<double>(N);
    Tensor y = Tensor::scalar(s);
    const double w = mean ? 1.0 / static_cast<double>(N) : 1.0;
    record_step(y, {&x}, [xn = x.node(), yn = y.node(), w]() {
        if (!xn->requires_grad) return;
        const double d = yn->grad[0] * w;
        for (auto& gi : xn->grad) gi += d;
    });
    return y;
}

}  // namespace

Tensor sum_all(const Tensor& x) { return reduce_all(x, false); }
Tensor mean_all(const Tensor& x) { return reduce_all(x, true); }

// ---------------------------------------------------------------------------
// convolution
// ---------------------------------------------------------------------------

Tensor conv1d_causal(const Tensor& x, const Tensor& w, const Tensor& bias, int dilation) {
    if (x.rank() != 3 || w.rank() != 3)
        throw ShapeError("conv1d: expected x[B,T,Cin], w[K,Cin,Cout]; got " + shape_str(x.shape()) + ", " +
                         shape_str(w.shape()));
    if (dilation < 1) throw ConfigError("conv1d: dilation must be >= 1");
    const std::size_t B = x.dim(0), T = x.dim(1), Cin = x.dim(2);
    const std::size_t K = w.dim(0), Cout = w.dim(2);
    if (static_cast<std::size_t>(w.dim(1)) != Cin)
        throw ShapeError("conv1d: weight input channels " + std::to_string(w.dim(1)) + " != " +
                         std::to_string(Cin));
    if (bias.numel() != Cout)
        throw ShapeError("conv1d: bias size " + std::to_string(bias.numel()) + " != " + std::to_string(Cout));
    std::vector<double> out(B * T * Cout);
    const double* xv = x.values().data();
    const double* wv = w.values().data();
    const double* bv = bias.values().data();
    const long long D = dilation;
    for (std::size_t b = 0; b < B; ++b)
        for (std::size_t t = 0; t < T; ++t) {
            double* o = out.data() + (b * T + t) * Cout;
            for (std::size_t co = 0; co < Cout; ++co) o[co] = bv[co];
            for (std::size_t j = 0; j < K; ++j) {
                const long long src = static_cast<long long>(t) - static_cast<long long>(K - 1 - j) * D;
                if (src < 0) continue;  // beyond the causal left pad
                const double* xr = xv + (b * T + static_cast<std::size_t>(src)) * Cin;
                const double* wj = wv + j * Cin * Cout;
                for (std::size_t ci = 0; ci < Cin; ++ci) {
                    const double xc = xr[ci];
                    if (xc == 0.0) continue;
                    const double* wr = wj + ci * Cout;
                    for (std::size_t co = 0; co < Cout; ++co) o[co] += xc * wr[co];
                }
            }
        }
    Tensor y = Tensor::from_values({static_cast<int>(B), static_cast<int>(T), static_cast<int>(Cout)},
                                   std::move(out));
    record_step(y, {&x, &w, &bias},
                [xn = x.node(), wn = w.node(), bn = bias.node(), yn = y.node(), B, T, Cin, K, Cout, D]() {
                    const double* d = yn->grad.data();
                    for (std::size_t b = 0; b < B; ++b)
                        for (std::size_t t = 0; t < T; ++t) {
                            const double* dr = d + (b * T + t) * Cout;
                            if (bn->requires_grad)
                                for (std::size_t co = 0; co < Cout; ++co) bn->grad[co] += dr[co];
                            for (std::size_t j = 0; j < K; ++j) {
                                const long long src =
                                    static_cast<long long>(t) - static_cast<long long>(K - 1 - j) * D;
                                if (src < 0) continue;
                                const std::size_t xi = (b * T + static_cast<std::size_t>(src)) * Cin;
                                for (std::size_t ci = 0; ci < Cin; ++ci) {
                                    const std::size_t wi = (j * Cin + ci) * Cout;
                                    if (xn->requires_grad) {
                                        double acc = 0.0;
                                        for (std::size_t co = 0; co < Cout; ++co)
                                            acc += wn->value[wi + co] * dr[co];
                                        xn->grad[xi + ci] += acc;
                                    }
                                    if (wn->requires_grad) {
                                        const double xc = xn->value[xi + ci];
                                        if (xc == 0.0) continue;
                                        for (std::size_t co = 0; co < Cout; ++co)
                                            wn->grad[wi + co] += xc * dr[co];
                                    }
                                }
                            }
                        }
                });
    return y;
}

}  // namespace tempocast
