// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// gated criterion fails. The heavy end-to-end criterion trains the three
// models on the synthetic dataset, so a full run takes tens of minutes.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "../finite_diff.hpp"
#include "tempocast/baseline.hpp"
#include "tempocast/bench.hpp"
#include "tempocast/error.hpp"
#include "tempocast/forecast.hpp"
#include "tempocast/layers.hpp"
#include "tempocast/loss.hpp"
#include "tempocast/metrics.hpp"
#include "tempocast/synthetic.hpp"

using namespace tempocast;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    bool skipped = false;
    std::string detail;
};

std::string g_cli_path = TEMPOCAST_CLI_PATH;

Tensor rand_tensor(Shape shape, Rng& rng, double lo = -2.0, double hi = 2.0, bool grad = true) {
    std::vector<double> v(shape_numel(shape));
    for (auto& x : v) x = rng.uniform(lo, hi);
    return Tensor::from_values(std::move(shape), std::move(v), grad);
}

// ---------------------------------------------------------------------------
// 1. gradient correctness
// ---------------------------------------------------------------------------

Outcome check_gradients() {
    Outcome out;
    double worst_primitive = 0.0;
    int primitive_checks = 0;

    auto sweep = [&](const char*, int cases, const std::function<double(Rng&)>& one_case) {
        Rng rng(fnv1a64("primitive-sweep"));
        for (int c = 0; c < cases; ++c) {
            const double err = one_case(rng);
            worst_primitive = std::max(worst_primitive, err);
            ++primitive_checks;
        }
    };

    // every differentiable primitive, 100 random small cases each, 1e-4
    sweep("matmul", 100, [](Rng& rng) {
        Tensor a = rand_tensor({3, 4}, rng), b = rand_tensor({4, 2}, rng);
        return tctest::max_grad_error({a, b}, [&] { return sum_all(tanh(matmul(a, b))); });
    });
    sweep("transpose", 100, [](Rng& rng) {
        Tensor a = rand_tensor({3, 4}, rng);
        Tensor w = rand_tensor({4, 3}, rng, -1, 1, false);
        return tctest::max_grad_error({a}, [&] { return sum_all(mul(transpose(a), w)); });
    });
    sweep("bmm", 100, [](Rng& rng) {
        Tensor a = rand_tensor({2, 3, 4}, rng), b = rand_tensor({2, 4, 2}, rng);
        Tensor w = rand_tensor({2, 3, 2}, rng, -1, 1, false);
        return tctest::max_grad_error({a, b}, [&] { return sum_all(mul(bmm(a, b), w)); });
    });
    sweep("bmm_nt", 100, [](Rng& rng) {
        Tensor a = rand_tensor({2, 3, 4}, rng), b = rand_tensor({2, 5, 4}, rng);
        Tensor w = rand_tensor({2, 3, 5}, rng, -1, 1, false);
        return tctest::max_grad_error({a, b}, [&] { return sum_all(mul(bmm_nt(a, b), w)); });
    });
    sweep("add/sub/mul broadcast", 100, [](Rng& rng) {
        Tensor a = rand_tensor({3, 5}, rng), b = rand_tensor({5}, rng), c = rand_tensor({3, 5}, rng);
        return tctest::max_grad_error(
            {a, b, c}, [&] { return mean_all(mul(sub(add(a, b), mul_scalar(c, 0.7)), add_scalar(c, 0.3))); });
    });
    sweep("sigmoid/tanh/elu/relu", 100, [](Rng& rng) {
        Tensor a = rand_tensor({4, 3}, rng, -3, 3);
        return tctest::max_grad_error(
            {a}, [&] { return mean_all(add(mul(sigmoid(a), tanh(a)), add(elu(a), relu(a)))); });
    });
    sweep("softmax", 100, [](Rng& rng) {
        Tensor a = rand_tensor({2, 5}, rng, -3, 3);
        Tensor w = rand_tensor({2, 5}, rng, -1, 1, false);
        return tctest::max_grad_error({a}, [&] { return sum_all(mul(softmax(a, 1), w)); });
    });
    sweep("masked_softmax", 100, [](Rng& rng) {
        AttnMask mask = AttnMask::causal(4);
        Tensor a = rand_tensor({2, 4, 4}, rng, -3, 3);
        Tensor w = rand_tensor({2, 4, 4}, rng, -1, 1, false);
        return tctest::max_grad_error({a}, [&] { return sum_all(mul(masked_softmax(a, mask), w)); });
    });
    sweep("layer_norm", 100, [](Rng& rng) {
        Tensor x = rand_tensor({4, 6}, rng);
        Tensor g = rand_tensor({6}, rng, 0.5, 1.5);
        Tensor b = rand_tensor({6}, rng, -0.5, 0.5);
        Tensor w = rand_tensor({4, 6}, rng, -1, 1, false);
        return tctest::max_grad_error({x, g, b}, [&] { return sum_all(mul(layer_norm(x, g, b), w)); });
    });
    sweep("dropout (fixed mask)", 100, [](Rng& rng) {
        Tensor x = rand_tensor({30}, rng);
        const std::uint64_t mask_seed = rng.next_u64();
        return tctest::max_grad_error({x}, [&] {
            Rng fixed(mask_seed);
            return sum_all(mul(dropout(x, 0.3, true, fixed), x));
        });
    });
    sweep("reshape/slice/concat/repeat/scale", 100, [](Rng& rng) {
        Tensor a = rand_tensor({2, 6}, rng), b = rand_tensor({2, 3}, rng), s = rand_tensor({4}, rng);
        Tensor w = rand_tensor({4, 3}, rng, -1, 1, false);
        return tctest::max_grad_error({a, b, s}, [&] {
            Tensor joined = concat({reshape(a, {2, 6}), b}, 1);         // [2, 9]
            Tensor cut = slice(joined, 1, 2, 3);                        // [2, 3]
            return sum_all(mul(scale_rows(repeat_rows(cut, 2), s), w));
        });
    });
    sweep("conv1d", 100, [](Rng& rng) {
        const int dil = 1 + static_cast<int>(rng.next_u64() % 3);
        Tensor x = rand_tensor({2, 6, 2}, rng), w = rand_tensor({3, 2, 2}, rng), b = rand_tensor({2}, rng);
        Tensor probe = rand_tensor({2, 6, 2}, rng, -1, 1, false);
        return tctest::max_grad_error({x, w, b},
                                      [&] { return sum_all(mul(conv1d_causal(x, w, b, dil), probe)); });
    });
    sweep("losses", 100, [](Rng& rng) {
        Tensor p = rand_tensor({3, 2}, rng);
        Tensor pq = rand_tensor({3, 3}, rng);
        Tensor t = rand_tensor({3, 2}, rng, -2, 2, false);
        Tensor tq = rand_tensor({3}, rng, -2, 2, false);
        const double e1 = tctest::max_grad_error({p}, [&] { return mse_loss(p, t); });
        const double e2 =
            tctest::max_grad_error({pq}, [&] { return quantile_loss(pq, tq, {0.1, 0.5, 0.9}); });
        return std::max(e1, e2);
    });

    if (worst_primitive >= 1e-4) {
        out.pass = false;
        out.detail = "primitive gradient error " + format_double(worst_primitive) + " >= 1e-4";
        return out;
    }

    // every model on its miniature config, >= 20 seeded cases, 1e-3
    double worst_model = 0.0;
    {
        TftConfig cfg;
        cfg.input_len = 4;
        cfg.output_len = 2;
        cfg.hidden_size = 8;
        cfg.lstm_layers = 2;
        cfg.attention_heads = 1;
        cfg.dropout = 0.0;
        cfg.covariates = 3;
        TftModel model(cfg, 21);
        std::vector<Tensor> tracked;
        for (const auto& [name, t] : model.params()) tracked.push_back(t);
        Rng rng(31), pick(32);
        for (int c = 0; c < 20; ++c) {
            WindowBatch b;
            b.batch = 2;
            b.k = 4;
            b.n = 2;
            b.c = 3;
            b.past.resize(2 * 4 * 4);
            b.future_cov.resize(2 * 2 * 3);
            b.targets.resize(2 * 2);
            for (auto& v : b.past) v = rng.uniform(-1, 1);
            for (auto& v : b.future_cov) v = rng.uniform(-1, 1);
            for (auto& v : b.targets) v = rng.uniform(-1, 1);
            auto loss = [&] {
                Rng dr(0);
                return model.training_loss(b, false, dr);
            };
            worst_model = std::max(worst_model, tctest::max_grad_error_sampled(tracked, loss, pick, 2));
        }
    }
    {
        TcnConfig cfg;
        cfg.input_len = 5;
        cfg.output_len = 2;
        cfg.layers = 2;
        cfg.filters = 3;
        cfg.covariates = 2;
        cfg.dropout = 0.0;
        TcnModel model(cfg, 23);
        std::vector<Tensor> tracked;
        for (const auto& [name, t] : model.params()) tracked.push_back(t);
        Rng rng(41), pick(42);
        // keep relu pre-activations off their kinks: with zero biases the padded
        // positions are exactly 0, where finite differences are undefined
        for (Tensor t : tracked)
            for (auto& v : t.mutable_values()) v += rng.uniform(0.01, 0.05);
        for (int c = 0; c < 20; ++c) {
            WindowBatch b;
            b.batch = 2;
            b.k = 5;
            b.n = 2;
            b.c = 2;
            b.past.resize(2 * 5 * 3);
            b.future_cov.resize(2 * 2 * 2);
            b.targets.resize(2 * 2);
            for (auto& v : b.past) v = rng.uniform(-1, 1);
            for (auto& v : b.targets) v = rng.uniform(-1, 1);
            auto loss = [&] {
                Rng dr(0);
                return model.training_loss(b, false, dr);
            };
            worst_model = std::max(worst_model, tctest::max_grad_error_sampled(tracked, loss, pick, 4));
        }
    }
    {
        LstmConfig cfg;
        cfg.input_len = 4;
        cfg.output_len = 2;
        cfg.hidden_size = 3;
        cfg.rnn_layers = 2;
        cfg.dropout = 0.0;
        cfg.covariates = 2;
        StackedLstmModel model(cfg, 31);
        std::vector<Tensor> tracked;
        for (const auto& [name, t] : model.params()) tracked.push_back(t);
        Rng rng(51);
        for (int c = 0; c < 20; ++c) {
            WindowBatch b;
            b.batch = 2;
            b.k = 4;
            b.n = 2;
            b.c = 2;
            b.past.resize(2 * 4 * 3);
            b.future_cov.resize(2 * 2 * 2);
            b.targets.resize(2 * 2);
            for (auto& v : b.past) v = rng.uniform(-1, 1);
            for (auto& v : b.targets) v = rng.uniform(-1, 1);
            auto loss = [&] {
                Rng dr(0);
                return model.training_loss(b, false, dr);
            };
            worst_model = std::max(worst_model, tctest::max_grad_error(tracked, loss));
        }
    }
    if (worst_model >= 1e-3) {
        out.pass = false;
        out.detail = "model gradient error " + format_double(worst_model) + " >= 1e-3";
        return out;
    }
    out.detail = std::to_string(primitive_checks) + " primitive cases (worst " +
                 format_double(worst_primitive) + "), 60 model cases (worst " +
                 format_double(worst_model) + ")";
    return out;
}

// ---------------------------------------------------------------------------
// 2. causality
// ---------------------------------------------------------------------------

Outcome check_causality() {
    Outcome out;
    int probes = 0;

    // TCN: exhaustive future perturbation for sequence lengths up to 16
    for (int T : {4, 9, 16}) {
        TcnConfig cfg;
        cfg.input_len = std::max(T, 2);
        cfg.output_len = 1;
        cfg.layers = 3;
        cfg.covariates = 1;
        cfg.dropout = 0.0;
        TcnModel model(cfg, 7);
        Rng rng(1), dummy(0);
        std::vector<double> xs(static_cast<std::size_t>(T) * 2);
        for (auto& v : xs) v = rng.uniform(-1, 1);
        Tensor x = Tensor::from_values({1, T, 2}, xs);
        Tensor ref = model.forward(x, false, dummy);
        for (int p = 0; p < T; ++p)
            for (int ch = 0; ch < 2; ++ch) {
                Tensor xp = Tensor::from_values({1, T, 2}, xs);
                xp.mutable_values()[static_cast<std::size_t>(p) * 2 + ch] += 0.83;
                Tensor got = model.forward(xp, false, dummy);
                for (int t = 0; t < p; ++t) {
                    ++probes;
                    if (got.values()[t] != ref.values()[t]) {
                        out.pass = false;
                        out.detail = "tcn output at " + std::to_string(t) + " moved when input " +
                                     std::to_string(p) + " changed (T=" + std::to_string(T) + ")";
                        return out;
                    }
                }
            }
    }

    // TFT masked attention: future-covariate perturbations must not reach
    // earlier output steps, for total sequence lengths up to 16
    for (auto [k, n] : {std::pair{4, 4}, std::pair{8, 8}, std::pair{10, 6}}) {
        TftConfig cfg;
        cfg.input_len = k;
        cfg.output_len = n;
        cfg.hidden_size = 8;
        cfg.lstm_layers = 1;
        cfg.attention_heads = 1;
        cfg.dropout = 0.0;
        cfg.covariates = 2;
        TftModel model(cfg, 17);
        Rng rng(2), dummy(0);
        WindowBatch base;
        base.batch = 1;
        base.k = k;
        base.n = n;
        base.c = 2;
        base.past.resize(static_cast<std::size_t>(k) * 3);
        base.future_cov.resize(static_cast<std::size_t>(n) * 2);
        base.targets.assign(static_cast<std::size_t>(n), 0.0);
        for (auto& v : base.past) v = rng.uniform(-1, 1);
        for (auto& v : base.future_cov) v = rng.uniform(-1, 1);
        auto ref = model.forward(base, false, dummy, false);
        const int nq = 3;
        for (int j = 0; j < n; ++j)
            for (int ch = 0; ch < 2; ++ch) {
                WindowBatch pert = base;
                pert.future_cov[static_cast<std::size_t>(j) * 2 + ch] += 0.61;
                auto got = model.forward(pert, false, dummy, false);
                for (int s = 0; s < j; ++s)
                    for (int q = 0; q < nq; ++q) {
                        ++probes;
                        const std::size_t idx = static_cast<std::size_t>(s) * nq + q;
                        if (got.quantile_out.values()[idx] != ref.quantile_out.values()[idx]) {
                            out.pass = false;
                            out.detail = "tft output step " + std::to_string(s) +
                                         " moved when future covariate " + std::to_string(j) + " changed";
                            return out;
                        }
                    }
            }
    }
    out.detail = std::to_string(probes) + " bit-exact probes";
    return out;
}

// ---------------------------------------------------------------------------
// 3. receptive field
// ---------------------------------------------------------------------------

Outcome check_receptive_field() {
    Outcome out;
    for (int K : {2, 3})
        for (int L = 1; L <= 4; ++L) {
            TcnConfig cfg;
            cfg.kernel_size = K;
            cfg.layers = L;
            cfg.covariates = 1;
            cfg.dropout = 0.0;
            cfg.input_len = 80;
            cfg.output_len = 1;
            TcnModel model(cfg, 13);
            // all-positive weights so every in-field path stays live through relu
            for (const auto& [name, t] : model.params()) {
                Tensor tt = t;
                for (auto& v : tt.mutable_values()) v = 0.05 + 0.01 * std::abs(v);
            }
            const long long R = cfg.receptive_field();
            const long long expect = 1 + 2LL * (K - 1) * ((1LL << L) - 1);
            if (R != expect) {
                out.pass = false;
                out.detail = "closed form mismatch: K=" + std::to_string(K) + " L=" + std::to_string(L);
                return out;
            }
            Rng rng(3), dummy(0);
            const int T = 80;
            std::vector<double> xs(static_cast<std::size_t>(T) * 2);
            for (auto& v : xs) v = rng.uniform(0.1, 1.0);
            Tensor x = Tensor::from_values({1, T, 2}, xs);
            Tensor ref = model.forward(x, false, dummy);
            const int t = T - 1;
            for (long long dist : {R, R + 1}) {
                if (dist > t) continue;
                Tensor xp = Tensor::from_values({1, T, 2}, xs);
                xp.mutable_values()[static_cast<std::size_t>(t - dist) * 2] += 1.0;
                if (model.forward(xp, false, dummy).values()[t] != ref.values()[t]) {
                    out.pass = false;
                    out.detail = "input at distance " + std::to_string(dist) + " reached output (K=" +
                                 std::to_string(K) + ", L=" + std::to_string(L) + ")";
                    return out;
                }
            }
            Tensor xp = Tensor::from_values({1, T, 2}, xs);
            xp.mutable_values()[static_cast<std::size_t>(t - (R - 1)) * 2] += 1.0;
            if (model.forward(xp, false, dummy).values()[t] == ref.values()[t]) {
                out.pass = false;
                out.detail = "boundary input at distance R-1 did not reach output (K=" +
                             std::to_string(K) + ", L=" + std::to_string(L) + ")";
                return out;
            }
        }
    out.detail = "field = 1 + 2(k-1)(2^L - 1) for K in {2,3}, L in {1..4}";
    return out;
}

// ---------------------------------------------------------------------------
// 4. baselines vs brute force
// ---------------------------------------------------------------------------

Outcome check_baselines() {
    Outcome out;
    Rng rng(7);
    for (int rep = 0; rep < 1000; ++rep) {
        const int len = 2 + static_cast<int>(rng.next_u64() % 60);
        std::vector<double> train;
        for (int t = 0; t < len; ++t) train.push_back(rng.uniform(-900, 900));
        const int k = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(len));
        const int horizon = 1 + static_cast<int>(rng.next_u64() % 100);

        std::vector<double> bs, bd, bc;
        for (int h = 0; h < horizon; ++h)
            bs.push_back(train[static_cast<std::size_t>(len - k + (h % k))]);
        const double slope = (train.back() - train.front()) / static_cast<double>(len - 1);
        for (int h = 1; h <= horizon; ++h) bd.push_back(train.back() + h * slope);
        for (int h = 0; h < horizon; ++h) bc.push_back(bs[static_cast<std::size_t>(h)] + (h + 1) * slope);

        if (naive_seasonal_forecast(train, k, horizon) != bs ||
            naive_drift_forecast(train, horizon) != bd ||
            naive_combined_forecast(train, k, horizon) != bc) {
            out.pass = false;
            out.detail = "mismatch at case " + std::to_string(rep);
            return out;
        }
    }
    out.detail = "1000 random (series, K, horizon) cases, exact equality";
    return out;
}

// ---------------------------------------------------------------------------
// 5. metric oracle
// ---------------------------------------------------------------------------

Outcome check_metric() {
    Outcome out;
    if (std::abs(mape({100, 200}, {110, 180}) - 10.0) > 1e-12) {
        out.pass = false;
        out.detail = "worked example did not give 10.0%";
        return out;
    }
    Rng rng(11);
    double worst = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 60);
        std::vector<double> a(static_cast<std::size_t>(n)), p(static_cast<std::size_t>(n));
        for (auto& v : a) v = rng.uniform(0.5, 2000.0);
        for (auto& v : p) v = rng.uniform(-1000.0, 3000.0);
        double direct = 0.0;
        for (int i = 0; i < n; ++i) direct += std::abs(a[i] - p[i]) / std::abs(a[i]);
        direct = 100.0 * direct / n;
        worst = std::max(worst, std::abs(direct - mape(a, p)));
    }
    if (worst > 1e-12) {
        out.pass = false;
        out.detail = "worst deviation " + format_double(worst) + " > 1e-12";
    } else {
        out.detail = "1000 pairs within 1e-12; worked example exact";
    }
    return out;
}

// ---------------------------------------------------------------------------
// 6. scaling round trip
// ---------------------------------------------------------------------------

Outcome check_scaling() {
    Outcome out;
    Rng rng(13);
    double worst = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
        TimeSeries s;
        s.start = {2014, 1, 1};
        const int len = 2 + static_cast<int>(rng.next_u64() % 300);
        for (int i = 0; i < len; ++i) s.values.push_back(rng.uniform(1.0, 5000.0));
        TimeSeries rt = inverse_transform(minmax_fit_transform(s));
        for (int i = 0; i < len; ++i)
            worst = std::max(worst, std::abs(rt.values[static_cast<std::size_t>(i)] -
                                             s.values[static_cast<std::size_t>(i)]));
    }
    if (worst > 1e-9) {
        out.pass = false;
        out.detail = "round trip deviated by " + format_double(worst);
        return out;
    }
    TimeSeries constant;
    constant.start = {2014, 1, 1};
    constant.values.assign(10, 123.0);
    try {
        minmax_fit_transform(constant);
        out.pass = false;
        out.detail = "constant series was not rejected";
        return out;
    } catch (const ContractError&) {
    }
    out.detail = "200 series round-trip within 1e-9; constant series rejected";
    return out;
}

// ---------------------------------------------------------------------------
// 7. window arithmetic & leakage
// ---------------------------------------------------------------------------

Outcome check_windows() {
    Outcome out;
    TimeSeries s;
    s.start = {2014, 1, 1};
    Rng rng(17);
    for (int i = 0; i < 200; ++i) s.values.push_back(rng.uniform(1, 2));
    CovariateTable cov = calendar_covariates(s, 0);

    long long combos = 0;
    for (int len = 2; len <= 200; ++len) {
        TimeSeries sub;
        sub.start = s.start;
        sub.values.assign(s.values.begin(), s.values.begin() + len);
        for (int k = 1; k <= 40; ++k) {
            if (k + 1 > len) break;
            for (int n = 1; n <= 40; ++n) {
                if (k + n > len) break;
                std::size_t brute = 0;
                for (int t = k - 1; t + n < len; ++t) ++brute;
                if (make_windows(sub, cov, k, n).count() != brute) {
                    out.pass = false;
                    out.detail = "count mismatch at len=" + std::to_string(len) +
                                 " k=" + std::to_string(k) + " n=" + std::to_string(n);
                    return out;
                }
                ++combos;
            }
        }
    }

    // leakage audit: every future block must equal the covariate table slice
    // exactly, and targets must equal the series slice
    long long windows_audited = 0;
    TimeSeries marked;
    marked.start = s.start;
    for (int i = 0; i < 200; ++i) marked.values.push_back(10000.0 + i);  // sentinel targets
    for (int k : {1, 7, 30, 40})
        for (int n : {1, 7, 30, 40}) {
            WindowSet ws = make_windows(marked, cov, k, n);
            for (std::size_t w = 0; w < ws.count(); ++w) {
                WindowBatch b = ws.single(w);
                const std::size_t t = w + static_cast<std::size_t>(k) - 1;
                for (int i = 0; i < n; ++i) {
                    for (int ch = 0; ch < b.c; ++ch) {
                        const double v = b.future_cov[static_cast<std::size_t>(i) * b.c + ch];
                        if (v != cov.at(static_cast<std::size_t>(ch), t + 1 + static_cast<std::size_t>(i)) ||
                            v >= 10000.0) {
                            out.pass = false;
                            out.detail = "future block leaked a target value";
                            return out;
                        }
                    }
                    if (b.targets[static_cast<std::size_t>(i)] !=
                        marked.values[t + 1 + static_cast<std::size_t>(i)]) {
                        out.pass = false;
                        out.detail = "targets misaligned";
                        return out;
                    }
                }
                ++windows_audited;
            }
        }
    out.detail = std::to_string(combos) + " (len,k,n) counts vs brute force; " +
                 std::to_string(windows_audited) + " windows audited for leakage";
    return out;
}

// ---------------------------------------------------------------------------
// 8. synthetic end-to-end benchmark
// ---------------------------------------------------------------------------

/// Independent upper-bound oracle: least-squares fit of trend + yearly +
/// weekly harmonics via plain normal equations (no library code shared with
/// the models).
double least_squares_oracle_mape(const TimeSeries& raw, int horizon) {
    const int T = static_cast<int>(raw.size()) - horizon;
    constexpr int P = 6;
    constexpr double kPi = 3.14159265358979323846;
    auto features = [&](double t, double* f) {
        f[0] = 1.0;
        f[1] = t;
        f[2] = std::sin(2 * kPi * t / 365.25);
        f[3] = std::cos(2 * kPi * t / 365.25);
        f[4] = std::sin(2 * kPi * t / 7.0);
        f[5] = std::cos(2 * kPi * t / 7.0);
    };
    double ata[P][P] = {};
    double atb[P] = {};
    for (int t = 0; t < T; ++t) {
        double f[P];
        features(static_cast<double>(t), f);
        for (int i = 0; i < P; ++i) {
            atb[i] += f[i] * raw.values[static_cast<std::size_t>(t)];
            for (int j = 0; j < P; ++j) ata[i][j] += f[i] * f[j];
        }
    }
    // gaussian elimination with partial pivoting
    double aug[P][P + 1];
    for (int i = 0; i < P; ++i) {
        for (int j = 0; j < P; ++j) aug[i][j] = ata[i][j];
        aug[i][P] = atb[i];
    }
    for (int col = 0; col < P; ++col) {
        int pivot = col;
        for (int r = col + 1; r < P; ++r)
            if (std::abs(aug[r][col]) > std::abs(aug[pivot][col])) pivot = r;
        for (int j = 0; j <= P; ++j) std::swap(aug[col][j], aug[pivot][j]);
        for (int r = 0; r < P; ++r) {
            if (r == col) continue;
            const double m = aug[r][col] / aug[col][col];
            for (int j = col; j <= P; ++j) aug[r][j] -= m * aug[col][j];
        }
    }
    double beta[P];
    for (int i = 0; i < P; ++i) beta[i] = aug[i][P] / aug[i][i];

    std::vector<double> actual(raw.values.end() - horizon, raw.values.end());
    std::vector<double> pred;
    for (int h = 0; h < horizon; ++h) {
        double f[P];
        features(static_cast<double>(T + h), f);
        double y = 0;
        for (int i = 0; i < P; ++i) y += beta[i] * f[i];
        pred.push_back(y);
    }
    return mape(actual, pred);
}

Outcome check_synthetic_benchmark() {
    Outcome out;
    TimeSeries raw = synth_series(2191, 7);

    // validate the threshold with the independent oracle before judging models
    const double oracle = least_squares_oracle_mape(raw, 365);
    if (oracle > 3.0) {
        out.pass = false;
        out.detail = "least-squares oracle itself scored " + format_double(oracle) +
                     "% — generator or split is off";
        return out;
    }

    BenchmarkRun run;
    run.out_dir = (fs::temp_directory_path() / "tempocast_acceptance_e2e").string();
    fs::remove_all(run.out_dir);
    run.horizon = 365;
    run.seed = 42;
    run.stable_artifacts = true;
    run.emit_plots = true;
    run.train.epochs = 40;
    run.train.seed = 42;
    run.models.tft.hidden_size = 16;
    run.models.lstm.hidden_size = 16;
    run.threads = 2;
    BenchmarkResult res = run_benchmark(raw, run);

    const double tft = res.rows[0].mape_percent;
    const double lstm = res.rows[1].mape_percent;
    const double naive = res.rows[3].mape_percent;
    std::ostringstream detail;
    detail << "oracle " << format_double(oracle) << "%, tft " << format_double(tft) << "%, lstm "
           << format_double(lstm) << "%, naive(best K=" << res.naive_k_best << ") "
           << format_double(naive) << "%";
    out.detail = detail.str();
    if (!(tft < 5.0 && lstm < 5.0)) {
        out.pass = false;
        out.detail += " — a neural model missed the 5% bar";
    }
    if (!(tft < naive && lstm < naive)) {
        out.pass = false;
        out.detail += " — a neural model did not beat the naive row";
    }
    fs::remove_all(run.out_dir);
    return out;
}

// ---------------------------------------------------------------------------
// 9. determinism through the real CLI
// ---------------------------------------------------------------------------

Outcome check_determinism() {
    Outcome out;
    const fs::path root = fs::temp_directory_path() / "tempocast_acceptance_det";
    fs::remove_all(root);
    fs::create_directories(root);
    const std::string data = (root / "data.csv").string();
    const std::string cfg = (root / "cfg.json").string();
    {
        TimeSeries s = synth_series(400, 5, 8.0);
        save_series_file(s, data);
        std::ofstream c(cfg);
        c << R"({"tft": {"hidden_size": 8, "lstm_layers": 1, "input_len": 12, "output_len": 6},
                "lstm": {"hidden_size": 8, "rnn_layers": 1, "input_len": 12, "output_len": 6},
                "tcn": {"input_len": 12, "output_len": 6, "layers": 2},
                "train": {"epochs": 4}})";
    }
    auto bench = [&](const std::string& outdir) {
        const std::string cmd = g_cli_path + " bench --data " + data + " --horizon 50 --seed 42 --out " +
                                outdir + " --config " + cfg + " --stable-artifacts --no-plots" +
                                " > /dev/null 2>&1";
        return std::system(cmd.c_str());
    };
    if (bench((root / "a").string()) != 0 || bench((root / "b").string()) != 0) {
        out.pass = false;
        out.detail = "bench invocation failed";
        return out;
    }
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    for (const char* f : {"results.csv", "forecast_tft.csv", "forecast_lstm.csv", "forecast_tcn.csv",
                          "forecast_naive.csv"}) {
        const std::string a = slurp(root / "a" / f), b = slurp(root / "b" / f);
        if (a.empty() || a != b) {
            out.pass = false;
            out.detail = std::string(f) + " differs between identical runs";
            return out;
        }
    }
    fs::remove_all(root);
    out.detail = "results.csv and all forecast CSVs byte-identical across two CLI runs";
    return out;
}

// ---------------------------------------------------------------------------
// 10. stretch target (non-gating)
// ---------------------------------------------------------------------------

Outcome check_stretch() {
    Outcome out;
    const char* path = std::getenv("TEMPOCAST_PAPER_DATA");
    if (!path) {
        out.skipped = true;
        out.detail = "set TEMPOCAST_PAPER_DATA to the real daily-peak CSV to run the full 200-epoch "
                     "comparison (hours of CPU); non-gating either way";
        return out;
    }
    TimeSeries raw = load_series_file(path);
    BenchmarkRun run;
    run.out_dir = (fs::temp_directory_path() / "tempocast_acceptance_stretch").string();
    run.horizon = 365;
    run.seed = 42;
    run.threads = 2;
    run.train.epochs = 200;
    BenchmarkResult res = run_benchmark(raw, run);
    const double tft = res.rows[0].mape_percent;
    const double tcn = res.rows[2].mape_percent;
    const double naive = res.rows[3].mape_percent;
    std::ostringstream ss;
    ss << "tft " << format_double(tft) << "%, tcn " << format_double(tcn) << "%, naive "
       << format_double(naive) << "%; target: tft in [3,7] and tft < naive and tft < tcn";
    out.detail = ss.str();
    out.pass = tft >= 3.0 && tft <= 7.0 && tft < naive && tft < tcn;  // reported, never gates
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    bool quick = false;  // --quick skips the slow end-to-end criteria
    for (int i = 1; i < argc; ++i)
        if (std::string(argv[i]) == "--quick") quick = true;

    struct Criterion {
        std::string name;
        std::function<Outcome()> fn;
        bool gating = true;
        bool slow = false;
    };
    const std::vector<Criterion> criteria = {
        {"gradient-correctness", check_gradients},
        {"causality", check_causality},
        {"tcn-receptive-field", check_receptive_field},
        {"baseline-oracles", check_baselines},
        {"metric-oracle", check_metric},
        {"scaling-round-trip", check_scaling},
        {"window-arithmetic", check_windows},
        {"synthetic-end-to-end", check_synthetic_benchmark, true, true},
        {"determinism", check_determinism},
        {"stretch-full-config", check_stretch, false, true},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        if (quick && c.slow) {
            std::cout << "[SKIP] " << c.name << " (--quick)\n";
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.fn();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        char timing[32];
        std::snprintf(timing, sizeof(timing), "%.1fs", secs);
        if (out.skipped) {
            std::cout << "[SKIP] " << c.name << ": " << out.detail << "\n";
        } else if (out.pass) {
            std::cout << "[PASS] " << c.name << " (" << timing << "): " << out.detail << "\n";
        } else if (!c.gating) {
            std::cout << "[MISS] " << c.name << " (" << timing << ", non-gating): " << out.detail << "\n";
        } else {
            std::cout << "[FAIL] " << c.name << " (" << timing << "): " << out.detail << "\n";
            ++failures;
        }
        std::cout.flush();
    }
    if (failures) {
        std::cout << failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all gated criteria passed\n";
    return 0;
}
