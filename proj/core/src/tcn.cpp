#include "tempocast/tcn.hpp"

#include <cmath>

#include "tempocast/error.hpp"
#include "tempocast/loss.hpp"

namespace tempocast {

void TcnConfig::validate() const {
    if (input_len < 1 || output_len < 1) throw ConfigError("tcn: chunk lengths must be positive");
    if (kernel_size < 2) throw ConfigError("tcn: kernel size must be at least 2");
    if (filters < 1) throw ConfigError("tcn: filters must be positive");
    if (layers < 1) throw ConfigError("tcn: needs at least one layer");
    if (dilation_base < 1) throw ConfigError("tcn: dilation base must be >= 1");
    if (dropout < 0.0 || dropout >= 1.0) throw ConfigError("tcn: dropout must lie in [0,1)");
    if (output_len > input_len)
        throw ConfigError("tcn: output_len " + std::to_string(output_len) +
                          " cannot exceed input_len " + std::to_string(input_len) +
                          " (the model reads its forecast off the last output positions)");
}

long long TcnConfig::receptive_field() const {
    long long sum = 0, dil = 1;
    for (int l = 0; l < layers; ++l) {
        sum += 2LL * (kernel_size - 1) * dil;
        dil *= dilation_base;
    }
    return 1 + sum;
}

TcnModel::TcnModel(TcnConfig cfg, std::uint64_t seed) : cfg_(cfg) {
    cfg_.validate();
    Rng rng = Rng(seed).derive("tcn-init");
    const int K = cfg_.kernel_size, F = cfg_.filters;
    int in_ch = 1 + cfg_.covariates;
    int dil = 1;
    for (int l = 0; l < cfg_.layers; ++l) {
        Block blk;
        blk.dilation = dil;
        const std::string base = "block" + std::to_string(l);
        blk.w1 = params_.add(base + ".conv1.w", {K, in_ch, F},
                             glorot_uniform(rng, K * in_ch, K * F, static_cast<std::size_t>(K) * in_ch * F));
        blk.b1 = params_.add(base + ".conv1.b", {F}, std::vector<double>(F, 0.0));
        blk.w2 = params_.add(base + ".conv2.w", {K, F, F},
                             glorot_uniform(rng, K * F, K * F, static_cast<std::size_t>(K) * F * F));
        blk.b2 = params_.add(base + ".conv2.b", {F}, std::vector<double>(F, 0.0));
        blk.projected = in_ch != F;
        if (blk.projected) blk.proj = Dense::create(params_, base + ".proj", in_ch, F, rng);
        blocks_.push_back(std::move(blk));
        in_ch = F;
        dil *= cfg_.dilation_base;
    }
    head_ = Dense::create(params_, "head", F, 1, rng);
}

Tensor TcnModel::forward(const Tensor& x, bool training, Rng& rng) const {
    if (x.rank() != 3 || x.dim(2) != 1 + cfg_.covariates)
        throw ShapeError("tcn: expected [B,T," + std::to_string(1 + cfg_.covariates) + "], got " +
                         shape_str(x.shape()));
    const int B = x.dim(0), T = x.dim(1), F = cfg_.filters;
    Tensor cur = x;
    for (const Block& blk : blocks_) {
        Tensor branch = relu(conv1d_causal(cur, blk.w1, blk.b1, blk.dilation));
        branch = dropout(branch, cfg_.dropout, training, rng);
        branch = relu(conv1d_causal(branch, blk.w2, blk.b2, blk.dilation));
        branch = dropout(branch, cfg_.dropout, training, rng);
        Tensor skip = cur;
        if (blk.projected) {
            const int in_ch = cur.dim(2);
            skip = reshape(blk.proj(reshape(cur, {B * T, in_ch})), {B, T, F});
        }
        cur = relu(add(branch, skip));
    }
    return reshape(head_(reshape(cur, {B * T, F})), {B, T, 1});
}

Tensor TcnModel::training_loss(const WindowBatch& batch, bool training, Rng& dropout_rng) {
    const int B = batch.batch, k = cfg_.input_len, n = cfg_.output_len;
    if (batch.k != k || batch.n != n || batch.c != cfg_.covariates)
        throw ShapeError("tcn: batch windows do not match config");
    Tensor x = Tensor::from_values({B, k, 1 + cfg_.covariates}, batch.past);
    Tensor y = forward(x, training, dropout_rng);  // [B, k, 1]
    // the sequence target at position i is the observation n steps ahead:
    // past targets shifted left by n, then the window's future targets
    std::vector<double> shifted(static_cast<std::size_t>(B) * k);
    const int stride = 1 + cfg_.covariates;
    for (int b = 0; b < B; ++b) {
        for (int i = 0; i < k - n; ++i)
            shifted[static_cast<std::size_t>(b) * k + i] =
                batch.past[(static_cast<std::size_t>(b) * k + i + n) * stride];
        for (int i = 0; i < n; ++i)
            shifted[static_cast<std::size_t>(b) * k + (k - n) + i] =
                batch.targets[static_cast<std::size_t>(b) * n + i];
    }
    Tensor target = Tensor::from_values({B, k, 1}, std::move(shifted));
    return mse_loss(y, target);
}

ChunkForecast TcnModel::predict_chunk(const WindowBatch& window) const {
    if (window.batch != 1) throw ContractError("predict_chunk expects a single window");
    Rng dummy(0);
    Tensor x = Tensor::from_values({1, cfg_.input_len, 1 + cfg_.covariates}, window.past);
    Tensor y = forward(x, /*training=*/false, dummy);
    const auto& v = y.values();  // [1, k, 1]
    ChunkForecast cf;
    cf.point.assign(v.end() - cfg_.output_len, v.end());
    return cf;
}

}  // namespace tempocast
