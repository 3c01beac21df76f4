#include "tempocast/lstm.hpp"

#include "tempocast/error.hpp"
#include "tempocast/loss.hpp"

namespace tempocast {

void LstmConfig::validate() const {
    if (input_len < 1 || output_len < 1) throw ConfigError("lstm: chunk lengths must be positive");
    if (hidden_size < 1) throw ConfigError("lstm: hidden size must be positive");
    if (rnn_layers < 1) throw ConfigError("lstm: needs at least one layer");
    if (dropout < 0.0 || dropout >= 1.0) throw ConfigError("lstm: dropout must lie in [0,1)");
}

std::size_t LstmConfig::expected_parameter_count() const {
    const std::size_t h = static_cast<std::size_t>(hidden_size);
    std::size_t total = 0;
    std::size_t in = 1 + static_cast<std::size_t>(covariates);
    for (int l = 0; l < rnn_layers; ++l) {
        total += 4 * (h * (in + h) + h);
        in = h;
    }
    total += h * static_cast<std::size_t>(output_len) + static_cast<std::size_t>(output_len);
    return total;
}

StackedLstmModel::StackedLstmModel(LstmConfig cfg, std::uint64_t seed) : cfg_(cfg) {
    cfg_.validate();
    Rng rng = Rng(seed).derive("lstm-init");
    stack_ = LstmStack::create(params_, "stack", 1 + cfg_.covariates, cfg_.hidden_size, cfg_.rnn_layers, rng);
    head_ = Dense::create(params_, "head", cfg_.hidden_size, cfg_.output_len, rng);
}

Tensor StackedLstmModel::forward(const WindowBatch& batch, bool training, Rng& rng) const {
    if (batch.k != cfg_.input_len || batch.c != cfg_.covariates)
        throw ShapeError("lstm: batch windows do not match config");
    const int B = batch.batch;
    Tensor x = Tensor::from_values({B, cfg_.input_len, 1 + cfg_.covariates}, batch.past);
    auto [seq, final_state] = stack_.forward(x, stack_.zero_state(B), cfg_.dropout, training, rng);
    (void)seq;
    return head_(final_state.h.back());
}

Tensor StackedLstmModel::training_loss(const WindowBatch& batch, bool training, Rng& dropout_rng) {
    if (batch.n != cfg_.output_len) throw ShapeError("lstm: batch horizon does not match config");
    Tensor pred = forward(batch, training, dropout_rng);
    Tensor target = Tensor::from_values({batch.batch, cfg_.output_len}, batch.targets);
    return mse_loss(pred, target);
}

ChunkForecast StackedLstmModel::predict_chunk(const WindowBatch& window) const {
    if (window.batch != 1) throw ContractError("predict_chunk expects a single window");
    Rng dummy(0);
    Tensor pred = forward(window, /*training=*/false, dummy);
    ChunkForecast cf;
    cf.point = pred.values();
    return cf;
}

}  // namespace tempocast
