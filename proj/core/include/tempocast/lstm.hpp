#pragma once

#include "tempocast/layers.hpp"
#include "tempocast/model.hpp"
#include "tempocast/timeseries.hpp"

namespace tempocast {

struct LstmConfig {
    int input_len = 30;
    int output_len = 36;
    int hidden_size = 25;
    int rnn_layers = 3;
    double dropout = 0.1;
    int covariates = kCalendarChannels;

    void validate() const;
    /// Closed-form trainable element count: sum over layers of
    /// 4*(h*(in+h)+h), plus the dense head (h*n + n).
    std::size_t expected_parameter_count() const;
};

/// Stacked LSTM: each layer consumes the previous layer's full hidden
/// sequence; the final top hidden state feeds a dense head that emits all n
/// point forecasts at once.
class StackedLstmModel : public Model {
public:
    StackedLstmModel(LstmConfig cfg, std::uint64_t seed);

    std::string kind() const override { return "lstm"; }
    int input_len() const override { return cfg_.input_len; }
    int output_len() const override { return cfg_.output_len; }
    int covariate_count() const override { return cfg_.covariates; }
    ParameterSet& params() override { return params_; }
    const ParameterSet& params() const override { return params_; }
    const LstmConfig& config() const { return cfg_; }

    /// past[B,k,1+c] -> [B, n]
    Tensor forward(const WindowBatch& batch, bool training, Rng& rng) const;

    Tensor training_loss(const WindowBatch& batch, bool training, Rng& dropout_rng) override;
    ChunkForecast predict_chunk(const WindowBatch& window) const override;

private:
    LstmConfig cfg_;
    ParameterSet params_;
    LstmStack stack_;
    Dense head_;
};

}  // namespace tempocast
