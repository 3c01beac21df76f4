#pragma once

#include "tempocast/layers.hpp"
#include "tempocast/model.hpp"
#include "tempocast/timeseries.hpp"

namespace tempocast {

struct TcnConfig {
    int input_len = 30;
    int output_len = 28;
    int kernel_size = 3;
    int filters = 6;
    int layers = 4;
    int dilation_base = 2;
    double dropout = 0.1;
    int covariates = kCalendarChannels;

    void validate() const;
    /// 1 + 2*(kernel-1)*(base^layers - 1)/(base - 1): maximum lookback that
    /// can influence an output position.
    long long receptive_field() const;
};

/// Stack of causal dilated residual blocks mapping an input sequence to an
/// equal-length output sequence. For forecasting the network learns targets
/// shifted n steps ahead, and prediction reads the last n output positions.
class TcnModel : public Model {
public:
    TcnModel(TcnConfig cfg, std::uint64_t seed);

    std::string kind() const override { return "tcn"; }
    int input_len() const override { return cfg_.input_len; }
    int output_len() const override { return cfg_.output_len; }
    int covariate_count() const override { return cfg_.covariates; }
    ParameterSet& params() override { return params_; }
    const ParameterSet& params() const override { return params_; }
    const TcnConfig& config() const { return cfg_; }

    /// x[B,T,1+c] -> y[B,T,1] for any T >= 1.
    Tensor forward(const Tensor& x, bool training, Rng& rng) const;

    Tensor training_loss(const WindowBatch& batch, bool training, Rng& dropout_rng) override;
    ChunkForecast predict_chunk(const WindowBatch& window) const override;

private:
    struct Block {
        Tensor w1, b1, w2, b2;  // two causal dilated convolutions
        bool projected = false;
        Dense proj;             // 1x1 residual projection when channels change
        int dilation = 1;
    };

    TcnConfig cfg_;
    ParameterSet params_;
    std::vector<Block> blocks_;
    Dense head_;  // 1x1 convolution: filters -> 1
};

}  // namespace tempocast
