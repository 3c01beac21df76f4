#pragma once

#include <memory>

#include "tempocast/layers.hpp"
#include "tempocast/model.hpp"
#include "tempocast/timeseries.hpp"

namespace tempocast {

struct TftConfig {
    int input_len = 30;
    int output_len = 36;
    int hidden_size = 64;
    int lstm_layers = 4;
    int attention_heads = 2;
    double dropout = 0.1;
    std::vector<double> quantiles = {0.1, 0.5, 0.9};
    bool mse_mode = false;  // train the median head with MSE instead of pinball
    int covariates = kCalendarChannels;

    void validate() const;
    int median_index() const;  // position of 0.5 in quantiles
};

/// Temporal fusion transformer: per-step variable selection, static-context
/// initialized LSTM encoder/decoder, gated skips, static enrichment, causal
/// interpretable multi-head attention, position-wise GRN and a quantile head.
class TftModel : public Model {
public:
    TftModel(TftConfig cfg, std::uint64_t seed);

    std::string kind() const override { return "tft"; }
    int input_len() const override { return cfg_.input_len; }
    int output_len() const override { return cfg_.output_len; }
    int covariate_count() const override { return cfg_.covariates; }
    ParameterSet& params() override { return params_; }
    const ParameterSet& params() const override { return params_; }
    const TftConfig& config() const { return cfg_; }

    struct ForwardOut {
        Tensor quantile_out;  // [B, n, |Q|]
        std::shared_ptr<AttentionTrace> trace;
    };
    /// Full pipeline; records an attention/selection trace for batch item 0
    /// when want_trace is set and verifies the causal mask on it.
    ForwardOut forward(const WindowBatch& batch, bool training, Rng& rng, bool want_trace) const;

    Tensor training_loss(const WindowBatch& batch, bool training, Rng& dropout_rng) override;
    ChunkForecast predict_chunk(const WindowBatch& window) const override;

private:
    TftConfig cfg_;
    ParameterSet params_;

    std::vector<Dense> var_embed_;  // index 0: target, 1..c: covariates (shared past/future)
    Tensor static_embedding_;       // [1, d]
    Grn static_sel_, static_cell_, static_hidden_, static_enrich_ctx_;
    Vsn vsn_past_, vsn_future_;
    LstmStack encoder_, decoder_;
    Glu lstm_gate_;
    LayerNormParams lstm_norm_;
    Grn enrichment_;
    Mha attention_;
    Glu attn_gate_;
    LayerNormParams attn_norm_;
    Grn positionwise_;
    Dense head_;
};

}  // namespace tempocast
