#pragma once

#include <memory>
#include <string>
#include <vector>

#include "tempocast/params.hpp"
#include "tempocast/random.hpp"
#include "tempocast/tensor.hpp"
#include "tempocast/window.hpp"

namespace tempocast {

/// Raw interpretability record from one TFT forward pass (batch item 0):
/// per-head attention matrices over the joined past+future sequence and the
/// per-step variable selection weights.
struct AttentionTrace {
    int heads = 0;
    int seq_len = 0;   // past_len + future_len
    int past_len = 0;
    int future_len = 0;
    std::vector<std::vector<double>> attention;   // [head], row-major seq_len x seq_len
    std::vector<std::vector<double>> sel_past;    // [past_len][num past variables]
    std::vector<std::vector<double>> sel_future;  // [future_len][num future variables]
};

/// One model call's worth of forecast: output_len point values (scaled units)
/// plus optional quantile rows and an optional attention trace.
struct ChunkForecast {
    std::vector<double> point;
    std::vector<double> quantile_levels;
    std::vector<std::vector<double>> quantiles;  // [level][output_len]
    std::shared_ptr<AttentionTrace> trace;
};

/// Uniform train/predict surface shared by the three neural architectures.
/// A model owns its parameters and its loss semantics; trained instances are
/// immutable and safe to call from several threads at once.
class Model {
public:
    virtual ~Model() = default;

    virtual std::string kind() const = 0;
    virtual int input_len() const = 0;
    virtual int output_len() const = 0;
    virtual int covariate_count() const = 0;

    virtual ParameterSet& params() = 0;
    virtual const ParameterSet& params() const = 0;

    /// Scalar loss over one batch; builds the graph under the caller's tape.
    virtual Tensor training_loss(const WindowBatch& batch, bool training, Rng& dropout_rng) = 0;

    /// Eval-mode forecast for a batch holding exactly one window.
    virtual ChunkForecast predict_chunk(const WindowBatch& window) const = 0;
};

}  // namespace tempocast
