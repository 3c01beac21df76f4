#pragma once

#include <memory>
#include <string>

#include "tempocast/model.hpp"
#include "tempocast/timeseries.hpp"

namespace tempocast {

struct Checkpoint {
    std::string kind;
    ScaleState scale;
    std::unique_ptr<Model> model;
};

/// Writes `<base>.tcast` (parameters, TCAST1 layout) and `<base>.json`
/// (model kind, full config, train-time scale state).
void save_checkpoint(const Model& model, const ScaleState& scale, const std::string& base_path);

/// Accepts the base path or either file's path.
Checkpoint load_checkpoint(const std::string& path);

/// Raw sidecar JSON text, for config comparisons at the CLI layer.
std::string checkpoint_sidecar_text(const std::string& path);

/// Strips a trailing .tcast / .json if present.
std::string checkpoint_base_path(const std::string& path);

}  // namespace tempocast
