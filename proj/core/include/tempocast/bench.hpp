#pragma once

#include <string>
#include <vector>

#include "tempocast/csvio.hpp"
#include "tempocast/lstm.hpp"
#include "tempocast/tcn.hpp"
#include "tempocast/tft.hpp"
#include "tempocast/train.hpp"

namespace tempocast {

struct ModelSetup {
    TftConfig tft;
    LstmConfig lstm;
    TcnConfig tcn;
    std::vector<int> naive_k_sweep = {1, 7, 365};
};

/// One full cross-model comparison: split, train-fit scaling, train the three
/// networks, stitch a horizon-long forecast each, sweep the naive baseline,
/// score MAPE in megawatts and emit the artifact set.
struct BenchmarkRun {
    std::string out_dir;
    int horizon = 365;
    std::uint64_t seed = 42;
    bool rolling = false;           // re-anchor forecasts on true values per chunk
    bool stable_artifacts = false;  // zero timing columns for byte-reproducible reruns
    int threads = 1;                // concurrent model trainings (TEMPOCAST_THREADS caps this)
    bool emit_plots = true;
    TrainConfig train;
    ModelSetup models;
};

struct BenchmarkResult {
    std::vector<ModelScore> rows;  // tft, lstm, tcn, naive — fixed order
    int naive_k_best = 0;
    std::vector<std::pair<int, double>> naive_sweep;  // (K, mape)
};

/// Applies a JSON override blob: top-level keys "tft", "lstm", "tcn", "train",
/// "naive_k_sweep"; unknown keys are an error. Field names match the config
/// structs.
void apply_config_json(BenchmarkRun& run, const std::string& json_text);

BenchmarkResult run_benchmark(const TimeSeries& raw, const BenchmarkRun& run);

}  // namespace tempocast
