#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tempocast/model.hpp"
#include "tempocast/optim.hpp"
#include "tempocast/window.hpp"

namespace tempocast {

enum class LossKind { Auto, Mse, Quantile };

struct TrainConfig {
    int epochs = 200;
    int batch_size = 24;
    LossKind loss = LossKind::Auto;  // Auto: pinball for TFT, MSE elsewhere
    double lr = 1e-3;
    std::uint64_t seed = 42;
    bool shuffle = true;
    int checkpoint_every = 0;  // epochs; 0 disables
    double clip_norm = 10.0;
    AdamConfig adam;           // lr is copied in from `lr`
};

struct TrainReport {
    std::vector<double> epoch_loss;     // window-weighted mean per epoch
    std::vector<double> epoch_seconds;  // wall clock
    std::uint64_t final_checksum = 0;
    long long optimizer_steps = 0;

    /// CSV columns: epoch, loss, seconds.
    void save_csv(const std::string& path) const;
};

using EpochCallback = std::function<void(int epoch, const TrainReport& so_far)>;

/// Deterministic mini-batch loop: shuffle (seeded), batches of batch_size
/// (last partial batch used), forward/loss/backward, gradient clip, Adam.
/// Aborts with a diagnostic naming epoch and batch on non-finite loss.
TrainReport train_model(Model& model, const WindowSet& windows, const TrainConfig& cfg,
                        const EpochCallback& on_epoch = nullptr);

}  // namespace tempocast
