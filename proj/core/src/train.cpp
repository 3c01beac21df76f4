#include "tempocast/train.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "tempocast/error.hpp"

namespace tempocast {

void TrainReport::save_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << "epoch,loss,seconds\n";
    char buf[96];
    for (std::size_t e = 0; e < epoch_loss.size(); ++e) {
        std::snprintf(buf, sizeof(buf), "%zu,%.10g,%.3f\n", e + 1, epoch_loss[e], epoch_seconds[e]);
        out << buf;
    }
}

TrainReport train_model(Model& model, const WindowSet& windows, const TrainConfig& cfg,
                        const EpochCallback& on_epoch) {
    if (cfg.epochs < 1) throw ConfigError("train: epochs must be >= 1");
    if (cfg.batch_size < 1) throw ConfigError("train: batch size must be >= 1");
    if (windows.count() == 0) throw ContractError("train: no windows available");

    Rng shuffle_rng = Rng(cfg.seed).derive("shuffle");
    Rng dropout_rng = Rng(cfg.seed).derive("dropout");

    AdamConfig adam_cfg = cfg.adam;
    adam_cfg.lr = cfg.lr;
    Adam opt(model.params(), adam_cfg);

    std::vector<std::size_t> order(windows.count());
    std::iota(order.begin(), order.end(), std::size_t{0});

    TrainReport report;
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        const auto t0 = std::chrono::steady_clock::now();
        if (cfg.shuffle) shuffle_rng.shuffle(order);
        double loss_sum = 0.0;
        std::size_t window_count = 0;
        int batch_index = 0;
        for (std::size_t pos = 0; pos < order.size(); pos += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t end = std::min(order.size(), pos + static_cast<std::size_t>(cfg.batch_size));
            std::vector<std::size_t> chunk(order.begin() + static_cast<std::ptrdiff_t>(pos),
                                           order.begin() + static_cast<std::ptrdiff_t>(end));
            WindowBatch batch = windows.gather(chunk);
            ++batch_index;

            Graph tape;
            Tensor loss = model.training_loss(batch, /*training=*/true, dropout_rng);
            const double value = loss.item();
            if (!std::isfinite(value))
                throw TrainError("training aborted: non-finite loss at epoch " + std::to_string(epoch) +
                                 ", batch " + std::to_string(batch_index));
            tape.backward(loss);
            clip_grad_norm(model.params(), cfg.clip_norm);
            opt.step();
            ++report.optimizer_steps;
            loss_sum += value * static_cast<double>(chunk.size());
            window_count += chunk.size();
        }
        report.epoch_loss.push_back(loss_sum / static_cast<double>(window_count));
        report.epoch_seconds.push_back(
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        if (on_epoch) on_epoch(epoch, report);
    }
    report.final_checksum = model.params().checksum();
    return report;
}

}  // namespace tempocast
