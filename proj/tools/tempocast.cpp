// tempocast command line: cross-model demand forecasting benchmark.
//
// Subcommands:
//   bench    full comparison: split, train tft/lstm/tcn, naive sweep, artifacts
//   train    train a single model and write its checkpoint
//   predict  forecast from a checkpoint
//   inspect  print a checkpoint's config and parameter statistics
//   synth    emit the synthetic benchmark dataset
//
// Exit codes: 0 success, 1 usage error, 2 data/config error, 3 runtime failure.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "tempocast/bench.hpp"
#include "tempocast/checkpoint.hpp"
#include "tempocast/error.hpp"
#include "tempocast/forecast.hpp"
#include "tempocast/metrics.hpp"
#include "tempocast/svg.hpp"
#include "tempocast/synthetic.hpp"

namespace {

using namespace tempocast;
namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int thread_cap() {
    const int hw = std::max(1u, std::thread::hardware_concurrency());
    int cap = std::min(3, hw);
    if (const char* env = std::getenv("TEMPOCAST_THREADS")) {
        try {
            cap = std::max(1, std::min(cap, std::stoi(env)));
        } catch (const std::exception&) {
            throw ConfigError(std::string("TEMPOCAST_THREADS is not a number: ") + env);
        }
    }
    return cap;
}

struct BenchArgs {
    std::string data, out, config, cache;
    int horizon = 365;
    std::uint64_t seed = 42;
    int epochs = 200;
    bool epochs_given = false;
    bool rolling = false;
    bool stable_artifacts = false;
    bool no_plots = false;
};

int cmd_bench(const BenchArgs& a) {
    TimeSeries raw = load_series_file(a.data);
    if (!a.cache.empty()) save_series_file(raw, a.cache);

    BenchmarkRun run;
    run.out_dir = a.out;
    run.horizon = a.horizon;
    run.seed = a.seed;
    run.rolling = a.rolling;
    run.stable_artifacts = a.stable_artifacts;
    run.emit_plots = !a.no_plots;
    run.threads = thread_cap();
    run.train.seed = a.seed;
    if (!a.config.empty()) apply_config_json(run, read_file(a.config));
    if (a.epochs_given) run.train.epochs = a.epochs;

    std::cout << "[bench] dataset " << a.data << ": " << raw.size() << " days starting "
              << to_iso(raw.start) << "\n"
              << "[bench] horizon " << run.horizon << ", seed " << run.seed << ", epochs "
              << run.train.epochs << ", threads " << run.threads
              << (run.rolling ? ", rolling re-anchored forecasts" : ", open-loop stitched forecasts")
              << "\n";
    BenchmarkResult res = run_benchmark(raw, run);
    std::cout << "[bench] naive K sweep:";
    for (auto& [k, m] : res.naive_sweep) std::cout << "  K=" << k << " -> " << format_double(m) << "%";
    std::cout << "  (best K=" << res.naive_k_best << ")\n";
    std::cout << "model,mape_percent\n";
    for (const ModelScore& r : res.rows) std::cout << r.name << ',' << format_double(r.mape_percent) << "\n";
    std::cout << "[bench] artifacts written to " << a.out << "\n";
    return 0;
}

struct TrainArgs {
    std::string model, data, out, config;
    std::uint64_t seed = 42;
    int epochs = 200;
    bool epochs_given = false;
};

int cmd_train(const TrainArgs& a) {
    TimeSeries raw = load_series_file(a.data);
    BenchmarkRun defaults;
    defaults.train.seed = a.seed;
    if (!a.config.empty()) apply_config_json(defaults, read_file(a.config));
    if (a.epochs_given) defaults.train.epochs = a.epochs;

    std::unique_ptr<Model> model;
    Rng seeds(a.seed);
    if (a.model == "tft") {
        TftConfig cfg = defaults.models.tft;
        if (defaults.train.loss == LossKind::Mse) cfg.mse_mode = true;
        model = std::make_unique<TftModel>(cfg, seeds.derive("tft").seed());
    } else if (a.model == "lstm") {
        model = std::make_unique<StackedLstmModel>(defaults.models.lstm, seeds.derive("lstm").seed());
    } else if (a.model == "tcn") {
        model = std::make_unique<TcnModel>(defaults.models.tcn, seeds.derive("tcn").seed());
    } else {
        throw ConfigError("unknown model '" + a.model + "' (expected tft, lstm or tcn)");
    }

    TimeSeries scaled = minmax_fit_transform(raw);
    CovariateTable cov = calendar_covariates(scaled, 0);
    WindowSet windows = make_windows(scaled, cov, model->input_len(), model->output_len());
    TrainConfig tc = defaults.train;
    tc.seed = Rng(a.seed).derive(a.model + "-train").seed();

    fs::create_directories(a.out);
    const std::string base = a.out + "/" + a.model;
    EpochCallback on_epoch;
    if (tc.checkpoint_every > 0) {
        on_epoch = [&](int epoch, const TrainReport&) {
            if (epoch % tc.checkpoint_every == 0) save_checkpoint(*model, *scaled.scale, base);
        };
    }
    std::cout << "[train] " << a.model << " on " << raw.size() << " days, " << windows.count()
              << " windows, " << tc.epochs << " epochs\n";
    TrainReport report = train_model(*model, windows, tc, on_epoch);
    save_checkpoint(*model, *scaled.scale, base);
    report.save_csv(base + "_train_report.csv");
    char csum[24];
    std::snprintf(csum, sizeof(csum), "%016llx", static_cast<unsigned long long>(report.final_checksum));
    std::cout << "[train] final loss " << format_double(report.epoch_loss.back()) << ", checkpoint " << base
              << ".tcast (checksum " << csum << ")\n";
    return 0;
}

struct PredictArgs {
    std::string checkpoint, data, out, config;
    int horizon = 365;
};

int cmd_predict(const PredictArgs& a) {
    Checkpoint ck = load_checkpoint(a.checkpoint);

    // flags/config may not silently disagree with the stored architecture
    if (!a.config.empty()) {
        nlohmann::json side = nlohmann::json::parse(checkpoint_sidecar_text(a.checkpoint));
        nlohmann::json override_j = nlohmann::json::parse(read_file(a.config));
        if (override_j.contains(ck.kind)) {
            const nlohmann::json& stored = side.at("config");
            for (const auto& [key, value] : override_j.at(ck.kind).items()) {
                if (!stored.contains(key) || stored.at(key) != value)
                    throw ConfigError("checkpoint config mismatch: " + ck.kind + "." + key + " is " +
                                      stored.value(key, nlohmann::json()).dump() +
                                      " in the checkpoint but " + value.dump() + " in --config");
            }
        }
    }

    TimeSeries raw = load_series_file(a.data);
    TimeSeries scaled = minmax_transform_with(raw, ck.scale);
    CovariateTable cov = calendar_covariates(scaled, a.horizon);
    StitchedForecast sf = predict_stitched(*ck.model, scaled, cov, a.horizon);

    fs::create_directories(a.out);
    ForecastColumns cols;
    for (int i = 1; i <= a.horizon; ++i) cols.dates.push_back(add_days(raw.last_date(), i));
    cols.predicted_mw = inverse_transform_values(sf.point, ck.scale);
    if (sf.quantile_levels.size() == 3) {
        cols.q10_mw = inverse_transform_values(sf.quantiles.front(), ck.scale);
        cols.q90_mw = inverse_transform_values(sf.quantiles.back(), ck.scale);
    }
    const std::string csv = a.out + "/prediction_" + ck.kind + ".csv";
    write_forecast_csv(csv, cols);
    write_forecast_svg(a.out + "/prediction_" + ck.kind + ".svg", cols,
                       ck.kind + " " + std::to_string(a.horizon) + "-day forecast");
    std::cout << "[predict] " << ck.kind << " forecast for " << a.horizon << " days from "
              << to_iso(raw.last_date()) << " -> " << csv << " (" << sf.model_calls << " model calls)\n";
    return 0;
}

int cmd_inspect(const std::string& path) {
    Checkpoint ck = load_checkpoint(path);
    nlohmann::json side = nlohmann::json::parse(checkpoint_sidecar_text(path));
    std::cout << "model: " << ck.kind << "\n"
              << "scale: min " << format_double(ck.scale.min) << " MW, max "
              << format_double(ck.scale.max) << " MW\n"
              << "config: " << side.at("config").dump() << "\n"
              << "parameters (" << ck.model->params().size() << " tensors, "
              << ck.model->params().total_elements() << " elements):\n";
    std::cout << "  name shape elements min max mean std\n";
    for (const auto& [name, t] : ck.model->params()) {
        double lo = t.values()[0], hi = lo, mean = 0.0;
        for (double v : t.values()) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            mean += v;
        }
        mean /= static_cast<double>(t.numel());
        double var = 0.0;
        for (double v : t.values()) var += (v - mean) * (v - mean);
        var /= static_cast<double>(t.numel());
        std::cout << "  " << name << ' ' << shape_str(t.shape()) << ' ' << t.numel() << ' '
                  << format_double(lo) << ' ' << format_double(hi) << ' ' << format_double(mean) << ' '
                  << format_double(std::sqrt(var)) << "\n";
    }
    char csum[24];
    std::snprintf(csum, sizeof(csum), "%016llx",
                  static_cast<unsigned long long>(ck.model->params().checksum()));
    std::cout << "checksum: " << csum << "\n";
    return 0;
}

struct SynthArgs {
    std::string out;
    int days = 2191;
    std::uint64_t seed = 7;
    double sigma = 20.0;
};

int cmd_synth(const SynthArgs& a) {
    TimeSeries s = synth_series(a.days, a.seed, a.sigma);
    save_series_file(s, a.out);
    std::cout << "[synth] wrote " << a.days << " days (" << to_iso(s.start) << " .. "
              << to_iso(s.last_date()) << ") to " << a.out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tempocast: daily peak power demand forecasting benchmark"};
    app.require_subcommand(1);

    BenchArgs bench;
    CLI::App* b = app.add_subcommand("bench", "run the full cross-model comparison");
    b->add_option("--data", bench.data, "input CSV (date,demand)")->required();
    b->add_option("--horizon", bench.horizon, "forecast horizon / test length in days");
    b->add_option("--seed", bench.seed, "global RNG seed");
    b->add_option("--out", bench.out, "output directory")->required();
    b->add_option("--epochs", bench.epochs, "training epochs for every model")
        ->each([&](const std::string&) { bench.epochs_given = true; });
    b->add_flag("--rolling", bench.rolling, "re-anchor each chunk on true values (backtest mode)");
    b->add_option("--config", bench.config, "JSON file overriding model/train config fields");
    b->add_flag("--stable-artifacts", bench.stable_artifacts,
                "write timing columns as 0 so reruns are byte-identical");
    b->add_flag("--no-plots", bench.no_plots, "skip SVG plot emission");
    b->add_option("--cache", bench.cache, "also write the validated series back out as CSV");

    TrainArgs train;
    CLI::App* t = app.add_subcommand("train", "train one model and write a checkpoint");
    t->add_option("model", train.model, "tft | lstm | tcn")->required();
    t->add_option("--data", train.data, "input CSV")->required();
    t->add_option("--out", train.out, "output directory")->required();
    t->add_option("--seed", train.seed, "RNG seed");
    t->add_option("--epochs", train.epochs, "training epochs")
        ->each([&](const std::string&) { train.epochs_given = true; });
    t->add_option("--config", train.config, "JSON config override file");

    PredictArgs predict;
    CLI::App* p = app.add_subcommand("predict", "forecast from a checkpoint");
    p->add_option("checkpoint", predict.checkpoint, "checkpoint base path or .tcast file")->required();
    p->add_option("--data", predict.data, "history CSV the forecast continues from")->required();
    p->add_option("--horizon", predict.horizon, "days to forecast");
    p->add_option("--out", predict.out, "output directory")->required();
    p->add_option("--config", predict.config, "JSON config; must agree with the checkpoint");

    std::string inspect_path;
    CLI::App* i = app.add_subcommand("inspect", "print checkpoint config and parameter stats");
    i->add_option("checkpoint", inspect_path, "checkpoint base path or .tcast file")->required();

    SynthArgs synth;
    CLI::App* s = app.add_subcommand("synth", "emit the synthetic benchmark dataset");
    s->add_option("--days", synth.days, "number of daily points");
    s->add_option("--seed", synth.seed, "noise seed");
    s->add_option("--sigma", synth.sigma, "noise standard deviation");
    s->add_option("--out", synth.out, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // help text, exit 0
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n" << app.help() << "\n";
        return 1;
    }

    try {
        if (b->parsed()) return cmd_bench(bench);
        if (t->parsed()) return cmd_train(train);
        if (p->parsed()) return cmd_predict(predict);
        if (i->parsed()) return cmd_inspect(inspect_path);
        if (s->parsed()) return cmd_synth(synth);
        std::cerr << app.help() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
