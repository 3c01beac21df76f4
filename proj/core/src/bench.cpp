#include "tempocast/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "json.hpp"
#include "tempocast/baseline.hpp"
#include "tempocast/checkpoint.hpp"
#include "tempocast/error.hpp"
#include "tempocast/forecast.hpp"
#include "tempocast/metrics.hpp"
#include "tempocast/svg.hpp"

namespace tempocast {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void apply_common(const json& j, const std::string& key, int& field) {
    if (j.contains(key)) field = j.at(key).get<int>();
}
void apply_common(const json& j, const std::string& key, double& field) {
    if (j.contains(key)) field = j.at(key).get<double>();
}
void apply_common(const json& j, const std::string& key, bool& field) {
    if (j.contains(key)) field = j.at(key).get<bool>();
}

void check_known(const json& j, std::initializer_list<const char*> known, const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw ConfigError("config override: unknown key '" + key + "' in " + where);
    }
}

}  // namespace

void apply_config_json(BenchmarkRun& run, const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config override: invalid JSON: ") + e.what());
    }
    check_known(j, {"tft", "lstm", "tcn", "train", "naive_k_sweep"}, "top level");
    if (j.contains("tft")) {
        const json& t = j.at("tft");
        check_known(t, {"input_len", "output_len", "hidden_size", "lstm_layers", "attention_heads",
                        "dropout", "quantiles", "mse_mode", "covariates"}, "tft");
        TftConfig& c = run.models.tft;
        apply_common(t, "input_len", c.input_len);
        apply_common(t, "output_len", c.output_len);
        apply_common(t, "hidden_size", c.hidden_size);
        apply_common(t, "lstm_layers", c.lstm_layers);
        apply_common(t, "attention_heads", c.attention_heads);
        apply_common(t, "dropout", c.dropout);
        apply_common(t, "mse_mode", c.mse_mode);
        if (t.contains("quantiles")) c.quantiles = t.at("quantiles").get<std::vector<double>>();
    }
    if (j.contains("lstm")) {
        const json& t = j.at("lstm");
        check_known(t, {"input_len", "output_len", "hidden_size", "rnn_layers", "dropout", "covariates"},
                    "lstm");
        LstmConfig& c = run.models.lstm;
        apply_common(t, "input_len", c.input_len);
        apply_common(t, "output_len", c.output_len);
        apply_common(t, "hidden_size", c.hidden_size);
        apply_common(t, "rnn_layers", c.rnn_layers);
        apply_common(t, "dropout", c.dropout);
    }
    if (j.contains("tcn")) {
        const json& t = j.at("tcn");
        check_known(t, {"input_len", "output_len", "kernel_size", "filters", "layers", "dilation_base",
                        "dropout", "covariates"}, "tcn");
        TcnConfig& c = run.models.tcn;
        apply_common(t, "input_len", c.input_len);
        apply_common(t, "output_len", c.output_len);
        apply_common(t, "kernel_size", c.kernel_size);
        apply_common(t, "filters", c.filters);
        apply_common(t, "layers", c.layers);
        apply_common(t, "dilation_base", c.dilation_base);
        apply_common(t, "dropout", c.dropout);
    }
    if (j.contains("train")) {
        const json& t = j.at("train");
        check_known(t, {"epochs", "batch_size", "lr", "shuffle", "checkpoint_every", "clip_norm", "loss"},
                    "train");
        TrainConfig& c = run.train;
        apply_common(t, "epochs", c.epochs);
        apply_common(t, "batch_size", c.batch_size);
        apply_common(t, "lr", c.lr);
        apply_common(t, "shuffle", c.shuffle);
        apply_common(t, "checkpoint_every", c.checkpoint_every);
        apply_common(t, "clip_norm", c.clip_norm);
        if (t.contains("loss")) {
            const std::string s = t.at("loss");
            if (s == "mse") c.loss = LossKind::Mse;
            else if (s == "quantile") c.loss = LossKind::Quantile;
            else if (s == "auto") c.loss = LossKind::Auto;
            else throw ConfigError("config override: loss must be mse|quantile|auto, got " + s);
        }
    }
    if (j.contains("naive_k_sweep"))
        run.models.naive_k_sweep = j.at("naive_k_sweep").get<std::vector<int>>();
}

namespace {

struct NeuralOutcome {
    ModelScore score;
    ForecastColumns columns;
    std::vector<std::shared_ptr<AttentionTrace>> traces;
    TrainReport report;
    std::exception_ptr failure;
    std::string stage;
};

/// Tracks artifacts so a failed run never leaves partial outputs behind.
class ArtifactSink {
public:
    explicit ArtifactSink(std::string dir) : dir_(std::move(dir)) {}

    std::string path(const std::string& name) {
        created_.push_back(dir_ + "/" + name);
        return created_.back();
    }

    void track(const std::string& name) { created_.push_back(dir_ + "/" + name); }

    void discard_all() {
        for (const std::string& p : created_) {
            std::error_code ec;
            fs::remove(p, ec);
        }
    }

private:
    std::string dir_;
    std::vector<std::string> created_;
};

}  // namespace

BenchmarkResult run_benchmark(const TimeSeries& raw, const BenchmarkRun& run) {
    if (run.horizon < 1) throw ContractError("bench: horizon must be positive");
    if (run.out_dir.empty()) throw ConfigError("bench: output directory required");
    fs::create_directories(run.out_dir);
    if (!fs::is_directory(run.out_dir)) throw DataError("bench: cannot create " + run.out_dir);

    ArtifactSink sink(run.out_dir);
    std::string stage = "split";
    try {
        // ---- split & scale (train-only fit) ----
        auto [train_raw, test_raw] = train_test_split(raw, static_cast<std::size_t>(run.horizon));
        stage = "scale";
        TimeSeries train_scaled = minmax_fit_transform(train_raw);
        const ScaleState scale = *train_scaled.scale;
        TimeSeries test_scaled = minmax_transform_with(test_raw, scale);
        CovariateTable cov = calendar_covariates(train_scaled, run.horizon);

        const double train_median = [&] {
            std::vector<double> v = train_raw.values;
            std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
            return v[v.size() / 2];
        }();

        std::vector<Date> test_dates;
        for (int i = 0; i < run.horizon; ++i) test_dates.push_back(test_raw.date_at(static_cast<std::size_t>(i)));

        // ---- the three networks ----
        TftConfig tft_cfg = run.models.tft;
        if (run.train.loss == LossKind::Mse) tft_cfg.mse_mode = true;
        LstmConfig lstm_cfg = run.models.lstm;
        TcnConfig tcn_cfg = run.models.tcn;

        stage = "configure";
        struct Job {
            std::string name;
            std::unique_ptr<Model> model;
        };
        std::vector<Job> jobs;
        {
            Rng seeds(run.seed);
            jobs.push_back({"tft", std::make_unique<TftModel>(tft_cfg, seeds.derive("tft").seed())});
            jobs.push_back({"lstm",
                            std::make_unique<StackedLstmModel>(lstm_cfg, seeds.derive("lstm").seed())});
            jobs.push_back({"tcn", std::make_unique<TcnModel>(tcn_cfg, seeds.derive("tcn").seed())});
        }

        std::vector<NeuralOutcome> outcomes(jobs.size());
        auto run_job = [&](std::size_t idx) {
            NeuralOutcome& out = outcomes[idx];
            Model& model = *jobs[idx].model;
            const std::string& name = jobs[idx].name;
            try {
                out.stage = "train " + name;
                TrainConfig tc = run.train;
                tc.seed = Rng(run.seed).derive(name + "-train").seed();
                WindowSet windows =
                    make_windows(train_scaled, cov, model.input_len(), model.output_len());
                const auto t0 = std::chrono::steady_clock::now();
                out.report = train_model(model, windows, tc);
                out.score.train_seconds = seconds_since(t0);

                out.stage = "predict " + name;
                StitchOptions opts;
                opts.rolling = run.rolling;
                opts.truth_scaled = &test_scaled.values;
                const auto t1 = std::chrono::steady_clock::now();
                StitchedForecast sf = predict_stitched(model, train_scaled, cov, run.horizon, opts);
                out.score.predict_seconds = seconds_since(t1);

                out.columns.dates = test_dates;
                out.columns.actual_mw = test_raw.values;
                out.columns.predicted_mw = inverse_transform_values(sf.point, scale);
                if (sf.quantile_levels.size() == 3) {
                    out.columns.q10_mw = inverse_transform_values(sf.quantiles.front(), scale);
                    out.columns.q90_mw = inverse_transform_values(sf.quantiles.back(), scale);
                }
                out.traces = sf.traces;

                // scale audit: a forecast in the wrong units means the inverse
                // transform was skipped or applied twice
                for (double v : out.columns.predicted_mw)
                    if (v < 0.2 * train_median || v > 5.0 * train_median)
                        throw TrainError(name + ": forecast value " + format_double(v) +
                                         " falls outside [0.2x, 5x] of the training median " +
                                         format_double(train_median));

                out.score.name = name;
                out.score.mape_percent = mape(out.columns.actual_mw, out.columns.predicted_mw);
            } catch (...) {
                out.failure = std::current_exception();
            }
        };

        stage = "train";
        int max_threads = std::max(1, run.threads);
        if (max_threads > 1) {
            std::vector<std::thread> pool;
            std::size_t next = 0;
            while (next < jobs.size()) {
                const std::size_t wave = std::min<std::size_t>(static_cast<std::size_t>(max_threads),
                                                               jobs.size() - next);
                for (std::size_t i = 0; i < wave; ++i) pool.emplace_back(run_job, next + i);
                for (auto& t : pool) t.join();
                pool.clear();
                next += wave;
            }
        } else {
            for (std::size_t i = 0; i < jobs.size(); ++i) run_job(i);
        }
        for (const NeuralOutcome& out : outcomes)
            if (out.failure) {
                stage = out.stage;
                std::rethrow_exception(out.failure);
            }

        // ---- naive baseline sweep (exact arithmetic on raw megawatts) ----
        stage = "naive baseline";
        BenchmarkResult result;
        int best_k = 0;
        double best_mape = 0.0;
        std::vector<double> best_forecast;
        for (int k : run.models.naive_k_sweep) {
            if (k < 1 || static_cast<std::size_t>(k) > train_raw.size()) continue;
            std::vector<double> f = naive_combined_forecast(train_raw.values, k, run.horizon);
            const double m = mape(test_raw.values, f);
            result.naive_sweep.emplace_back(k, m);
            if (best_k == 0 || m < best_mape) {
                best_k = k;
                best_mape = m;
                best_forecast = std::move(f);
            }
        }
        if (best_k == 0) throw ContractError("bench: naive K sweep produced no usable K");
        result.naive_k_best = best_k;

        // ---- artifacts, written serially in table order ----
        stage = "artifacts";
        for (NeuralOutcome& out : outcomes) result.rows.push_back(out.score);
        result.rows.push_back({"naive", best_mape, 0.0, 0.0});

        write_results_csv(sink.path("results.csv"), result.rows, run.stable_artifacts);
        for (std::size_t i = 0; i < outcomes.size(); ++i) {
            const std::string& name = jobs[i].name;
            write_forecast_csv(sink.path("forecast_" + name + ".csv"), outcomes[i].columns);
            outcomes[i].report.save_csv(sink.path("train_report_" + name + ".csv"));
            if (run.emit_plots)
                write_forecast_svg(sink.path("plot_" + name + ".svg"), outcomes[i].columns,
                                   name + " vs actual, " + std::to_string(run.horizon) + "-day forecast");
            sink.track(name + ".tcast");
            sink.track(name + ".json");
            save_checkpoint(*jobs[i].model, scale, run.out_dir + "/" + name);
        }
        ForecastColumns naive_cols;
        naive_cols.dates = test_dates;
        naive_cols.actual_mw = test_raw.values;
        naive_cols.predicted_mw = best_forecast;
        write_forecast_csv(sink.path("forecast_naive.csv"), naive_cols);
        if (run.emit_plots)
            write_forecast_svg(sink.path("plot_naive.svg"), naive_cols,
                               "naive (K=" + std::to_string(best_k) + ") vs actual");
        {
            json nj;
            nj["k_best"] = best_k;
            json sweep = json::array();
            for (auto& [k, m] : result.naive_sweep) sweep.push_back({{"k", k}, {"mape_percent", m}});
            nj["sweep"] = sweep;
            std::ofstream out(sink.path("naive_config.json"));
            out << nj.dump(2) << "\n";
        }
        if (!outcomes[0].traces.empty()) {
            write_attention_csv(sink.path("tft_attention.csv"), outcomes[0].traces);
            std::vector<std::string> past_vars = {"target"};
            for (const std::string& nm : cov.names) past_vars.push_back(nm);
            write_selection_csv(sink.path("tft_variable_selection.csv"), outcomes[0].traces, past_vars,
                                cov.names);
        }
        return result;
    } catch (const ConfigError& e) {
        sink.discard_all();
        throw ConfigError("benchmark failed at stage '" + stage + "': " + e.what());
    } catch (const DataError& e) {
        sink.discard_all();
        throw DataError("benchmark failed at stage '" + stage + "': " + e.what());
    } catch (const Error& e) {
        sink.discard_all();
        throw TrainError("benchmark failed at stage '" + stage + "': " + e.what());
    } catch (...) {
        sink.discard_all();
        throw;
    }
}

}  // namespace tempocast
