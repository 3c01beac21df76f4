#include "tempocast/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tempocast/error.hpp"
#include "tempocast/lstm.hpp"
#include "tempocast/tcn.hpp"
#include "tempocast/tft.hpp"

namespace tempocast {

namespace {

using nlohmann::json;

json tft_to_json(const TftConfig& c) {
    return json{{"input_len", c.input_len},   {"output_len", c.output_len},
                {"hidden_size", c.hidden_size}, {"lstm_layers", c.lstm_layers},
                {"attention_heads", c.attention_heads}, {"dropout", c.dropout},
                {"quantiles", c.quantiles},   {"mse_mode", c.mse_mode},
                {"covariates", c.covariates}};
}

TftConfig tft_from_json(const json& j) {
    TftConfig c;
    c.input_len = j.at("input_len");
    c.output_len = j.at("output_len");
    c.hidden_size = j.at("hidden_size");
    c.lstm_layers = j.at("lstm_layers");
    c.attention_heads = j.at("attention_heads");
    c.dropout = j.at("dropout");
    c.quantiles = j.at("quantiles").get<std::vector<double>>();
    c.mse_mode = j.at("mse_mode");
    c.covariates = j.at("covariates");
    return c;
}

json lstm_to_json(const LstmConfig& c) {
    return json{{"input_len", c.input_len}, {"output_len", c.output_len},
                {"hidden_size", c.hidden_size}, {"rnn_layers", c.rnn_layers},
                {"dropout", c.dropout},     {"covariates", c.covariates}};
}

LstmConfig lstm_from_json(const json& j) {
    LstmConfig c;
    c.input_len = j.at("input_len");
    c.output_len = j.at("output_len");
    c.hidden_size = j.at("hidden_size");
    c.rnn_layers = j.at("rnn_layers");
    c.dropout = j.at("dropout");
    c.covariates = j.at("covariates");
    return c;
}

json tcn_to_json(const TcnConfig& c) {
    return json{{"input_len", c.input_len},   {"output_len", c.output_len},
                {"kernel_size", c.kernel_size}, {"filters", c.filters},
                {"layers", c.layers},         {"dilation_base", c.dilation_base},
                {"dropout", c.dropout},       {"covariates", c.covariates}};
}

TcnConfig tcn_from_json(const json& j) {
    TcnConfig c;
    c.input_len = j.at("input_len");
    c.output_len = j.at("output_len");
    c.kernel_size = j.at("kernel_size");
    c.filters = j.at("filters");
    c.layers = j.at("layers");
    c.dilation_base = j.at("dilation_base");
    c.dropout = j.at("dropout");
    c.covariates = j.at("covariates");
    return c;
}

}  // namespace

std::string checkpoint_base_path(const std::string& path) {
    for (const char* suffix : {".tcast", ".json"}) {
        const std::size_t n = std::string(suffix).size();
        if (path.size() > n && path.compare(path.size() - n, n, suffix) == 0)
            return path.substr(0, path.size() - n);
    }
    return path;
}

void save_checkpoint(const Model& model, const ScaleState& scale, const std::string& base_path) {
    model.params().save(base_path + ".tcast");
    json j;
    j["format"] = "tempocast-checkpoint";
    j["version"] = 1;
    j["model"] = model.kind();
    j["scale"] = {{"min", scale.min}, {"max", scale.max}};
    if (const auto* tft = dynamic_cast<const TftModel*>(&model)) {
        j["config"] = tft_to_json(tft->config());
    } else if (const auto* lstm = dynamic_cast<const StackedLstmModel*>(&model)) {
        j["config"] = lstm_to_json(lstm->config());
    } else if (const auto* tcn = dynamic_cast<const TcnModel*>(&model)) {
        j["config"] = tcn_to_json(tcn->config());
    } else {
        throw ConfigError("cannot checkpoint unknown model kind " + model.kind());
    }
    std::ofstream out(base_path + ".json");
    if (!out) throw DataError("cannot open " + base_path + ".json for writing");
    out << j.dump(2) << "\n";
}

std::string checkpoint_sidecar_text(const std::string& path) {
    const std::string side = checkpoint_base_path(path) + ".json";
    std::ifstream in(side);
    if (!in) throw DataError("cannot open checkpoint sidecar " + side);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Checkpoint load_checkpoint(const std::string& path) {
    const std::string base = checkpoint_base_path(path);
    json j;
    try {
        j = json::parse(checkpoint_sidecar_text(base));
    } catch (const json::exception& e) {
        throw DataError(base + ".json: not a valid checkpoint sidecar: " + e.what());
    }
    if (!j.contains("model") || !j.contains("config") || !j.contains("scale"))
        throw DataError(base + ".json: missing checkpoint fields");
    Checkpoint ck;
    ck.kind = j.at("model");
    ck.scale.min = j.at("scale").at("min");
    ck.scale.max = j.at("scale").at("max");
    try {
        if (ck.kind == "tft") {
            ck.model = std::make_unique<TftModel>(tft_from_json(j.at("config")), 0);
        } else if (ck.kind == "lstm") {
            ck.model = std::make_unique<StackedLstmModel>(lstm_from_json(j.at("config")), 0);
        } else if (ck.kind == "tcn") {
            ck.model = std::make_unique<TcnModel>(tcn_from_json(j.at("config")), 0);
        } else {
            throw DataError(base + ".json: unknown model kind '" + ck.kind + "'");
        }
    } catch (const json::exception& e) {
        throw DataError(base + ".json: malformed config: " + e.what());
    }
    ck.model->params().load(base + ".tcast");
    return ck;
}

}  // namespace tempocast
