#include "tempocast/metrics.hpp"

#include <cmath>
#include <string>

#include "tempocast/error.hpp"

namespace tempocast {

double mape(const std::vector<double>& actual, const std::vector<double>& predicted) {
    if (actual.empty() || actual.size() != predicted.size())
        throw ContractError("mape: need equal non-empty series, got " + std::to_string(actual.size()) +
                            " vs " + std::to_string(predicted.size()));
    double sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        if (actual[i] == 0.0)
            throw MetricError("mape: actual value at index " + std::to_string(i) +
                              " is zero; the percentage error is undefined");
        sum += std::abs(actual[i] - predicted[i]) / std::abs(actual[i]);
    }
    return 100.0 * sum / static_cast<double>(actual.size());
}

}  // namespace tempocast
