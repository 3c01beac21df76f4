#include "tempocast/baseline.hpp"

#include "tempocast/error.hpp"

namespace tempocast {

namespace {

void check_horizon(int horizon) {
    if (horizon < 1) throw ContractError("baseline forecast: horizon must be positive");
}

}  // namespace

std::vector<double> naive_seasonal_forecast(const std::vector<double>& train, int k, int horizon) {
    check_horizon(horizon);
    const std::size_t T = train.size();
    if (k < 1 || static_cast<std::size_t>(k) > T)
        throw ContractError("naive seasonal: K = " + std::to_string(k) +
                            " exceeds training length " + std::to_string(T));
    std::vector<double> out(static_cast<std::size_t>(horizon));
    for (int h = 0; h < horizon; ++h)
        out[static_cast<std::size_t>(h)] = train[T - static_cast<std::size_t>(k) + (h % k)];
    return out;
}

std::vector<double> naive_drift_forecast(const std::vector<double>& train, int horizon) {
    check_horizon(horizon);
    const std::size_t T = train.size();
    if (T < 2) throw ContractError("naive drift: needs at least two training points");
    const double slope = (train.back() - train.front()) / static_cast<double>(T - 1);
    std::vector<double> out(static_cast<std::size_t>(horizon));
    for (int h = 0; h < horizon; ++h)
        out[static_cast<std::size_t>(h)] = train.back() + static_cast<double>(h + 1) * slope;
    return out;
}

std::vector<double> naive_combined_forecast(const std::vector<double>& train, int k, int horizon) {
    check_horizon(horizon);
    if (train.size() < 2) throw ContractError("naive combined: needs at least two training points");
    std::vector<double> out = naive_seasonal_forecast(train, k, horizon);
    const double slope = (train.back() - train.front()) / static_cast<double>(train.size() - 1);
    for (int h = 0; h < horizon; ++h) out[static_cast<std::size_t>(h)] += static_cast<double>(h + 1) * slope;
    return out;
}

}  // namespace tempocast
