#include "tempocast/synthetic.hpp"

#include <cmath>

#include "tempocast/error.hpp"
#include "tempocast/random.hpp"

namespace tempocast {

TimeSeries synth_series(int days, std::uint64_t seed, double noise_sigma, Date start) {
    if (days < 1) throw ContractError("synth_series: days must be positive");
    constexpr double kPi = 3.14159265358979323846;
    Rng rng(seed);
    TimeSeries s;
    s.start = start;
    s.values.reserve(static_cast<std::size_t>(days));
    for (int t = 0; t < days; ++t) {
        const double td = static_cast<double>(t);
        const double y = 1000.0 + 0.05 * td + 120.0 * std::sin(2.0 * kPi * td / 365.25) +
                         60.0 * std::sin(2.0 * kPi * td / 7.0) + rng.normal(0.0, noise_sigma);
        s.values.push_back(y);
    }
    return s;
}

}  // namespace tempocast
