#include "tempocast/window.hpp"

#include "tempocast/error.hpp"

namespace tempocast {

WindowSet::WindowSet(const TimeSeries& series, const CovariateTable& cov, int k, int n, int stride)
    : values_(series.values), cov_(cov), k_(k), n_(n), c_(static_cast<int>(cov.count())) {
    if (k < 1 || n < 1) throw ContractError("make_windows: lookback and horizon must be positive");
    if (stride < 1) throw ContractError("make_windows: stride must be positive");
    const std::size_t len = series.size();
    if (len < static_cast<std::size_t>(k) + static_cast<std::size_t>(n))
        throw ContractError("make_windows: series of length " + std::to_string(len) +
                            " is too short; need at least k+n = " + std::to_string(k + n));
    if (diff_days(cov.start, series.start) != 0)
        throw ContractError("make_windows: covariate table must start with the series");
    if (cov.length() < len)
        throw ContractError("make_windows: covariate table shorter than the series");
    // anchor t = index of the last past observation; window spans t-k+1 .. t+n
    for (std::size_t t = static_cast<std::size_t>(k) - 1; t + static_cast<std::size_t>(n) < len;
         t += static_cast<std::size_t>(stride))
        anchors_.push_back(t);
}

WindowBatch WindowSet::gather(const std::vector<std::size_t>& indices) const {
    WindowBatch b;
    b.batch = static_cast<int>(indices.size());
    b.k = k_;
    b.n = n_;
    b.c = c_;
    const std::size_t kc = static_cast<std::size_t>(k_) * (1 + c_);
    const std::size_t nc = static_cast<std::size_t>(n_) * c_;
    b.past.resize(indices.size() * kc);
    b.future_cov.resize(indices.size() * nc);
    b.targets.resize(indices.size() * static_cast<std::size_t>(n_));
    for (std::size_t bi = 0; bi < indices.size(); ++bi) {
        if (indices[bi] >= anchors_.size())
            throw ContractError("window index " + std::to_string(indices[bi]) + " out of range");
        const std::size_t t = anchors_[indices[bi]];
        const std::size_t past_begin = t + 1 - static_cast<std::size_t>(k_);
        for (int s = 0; s < k_; ++s) {
            double* row = b.past.data() + bi * kc + static_cast<std::size_t>(s) * (1 + c_);
            row[0] = values_[past_begin + static_cast<std::size_t>(s)];
            for (int ch = 0; ch < c_; ++ch) row[1 + ch] = cov_.at(ch, past_begin + static_cast<std::size_t>(s));
        }
        for (int s = 0; s < n_; ++s) {
            double* row = b.future_cov.data() + bi * nc + static_cast<std::size_t>(s) * c_;
            for (int ch = 0; ch < c_; ++ch) row[ch] = cov_.at(ch, t + 1 + static_cast<std::size_t>(s));
            b.targets[bi * static_cast<std::size_t>(n_) + static_cast<std::size_t>(s)] =
                values_[t + 1 + static_cast<std::size_t>(s)];
        }
    }
    return b;
}

WindowBatch WindowSet::single(std::size_t index) const { return gather({index}); }

WindowSet make_windows(const TimeSeries& series, const CovariateTable& cov, int k, int n, int stride) {
    return WindowSet(series, cov, k, n, stride);
}

}  // namespace tempocast
