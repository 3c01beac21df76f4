#include "tempocast/optim.hpp"

#include <cmath>

#include "tempocast/error.hpp"

namespace tempocast {

Adam::Adam(ParameterSet& params, AdamConfig cfg) : params_(params), cfg_(cfg) {
    m_.reserve(params.size());
    v_.reserve(params.size());
    for (const auto& [name, t] : params_) {
        m_.emplace_back(t.numel(), 0.0);
        v_.emplace_back(t.numel(), 0.0);
    }
}

void Adam::step() {
    ++t_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    std::size_t idx = 0;
    for (const auto& [name, t] : params_) {
        Tensor tt = t;
        if (!tt.requires_grad() || tt.grad().size() != tt.numel())
            throw ContractError("adam step: gradient missing for parameter " + name);
        auto& value = tt.mutable_values();
        auto& grad = tt.mutable_grad();
        auto& m = m_[idx];
        auto& v = v_[idx];
        for (std::size_t i = 0; i < value.size(); ++i) {
            const double g = grad[i];
            m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g;
            v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g * g;
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            value[i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
        }
        ++idx;
    }
    params_.zero_grads();
}

double clip_grad_norm(ParameterSet& params, double max_norm) {
    double sq = 0.0;
    for (const auto& [name, t] : params)
        for (double g : t.grad()) sq += g * g;
    const double norm = std::sqrt(sq);
    if (norm > max_norm && norm > 0.0) {
        const double scale = max_norm / norm;
        for (const auto& [name, t] : params) {
            Tensor tt = t;
            for (double& g : tt.mutable_grad()) g *= scale;
        }
    }
    return norm;
}

}  // namespace tempocast
