#pragma once

#include "tempocast/params.hpp"

namespace tempocast {

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// Adam with bias correction. Moment buffers persist across steps; gradients
/// are zeroed after each step.
class Adam {
public:
    explicit Adam(ParameterSet& params, AdamConfig cfg = {});

    void step();
    long long steps_taken() const { return t_; }
    const AdamConfig& config() const { return cfg_; }

private:
    ParameterSet& params_;
    AdamConfig cfg_;
    long long t_ = 0;
    std::vector<std::vector<double>> m_, v_;
};

/// Scales all gradients so their global L2 norm is at most max_norm.
/// Returns the pre-clip norm.
double clip_grad_norm(ParameterSet& params, double max_norm);

}  // namespace tempocast
