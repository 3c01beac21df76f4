#pragma once

#include <vector>

#include "tempocast/tensor.hpp"

namespace tempocast {

/// Mean over all elements of (pred - target)^2. Shapes must match exactly.
Tensor mse_loss(const Tensor& pred, const Tensor& target);

/// Pinball loss, averaged over elements and quantiles. pred's last axis holds
/// one column per quantile; target has pred's shape minus that axis.
Tensor quantile_loss(const Tensor& pred, const Tensor& target, const std::vector<double>& quantiles);

}  // namespace tempocast
