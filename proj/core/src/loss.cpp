#include "tempocast/loss.hpp"

#include "tempocast/error.hpp"
#include "tempocast/ops.hpp"

namespace tempocast {

Tensor mse_loss(const Tensor& pred, const Tensor& target) {
    if (pred.shape() != target.shape())
        throw ContractError("mse_loss: shape mismatch " + shape_str(pred.shape()) + " vs " +
                            shape_str(target.shape()));
    Tensor e = sub(pred, target);
    return mean_all(mul(e, e));
}

Tensor quantile_loss(const Tensor& pred, const Tensor& target, const std::vector<double>& quantiles) {
    const int nq = static_cast<int>(quantiles.size());
    if (nq == 0) throw ContractError("quantile_loss: empty quantile list");
    if (pred.rank() < 1 || pred.dim(pred.rank() - 1) != nq)
        throw ContractError("quantile_loss: last axis of " + shape_str(pred.shape()) + " must have " +
                            std::to_string(nq) + " columns");
    const std::size_t m = pred.numel() / static_cast<std::size_t>(nq);
    if (target.numel() != m)
        throw ContractError("quantile_loss: target " + shape_str(target.shape()) + " does not pair with " +
                            shape_str(pred.shape()));
    Tensor pflat = reshape(pred, {static_cast<int>(m), nq});
    Tensor tflat = reshape(target, {static_cast<int>(m), 1});
    Tensor total;
    for (int qi = 0; qi < nq; ++qi) {
        const double q = quantiles[static_cast<std::size_t>(qi)];
        Tensor e = sub(tflat, slice(pflat, 1, qi, 1));
        // rho_q(e) = max(q e, (q-1) e) = q relu(e) + (1-q) relu(-e)
        Tensor rho = add(mul_scalar(relu(e), q), mul_scalar(relu(mul_scalar(e, -1.0)), 1.0 - q));
        Tensor term = mean_all(rho);
        total = qi == 0 ? term : add(total, term);
    }
    return mul_scalar(total, 1.0 / nq);
}

}  // namespace tempocast
