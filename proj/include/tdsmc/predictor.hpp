#pragma once

#include <cstddef>
#include <span>

#include "tdsmc/history.hpp"
#include "tdsmc/matnum.hpp"
#include "tdsmc/plant.hpp"

namespace tdsmc {

struct PredictorOutput {
    Vector x_hat_2;
    double tau_used = 0.0;
    std::size_t window_samples = 1;
};

/**
 * Open-loop prediction of x2(t) from the delayed output:
 *
 *   x2_hat(t) = e^{A22 tau} y + int_{t-tau}^{t} e^{A22 (t - s)} A21 x1(s) ds
 *
 * evaluated by re-integrating z' = A22 z + A21 x1(s), z(t - tau) = y, with RK4
 * over the history grid. x1(s) comes from linear interpolation of `buf`. The
 * first sub-step is fractional when t - tau(t) falls between grid nodes.
 */
PredictorOutput predict_x2(std::span<const double> y, const HistoryBuffer& buf, double t, const DelayProfile& delay,
                           const PlantModel& model, double h);

/// Same quantity by trapezoidal quadrature of the variation-of-constants
/// integral with a matrix exponential at every node. Used as a cross-check.
PredictorOutput predict_x2_direct(std::span<const double> y, const HistoryBuffer& buf, double t,
                                  const DelayProfile& delay, const PlantModel& model);

/// ||x2 - x2_hat|| <= tau(t) * delta_bar * ||e^{A22 tau(t)} D2|| * sup ||x(s)||, s in [t - tau(t), t].
double residual_bound(double t, const DelayProfile& delay, const UncertaintyModel& unc, const PlantModel& model,
                      double sup_norm_x);

}  // namespace tdsmc
