#pragma once

#include <functional>
#include <span>

#include "tdsmc/history.hpp"
#include "tdsmc/predictor.hpp"
#include "tdsmc/scenario.hpp"
#include "tdsmc/trace.hpp"

namespace tdsmc {

/// Read-only view of the loop state right after the prediction at t.
struct PredictionContext {
    double t;
    const HistoryBuffer& history;
    std::span<const double> y;
    const PredictorOutput& prediction;
};

struct RunHooks {
    std::function<void(const PredictionContext&)> on_prediction;
};

/**
 * Single-rate closed loop. Per grid instant t_k:
 *   1. y = x2(t - tau(t)) from the history
 *   2. x2_hat from the predictor
 *   3. control from x1, x2_hat, xi_hat at step start
 *   4. observer Euler step
 *   5. plant RK4 step with u held
 *   6. history append; the row for t_k goes to the trace
 *
 * Divergence or an assumption violation stops the loop; the partial trace is
 * returned with `status` and `diagnostic` set.
 */
Trace run(const Scenario& scenario, const RunHooks& hooks = {});

}  // namespace tdsmc
