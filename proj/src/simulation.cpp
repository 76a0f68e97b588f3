#include "tdsmc/simulation.hpp"

#include <cmath>
#include <string>

#include "tdsmc/controller.hpp"
#include "tdsmc/errors.hpp"
#include "tdsmc/observer.hpp"

namespace tdsmc {

namespace {

constexpr double kMonitorSlack = 1e-12;

void check_assumptions(const Scenario& sc, double t, double tau, std::span<const double> x,
                       std::span<const double> d, std::span<const double> delta) {
    if (!(tau >= 0.0) || tau > sc.delay.tau_max + kMonitorSlack) {
        throw AssumptionViolation("tau=" + std::to_string(tau) + " outside [0, tau_max]", t);
    }
    const double rate = std::abs(sc.delay.tau_dot(t));
    if (rate > sc.delay.r_bar + kMonitorSlack) {
        throw AssumptionViolation("|tau'|=" + std::to_string(rate) + " exceeds r_bar", t);
    }
    const double dn = norm2(d);
    if (dn > sc.fault.alpha + kMonitorSlack) {
        throw AssumptionViolation("||d||=" + std::to_string(dn) + " exceeds alpha", t);
    }
    const double un = norm2(delta);
    if (un > sc.uncertainty.delta_bar * norm2(x) * (1.0 + kMonitorSlack)) {
        throw AssumptionViolation("||delta||=" + std::to_string(un) + " exceeds delta_bar ||x||", t);
    }
}

bool row_finite(const TraceRow& r, double limit) {
    for (const Vector* v : {&r.x1, &r.x2, &r.x_hat_1, &r.x_hat_2, &r.xi_hat, &r.u, &r.s}) {
        if (!all_finite(*v)) {
            return false;
        }
    }
    return std::isfinite(r.rho) && norm2(concat(r.x1, r.x2)) <= limit;
}

}  // namespace

Trace run(const Scenario& sc, const RunHooks& hooks) {
    validate_scenario(sc);
    const PlantModel& model = sc.model;
    const std::size_t n1 = model.n1();
    const double h = sc.sim.h;
    const std::size_t steps = sc.sim.steps();

    Trace trace;
    trace.dims = {n1, model.p(), model.m()};
    trace.h = h;
    trace.rows.reserve(steps + 1);

    const SlidingModeController controller(model, sc.controller);
    const Matrix b1_pinv = pseudo_inverse(model.B1);

    // The window covers the longest lookback plus a few spare samples.
    HistoryBuffer history = HistoryBuffer::with_constant_prehistory(h, sc.delay.tau_max + 10.0 * h, sc.sim.x0);
    Vector x = sc.sim.x0;
    ObserverState obs{Vector(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n1)), Vector(n1, 0.0)};

    double t = 0.0;
    try {
        for (std::size_t k = 0;; ++k) {
            t = static_cast<double>(k) * h;
            const std::span<const double> xs(x);
            const auto x1 = xs.first(n1);
            const auto x2 = xs.subspan(n1);

            const double tau = sc.delay.tau(t);
            const Vector d = sc.fault.d(t);
            const Vector delta = sc.uncertainty.delta(xs, t);
            check_assumptions(sc, t, tau, xs, d, delta);

            const Vector y = measure_output(history, t, sc.delay, model);
            const PredictorOutput pred = predict_x2(y, history, t, sc.delay, model, h);
            if (hooks.on_prediction) {
                hooks.on_prediction(PredictionContext{t, history, y, pred});
            }
            ControlDecomposition ctrl = controller.compute(x1, pred.x_hat_2, obs.xi_hat, t, sc.delay);

            TraceRow row;
            row.t = t;
            row.x1.assign(x1.begin(), x1.end());
            row.x2.assign(x2.begin(), x2.end());
            row.x_hat_1 = obs.x_hat_1;
            row.x_hat_2 = pred.x_hat_2;
            row.x_tilde_1 = sub(x1, obs.x_hat_1);
            row.x_tilde_2 = sub(x2, pred.x_hat_2);
            row.xi_hat = obs.xi_hat;
            row.d = d;
            row.d_hat = b1_pinv * std::span<const double>(obs.xi_hat);
            row.delta_norm = norm2(delta);
            row.y = y;
            row.tau = tau;
            row.s = std::move(ctrl.s);
            row.u = ctrl.u;
            row.u_d = std::move(ctrl.u_d);
            row.u_nom = std::move(ctrl.u_nom);
            row.u_sm = std::move(ctrl.u_sm);
            row.rho = ctrl.rho_used;
            const bool healthy = row_finite(row, sc.sim.divergence_norm);
            trace.rows.push_back(std::move(row));
            if (!healthy) {
                throw DivergenceError("closed loop diverged (non-finite or ||x|| > " +
                                          std::to_string(sc.sim.divergence_norm) + ")",
                                      t);
            }
            if (k == steps) {
                break;
            }

            try {
                obs = observer_step(obs, x1, pred.x_hat_2, ctrl.u, model, sc.gains, h, sc.signs);
            } catch (const DivergenceError&) {
                throw DivergenceError("observer state became non-finite", t + h);
            }
            x = plant_step(model, x, t, h, ctrl.u, sc.fault, sc.uncertainty);
            history.push(x);
        }
    } catch (const DivergenceError& e) {
        trace.status = RunStatus::diverged;
        trace.diagnostic = e.what();
    } catch (const AssumptionViolation& e) {
        trace.status = RunStatus::assumption_violated;
        trace.diagnostic = e.what();
    }
    return trace;
}

}  // namespace tdsmc
