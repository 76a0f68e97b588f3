#include "tdsmc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tdsmc/errors.hpp"
#include "tdsmc/predictor.hpp"

namespace tdsmc {

double max_delay_leak(const PlantModel& model, double tau_max, std::size_t grid_points) {
    if (!(tau_max >= 0.0)) {
        throw DomainError("max_delay_leak: tau_max must be non-negative");
    }
    if (tau_max == 0.0 || grid_points < 2) {
        return spectral_norm(model.D2);
    }
    double best = 0.0;
    for (std::size_t i = 0; i < grid_points; ++i) {
        const double tau = tau_max * static_cast<double>(i) / static_cast<double>(grid_points - 1);
        best = std::max(best, spectral_norm(mat_exp(model.A22, tau) * model.D2));
    }
    return best;
}

double theorem_rho_coefficient(const PlantModel& model, const DelayProfile& delay, const UncertaintyModel& unc,
                               double phi) {
    if (!(phi > 1.0)) {
        throw DomainError("theorem_rho_coefficient: phi must exceed 1");
    }
    if (unc.delta_bar == 0.0) {
        return 0.0;
    }
    return phi * unc.delta_bar * (1.0 + delay.r_bar) * max_delay_leak(model, delay.tau_max);
}

CertificationReport corollary_bound(const PlantModel& model, const Matrix& s2, const DelayProfile& delay, double phi,
                                    double delta_bar) {
    if (!(phi > 1.0)) {
        throw DomainError("corollary_bound: phi must exceed 1");
    }
    if (!(delta_bar >= 0.0)) {
        throw DomainError("corollary_bound: delta_bar must be non-negative");
    }
    CertificationReport rep;
    rep.phi = phi;
    rep.delta_bar = delta_bar;
    rep.leak_max = max_delay_leak(model, delay.tau_max);

    UncertaintyModel unc;
    unc.delta_bar = delta_bar;
    rep.rho_coefficient = theorem_rho_coefficient(model, delay, unc, phi);

    try {
        rep.P2 = solve_lyapunov(reduced_dynamics(model, s2));
    } catch (const InfeasibleError& e) {
        rep.hurwitz = false;
        rep.feasible = false;
        rep.note = e.what();
        return rep;
    }
    rep.hurwitz = true;
    rep.lambda_max_P2 = symmetric_eigenvalues(rep.P2).back();
    rep.mu = 1.0 / rep.lambda_max_P2;

    const double surface = std::sqrt(1.0 + std::pow(spectral_norm(s2), 2));
    const double per_unit = 2.0 * phi * rep.lambda_max_P2 * (1.0 + delay.r_bar) * surface * rep.leak_max;
    rep.beta1 = 2.0 * phi * delta_bar * (1.0 + delay.r_bar) * surface * rep.leak_max;
    if (per_unit == 0.0) {
        rep.delta_bar_max = std::numeric_limits<double>::infinity();
        rep.note = "D2 = 0: no uncertainty reaches the unmeasured block, any delta_bar is admissible";
    } else {
        rep.delta_bar_max = 1.0 / per_unit;
    }
    rep.feasible = delta_bar < rep.delta_bar_max;
    rep.margins["mu_minus_beta1"] = rep.mu - rep.beta1;
    rep.margins["delta_bar_headroom"] = rep.delta_bar_max - delta_bar;
    return rep;
}

namespace {

void check_trace(const Trace& trace) {
    const auto& d = trace.dims;
    for (std::size_t k = 0; k < trace.rows.size(); ++k) {
        const auto& r = trace.rows[k];
        const bool ok = r.x1.size() == d.n1 && r.x2.size() == d.p && r.x_hat_1.size() == d.n1 &&
                        r.x_hat_2.size() == d.p && r.x_tilde_1.size() == d.n1 && r.x_tilde_2.size() == d.p &&
                        r.xi_hat.size() == d.n1 && r.d.size() == d.m && r.d_hat.size() == d.m && r.y.size() == d.p &&
                        r.s.size() == d.n1 && r.u.size() == d.m;
        if (!ok) {
            throw TraceFormatError("audit_trace: row " + std::to_string(k) + " has inconsistent block widths");
        }
        if (trace.rows.size() > 1) {
            const double expect = trace.rows[0].t + static_cast<double>(k) * trace.h;
            if (std::abs(r.t - expect) > 1e-6 * trace.h) {
                throw TraceFormatError("audit_trace: non-uniform sampling at row " + std::to_string(k));
            }
        }
    }
    if (trace.rows.size() > 1 && !(trace.h > 0.0)) {
        throw TraceFormatError("audit_trace: sampling step must be positive");
    }
}

/// Index of the first sample from which `outside(k)` is false through the end.
std::optional<std::size_t> settle_index(std::size_t n, const auto& outside) {
    std::size_t first = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (outside(k)) {
            first = k + 1;
        }
    }
    if (first >= n) {
        return std::nullopt;
    }
    return first;
}

}  // namespace

TraceAudit audit_trace(const Trace& trace, const PlantModel& model, const DelayProfile& delay,
                       const UncertaintyModel& unc, const ControllerConfig& cfg, const AuditOptions& options) {
    check_trace(trace);
    TraceAudit a;
    const auto& rows = trace.rows;
    const std::size_t n = rows.size();
    a.samples = n;
    if (n == 0) {
        return a;
    }
    const double h = trace.h;
    const double t0 = rows.front().t;

    double rho_max = 0.0;
    for (const auto& r : rows) {
        rho_max = std::max(rho_max, r.rho);
    }
    a.sliding_band = options.band.value_or(std::max(0.01, 10.0 * h * rho_max));

    const auto reach = settle_index(n, [&](std::size_t k) { return norm_inf(rows[k].s) > a.sliding_band; });
    if (reach) {
        a.sliding_reach_time = rows[*reach].t;
        for (std::size_t k = *reach; k < n; ++k) {
            a.max_s_after_reach = std::max(a.max_s_after_reach, norm_inf(rows[k].s));
        }
    }
    const auto obs_reach =
        settle_index(n, [&](std::size_t k) { return norm_inf(rows[k].x_tilde_1) > options.observer_band; });
    if (obs_reach) {
        a.observer_reach_time = rows[*obs_reach].t;
    }

    // State norms and the interpolated state at t - tau.
    std::vector<double> xnorm(n);
    for (std::size_t k = 0; k < n; ++k) {
        xnorm[k] = norm2(concat(rows[k].x1, rows[k].x2));
    }
    auto state_at = [&](double t) {
        const double u = (t - t0) / h;
        const auto j = static_cast<std::size_t>(std::floor(u));
        if (j + 1 >= n) {
            return concat(rows[n - 1].x1, rows[n - 1].x2);
        }
        const double f = u - std::floor(u);
        const Vector lo = concat(rows[j].x1, rows[j].x2);
        const Vector hi = concat(rows[j + 1].x1, rows[j + 1].x2);
        Vector out(lo.size());
        for (std::size_t i = 0; i < lo.size(); ++i) {
            out[i] = lo[i] + f * (hi[i] - lo[i]);
        }
        return out;
    };

    std::size_t valid_from = n;
    for (std::size_t k = 0; k < n; ++k) {
        if (rows[k].t - rows[k].tau >= t0 - 1e-12) {
            valid_from = k;
            break;
        }
    }
    a.predictor_valid_from = valid_from < n ? rows[valid_from].t : std::numeric_limits<double>::infinity();

    const Matrix b1 = model.B1;
    for (std::size_t k = 0; k < n; ++k) {
        const auto& r = rows[k];
        const Vector x = concat(r.x1, r.x2);
        const Vector delta = unc.delta(x, r.t);
        a.zeta1_max = std::max(a.zeta1_max, norm2(model.D1 * delta));

        if (k >= valid_from) {
            const double lookback = r.t - r.tau;
            const Vector xd = state_at(lookback);
            const Vector dd = unc.delta(xd, lookback);
            const double z2 = (1.0 - delay.tau_dot(r.t)) * norm2(mat_exp(model.A22, r.tau) * (model.D2 * dd));
            a.zeta2_max = std::max(a.zeta2_max, std::abs(z2));

            const double resid = norm2(r.x_tilde_2);
            a.max_residual = std::max(a.max_residual, resid);
            const auto j0 = static_cast<std::size_t>(std::max(0.0, std::floor((lookback - t0) / h)));
            double sup = 0.0;
            for (std::size_t j = j0; j <= k; ++j) {
                sup = std::max(sup, xnorm[j]);
            }
            const double bound = residual_bound(r.t, delay, unc, model, sup);
            if (bound > 0.0) {
                a.max_residual_ratio = std::max(a.max_residual_ratio, resid / bound);
            }
        }

        if (r.t >= options.fault_window_start - 1e-12) {
            a.max_fault_error = std::max(a.max_fault_error, norm_inf(sub(r.d, r.d_hat)));
            Vector lumped = b1 * r.d;
            axpy(1.0, model.D1 * delta, lumped);
            axpy(1.0, model.A12 * r.x_tilde_2, lumped);
            a.max_lumped_error = std::max(a.max_lumped_error, norm_inf(sub(r.xi_hat, lumped)));
        }
    }

    // Discrete reaching condition.
    const std::size_t lyap_start = obs_reach ? std::max(*obs_reach, valid_from) : n;
    a.lyapunov_from = lyap_start < n ? rows[lyap_start].t : std::numeric_limits<double>::infinity();
    UncertaintyModel coeff_unc;
    coeff_unc.delta_bar = unc.delta_bar;
    // s' = S2 zeta2 - rho sign(s): the state term is scaled by ||S2||.
    const double coeff = unc.delta_bar > 0.0
                             ? spectral_norm(cfg.S2) * theorem_rho_coefficient(model, delay, coeff_unc, options.phi)
                             : 0.0;
    for (std::size_t k = lyap_start; k + 1 < n; ++k) {
        const auto& r = rows[k];
        const double s_inf = norm_inf(r.s);
        if (s_inf <= a.sliding_band) {
            continue;
        }
        double eta = 0.0;
        if (options.eta) {
            eta = *options.eta;
        } else if (const auto* g = std::get_if<ScheduledGain>(&cfg.rho)) {
            eta = g->eta;
        } else {
            eta = std::max(0.0, r.rho - coeff * norm2(concat(r.x1, r.x_hat_2)));
        }
        const double s2 = norm2(r.s);
        const double v0 = 0.5 * s2 * s2;
        const double s2n = norm2(rows[k + 1].s);
        const double v1 = 0.5 * s2n * s2n;
        ++a.lyapunov_checked;
        if (v1 - v0 >= -eta * s2 * h * (1.0 - options.lyapunov_slack)) {
            ++a.lyapunov_violations;
        }
    }
    return a;
}

}  // namespace tdsmc
