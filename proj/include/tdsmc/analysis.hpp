#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>

#include "tdsmc/controller.hpp"
#include "tdsmc/matnum.hpp"
#include "tdsmc/plant.hpp"
#include "tdsmc/trace.hpp"

namespace tdsmc {

/// Grid resolution used to maximise ||e^{A22 tau} D2|| over [0, tau_max].
inline constexpr std::size_t kLeakGridPoints = 1000;

/// max over tau in [0, tau_max] of ||e^{A22 tau} D2|| (spectral norm).
double max_delay_leak(const PlantModel& model, double tau_max, std::size_t grid_points = kLeakGridPoints);

/**
 * Stability certificate of the sliding dynamics once s = 0:
 * P2 solves P2 Abar22 + Abar22^T P2 = -I and
 *   delta_bar < 1 / (2 phi lambda_max(P2) (1 + r_bar) sqrt(1 + ||S2||^2) max_tau ||e^{A22 tau} D2||).
 */
struct CertificationReport {
    Matrix P2;
    double lambda_max_P2 = 0.0;
    double mu = 0.0;              ///< 1 / lambda_max(P2)
    double beta1 = 0.0;           ///< 2 phi delta_bar (1 + r_bar) sqrt(1 + ||S2||^2) leak
    double delta_bar = 0.0;       ///< value being certified
    double delta_bar_max = 0.0;   ///< +inf when D2 = 0
    double rho_coefficient = 0.0; ///< coefficient of ||x|| in the reaching-gain bound
    double leak_max = 0.0;
    double phi = 0.0;
    bool hurwitz = false;
    bool feasible = false;
    std::map<std::string, double> margins;
    std::string note;
};

CertificationReport corollary_bound(const PlantModel& model, const Matrix& s2, const DelayProfile& delay, double phi,
                                    double delta_bar);

/// phi * delta_bar * (1 + r_bar) * max_tau ||e^{A22 tau} D2||
double theorem_rho_coefficient(const PlantModel& model, const DelayProfile& delay, const UncertaintyModel& unc,
                               double phi);

struct AuditOptions {
    /// Sliding band for |s|; default max(0.01, 10 h max(rho)).
    std::optional<double> band;
    /// Band for |x1 - x1_hat| that marks observer sliding.
    double observer_band = 5e-3;
    /// Start of the window for the fault reconstruction error.
    double fault_window_start = 5.0;
    /// Fractional slack on eta in the discrete Lyapunov test.
    double lyapunov_slack = 0.1;
    /// Decrease rate demanded of V = s's/2; default: eta of a scheduled gain,
    /// rho - ||S2|| (coefficient) ||x_bar|| for a constant gain.
    std::optional<double> eta;
    /// Uncertainty phi used to derive the constant-gain eta.
    double phi = 1.05;
};

struct TraceAudit {
    std::optional<double> sliding_reach_time;
    double sliding_band = 0.0;
    double max_s_after_reach = 0.0;
    std::optional<double> observer_reach_time;
    /// First t with t - tau(t) >= t_0: the prediction window no longer touches the pre-history.
    double predictor_valid_from = 0.0;
    double max_residual = 0.0;        ///< sup ||x2 - x2_hat|| over the valid window
    double max_residual_ratio = 0.0;  ///< sup ||x2 - x2_hat|| / residual_bound where the bound is > 0
    double max_fault_error = 0.0;
    double max_lumped_error = 0.0;    ///< sup ||xi_hat - (B1 d + D1 delta + A12 x_tilde_2)|| in the fault window
    std::size_t lyapunov_checked = 0;
    std::size_t lyapunov_violations = 0;
    double lyapunov_from = 0.0;
    double zeta1_max = 0.0;
    double zeta2_max = 0.0;
    std::size_t samples = 0;
};

/**
 * Audits a completed trace against the analytical bounds.
 *
 * Lyapunov samples are counted from `lyapunov_from`, the later of observer
 * sliding and predictor validity (before that u_d does not cancel the lumped
 * disturbance and the reaching argument does not apply). A sample k is a
 * violation when |s_k| > band and
 *   V_{k+1} - V_k >= -eta ||s_k|| h (1 - slack).
 */
TraceAudit audit_trace(const Trace& trace, const PlantModel& model, const DelayProfile& delay,
                       const UncertaintyModel& unc, const ControllerConfig& cfg, const AuditOptions& options = {});

}  // namespace tdsmc
