#pragma once

#include <optional>
#include <span>
#include <variant>

#include "tdsmc/matnum.hpp"
#include "tdsmc/plant.hpp"

namespace tdsmc {

struct ConstantGain {
    double value = 2.0;
};

/// rho = phi * delta_bar * (1 + r_bar) * ||e^{A22 tau(t)} D2|| * inflation * ||x_bar|| + eta
/// (times ||S2|| on the state term when surface_norm is set)
struct ScheduledGain {
    double phi = 1.05;
    double eta = 0.5;
    double delta_bar = 0.0;
    double r_bar = 0.0;
    /// Covers the unmeasured part of ||x|| when ||x_bar|| = ||(x1, x2_hat)|| stands in for it.
    double inflation = 1.2;
    /// Multiply the state term by ||S2||: s' = S2 zeta2 - rho sign(s) needs it.
    bool surface_norm = false;
};

using GainMode = std::variant<ConstantGain, ScheduledGain>;

struct ControllerConfig {
    Matrix S2;
    GainMode rho = ConstantGain{};
    /// When set, sign(s_i) becomes clamp(s_i / eps, -1, 1).
    std::optional<double> boundary_layer;
};

struct ControlDecomposition {
    Vector u;
    Vector u_d;
    Vector u_nom;
    Vector u_sm;
    Vector s;
    double rho_used = 0.0;
};

/// s = x1 + S2 x2_hat
Vector sliding_variable(std::span<const double> x1, std::span<const double> x_hat_2, const ControllerConfig& cfg);

/// Pole placement for A22 - A21 S2 when either p == 1 or n - p == 1.
Matrix design_surface(const PlantModel& model, std::span<const double> desired_eigenvalues);

/// A22 - A21 S2
Matrix reduced_dynamics(const PlantModel& model, const Matrix& s2);

double rho_schedule(std::span<const double> x_bar, double t, const DelayProfile& delay, const ControllerConfig& cfg,
                    const PlantModel& model);

/**
 * @brief Sliding mode law with cached surface geometry.
 *
 *   u = -B1^+ xi_hat - (SB)^{-1} S A x_bar - rho (SB)^{-1} sign(s),  S = [I S2]
 *
 * Construction validates the configuration: SB = B1 must be invertible
 * (SingularError) and A22 - A21 S2 Hurwitz (InfeasibleError).
 */
class SlidingModeController {
public:
    SlidingModeController(const PlantModel& model, ControllerConfig cfg);

    ControlDecomposition compute(std::span<const double> x1, std::span<const double> x_hat_2,
                                 std::span<const double> xi_hat, double t, const DelayProfile& delay) const;

    const ControllerConfig& config() const noexcept { return cfg_; }
    const Matrix& surface() const noexcept { return s_; }
    const Matrix& surface_times_a() const noexcept { return sa_; }
    const Matrix& surface_times_b_inverse() const noexcept { return sb_inv_; }

private:
    PlantModel model_;
    ControllerConfig cfg_;
    Matrix s_;
    Matrix sa_;
    Matrix sb_inv_;
    Matrix b1_pinv_;
};

ControlDecomposition control_law(std::span<const double> x1, std::span<const double> x_hat_2,
                                 std::span<const double> xi_hat, double t, const DelayProfile& delay,
                                 const ControllerConfig& cfg, const PlantModel& model);

}  // namespace tdsmc
