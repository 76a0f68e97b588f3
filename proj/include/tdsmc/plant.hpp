#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "tdsmc/history.hpp"
#include "tdsmc/matnum.hpp"

namespace tdsmc {

/**
 * Partitioned LTI plant
 *
 *   x1' = A11 x1 + A12 x2 + B1 (u + d) + D1 delta(x, t)
 *   x2' = A21 x1 + A22 x2             + D2 delta(x, t)
 *   y   = x2(t - tau(t))
 *
 * x1 (dimension n - p) is measured now, x2 (dimension p) is only seen through
 * the delayed output.
 */
struct PlantModel {
    Matrix A11;
    Matrix A12;
    Matrix A21;
    Matrix A22;
    Matrix B1;
    Matrix D1;
    Matrix D2;

    std::size_t n() const noexcept { return A11.rows() + A22.rows(); }
    std::size_t p() const noexcept { return A22.rows(); }
    std::size_t n1() const noexcept { return A11.rows(); }
    std::size_t m() const noexcept { return B1.cols(); }
    std::size_t h() const noexcept { return D1.cols(); }

    /// Stacked matrices A, B = [B1; 0], D = [D1; D2].
    Matrix A() const;
    Matrix B() const;
    Matrix D() const;

    /// Throws DimensionError when the blocks do not tile consistently.
    void check_dimensions() const;
};

/// Known time-varying measurement delay with |tau'| <= r_bar < 1.
struct DelayProfile {
    std::function<double(double)> tau;
    std::function<double(double)> tau_dot;
    double tau_max = 0.0;
    double r_bar = 0.0;

    static DelayProfile constant(double value);
    /// tau(t) = a + b sin(c t)
    static DelayProfile sinusoidal(double a, double b, double c, double r_bar, double tau_max);
};

/// Actuator fault d(t) with ||d(t)|| <= alpha.
struct FaultSignal {
    std::function<Vector(double)> d;
    double alpha = 0.0;

    static FaultSignal zero(std::size_t m);
};

/// Parametric uncertainty delta(x, t) with ||delta|| <= delta_bar ||x||.
struct UncertaintyModel {
    std::function<Vector(std::span<const double>, double)> delta;
    double delta_bar = 0.0;

    static UncertaintyModel zero(std::size_t h);
    /// delta(x, t) = G x
    static UncertaintyModel linear(Matrix g, double delta_bar);
};

Vector plant_derivative(const PlantModel& model, std::span<const double> x, std::span<const double> u,
                        std::span<const double> d, std::span<const double> delta);

/// One RK4 step with u held over [t, t + h]; d and delta are re-evaluated at
/// every stage. Throws DivergenceError on a non-finite result.
Vector plant_step(const PlantModel& model, std::span<const double> x, double t, double h,
                  std::span<const double> u, const FaultSignal& fault, const UncertaintyModel& unc);

/// y(t) = x2(t - tau(t)) read from the history.
Vector measure_output(const HistoryBuffer& buf, double t, const DelayProfile& delay, const PlantModel& model);

}  // namespace tdsmc
