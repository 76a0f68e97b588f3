#pragma once

#include <span>

#include "tdsmc/matnum.hpp"
#include "tdsmc/plant.hpp"

namespace tdsmc {

struct ObserverGains {
    double k1 = 5.0;
    double k2 = 2.0;
    double k3 = 5.0;
    double k4 = 2.0;

    /// Throws DomainError unless every gain is strictly positive and finite.
    void validate() const;
};

/**
 * Sign convention of the Super-Twisting output injection.
 *
 * `standard` evaluates the injection on e = x1_hat - x1 with
 *   nu  = -k1 e/|e|^{1/2} - k2 e + xi_hat,   xi_hat' = -k3 e/|e| - k4 e,
 * which gives the usual STA error dynamics for x1 - x1_hat and makes xi_hat
 * converge to B1 d + D1 delta + A12 (x2 - x2_hat).
 *
 * `literal` uses e = x1 - x1_hat and +k2 e exactly as the observer is
 * usually printed. With x1_hat' = ... + nu this feeds the error back with the
 * wrong sign and does not converge; it is kept for comparison runs only.
 */
enum class InjectionSigns { standard, literal };

struct ObserverState {
    Vector x_hat_1;
    Vector xi_hat;
};

/// nu = -k1 e/||e||^{1/2} +/- k2 e + xi_hat, with the fractional term taken as 0 at e = 0.
Vector sta_injection(std::span<const double> error, const ObserverGains& gains, std::span<const double> xi_hat,
                     InjectionSigns signs = InjectionSigns::standard);

/// The error argument fed to the injection for the given convention.
Vector injection_error(std::span<const double> x1, std::span<const double> x_hat_1, InjectionSigns signs);

/// Explicit Euler step of
///   x1_hat' = A11 x1_hat + A12 x2_hat + B1 u + nu
///   xi_hat' = -k3 e/||e|| - k4 e
/// with e frozen at the start of the step.
ObserverState observer_step(const ObserverState& state, std::span<const double> x1, std::span<const double> x_hat_2,
                            std::span<const double> u, const PlantModel& model, const ObserverGains& gains, double h,
                            InjectionSigns signs = InjectionSigns::standard);

/// d_hat = B1^+ xi_hat
Vector reconstruct_fault(std::span<const double> xi_hat, const PlantModel& model);

}  // namespace tdsmc
