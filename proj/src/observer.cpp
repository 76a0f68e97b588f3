#include "tdsmc/observer.hpp"

#include <cmath>

#include "tdsmc/errors.hpp"

namespace tdsmc {

void ObserverGains::validate() const {
    for (double k : {k1, k2, k3, k4}) {
        if (!std::isfinite(k) || !(k > 0.0)) {
            throw DomainError("observer gains must be strictly positive");
        }
    }
}

Vector sta_injection(std::span<const double> error, const ObserverGains& gains, std::span<const double> xi_hat,
                     InjectionSigns signs) {
    if (error.size() != xi_hat.size()) {
        throw DimensionError("sta_injection: error and xi_hat differ in length");
    }
    const double nrm = norm2(error);
    const double root = nrm > 0.0 ? gains.k1 / std::sqrt(nrm) : 0.0;
    const double lin = signs == InjectionSigns::standard ? -gains.k2 : gains.k2;
    Vector nu(error.size());
    for (std::size_t i = 0; i < error.size(); ++i) {
        nu[i] = -root * error[i] + lin * error[i] + xi_hat[i];
    }
    return nu;
}

Vector injection_error(std::span<const double> x1, std::span<const double> x_hat_1, InjectionSigns signs) {
    return signs == InjectionSigns::standard ? sub(x_hat_1, x1) : sub(x1, x_hat_1);
}

ObserverState observer_step(const ObserverState& state, std::span<const double> x1, std::span<const double> x_hat_2,
                            std::span<const double> u, const PlantModel& model, const ObserverGains& gains, double h,
                            InjectionSigns signs) {
    if (!(h > 0.0)) {
        throw DomainError("observer_step: step must be positive");
    }
    const std::size_t n1 = model.n1();
    if (x1.size() != n1 || state.x_hat_1.size() != n1 || state.xi_hat.size() != n1 || x_hat_2.size() != model.p() ||
        u.size() != model.m()) {
        throw DimensionError("observer_step: argument dimensions do not match the model");
    }

    const Vector e = injection_error(x1, state.x_hat_1, signs);
    const Vector nu = sta_injection(e, gains, state.xi_hat, signs);

    Vector dx = model.A11 * state.x_hat_1;
    axpy(1.0, model.A12 * x_hat_2, dx);
    axpy(1.0, model.B1 * u, dx);
    axpy(1.0, nu, dx);

    const double nrm = norm2(e);
    const double unit = nrm > 0.0 ? gains.k3 / nrm : 0.0;

    ObserverState next = state;
    axpy(h, dx, next.x_hat_1);
    for (std::size_t i = 0; i < n1; ++i) {
        next.xi_hat[i] += h * (-unit * e[i] - gains.k4 * e[i]);
    }
    if (!all_finite(next.x_hat_1) || !all_finite(next.xi_hat)) {
        throw DivergenceError("observer state became non-finite", 0.0);
    }
    return next;
}

Vector reconstruct_fault(std::span<const double> xi_hat, const PlantModel& model) {
    if (xi_hat.size() != model.n1()) {
        throw DimensionError("reconstruct_fault: xi_hat has wrong dimension");
    }
    return pseudo_inverse(model.B1) * xi_hat;
}

}  // namespace tdsmc
