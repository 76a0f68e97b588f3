#include "tdsmc/controller.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tdsmc/errors.hpp"

namespace tdsmc {

namespace {

double sign0(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

void check_s2(const PlantModel& model, const Matrix& s2) {
    if (s2.rows() != model.n1() || s2.cols() != model.p()) {
        throw DimensionError("controller: S2 must be " + std::to_string(model.n1()) + "x" + std::to_string(model.p()));
    }
}

/// Coefficients of prod (s - lambda_i), leading 1.
Vector poly_from_roots(std::span<const double> roots) {
    Vector c{1.0};
    for (double r : roots) {
        Vector next(c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i] += c[i];
            next[i + 1] -= r * c[i];
        }
        c = std::move(next);
    }
    return c;
}

}  // namespace

Vector sliding_variable(std::span<const double> x1, std::span<const double> x_hat_2, const ControllerConfig& cfg) {
    if (cfg.S2.rows() != x1.size() || cfg.S2.cols() != x_hat_2.size()) {
        throw DimensionError("sliding_variable: S2 does not match x1/x2_hat");
    }
    return add(x1, cfg.S2 * x_hat_2);
}

Matrix reduced_dynamics(const PlantModel& model, const Matrix& s2) {
    check_s2(model, s2);
    return model.A22 - model.A21 * s2;
}

Matrix design_surface(const PlantModel& model, std::span<const double> desired_eigenvalues) {
    const std::size_t p = model.p();
    const std::size_t n1 = model.n1();
    if (desired_eigenvalues.size() != p) {
        throw DimensionError("design_surface: need " + std::to_string(p) + " eigenvalues");
    }
    for (double lambda : desired_eigenvalues) {
        if (!std::isfinite(lambda) || !(lambda < 0.0)) {
            throw InfeasibleError("design_surface: eigenvalue " + std::to_string(lambda) + " is not in the open left half-plane");
        }
    }

    const Vector target = poly_from_roots(desired_eigenvalues);
    Matrix s2;
    if (n1 == 1) {
        // Single column b = A21: Ackermann, S2 = e_p^T C^{-1} phi(A22).
        const Matrix ctrb = controllability_matrix(model.A22, model.A21);
        if (rank(ctrb) < p) {
            throw InfeasibleError("design_surface: (A22, A21) is not controllable");
        }
        Matrix phi(p, p);
        Matrix power = Matrix::identity(p);
        for (std::size_t k = 0; k <= p; ++k) {
            phi += target[p - k] * power;
            power = power * model.A22;
        }
        const Matrix ctrb_inv = inverse(ctrb);
        Matrix ep(1, p);
        ep(0, p - 1) = 1.0;
        s2 = ep * ctrb_inv * phi;
    } else if (p == 1) {
        // a22 - A21 S2 = lambda with the minimum-norm S2.
        const double gram = frobenius_norm(model.A21) * frobenius_norm(model.A21);
        if (gram == 0.0) {
            throw InfeasibleError("design_surface: (A22, A21) is not controllable");
        }
        s2 = ((model.A22(0, 0) - desired_eigenvalues[0]) / gram) * model.A21.transpose();
    } else {
        throw UnsupportedError("design_surface: pole placement needs p == 1 or n - p == 1; supply S2 directly");
    }

    const Vector achieved = characteristic_polynomial(reduced_dynamics(model, s2));
    for (std::size_t i = 0; i < achieved.size(); ++i) {
        if (std::abs(achieved[i] - target[i]) > 1e-8 * std::max(1.0, std::abs(target[i]))) {
            throw InfeasibleError("design_surface: placement check failed (ill-conditioned pair)");
        }
    }
    return s2;
}

double rho_schedule(std::span<const double> x_bar, double t, const DelayProfile& delay, const ControllerConfig& cfg,
                    const PlantModel& model) {
    if (const auto* c = std::get_if<ConstantGain>(&cfg.rho)) {
        return c->value;
    }
    const auto& g = std::get<ScheduledGain>(cfg.rho);
    if (g.delta_bar == 0.0) {
        return g.eta;
    }
    const double leak = spectral_norm(mat_exp(model.A22, delay.tau(t)) * model.D2);
    const double surface = g.surface_norm ? spectral_norm(cfg.S2) : 1.0;
    return g.phi * g.delta_bar * (1.0 + g.r_bar) * leak * surface * g.inflation * norm2(x_bar) + g.eta;
}

SlidingModeController::SlidingModeController(const PlantModel& model, ControllerConfig cfg)
    : model_(model), cfg_(std::move(cfg)) {
    model.check_dimensions();
    check_s2(model, cfg_.S2);
    if (model.m() != model.n1()) {
        throw SingularError("controller: SB = B1 must be square (m == n - p)");
    }
    if (cfg_.boundary_layer && !(*cfg_.boundary_layer > 0.0)) {
        throw DomainError("controller: boundary layer must be positive");
    }
    if (const auto* g = std::get_if<ScheduledGain>(&cfg_.rho)) {
        if (!(g->phi > 1.0) || !(g->eta > 0.0) || !(g->inflation >= 1.0)) {
            throw DomainError("controller: scheduled gain needs phi > 1, eta > 0, inflation >= 1");
        }
    } else if (!(std::get<ConstantGain>(cfg_.rho).value > 0.0)) {
        throw DomainError("controller: rho must be positive");
    }

    s_ = hstack(Matrix::identity(model.n1()), cfg_.S2);
    sa_ = s_ * model.A();
    sb_inv_ = inverse(s_ * model.B());
    b1_pinv_ = pseudo_inverse(model.B1);
    // Throws InfeasibleError when the reduced dynamics are not Hurwitz.
    (void)solve_lyapunov(reduced_dynamics(model, cfg_.S2));
}

ControlDecomposition SlidingModeController::compute(std::span<const double> x1, std::span<const double> x_hat_2,
                                                    std::span<const double> xi_hat, double t,
                                                    const DelayProfile& delay) const {
    const Vector x_bar = concat(x1, x_hat_2);
    ControlDecomposition out;
    out.s = s_ * std::span<const double>(x_bar);
    out.rho_used = rho_schedule(x_bar, t, delay, cfg_, model_);

    out.u_d = scaled(b1_pinv_ * xi_hat, -1.0);
    out.u_nom = scaled(sb_inv_ * (sa_ * std::span<const double>(x_bar)), -1.0);

    Vector sw(out.s.size());
    for (std::size_t i = 0; i < sw.size(); ++i) {
        sw[i] = cfg_.boundary_layer ? std::clamp(out.s[i] / *cfg_.boundary_layer, -1.0, 1.0) : sign0(out.s[i]);
    }
    out.u_sm = scaled(sb_inv_ * sw, -out.rho_used);

    out.u = out.u_d;
    for (std::size_t i = 0; i < out.u.size(); ++i) {
        out.u[i] = out.u_d[i] + out.u_nom[i] + out.u_sm[i];
    }
    return out;
}

ControlDecomposition control_law(std::span<const double> x1, std::span<const double> x_hat_2,
                                 std::span<const double> xi_hat, double t, const DelayProfile& delay,
                                 const ControllerConfig& cfg, const PlantModel& model) {
    return SlidingModeController(model, cfg).compute(x1, x_hat_2, xi_hat, t, delay);
}

}  // namespace tdsmc
