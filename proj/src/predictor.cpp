#include "tdsmc/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "tdsmc/errors.hpp"

namespace tdsmc {

namespace {

constexpr double kNodeSnap = 1e-9;

double checked_tau(const DelayProfile& delay, double t) {
    const double tau = delay.tau(t);
    if (!std::isfinite(tau) || tau < 0.0) {
        throw DomainError("predictor: invalid delay tau(" + std::to_string(t) + ")=" + std::to_string(tau));
    }
    return tau;
}

/// Quadrature nodes covering [a, b]: a, interior grid nodes, b.
std::vector<double> window_nodes(double a, double b, double h) {
    std::vector<double> nodes{a};
    auto k = static_cast<std::int64_t>(std::floor(a / h + kNodeSnap)) + 1;
    for (;; ++k) {
        const double tk = static_cast<double>(k) * h;
        if (tk >= b - kNodeSnap * h) {
            break;
        }
        nodes.push_back(tk);
    }
    if (b - nodes.back() > kNodeSnap * h || nodes.size() == 1) {
        nodes.push_back(b);
    } else {
        nodes.back() = b;
    }
    return nodes;
}

}  // namespace

PredictorOutput predict_x2(std::span<const double> y, const HistoryBuffer& buf, double t, const DelayProfile& delay,
                           const PlantModel& model, double h) {
    if (!(h > 0.0)) {
        throw DomainError("predict_x2: step must be positive");
    }
    const std::size_t p = model.p();
    const std::size_t n1 = model.n1();
    if (y.size() != p) {
        throw DimensionError("predict_x2: measurement has wrong dimension");
    }
    const double tau = checked_tau(delay, t);
    PredictorOutput out{Vector(y.begin(), y.end()), tau, 1};
    if (tau == 0.0) {
        return out;
    }

    const Matrix& a22 = model.A22;
    const Matrix& a21 = model.A21;
    Vector x1(n1);
    // z' = A22 z + A21 x1(s)
    auto rhs = [&](double s, std::span<const double> z, std::span<double> dz) {
        buf.sample_into(s, 0, x1);
        for (std::size_t i = 0; i < p; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < p; ++j) {
                acc += a22(i, j) * z[j];
            }
            for (std::size_t j = 0; j < n1; ++j) {
                acc += a21(i, j) * x1[j];
            }
            dz[i] = acc;
        }
    };

    // The history grid is the buffer's grid; h only bounds the sub-step.
    const double grid = buf.step();
    const std::vector<double> nodes = window_nodes(t - tau, t, std::min(grid, h));

    Vector& z = out.x_hat_2;
    Vector k1(p), k2(p), k3(p), k4(p), zs(p);
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const double s = nodes[i];
        const double ds = nodes[i + 1] - s;
        rhs(s, z, k1);
        for (std::size_t j = 0; j < p; ++j) zs[j] = z[j] + 0.5 * ds * k1[j];
        rhs(s + 0.5 * ds, zs, k2);
        for (std::size_t j = 0; j < p; ++j) zs[j] = z[j] + 0.5 * ds * k2[j];
        rhs(s + 0.5 * ds, zs, k3);
        for (std::size_t j = 0; j < p; ++j) zs[j] = z[j] + ds * k3[j];
        rhs(s + ds, zs, k4);
        for (std::size_t j = 0; j < p; ++j) {
            z[j] += ds / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
    }
    out.window_samples = nodes.size();
    return out;
}

PredictorOutput predict_x2_direct(std::span<const double> y, const HistoryBuffer& buf, double t,
                                  const DelayProfile& delay, const PlantModel& model) {
    const std::size_t p = model.p();
    if (y.size() != p) {
        throw DimensionError("predict_x2_direct: measurement has wrong dimension");
    }
    const double tau = checked_tau(delay, t);
    PredictorOutput out{mat_exp(model.A22, tau) * y, tau, 1};
    if (tau == 0.0) {
        return out;
    }

    const std::vector<double> nodes = window_nodes(t - tau, t, buf.step());
    std::vector<Vector> integrand;
    integrand.reserve(nodes.size());
    Vector x1(model.n1());
    for (double s : nodes) {
        buf.sample_into(s, 0, x1);
        integrand.push_back(mat_exp(model.A22, t - s) * (model.A21 * x1));
    }
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const double ds = nodes[i + 1] - nodes[i];
        axpy(0.5 * ds, integrand[i], out.x_hat_2);
        axpy(0.5 * ds, integrand[i + 1], out.x_hat_2);
    }
    out.window_samples = nodes.size();
    return out;
}

double residual_bound(double t, const DelayProfile& delay, const UncertaintyModel& unc, const PlantModel& model,
                      double sup_norm_x) {
    if (!(sup_norm_x >= 0.0)) {
        throw DomainError("residual_bound: sup norm must be non-negative");
    }
    if (!(unc.delta_bar >= 0.0)) {
        throw DomainError("residual_bound: delta_bar must be non-negative");
    }
    const double tau = checked_tau(delay, t);
    if (tau == 0.0 || unc.delta_bar == 0.0) {
        return 0.0;
    }
    return tau * unc.delta_bar * spectral_norm(mat_exp(model.A22, tau) * model.D2) * sup_norm_x;
}

}  // namespace tdsmc
