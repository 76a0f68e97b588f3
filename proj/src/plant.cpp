#include "tdsmc/plant.hpp"

#include <cmath>
#include <string>

#include "tdsmc/errors.hpp"

namespace tdsmc {

namespace {

void expect_shape(const Matrix& m, std::size_t rows, std::size_t cols, const char* name) {
    if (m.rows() != rows || m.cols() != cols) {
        throw DimensionError(std::string("PlantModel: ") + name + " is " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" +
                             std::to_string(cols));
    }
}

}  // namespace

void PlantModel::check_dimensions() const {
    const std::size_t n1_ = A11.rows();
    const std::size_t p_ = A22.rows();
    if (n1_ == 0 || p_ == 0) {
        throw DimensionError("PlantModel: both partitions must be non-empty");
    }
    expect_shape(A11, n1_, n1_, "A11");
    expect_shape(A12, n1_, p_, "A12");
    expect_shape(A21, p_, n1_, "A21");
    expect_shape(A22, p_, p_, "A22");
    if (B1.rows() != n1_ || B1.cols() == 0) {
        throw DimensionError("PlantModel: B1 must have " + std::to_string(n1_) + " rows and at least one column");
    }
    if (D1.rows() != n1_ || D2.rows() != p_ || D1.cols() != D2.cols()) {
        throw DimensionError("PlantModel: D1/D2 must be " + std::to_string(n1_) + "xh / " + std::to_string(p_) +
                             "xh with a common h");
    }
}

Matrix PlantModel::A() const { return vstack(hstack(A11, A12), hstack(A21, A22)); }

Matrix PlantModel::B() const { return vstack(B1, Matrix(p(), m())); }

Matrix PlantModel::D() const { return vstack(D1, D2); }

DelayProfile DelayProfile::constant(double value) {
    DelayProfile d;
    d.tau = [value](double) { return value; };
    d.tau_dot = [](double) { return 0.0; };
    d.tau_max = value;
    d.r_bar = 0.0;
    return d;
}

DelayProfile DelayProfile::sinusoidal(double a, double b, double c, double r_bar, double tau_max) {
    DelayProfile d;
    d.tau = [a, b, c](double t) { return a + b * std::sin(c * t); };
    d.tau_dot = [b, c](double t) { return b * c * std::cos(c * t); };
    d.tau_max = tau_max;
    d.r_bar = r_bar;
    return d;
}

FaultSignal FaultSignal::zero(std::size_t m) {
    FaultSignal f;
    f.d = [m](double) { return Vector(m, 0.0); };
    f.alpha = 0.0;
    return f;
}

UncertaintyModel UncertaintyModel::zero(std::size_t h) {
    UncertaintyModel u;
    u.delta = [h](std::span<const double>, double) { return Vector(h, 0.0); };
    u.delta_bar = 0.0;
    return u;
}

UncertaintyModel UncertaintyModel::linear(Matrix g, double delta_bar) {
    UncertaintyModel u;
    u.delta = [g = std::move(g)](std::span<const double> x, double) { return g * x; };
    u.delta_bar = delta_bar;
    return u;
}

Vector plant_derivative(const PlantModel& model, std::span<const double> x, std::span<const double> u,
                        std::span<const double> d, std::span<const double> delta) {
    const std::size_t n1 = model.n1();
    const std::size_t p = model.p();
    if (x.size() != n1 + p || u.size() != model.m() || d.size() != model.m() || delta.size() != model.h()) {
        throw DimensionError("plant_derivative: argument dimensions do not match the model");
    }
    const auto x1 = x.first(n1);
    const auto x2 = x.subspan(n1);

    Vector ud(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        ud[i] = u[i] + d[i];
    }

    Vector dx1 = model.A11 * x1;
    axpy(1.0, model.A12 * x2, dx1);
    axpy(1.0, model.B1 * ud, dx1);
    axpy(1.0, model.D1 * delta, dx1);

    Vector dx2 = model.A21 * x1;
    axpy(1.0, model.A22 * x2, dx2);
    axpy(1.0, model.D2 * delta, dx2);

    return concat(dx1, dx2);
}

Vector plant_step(const PlantModel& model, std::span<const double> x, double t, double h,
                  std::span<const double> u, const FaultSignal& fault, const UncertaintyModel& unc) {
    if (!(h > 0.0)) {
        throw DomainError("plant_step: step must be positive");
    }
    auto f = [&](double ts, std::span<const double> xs) {
        return plant_derivative(model, xs, u, fault.d(ts), unc.delta(xs, ts));
    };

    const Vector k1 = f(t, x);
    Vector xs(x.begin(), x.end());
    axpy(0.5 * h, k1, xs);
    const Vector k2 = f(t + 0.5 * h, xs);
    xs.assign(x.begin(), x.end());
    axpy(0.5 * h, k2, xs);
    const Vector k3 = f(t + 0.5 * h, xs);
    xs.assign(x.begin(), x.end());
    axpy(h, k3, xs);
    const Vector k4 = f(t + h, xs);

    Vector next(x.begin(), x.end());
    for (std::size_t i = 0; i < next.size(); ++i) {
        next[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    if (!all_finite(next)) {
        throw DivergenceError("plant state became non-finite", t + h);
    }
    return next;
}

Vector measure_output(const HistoryBuffer& buf, double t, const DelayProfile& delay, const PlantModel& model) {
    const double tau = delay.tau(t);
    if (!(tau >= 0.0)) {
        throw DomainError("measure_output: negative delay tau(" + std::to_string(t) + ")=" + std::to_string(tau));
    }
    Vector y(model.p());
    buf.sample_into(t - tau, model.n1(), y);
    return y;
}

}  // namespace tdsmc
