#include <catch_amalgamated.hpp>

#include <cmath>

#include "fixtures.hpp"
#include "tdsmc/errors.hpp"
#include "tdsmc/history.hpp"
#include "tdsmc/plant.hpp"

using Catch::Approx;
using tdsmc::Matrix;
using tdsmc::Vector;

namespace {

// x' = -x embedded in the x1 slot, everything else zero.
tdsmc::PlantModel decay_model() {
    tdsmc::PlantModel m;
    m.A11 = Matrix{{-1}};
    m.A12 = Matrix{{0}};
    m.A21 = Matrix{{0}};
    m.A22 = Matrix{{0}};
    m.B1 = Matrix{{1}};
    m.D1 = Matrix(1, 2);
    m.D2 = Matrix(1, 2);
    return m;
}

double endpoint_error(double h) {
    // Worked example, open loop with u = 0: compare against e^{A t} x0.
    const auto m = fixtures::example_model();
    const auto fault = tdsmc::FaultSignal::zero(1);
    const auto unc = tdsmc::UncertaintyModel::zero(2);
    const Vector u{0.0};
    Vector x{1.0, -0.5};
    const int steps = static_cast<int>(std::lround(1.0 / h));
    for (int k = 0; k < steps; ++k) {
        x = tdsmc::plant_step(m, x, k * h, h, u, fault, unc);
    }
    const Vector exact = tdsmc::mat_exp(m.A(), 1.0) * std::span<const double>(Vector{1.0, -0.5});
    return tdsmc::norm2(tdsmc::sub(x, exact));
}

}  // namespace

TEST_CASE("plant model stacking and validation", "[plant]") {
    const auto m = fixtures::example_model(true);
    CHECK(m.n() == 2);
    CHECK(m.p() == 1);
    CHECK(m.A() == (Matrix{{-1, 1}, {-3, 1}}));
    CHECK(m.B() == (Matrix{{1}, {0}}));
    CHECK(m.D() == (Matrix{{0.4, 0.4}, {0.4, 0.4}}));

    auto bad = m;
    bad.A12 = Matrix(2, 1);
    CHECK_THROWS_AS(bad.check_dimensions(), tdsmc::DimensionError);
}

TEST_CASE("plant_derivative", "[plant]") {
    const auto m = fixtures::example_model();
    const Vector zero1{0.0}, zero2{0.0, 0.0};
    CHECK(tdsmc::plant_derivative(m, zero2, zero1, zero1, zero2) == Vector{0.0, 0.0});
    CHECK(tdsmc::plant_derivative(m, Vector{1, 0}, zero1, zero1, zero2) == Vector{-1.0, -3.0});
    CHECK(tdsmc::plant_derivative(m, zero2, Vector{1}, zero1, zero2) == Vector{1.0, 0.0});
    // Fault enters with u; uncertainty through D.
    const auto mu = fixtures::example_model(true);
    CHECK(tdsmc::plant_derivative(mu, zero2, zero1, Vector{2}, Vector{1, 1}) == Vector{2.8, 0.8});
    CHECK_THROWS_AS(tdsmc::plant_derivative(m, Vector{1}, zero1, zero1, zero2), tdsmc::DimensionError);
}

TEST_CASE("plant_step accuracy", "[plant][rk4]") {
    const auto m = decay_model();
    const Vector x = tdsmc::plant_step(m, Vector{1.0, 0.0}, 0.0, 1e-3, Vector{0.0}, tdsmc::FaultSignal::zero(1),
                                       tdsmc::UncertaintyModel::zero(2));
    CHECK(std::abs(x[0] - std::exp(-1e-3)) <= 1e-13);
    CHECK(x[1] == 0.0);

    const auto ex = fixtures::example_model();
    const Vector still = tdsmc::plant_step(ex, Vector{0, 0}, 0.0, 1e-3, Vector{0.0}, tdsmc::FaultSignal::zero(1),
                                           tdsmc::UncertaintyModel::zero(2));
    CHECK(still == Vector{0.0, 0.0});
}

TEST_CASE("plant_step is fourth order", "[plant][rk4]") {
    const double e1 = endpoint_error(0.02);
    const double e2 = endpoint_error(0.01);
    INFO("errors " << e1 << " " << e2);
    CHECK(e1 / e2 >= 14.0);
    CHECK(std::log2(e1 / e2) >= 3.8);
}

TEST_CASE("plant_step reports divergence", "[plant]") {
    auto m = decay_model();
    m.A11 = Matrix{{1e308}};
    CHECK_THROWS_AS(tdsmc::plant_step(m, Vector{1e10, 0.0}, 0.0, 1.0, Vector{0.0}, tdsmc::FaultSignal::zero(1),
                                      tdsmc::UncertaintyModel::zero(2)),
                    tdsmc::DivergenceError);
}

TEST_CASE("delay profile", "[plant][delay]") {
    const auto d = fixtures::example_delay();
    CHECK(d.tau(0.0) == Approx(0.4));
    CHECK(d.tau(M_PI / 2) == Approx(0.5));
    CHECK(d.tau_dot(0.0) == Approx(0.1));
    const auto c = tdsmc::DelayProfile::constant(0.3);
    CHECK(c.tau(12.0) == 0.3);
    CHECK(c.tau_dot(12.0) == 0.0);
}

TEST_CASE("history interpolation", "[plant][history]") {
    SECTION("stored timestamps are returned exactly") {
        tdsmc::HistoryBuffer buf(0.1, 1.0);
        for (int k = 0; k <= 10; ++k) {
            buf.push(Vector{0.1 * k, 0.2 * k});
        }
        CHECK(buf.sample(0.3) == Vector{0.1 * 3, 0.2 * 3});
        const Vector mid = buf.sample(0.05);
        CHECK(mid[0] == Approx(0.05).epsilon(1e-14));
        CHECK(mid[1] == Approx(0.10).epsilon(1e-14));
    }
    SECTION("sin t at h = 1e-3 mid-sample") {
        const double h = 1e-3;
        tdsmc::HistoryBuffer buf(h, 10.0);
        for (int k = 0; k <= 5000; ++k) {
            buf.push(Vector{std::sin(k * h)});
        }
        double worst = 0.0;
        for (int k = 0; k < 5000; k += 7) {
            const double t = (k + 0.5) * h;
            worst = std::max(worst, std::abs(buf.sample(t)[0] - std::sin(t)));
        }
        CHECK(worst <= 2.5e-7);
    }
    SECTION("queries outside the window underflow") {
        tdsmc::HistoryBuffer buf(0.1, 0.3);
        for (int k = 0; k <= 20; ++k) {
            buf.push(Vector{static_cast<double>(k)});
        }
        CHECK(buf.size() == 5);
        CHECK_NOTHROW(buf.sample(2.0 - 0.3));
        CHECK_THROWS_AS(buf.sample(1.0), tdsmc::HistoryUnderflowError);
        CHECK_THROWS_AS(buf.sample(2.05), tdsmc::HistoryUnderflowError);
        CHECK_THROWS_AS(buf.push_at(40, Vector{0.0}), tdsmc::DomainError);
    }
    SECTION("constant pre-history") {
        const auto buf = tdsmc::HistoryBuffer::with_constant_prehistory(1e-3, 0.5, Vector{1.0, 2.0});
        CHECK(buf.last_index() == 0);
        CHECK(buf.t_first() <= -0.5);
        CHECK(buf.sample(-0.4321) == Vector{1.0, 2.0});
    }
}

TEST_CASE("measure_output", "[plant]") {
    const auto m = fixtures::example_model();
    auto buf = tdsmc::HistoryBuffer::with_constant_prehistory(1e-3, 0.6, Vector{1.0, 3.0});
    // Delayed output under constant pre-history equals x2(0).
    CHECK(tdsmc::measure_output(buf, 0.0, fixtures::example_delay(), m) == Vector{3.0});

    for (int k = 1; k <= 100; ++k) {
        buf.push(Vector{1.0, 3.0 + k * 1e-3});
    }
    CHECK(tdsmc::measure_output(buf, 0.1, tdsmc::DelayProfile::constant(0.0), m)[0] == Approx(3.1));
    CHECK(tdsmc::measure_output(buf, 0.1, tdsmc::DelayProfile::constant(0.05), m)[0] == Approx(3.05));
}
