#include <catch_amalgamated.hpp>

#include <cmath>

#include "fixtures.hpp"
#include "tdsmc/controller.hpp"
#include "tdsmc/errors.hpp"

using Catch::Approx;
using tdsmc::Matrix;
using tdsmc::Vector;

namespace {

tdsmc::ControllerConfig example_config(double rho = 2.0) {
    tdsmc::ControllerConfig cfg;
    cfg.S2 = Matrix{{-5}};
    cfg.rho = tdsmc::ConstantGain{rho};
    return cfg;
}

tdsmc::ScheduledGain example_schedule() {
    tdsmc::ScheduledGain g;
    g.phi = 1.05;
    g.eta = 0.5;
    g.delta_bar = 1.0;
    g.r_bar = 0.1;
    g.inflation = 1.0;
    return g;
}

}  // namespace

TEST_CASE("surface geometry of the worked example", "[controller]") {
    const auto m = fixtures::example_model();
    const tdsmc::SlidingModeController ctl(m, example_config());

    // S A by explicit row-times-columns with S = [1, -5].
    const double s[2] = {1.0, -5.0};
    const double a[2][2] = {{-1, 1}, {-3, 1}};
    const double sa0 = s[0] * a[0][0] + s[1] * a[1][0];
    const double sa1 = s[0] * a[0][1] + s[1] * a[1][1];
    CHECK(sa0 == 14.0);
    CHECK(sa1 == -4.0);
    CHECK(ctl.surface() == (Matrix{{1, -5}}));
    CHECK(ctl.surface_times_a() == (Matrix{{sa0, sa1}}));
    CHECK(ctl.surface_times_b_inverse() == Matrix{{1}});

    CHECK(tdsmc::reduced_dynamics(m, Matrix{{-5}}) == Matrix{{-14}});
}

TEST_CASE("control_law decomposition", "[controller]") {
    const auto m = fixtures::example_model();
    const auto cfg = example_config();
    const auto delay = fixtures::example_delay();

    const auto out = tdsmc::control_law(Vector{1.0}, Vector{0.5}, Vector{0.3}, 0.0, delay, cfg, m);
    CHECK(out.s == Vector{-1.5});
    CHECK(out.u_nom == Vector{-12.0});
    CHECK(out.u_sm == Vector{2.0});
    CHECK(out.u_d == Vector{-0.3});
    CHECK(out.u[0] == out.u_d[0] + out.u_nom[0] + out.u_sm[0]);
    CHECK(out.rho_used == 2.0);

    const auto origin = tdsmc::control_law(Vector{0.0}, Vector{0.0}, Vector{0.0}, 0.0, delay, cfg, m);
    CHECK(origin.u == Vector{0.0});

    // s = 0 exactly: sign(0) = 0.
    const auto on_surface = tdsmc::control_law(Vector{2.5}, Vector{0.5}, Vector{0.0}, 0.0, delay, cfg, m);
    CHECK(on_surface.s == Vector{0.0});
    CHECK(on_surface.u_sm == Vector{0.0});
}

TEST_CASE("boundary layer saturates s / eps", "[controller]") {
    const auto m = fixtures::example_model();
    auto cfg = example_config();
    cfg.boundary_layer = 3.0;
    const auto out = tdsmc::control_law(Vector{1.0}, Vector{0.5}, Vector{0.0}, 0.0, fixtures::example_delay(), cfg, m);
    CHECK(out.u_sm[0] == Approx(1.0));
    const auto far = tdsmc::control_law(Vector{10.0}, Vector{0.0}, Vector{0.0}, 0.0, fixtures::example_delay(), cfg, m);
    CHECK(far.u_sm[0] == Approx(-2.0));
}

TEST_CASE("controller construction rejects bad configurations", "[controller]") {
    const auto m = fixtures::example_model();
    auto cfg = example_config();
    cfg.S2 = Matrix{{0}};
    CHECK_THROWS_AS(tdsmc::SlidingModeController(m, cfg), tdsmc::InfeasibleError);

    cfg = example_config(-1.0);
    CHECK_THROWS_AS(tdsmc::SlidingModeController(m, cfg), tdsmc::DomainError);

    auto two_inputs = m;
    two_inputs.B1 = Matrix{{1, 1}};
    CHECK_THROWS_AS(tdsmc::SlidingModeController(two_inputs, example_config()), tdsmc::SingularError);
}

TEST_CASE("design_surface", "[controller]") {
    const auto m = fixtures::example_model();
    const Matrix s2 = tdsmc::design_surface(m, Vector{-14.0});
    CHECK(s2(0, 0) == Approx(-5.0).epsilon(1e-14));

    tdsmc::PlantModel integ = m;
    integ.A22 = Matrix{{0}};
    integ.A21 = Matrix{{1}};
    CHECK(tdsmc::design_surface(integ, Vector{-1.0})(0, 0) == Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS(tdsmc::design_surface(m, Vector{0.0}), tdsmc::InfeasibleError);
    CHECK_THROWS_AS(tdsmc::design_surface(m, Vector{-1.0, -2.0}), tdsmc::DimensionError);

    // n - p = 1, p = 2: Ackermann on (A22, A21).
    tdsmc::PlantModel wide;
    wide.A11 = Matrix{{0}};
    wide.A12 = Matrix{{1, 0}};
    wide.A21 = Matrix{{0}, {1}};
    wide.A22 = Matrix{{0, 1}, {0, 0}};
    wide.B1 = Matrix{{1}};
    wide.D1 = Matrix(1, 3);
    wide.D2 = Matrix(2, 3);
    const Matrix sw = tdsmc::design_surface(wide, Vector{-2.0, -3.0});
    const auto c = tdsmc::characteristic_polynomial(tdsmc::reduced_dynamics(wide, sw));
    CHECK(c[1] == Approx(5.0).epsilon(1e-12));
    CHECK(c[2] == Approx(6.0).epsilon(1e-12));
}

TEST_CASE("rho_schedule", "[controller]") {
    const auto m = fixtures::example_model(true);
    const auto tau05 = tdsmc::DelayProfile::constant(0.5);
    const Vector x_bar{2.0, 0.0};

    tdsmc::ControllerConfig cfg = example_config();
    CHECK(tdsmc::rho_schedule(x_bar, 0.0, tau05, cfg, m) == 2.0);

    auto g = example_schedule();
    cfg.rho = g;
    const double leak = std::exp(0.5) * 0.4 * std::sqrt(2.0);
    const double expected = 1.05 * 1.0 * 1.1 * leak * 2.0 + 0.5;
    CHECK(expected == Approx(2.654439).epsilon(1e-6));
    CHECK(tdsmc::rho_schedule(x_bar, 0.0, tau05, cfg, m) == Approx(expected).epsilon(1e-13));

    g.inflation = 1.2;
    g.surface_norm = true;
    cfg.rho = g;
    CHECK(tdsmc::rho_schedule(x_bar, 0.0, tau05, cfg, m) == Approx((expected - 0.5) * 1.2 * 5.0 + 0.5).epsilon(1e-13));

    g.delta_bar = 0.0;
    cfg.rho = g;
    CHECK(tdsmc::rho_schedule(x_bar, 0.0, tau05, cfg, m) == 0.5);
}
