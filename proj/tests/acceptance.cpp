// Acceptance suite A1-A10. One line per criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fixtures.hpp"
#include "tdsmc/analysis.hpp"
#include "tdsmc/predictor.hpp"
#include "tdsmc/scenario.hpp"
#include "tdsmc/simulation.hpp"
#include "tdsmc/trace.hpp"

namespace {

using tdsmc::Matrix;
using tdsmc::Vector;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), f, args...);
    return buf;
}

nlohmann::json scenario_doc(const std::string& name) {
    std::ifstream f(fixtures::scenario_path(name));
    return nlohmann::json::parse(f);
}

tdsmc::Scenario scenario(const std::string& name) { return tdsmc::load_scenario_file(fixtures::scenario_path(name)); }

tdsmc::Scenario with_step(const std::string& name, double h) {
    auto doc = scenario_doc(name);
    doc["sim"]["h"] = h;
    return tdsmc::load_scenario(doc.dump());
}

double final_norm(const tdsmc::Trace& tr) {
    const auto& r = tr.rows.back();
    return tdsmc::norm2(tdsmc::concat(r.x1, r.x2));
}

double sup_over(const tdsmc::Trace& tr, double from, const std::function<double(const tdsmc::TraceRow&)>& f) {
    double m = 0.0;
    for (const auto& r : tr.rows) {
        if (r.t >= from - 1e-12) {
            m = std::max(m, f(r));
        }
    }
    return m;
}

double predictor_error(const tdsmc::Trace& tr) {
    return sup_over(tr, 1.0, [](const tdsmc::TraceRow& r) { return tdsmc::norm2(r.x_tilde_2); });
}

tdsmc::TraceAudit audit(const tdsmc::Trace& tr, const tdsmc::Scenario& sc, std::optional<double> band = {}) {
    tdsmc::AuditOptions opts;
    opts.band = band ? band : sc.band;
    if (const auto* g = std::get_if<tdsmc::ScheduledGain>(&sc.controller.rho)) {
        opts.phi = g->phi;
    }
    return tdsmc::audit_trace(tr, sc.model, sc.delay, sc.uncertainty, sc.controller, opts);
}

// Runs shared between criteria.
struct Runs {
    tdsmc::Scenario nominal = scenario("nominal.json");
    tdsmc::Trace nominal_trace;
    double nominal_seconds = 0.0;
    tdsmc::Trace nominal_half;

    Runs() {
        const auto t0 = std::chrono::steady_clock::now();
        nominal_trace = tdsmc::run(nominal);
        nominal_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        nominal_half = tdsmc::run(with_step("nominal.json", nominal.sim.h / 2));
    }
};

Outcome a1(const Runs& r) {
    const double xf = final_norm(r.nominal_trace);
    return {r.nominal_trace.completed() && xf <= 0.05 && r.nominal_seconds <= 10.0,
            fmt("|x(20)| = %.3e (<= 0.05), runtime %.2f s (<= 10 s)", xf, r.nominal_seconds)};
}

Outcome a2(const Runs& r) {
    const auto a = audit(r.nominal_trace, r.nominal, 0.01);
    const auto ah = audit(r.nominal_half, r.nominal, 0.01);
    auto sup_s = [](const tdsmc::Trace& tr) {
        return sup_over(tr, 5.0, [](const tdsmc::TraceRow& row) { return tdsmc::norm_inf(row.s); });
    };
    const double ratio = sup_s(r.nominal_trace) / sup_s(r.nominal_half);
    const bool reach = a.sliding_reach_time && *a.sliding_reach_time <= 2.0 && ah.sliding_reach_time;
    return {reach && ratio >= 1.8 && ratio <= 2.2,
            fmt("t* = %.3f s (<= 2 s, band 0.01); chattering band h -> h/2 ratio %.3f (~2)",
                a.sliding_reach_time.value_or(NAN), ratio)};
}

Outcome a3(const Runs& r) {
    const double e = predictor_error(r.nominal_trace);
    const double eh = predictor_error(r.nominal_half);
    return {e <= 1e-3 && e / eh >= 3.5,
            fmt("sup_[1,20] |x2 - x2_hat| = %.3e (<= 1e-3); h-halving ratio %.2f (>= 3.5)", e, e / eh)};
}

Outcome a4(const Runs& r) {
    const double e = sup_over(r.nominal_trace, 5.0, [](const tdsmc::TraceRow& row) {
        return tdsmc::norm_inf(tdsmc::sub(row.d, row.d_hat));
    });
    return {e <= 0.05, fmt("sup_[5,20] |d - d_hat| = %.3e (<= 0.05)", e)};
}

Outcome a5() {
    const auto sc = scenario("uncertain.json");
    const auto tr = tdsmc::run(sc);
    const auto a = audit(tr, sc);
    const double xf = final_norm(tr);
    return {tr.completed() && xf <= 0.1 && a.max_residual_ratio <= 1.05,
            fmt("rho = 5: |x(20)| = %.3e (<= 0.1), max_residual_ratio = %.3f (<= 1.05), lumped error %.3e", xf,
                a.max_residual_ratio, a.max_lumped_error)};
}

Outcome a6() {
    const auto sc = scenario("uncertain_rho2.json");
    const auto tr = tdsmc::run(sc);
    const double s_late = sup_over(tr, 5.0, [](const tdsmc::TraceRow& row) { return tdsmc::norm_inf(row.s); });
    const bool fails = !tr.completed() || s_late > 1.0;
    return {fails, fmt("rho = 2: status %s, max |s| after 5 s = %.3e (> 1 or abort)", tdsmc::to_string(tr.status),
                       s_late)};
}

Outcome a7() {
    const auto sc = scenario("uncertain.json");
    const auto rep = tdsmc::corollary_bound(sc.model, sc.controller.S2, sc.delay, 1.05, sc.uncertainty.delta_bar);
    // Independent recomputation from scalar factors: lambda_max(P2) = 1/28,
    // ||S2|| = 5, max_tau ||e^{tau} [0.4 0.4]|| = e^{0.5} 0.4 sqrt(2).
    const double leak = std::exp(0.5) * 0.4 * std::sqrt(2.0);
    const double expected = 1.0 / (2.0 * 1.05 * (1.0 / 28.0) * 1.1 * std::sqrt(1.0 + 25.0) * leak);
    const double p_err = std::abs(rep.P2(0, 0) - 1.0 / 28.0);
    const double rel = std::abs(rep.delta_bar_max - expected) / expected;
    return {p_err <= 1e-10 && rel <= 0.02 && rep.feasible,
            fmt("P2 = %.12f (|P2 - 1/28| = %.1e), delta_bar_max = %.4f vs %.4f (%.2e rel), feasible = %s",
                rep.P2(0, 0), p_err, rep.delta_bar_max, expected, rel, rep.feasible ? "true" : "false")};
}

Outcome a8() {
    std::string detail;
    bool pass = true;
    for (const char* name : {"nominal_scheduled.json", "uncertain_scheduled.json"}) {
        const auto sc = scenario(name);
        const auto tr = tdsmc::run(sc);
        const auto a = audit(tr, sc);
        pass = pass && tr.completed() && a.lyapunov_checked > 0 && a.lyapunov_violations == 0;
        detail += fmt("%s%s: %zu violations / %zu checked (band %.3g)", detail.empty() ? "" : "; ", sc.label.c_str(),
                      a.lyapunov_violations, a.lyapunov_checked, a.sliding_band);
    }
    return {pass, detail};
}

Outcome a9(const Runs& r) {
    double worst_pred = 0.0;
    tdsmc::RunHooks hooks;
    std::size_t k = 0;
    hooks.on_prediction = [&](const tdsmc::PredictionContext& ctx) {
        // Every 5th step keeps the quadrature oracle affordable.
        if (k++ % 5 != 0) {
            return;
        }
        const auto direct =
            tdsmc::predict_x2_direct(ctx.y, ctx.history, ctx.t, r.nominal.delay, r.nominal.model);
        worst_pred = std::max(worst_pred, tdsmc::norm_inf(tdsmc::sub(direct.x_hat_2, ctx.prediction.x_hat_2)));
    };
    const auto tr = tdsmc::run(r.nominal, hooks);

    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> tdist(0.0, 1.0);
    double worst_exp = 0.0;
    double worst_lyap = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Matrix a = fixtures::random_stable(rng, 2 + static_cast<std::size_t>(i % 3));
        const double t = tdist(rng);
        worst_exp = std::max(worst_exp, fixtures::max_abs_diff(tdsmc::mat_exp(a, t), fixtures::taylor_exp(a, t)));
        const Matrix p = tdsmc::solve_lyapunov(a);
        const Matrix res = p * a + a.transpose() * p + Matrix::identity(a.rows());
        worst_lyap = std::max(worst_lyap, tdsmc::max_abs(res));
    }
    return {tr.completed() && worst_pred <= 1e-6 && worst_exp <= 1e-10 && worst_lyap <= 1e-10,
            fmt("predictor RK4 vs quadrature %.2e (<= 1e-6); mat_exp vs Taylor %.2e (<= 1e-10, 100 matrices); "
                "Lyapunov residual %.2e (<= 1e-10)",
                worst_pred, worst_exp, worst_lyap)};
}

Outcome a10(const Runs& r) {
    const std::string first = tdsmc::format_trace(r.nominal_trace);
    const std::string second = tdsmc::format_trace(tdsmc::run(r.nominal));
    const std::string path1 = "acceptance_run1.csv";
    const std::string path2 = "acceptance_run2.csv";
    tdsmc::write_trace(r.nominal_trace, path1);
    tdsmc::write_trace(tdsmc::run(r.nominal), path2);
    auto slurp = [](const std::string& p) {
        std::ifstream f(p, std::ios::binary);
        std::ostringstream ss;
        ss << f.rdbuf();
        return ss.str();
    };
    const bool same_files = slurp(path1) == slurp(path2);
    std::remove(path1.c_str());
    std::remove(path2.c_str());
    return {first == second && same_files,
            fmt("repeated runs: %zu bytes, identical in memory: %s, on disk: %s", first.size(),
                first == second ? "yes" : "no", same_files ? "yes" : "no")};
}

// Not criteria: behaviour at x0 = (1, 1), reported for the record.
void notes() {
    for (const char* name : {"nominal.json", "uncertain.json"}) {
        auto doc = scenario_doc(name);
        doc["sim"]["x0"] = {1.0, 1.0};
        const auto sc = tdsmc::load_scenario(doc.dump());
        const auto tr = tdsmc::run(sc);
        const auto a = audit(tr, sc, 0.01);
        std::printf("note x0=(1,1) %-10s status %s, |x(20)| = %.3e, reach(|s|<=0.01) = %s\n", sc.label.c_str(),
                    tdsmc::to_string(tr.status), final_norm(tr),
                    a.sliding_reach_time ? fmt("%.3f s", *a.sliding_reach_time).c_str() : "none");
    }
}

}  // namespace

int main() {
    const Runs runs;
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"A1 nominal stabilization", [&] { return a1(runs); }},
        {"A2 sliding reach", [&] { return a2(runs); }},
        {"A3 predictor exactness", [&] { return a3(runs); }},
        {"A4 fault reconstruction", [&] { return a4(runs); }},
        {"A5 uncertain stabilization", a5},
        {"A6 instability witness", a6},
        {"A7 certification", a7},
        {"A8 Lyapunov audit", a8},
        {"A9 oracle equivalences", [&] { return a9(runs); }},
        {"A10 determinism", [&] { return a10(runs); }},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::printf("%-4s %-28s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    }
    notes();
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
