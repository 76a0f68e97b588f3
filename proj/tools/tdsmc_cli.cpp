// Command line front end: simulate, certify, audit.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "tdsmc/analysis.hpp"
#include "tdsmc/errors.hpp"
#include "tdsmc/report.hpp"
#include "tdsmc/scenario.hpp"
#include "tdsmc/simulation.hpp"
#include "tdsmc/trace.hpp"

namespace {

using nlohmann::json;

// Bounds checked by `audit`; see README.
constexpr double kResidualRatioLimit = 1.05;

double phi_of(const tdsmc::Scenario& sc, double fallback) {
    if (const auto* g = std::get_if<tdsmc::ScheduledGain>(&sc.controller.rho)) {
        return g->phi;
    }
    return fallback;
}

tdsmc::AuditOptions audit_options(const tdsmc::Scenario& sc, double phi) {
    tdsmc::AuditOptions opts;
    opts.band = sc.band;
    opts.phi = phi;
    return opts;
}

bool audit_passes(const tdsmc::TraceAudit& a) {
    return a.sliding_reach_time.has_value() && a.max_residual_ratio <= kResidualRatioLimit &&
           a.lyapunov_violations == 0;
}

json certify_json(const tdsmc::Scenario& sc, double phi) {
    return tdsmc::to_json(
        tdsmc::corollary_bound(sc.model, sc.controller.S2, sc.delay, phi, sc.uncertainty.delta_bar));
}

int cmd_simulate(const std::string& scenario_path, const std::string& out, const std::string& report, double phi) {
    const tdsmc::Scenario sc = tdsmc::load_scenario_file(scenario_path);
    const tdsmc::Trace trace = tdsmc::run(sc);
    tdsmc::write_trace(trace, out);

    json summary = {
        {"label", sc.label},
        {"status", tdsmc::to_string(trace.status)},
        {"diagnostic", trace.diagnostic},
        {"samples", trace.rows.size()},
    };
    if (!report.empty()) {
        const double p = phi_of(sc, phi);
        summary["certification"] = certify_json(sc, p);
        summary["audit"] = tdsmc::to_json(
            tdsmc::audit_trace(trace, sc.model, sc.delay, sc.uncertainty, sc.controller, audit_options(sc, p)));
        tdsmc::write_json(summary, report);
    }
    std::cout << summary.dump(2) << '\n';
    return trace.completed() ? 0 : 2;
}

int cmd_certify(const std::string& scenario_path, double phi, const std::string& report) {
    const tdsmc::Scenario sc = tdsmc::load_scenario_file(scenario_path);
    json doc = certify_json(sc, phi);
    doc["label"] = sc.label;
    if (!report.empty()) {
        tdsmc::write_json(doc, report);
    }
    std::cout << doc.dump(2) << '\n';
    return doc.at("feasible").get<bool>() ? 0 : 3;
}

int cmd_audit(const std::string& scenario_path, const std::string& trace_path, const std::string& report,
              double phi) {
    const tdsmc::Scenario sc = tdsmc::load_scenario_file(scenario_path);
    const tdsmc::Trace trace = tdsmc::read_trace(trace_path);
    const double p = phi_of(sc, phi);
    const tdsmc::TraceAudit audit =
        tdsmc::audit_trace(trace, sc.model, sc.delay, sc.uncertainty, sc.controller, audit_options(sc, p));
    json doc = tdsmc::to_json(audit);
    doc["label"] = sc.label;
    doc["pass"] = audit_passes(audit);
    if (!report.empty()) {
        tdsmc::write_json(doc, report);
    }
    std::cout << doc.dump(2) << '\n';
    return audit_passes(audit) ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Delay-compensated sliding mode control: simulation, certification and trace audit"};
    app.require_subcommand(1);

    std::string scenario;
    std::string out;
    std::string report;
    std::string trace;
    double phi = 1.05;

    auto* sim = app.add_subcommand("simulate", "Run a scenario and write its trace as CSV");
    sim->add_option("--scenario", scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
    sim->add_option("--out", out, "Trace CSV output path")->required();
    sim->add_option("--report", report, "Optional JSON report (certificate + trace audit)");
    sim->add_option("--phi", phi, "Razumikhin constant for the report (scheduled gains use their own)");

    auto* cert = app.add_subcommand("certify", "Evaluate the uncertainty bound for the sliding dynamics");
    cert->add_option("--scenario", scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
    cert->add_option("--phi", phi, "Razumikhin constant, > 1")->check(CLI::Range(1.0, 1e12));
    cert->add_option("--report", report, "Optional JSON output path");

    auto* aud = app.add_subcommand("audit", "Audit a recorded trace against the stability bounds");
    aud->add_option("--scenario", scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
    aud->add_option("--trace", trace, "Trace CSV file")->required()->check(CLI::ExistingFile);
    aud->add_option("--report", report, "Optional JSON output path");
    aud->add_option("--phi", phi, "Razumikhin constant used for constant-gain scenarios");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            return cmd_simulate(scenario, out, report, phi);
        }
        if (cert->parsed()) {
            return cmd_certify(scenario, phi, report);
        }
        return cmd_audit(scenario, trace, report, phi);
    } catch (const tdsmc::ScenarioError& e) {
        std::cerr << "scenario error [" << e.field() << "]: " << e.what() << '\n';
        return 64;
    } catch (const tdsmc::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 65;
    }
}
