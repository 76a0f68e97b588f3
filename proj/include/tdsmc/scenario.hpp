#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "tdsmc/controller.hpp"
#include "tdsmc/matnum.hpp"
#include "tdsmc/observer.hpp"
#include "tdsmc/plant.hpp"

namespace tdsmc {

struct SimSettings {
    Vector x0;
    double t_final = 20.0;
    double h = 1e-3;
    /// Any state beyond this norm counts as divergence.
    double divergence_norm = 1e6;

    std::size_t steps() const;
};

/// One fully validated closed-loop experiment.
struct Scenario {
    std::string label;
    PlantModel model;
    DelayProfile delay;
    FaultSignal fault;
    UncertaintyModel uncertainty;
    ObserverGains gains;
    InjectionSigns signs = InjectionSigns::standard;
    ControllerConfig controller;
    SimSettings sim;
    /// Sliding band used when auditing traces of this scenario.
    std::optional<double> band;
};

/**
 * Parses and validates a scenario document (JSON). Errors name the offending
 * field: SchemaError (malformed or out of range), ScenarioDimensionError,
 * UncontrollableError, SingularSurfaceError (SB not invertible),
 * NotHurwitzError (A22 - A21 S2), InvalidAssumptionError (bounds on tau, d, delta).
 */
Scenario load_scenario(std::string_view document);
Scenario load_scenario_file(const std::string& path);

/// Checks every cross-field invariant of an assembled scenario.
void validate_scenario(const Scenario& scenario);

}  // namespace tdsmc
