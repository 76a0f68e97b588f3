#include "tdsmc/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tdsmc/errors.hpp"

namespace tdsmc {

using nlohmann::json;

namespace {

const json& require(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) {
        throw SchemaError(path, "expected an object");
    }
    const auto it = obj.find(key);
    if (it == obj.end()) {
        throw SchemaError(path + "." + key, "missing required field");
    }
    return *it;
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) {
        throw SchemaError(path, "expected a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        throw SchemaError(path, "must be finite");
    }
    return v;
}

double number(const json& obj, const std::string& key, const std::string& path) {
    return as_number(require(obj, key, path), path + "." + key);
}

double number_or(const json& obj, const std::string& key, const std::string& path, double fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    return as_number(obj.at(key), path + "." + key);
}

Vector vector_of(const json& j, const std::string& path) {
    if (!j.is_array()) {
        throw SchemaError(path, "expected an array of numbers");
    }
    Vector v;
    v.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        v.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
    }
    return v;
}

Matrix matrix_of(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) {
        throw SchemaError(path, "expected a non-empty array of rows");
    }
    const std::size_t rows = j.size();
    std::size_t cols = 0;
    Vector data;
    for (std::size_t r = 0; r < rows; ++r) {
        const std::string rp = path + "[" + std::to_string(r) + "]";
        Vector row = vector_of(j[r], rp);
        if (r == 0) {
            cols = row.size();
            if (cols == 0) {
                throw SchemaError(rp, "rows must be non-empty");
            }
        } else if (row.size() != cols) {
            throw ScenarioDimensionError(rp, "ragged matrix: expected " + std::to_string(cols) + " columns");
        }
        data.insert(data.end(), row.begin(), row.end());
    }
    return Matrix(rows, cols, std::move(data));
}

void expect_shape(const Matrix& m, std::size_t rows, std::size_t cols, const std::string& path) {
    if (m.rows() != rows || m.cols() != cols) {
        throw ScenarioDimensionError(path, "is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                               ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
    }
}

PlantModel parse_model(const json& j) {
    const std::string path = "model";
    PlantModel m;
    m.A11 = matrix_of(require(j, "A11", path), "model.A11");
    m.A12 = matrix_of(require(j, "A12", path), "model.A12");
    m.A21 = matrix_of(require(j, "A21", path), "model.A21");
    m.A22 = matrix_of(require(j, "A22", path), "model.A22");
    m.B1 = matrix_of(require(j, "B1", path), "model.B1");
    const std::size_t n1 = m.A11.rows();
    const std::size_t p = m.A22.rows();
    expect_shape(m.A11, n1, n1, "model.A11");
    expect_shape(m.A22, p, p, "model.A22");
    expect_shape(m.A12, n1, p, "model.A12");
    expect_shape(m.A21, p, n1, "model.A21");
    if (m.B1.rows() != n1) {
        throw ScenarioDimensionError("model.B1", "must have " + std::to_string(n1) + " rows");
    }
    // Without an explicit D the uncertainty channel has h = n and D = 0.
    if (j.contains("D1") || j.contains("D2")) {
        m.D1 = matrix_of(require(j, "D1", path), "model.D1");
        m.D2 = matrix_of(require(j, "D2", path), "model.D2");
        if (m.D1.rows() != n1) {
            throw ScenarioDimensionError("model.D1", "must have " + std::to_string(n1) + " rows");
        }
        expect_shape(m.D2, p, m.D1.cols(), "model.D2");
    } else {
        m.D1 = Matrix(n1, n1 + p);
        m.D2 = Matrix(p, n1 + p);
    }
    return m;
}

DelayProfile parse_delay(const json& j) {
    const std::string path = "delay";
    const double a = number(j, "a", path);
    const double b = number_or(j, "b", path, 0.0);
    const double c = number_or(j, "c", path, 0.0);
    const double r_bar = number(j, "r_bar", path);
    const double tau_max = number(j, "tau_max", path);
    if (!(r_bar >= 0.0) || !(r_bar < 1.0)) {
        throw InvalidAssumptionError("delay.r_bar", "rate bound must satisfy 0 <= r_bar < 1");
    }
    if (std::abs(b * c) > r_bar + 1e-12) {
        throw InvalidAssumptionError("delay.b", "|b c| exceeds r_bar");
    }
    if (a - std::abs(b) < 0.0) {
        throw InvalidAssumptionError("delay.a", "delay a + b sin(ct) becomes negative");
    }
    if (a + std::abs(b) > tau_max + 1e-12) {
        throw InvalidAssumptionError("delay.tau_max", "delay exceeds tau_max");
    }
    return DelayProfile::sinusoidal(a, b, c, r_bar, tau_max);
}

struct FaultTerm {
    double amp;
    double freq;
    double phase;
    bool cosine;
    std::size_t channel;
};

FaultSignal parse_fault(const json& j, std::size_t m) {
    const std::string path = "fault";
    std::vector<FaultTerm> terms;
    if (j.contains("terms")) {
        const json& arr = j.at("terms");
        if (!arr.is_array()) {
            throw SchemaError("fault.terms", "expected an array");
        }
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string tp = "fault.terms[" + std::to_string(i) + "]";
            FaultTerm t{};
            t.amp = number(arr[i], "amp", tp);
            t.freq = number_or(arr[i], "freq", tp, 0.0);
            t.phase = number_or(arr[i], "phase", tp, 0.0);
            const std::string kind = arr[i].value("kind", std::string("sin"));
            if (kind != "sin" && kind != "cos") {
                throw SchemaError(tp + ".kind", "must be \"sin\" or \"cos\"");
            }
            t.cosine = kind == "cos";
            const double ch = number_or(arr[i], "channel", tp, 0.0);
            if (ch < 0.0 || ch != std::floor(ch) || static_cast<std::size_t>(ch) >= m) {
                throw ScenarioDimensionError(tp + ".channel", "must index one of " + std::to_string(m) + " inputs");
            }
            t.channel = static_cast<std::size_t>(ch);
            terms.push_back(t);
        }
    }
    FaultSignal f;
    f.alpha = number(j, "alpha", path);
    if (!(f.alpha >= 0.0)) {
        throw InvalidAssumptionError("fault.alpha", "must be non-negative");
    }
    Vector worst(m, 0.0);
    for (const auto& t : terms) {
        worst[t.channel] += std::abs(t.amp);
    }
    if (norm2(worst) > f.alpha + 1e-12) {
        throw InvalidAssumptionError("fault.alpha", "sum of term amplitudes can exceed alpha");
    }
    f.d = [terms, m](double t) {
        Vector d(m, 0.0);
        for (const auto& term : terms) {
            const double arg = term.freq * t + term.phase;
            d[term.channel] += term.amp * (term.cosine ? std::cos(arg) : std::sin(arg));
        }
        return d;
    };
    return f;
}

UncertaintyModel parse_uncertainty(const json& j, const PlantModel& model) {
    const double delta_bar = number(j, "delta_bar", "uncertainty");
    if (!(delta_bar >= 0.0)) {
        throw InvalidAssumptionError("uncertainty.delta_bar", "must be non-negative");
    }
    if (!j.contains("G") || j.at("G").is_null()) {
        UncertaintyModel u = UncertaintyModel::zero(model.h());
        u.delta_bar = delta_bar;
        return u;
    }
    Matrix g = matrix_of(j.at("G"), "uncertainty.G");
    expect_shape(g, model.h(), model.n(), "uncertainty.G");
    if (spectral_norm(g) > delta_bar * (1.0 + 1e-12)) {
        throw InvalidAssumptionError("uncertainty.G", "||G|| exceeds delta_bar");
    }
    return UncertaintyModel::linear(std::move(g), delta_bar);
}

ObserverGains parse_gains(const json& j, InjectionSigns& signs) {
    const std::string path = "observer";
    ObserverGains g{number(j, "k1", path), number(j, "k2", path), number(j, "k3", path), number(j, "k4", path)};
    const char* names[] = {"k1", "k2", "k3", "k4"};
    const double values[] = {g.k1, g.k2, g.k3, g.k4};
    for (int i = 0; i < 4; ++i) {
        if (!(values[i] > 0.0)) {
            throw SchemaError(std::string("observer.") + names[i], "gain must be strictly positive");
        }
    }
    signs = InjectionSigns::standard;
    if (j.contains("paper_literal_signs")) {
        if (!j.at("paper_literal_signs").is_boolean()) {
            throw SchemaError("observer.paper_literal_signs", "expected a boolean");
        }
        if (j.at("paper_literal_signs").get<bool>()) {
            signs = InjectionSigns::literal;
        }
    }
    return g;
}

ControllerConfig parse_controller(const json& j, const PlantModel& model, const DelayProfile& delay,
                                  const UncertaintyModel& unc, std::optional<double>& band) {
    const std::string path = "controller";
    ControllerConfig cfg;
    if (j.contains("S2")) {
        cfg.S2 = matrix_of(j.at("S2"), "controller.S2");
        expect_shape(cfg.S2, model.n1(), model.p(), "controller.S2");
    } else if (j.contains("poles")) {
        const Vector poles = vector_of(j.at("poles"), "controller.poles");
        try {
            cfg.S2 = design_surface(model, poles);
        } catch (const InfeasibleError& e) {
            throw NotHurwitzError("controller.poles", e.what());
        } catch (const Error& e) {
            throw SchemaError("controller.poles", e.what());
        }
    } else {
        throw SchemaError("controller.S2", "missing required field (or give controller.poles)");
    }

    const json& rho = require(j, "rho", path);
    const std::string mode = rho.value("mode", std::string("constant"));
    if (mode == "constant") {
        const double v = number(rho, "value", "controller.rho");
        if (!(v > 0.0)) {
            throw SchemaError("controller.rho.value", "must be positive");
        }
        cfg.rho = ConstantGain{v};
    } else if (mode == "scheduled") {
        ScheduledGain g;
        g.phi = number_or(rho, "phi", "controller.rho", 1.05);
        g.eta = number_or(rho, "eta", "controller.rho", 0.5);
        g.inflation = number_or(rho, "inflation", "controller.rho", 1.2);
        if (rho.contains("surface_norm")) {
            if (!rho.at("surface_norm").is_boolean()) {
                throw SchemaError("controller.rho.surface_norm", "expected a boolean");
            }
            g.surface_norm = rho.at("surface_norm").get<bool>();
        }
        g.delta_bar = unc.delta_bar;
        g.r_bar = delay.r_bar;
        if (!(g.phi > 1.0)) {
            throw SchemaError("controller.rho.phi", "must exceed 1");
        }
        if (!(g.eta > 0.0)) {
            throw SchemaError("controller.rho.eta", "must be positive");
        }
        if (!(g.inflation >= 1.0)) {
            throw SchemaError("controller.rho.inflation", "must be at least 1");
        }
        cfg.rho = g;
    } else {
        throw SchemaError("controller.rho.mode", "must be \"constant\" or \"scheduled\"");
    }

    if (j.contains("boundary_layer") && !j.at("boundary_layer").is_null()) {
        const double eps = as_number(j.at("boundary_layer"), "controller.boundary_layer");
        if (!(eps > 0.0)) {
            throw SchemaError("controller.boundary_layer", "must be positive");
        }
        cfg.boundary_layer = eps;
    }
    if (j.contains("band") && !j.at("band").is_null()) {
        const double b = as_number(j.at("band"), "controller.band");
        if (!(b > 0.0)) {
            throw SchemaError("controller.band", "must be positive");
        }
        band = b;
    }
    return cfg;
}

SimSettings parse_sim(const json& j, std::size_t n) {
    SimSettings s;
    s.x0 = vector_of(require(j, "x0", "sim"), "sim.x0");
    if (s.x0.size() != n) {
        throw ScenarioDimensionError("sim.x0", "must have " + std::to_string(n) + " entries");
    }
    s.t_final = number(j, "t_final", "sim");
    s.h = number(j, "h", "sim");
    s.divergence_norm = number_or(j, "divergence_norm", "sim", s.divergence_norm);
    return s;
}

}  // namespace

std::size_t SimSettings::steps() const {
    if (!(h > 0.0) || !(t_final > 0.0)) {
        throw SchemaError("sim", "h and t_final must be positive");
    }
    const double ratio = t_final / h;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-6 * std::max(1.0, ratio)) {
        throw SchemaError("sim.h", "t_final must be an integer multiple of h");
    }
    return static_cast<std::size_t>(rounded);
}

void validate_scenario(const Scenario& sc) {
    try {
        sc.model.check_dimensions();
    } catch (const DimensionError& e) {
        throw ScenarioDimensionError("model", e.what());
    }
    const PlantModel& m = sc.model;
    if (rank(m.B()) < m.m()) {
        throw UncontrollableError("model.B1", "B = [B1; 0] must have full column rank");
    }
    if (rank(controllability_matrix(m.A(), m.B())) < m.n()) {
        throw UncontrollableError("model", "pair (A, B) is not controllable");
    }
    if (!(sc.delay.r_bar >= 0.0 && sc.delay.r_bar < 1.0)) {
        throw InvalidAssumptionError("delay.r_bar", "rate bound must satisfy 0 <= r_bar < 1");
    }
    if (!(sc.delay.tau_max >= 0.0)) {
        throw InvalidAssumptionError("delay.tau_max", "must be non-negative");
    }
    if (!(sc.gains.k1 > 0.0 && sc.gains.k2 > 0.0 && sc.gains.k3 > 0.0 && sc.gains.k4 > 0.0)) {
        throw SchemaError("observer", "gains must be strictly positive");
    }
    if (sc.sim.x0.size() != m.n()) {
        throw ScenarioDimensionError("sim.x0", "must have " + std::to_string(m.n()) + " entries");
    }
    if (!all_finite(sc.sim.x0)) {
        throw SchemaError("sim.x0", "must be finite");
    }
    (void)sc.sim.steps();

    const Matrix& s2 = sc.controller.S2;
    if (s2.rows() != m.n1() || s2.cols() != m.p()) {
        throw ScenarioDimensionError("controller.S2", "must be " + std::to_string(m.n1()) + "x" + std::to_string(m.p()));
    }
    // S B = B1 for S = [I S2].
    if (m.m() != m.n1() || rank(m.B1) < m.n1()) {
        throw SingularSurfaceError("controller.S2", "SB = B1 is not invertible");
    }
    try {
        (void)solve_lyapunov(reduced_dynamics(m, s2));
    } catch (const InfeasibleError&) {
        throw NotHurwitzError("controller.S2", "A22 - A21 S2 is not Hurwitz");
    }
}

Scenario load_scenario(std::string_view document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw SchemaError("$", std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw SchemaError("$", "scenario must be a JSON object");
    }

    Scenario sc;
    sc.label = doc.value("label", std::string("scenario"));
    sc.model = parse_model(require(doc, "model", "$"));
    sc.delay = parse_delay(require(doc, "delay", "$"));
    sc.fault = doc.contains("fault") ? parse_fault(doc.at("fault"), sc.model.m()) : FaultSignal::zero(sc.model.m());
    sc.uncertainty = doc.contains("uncertainty") ? parse_uncertainty(doc.at("uncertainty"), sc.model)
                                                 : UncertaintyModel::zero(sc.model.h());
    sc.gains = parse_gains(require(doc, "observer", "$"), sc.signs);
    sc.controller = parse_controller(require(doc, "controller", "$"), sc.model, sc.delay, sc.uncertainty, sc.band);
    sc.sim = parse_sim(require(doc, "sim", "$"), sc.model.n());
    validate_scenario(sc);
    return sc;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open scenario file " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_scenario(ss.str());
}

}  // namespace tdsmc
