#include "tdsmc/report.hpp"

#include <cmath>
#include <fstream>

#include "tdsmc/errors.hpp"

namespace tdsmc {

using nlohmann::json;

namespace {

// JSON has no infinity; unbounded values are written as null.
json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <typename T>
json optional_value(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) {
            row.push_back(m(r, c));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

json to_json(const CertificationReport& r) {
    json margins = json::object();
    for (const auto& [k, v] : r.margins) {
        margins[k] = number_or_null(v);
    }
    return {
        {"P2", matrix_json(r.P2)},
        {"lambda_max_P2", r.lambda_max_P2},
        {"mu", r.mu},
        {"beta1", r.beta1},
        {"phi", r.phi},
        {"delta_bar", r.delta_bar},
        {"delta_bar_max", number_or_null(r.delta_bar_max)},
        {"delta_bar_unbounded", std::isinf(r.delta_bar_max)},
        {"rho_required_fn_norm_coeff", r.rho_coefficient},
        {"leak_max", r.leak_max},
        {"hurwitz", r.hurwitz},
        {"feasible", r.feasible},
        {"margins", margins},
        {"note", r.note},
    };
}

json to_json(const TraceAudit& a) {
    return {
        {"samples", a.samples},
        {"sliding_reach_time", optional_value(a.sliding_reach_time)},
        {"sliding_band", a.sliding_band},
        {"max_s_after_reach", a.max_s_after_reach},
        {"observer_reach_time", optional_value(a.observer_reach_time)},
        {"predictor_valid_from", number_or_null(a.predictor_valid_from)},
        {"max_residual", a.max_residual},
        {"max_residual_ratio", a.max_residual_ratio},
        {"max_fault_error", a.max_fault_error},
        {"max_lumped_error", a.max_lumped_error},
        {"lyapunov_checked", a.lyapunov_checked},
        {"lyapunov_violations", a.lyapunov_violations},
        {"lyapunov_from", number_or_null(a.lyapunov_from)},
        {"zeta1_zeta2_max", json::array({a.zeta1_max, a.zeta2_max})},
    };
}

void write_json(const json& doc, const std::string& path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) {
        throw IoError("cannot open report file for writing: " + path);
    }
    f << doc.dump(2) << '\n';
    if (!f) {
        throw IoError("failed writing report file: " + path);
    }
}

}  // namespace tdsmc
