#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tdsmc/matnum.hpp"

namespace tdsmc {

/// Signals recorded at one grid instant t_k (all evaluated at step start).
struct TraceRow {
    double t = 0.0;
    Vector x1;
    Vector x2;
    Vector x_hat_1;
    Vector x_hat_2;
    Vector x_tilde_1;  ///< x1 - x1_hat
    Vector x_tilde_2;  ///< x2 - x2_hat
    Vector xi_hat;
    Vector d;
    Vector d_hat;
    double delta_norm = 0.0;
    Vector y;
    double tau = 0.0;
    Vector s;
    Vector u;
    Vector u_d;
    Vector u_nom;
    Vector u_sm;
    double rho = 0.0;
};

enum class RunStatus { completed, diverged, assumption_violated };

const char* to_string(RunStatus status) noexcept;

struct TraceDims {
    std::size_t n1 = 1;
    std::size_t p = 1;
    std::size_t m = 1;
    friend bool operator==(const TraceDims&, const TraceDims&) = default;
};

struct Trace {
    TraceDims dims;
    double h = 0.0;
    std::vector<TraceRow> rows;
    RunStatus status = RunStatus::completed;
    std::string diagnostic;

    bool completed() const noexcept { return status == RunStatus::completed; }
};

/**
 * Column names of the CSV layout. A block of dimension 1 uses the bare name
 * (`x1`); wider blocks are numbered from 1 (`x1_1`, `x1_2`, ...).
 *
 *   t, x1, x2, xhat1, xhat2, xtilde1, xtilde2, xihat, d, dhat, delta_norm,
 *   y, tau, s, u, u_d, u_nom, u_sm, rho
 */
std::vector<std::string> trace_columns(const TraceDims& dims);

/// Full-precision CSV (shortest round-trip formatting), byte-deterministic.
std::string format_trace(const Trace& trace);
void write_trace(const Trace& trace, const std::string& path);

/// Parses CSV produced by format_trace; throws TraceFormatError on a bad header,
/// ragged rows, or non-uniform sampling.
Trace parse_trace(const std::string& csv);
Trace read_trace(const std::string& path);

}  // namespace tdsmc
