#include "tdsmc/trace.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>
#include <system_error>

#include "tdsmc/errors.hpp"

namespace tdsmc {

namespace {

enum class Width { one, n1, p, m };

struct Column {
    const char* name;
    Width width;
    double TraceRow::*scalar;
    Vector TraceRow::*block;
};

constexpr Column kLayout[] = {
    {"t", Width::one, &TraceRow::t, nullptr},
    {"x1", Width::n1, nullptr, &TraceRow::x1},
    {"x2", Width::p, nullptr, &TraceRow::x2},
    {"xhat1", Width::n1, nullptr, &TraceRow::x_hat_1},
    {"xhat2", Width::p, nullptr, &TraceRow::x_hat_2},
    {"xtilde1", Width::n1, nullptr, &TraceRow::x_tilde_1},
    {"xtilde2", Width::p, nullptr, &TraceRow::x_tilde_2},
    {"xihat", Width::n1, nullptr, &TraceRow::xi_hat},
    {"d", Width::m, nullptr, &TraceRow::d},
    {"dhat", Width::m, nullptr, &TraceRow::d_hat},
    {"delta_norm", Width::one, &TraceRow::delta_norm, nullptr},
    {"y", Width::p, nullptr, &TraceRow::y},
    {"tau", Width::one, &TraceRow::tau, nullptr},
    {"s", Width::n1, nullptr, &TraceRow::s},
    {"u", Width::m, nullptr, &TraceRow::u},
    {"u_d", Width::m, nullptr, &TraceRow::u_d},
    {"u_nom", Width::m, nullptr, &TraceRow::u_nom},
    {"u_sm", Width::m, nullptr, &TraceRow::u_sm},
    {"rho", Width::one, &TraceRow::rho, nullptr},
};

std::size_t width_of(Width w, const TraceDims& dims) {
    switch (w) {
        case Width::one:
            return 1;
        case Width::n1:
            return dims.n1;
        case Width::p:
            return dims.p;
        case Width::m:
            return dims.m;
    }
    return 1;
}

void append_number(std::string& out, double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            parts.push_back(line.substr(start));
            return parts;
        }
        parts.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::size_t count_block(const std::vector<std::string_view>& header, std::string_view name) {
    for (auto col : header) {
        if (col == name) {
            return 1;
        }
    }
    std::size_t k = 0;
    while (true) {
        const std::string want = std::string(name) + "_" + std::to_string(k + 1);
        bool found = false;
        for (auto col : header) {
            if (col == want) {
                found = true;
                break;
            }
        }
        if (!found) {
            break;
        }
        ++k;
    }
    if (k == 0) {
        throw TraceFormatError("trace CSV: missing column '" + std::string(name) + "'");
    }
    return k;
}

}  // namespace

const char* to_string(RunStatus status) noexcept {
    switch (status) {
        case RunStatus::completed:
            return "completed";
        case RunStatus::diverged:
            return "diverged";
        case RunStatus::assumption_violated:
            return "assumption_violated";
    }
    return "unknown";
}

std::vector<std::string> trace_columns(const TraceDims& dims) {
    std::vector<std::string> cols;
    for (const auto& c : kLayout) {
        const std::size_t w = width_of(c.width, dims);
        if (w == 1) {
            cols.emplace_back(c.name);
        } else {
            for (std::size_t i = 0; i < w; ++i) {
                cols.push_back(std::string(c.name) + "_" + std::to_string(i + 1));
            }
        }
    }
    return cols;
}

std::string format_trace(const Trace& trace) {
    std::string out;
    const auto cols = trace_columns(trace.dims);
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) out += ',';
        out += cols[i];
    }
    out += '\n';
    out.reserve(out.size() + trace.rows.size() * cols.size() * 24);

    for (const auto& row : trace.rows) {
        bool first = true;
        for (const auto& c : kLayout) {
            const std::size_t w = width_of(c.width, trace.dims);
            for (std::size_t i = 0; i < w; ++i) {
                if (!first) out += ',';
                first = false;
                if (c.scalar) {
                    append_number(out, row.*(c.scalar));
                } else {
                    const Vector& v = row.*(c.block);
                    if (v.size() != w) {
                        throw TraceFormatError(std::string("trace row: block '") + c.name + "' has wrong width");
                    }
                    append_number(out, v[i]);
                }
            }
        }
        out += '\n';
    }
    return out;
}

void write_trace(const Trace& trace, const std::string& path) {
    const std::string text = format_trace(trace);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw IoError("cannot open trace file for writing: " + path);
    }
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) {
        throw IoError("failed writing trace file: " + path);
    }
}

Trace parse_trace(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line)) {
        throw TraceFormatError("trace CSV: empty input");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split(line);

    Trace trace;
    trace.dims.n1 = count_block(header, "x1");
    trace.dims.p = count_block(header, "x2");
    trace.dims.m = count_block(header, "u");
    const auto expected = trace_columns(trace.dims);
    if (expected.size() != header.size()) {
        throw TraceFormatError("trace CSV: expected " + std::to_string(expected.size()) + " columns, found " +
                               std::to_string(header.size()));
    }
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (header[i] != expected[i]) {
            throw TraceFormatError("trace CSV: column " + std::to_string(i) + " is '" + std::string(header[i]) +
                                   "', expected '" + expected[i] + "'");
        }
    }

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split(line);
        if (fields.size() != expected.size()) {
            throw TraceFormatError("trace CSV line " + std::to_string(line_no) + ": expected " +
                                   std::to_string(expected.size()) + " fields, found " + std::to_string(fields.size()));
        }
        TraceRow row;
        std::size_t idx = 0;
        for (const auto& c : kLayout) {
            const std::size_t w = width_of(c.width, trace.dims);
            Vector values(w);
            for (std::size_t i = 0; i < w; ++i, ++idx) {
                const auto f = fields[idx];
                double v = 0.0;
                const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
                if (res.ec != std::errc{} || res.ptr != f.data() + f.size()) {
                    throw TraceFormatError("trace CSV line " + std::to_string(line_no) + ": bad number in column '" +
                                           expected[idx] + "'");
                }
                values[i] = v;
            }
            if (c.scalar) {
                row.*(c.scalar) = values[0];
            } else {
                row.*(c.block) = std::move(values);
            }
        }
        trace.rows.push_back(std::move(row));
    }

    if (trace.rows.size() >= 2) {
        trace.h = trace.rows[1].t - trace.rows[0].t;
        if (!(trace.h > 0.0)) {
            throw TraceFormatError("trace CSV: time column is not increasing");
        }
        const double t0 = trace.rows[0].t;
        for (std::size_t k = 0; k < trace.rows.size(); ++k) {
            const double expect = t0 + static_cast<double>(k) * trace.h;
            if (std::abs(trace.rows[k].t - expect) > 1e-6 * trace.h) {
                throw TraceFormatError("trace CSV: non-uniform sampling at row " + std::to_string(k));
            }
        }
    }
    return trace;
}

Trace read_trace(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open trace file: " + path);
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_trace(ss.str());
}

}  // namespace tdsmc
