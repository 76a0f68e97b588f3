#pragma once

#include <cmath>
#include <random>
#include <string>

#include "tdsmc/matnum.hpp"
#include "tdsmc/plant.hpp"
#include "tdsmc/scenario.hpp"

namespace fixtures {

inline std::string scenario_path(const std::string& name) { return std::string(TDSMC_SCENARIO_DIR) + "/" + name; }

// Worked example: x1 measured and actuated, x2 seen through the delayed output.
inline tdsmc::PlantModel example_model(bool uncertain = false) {
    tdsmc::PlantModel m;
    m.A11 = tdsmc::Matrix{{-1.0}};
    m.A12 = tdsmc::Matrix{{1.0}};
    m.A21 = tdsmc::Matrix{{-3.0}};
    m.A22 = tdsmc::Matrix{{1.0}};
    m.B1 = tdsmc::Matrix{{1.0}};
    const double k = uncertain ? 0.4 : 0.0;
    m.D1 = tdsmc::Matrix{{k, k}};
    m.D2 = tdsmc::Matrix{{k, k}};
    return m;
}

inline tdsmc::DelayProfile example_delay() { return tdsmc::DelayProfile::sinusoidal(0.4, 0.1, 1.0, 0.1, 0.5); }

// Independent reference: plain Taylor series in long double, no scaling.
inline tdsmc::Matrix taylor_exp(const tdsmc::Matrix& a, double t, int terms = 80) {
    const std::size_t n = a.rows();
    std::vector<long double> term(n * n, 0.0L), sum(n * n, 0.0L), next(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        term[i * n + i] = 1.0L;
        sum[i * n + i] = 1.0L;
    }
    for (int k = 1; k < terms; ++k) {
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                long double acc = 0.0L;
                for (std::size_t j = 0; j < n; ++j) {
                    acc += term[r * n + j] * static_cast<long double>(a(j, c));
                }
                next[r * n + c] = acc * static_cast<long double>(t) / k;
            }
        }
        term = next;
        for (std::size_t i = 0; i < n * n; ++i) {
            sum[i] += term[i];
        }
    }
    tdsmc::Matrix out(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            out(r, c) = static_cast<double>(sum[r * n + c]);
        }
    }
    return out;
}

// Random matrix shifted so every Gershgorin disc sits in the open left half-plane.
inline tdsmc::Matrix random_stable(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    tdsmc::Matrix a(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        double row = 0.0;
        for (std::size_t c = 0; c < n; ++c) {
            a(r, c) = u(rng);
            if (r != c) {
                row += std::abs(a(r, c));
            }
        }
        a(r, r) = -row - 0.1 - std::abs(u(rng));
    }
    return a;
}

inline double max_abs_diff(const tdsmc::Matrix& a, const tdsmc::Matrix& b) { return tdsmc::max_abs(a - b); }

}  // namespace fixtures
