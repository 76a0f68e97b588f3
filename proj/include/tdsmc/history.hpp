#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <span>

#include "tdsmc/matnum.hpp"

namespace tdsmc {

/**
 * @brief Uniformly spaced state history on the grid t_k = k * h.
 *
 * Keeps at least `window` seconds behind the newest sample and evaluates the
 * stored trajectory by linear interpolation. Indices may be negative, which is
 * how the pre-history before t = 0 is represented.
 */
class HistoryBuffer {
public:
    HistoryBuffer(double h, double window);

    /// Buffer holding x(theta) = x0 for theta in [-window, 0] (grid aligned).
    static HistoryBuffer with_constant_prehistory(double h, double window, std::span<const double> x0);

    double step() const noexcept { return h_; }
    double window() const noexcept { return window_; }
    std::size_t size() const noexcept { return samples_.size(); }
    std::size_t dim() const noexcept { return dim_; }
    bool empty() const noexcept { return samples_.empty(); }

    std::int64_t first_index() const noexcept { return first_index_; }
    std::int64_t last_index() const noexcept { return first_index_ + static_cast<std::int64_t>(samples_.size()) - 1; }
    double t_first() const noexcept { return static_cast<double>(first_index()) * h_; }
    double t_last() const noexcept { return static_cast<double>(last_index()) * h_; }

    /// Appends the sample at index `last_index() + 1` (or `index` for an empty buffer).
    void push(std::span<const double> x);
    void push_at(std::int64_t index, std::span<const double> x);

    /// Stored sample by grid index.
    std::span<const double> at(std::int64_t index) const;

    /// Linear interpolation of the full state at t_query.
    Vector sample(double t_query) const;
    /// Interpolates components [offset, offset + out.size()) into out.
    void sample_into(double t_query, std::size_t offset, std::span<double> out) const;

private:
    double h_;
    double window_;
    std::size_t dim_ = 0;
    std::int64_t first_index_ = 0;
    std::deque<Vector> samples_;
};

}  // namespace tdsmc
