#include "tdsmc/history.hpp"

#include <cmath>
#include <string>

#include "tdsmc/errors.hpp"

namespace tdsmc {

namespace {
// Queries this close to a grid node (in units of h) return the node itself.
constexpr double kNodeSnap = 1e-9;
}  // namespace

HistoryBuffer::HistoryBuffer(double h, double window) : h_(h), window_(window) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw DomainError("HistoryBuffer: step must be positive");
    }
    if (!(window >= 0.0) || !std::isfinite(window)) {
        throw DomainError("HistoryBuffer: window must be non-negative");
    }
}

HistoryBuffer HistoryBuffer::with_constant_prehistory(double h, double window, std::span<const double> x0) {
    HistoryBuffer buf(h, window);
    const auto back = static_cast<std::int64_t>(std::ceil(window / h - kNodeSnap)) + 1;
    buf.push_at(-back, x0);
    for (std::int64_t k = -back + 1; k <= 0; ++k) {
        buf.push(x0);
    }
    return buf;
}

void HistoryBuffer::push_at(std::int64_t index, std::span<const double> x) {
    if (!samples_.empty() && index != last_index() + 1) {
        throw DomainError("HistoryBuffer: samples must be pushed at consecutive grid indices");
    }
    if (samples_.empty()) {
        first_index_ = index;
        dim_ = x.size();
    } else if (x.size() != dim_) {
        throw DimensionError("HistoryBuffer: sample has " + std::to_string(x.size()) + " components, expected " +
                             std::to_string(dim_));
    }
    samples_.emplace_back(x.begin(), x.end());

    // Keep one spare sample beyond the window so a lookback of exactly
    // `window` never lands on the trimmed edge.
    const auto keep = static_cast<std::size_t>(std::ceil(window_ / h_ - kNodeSnap)) + 2;
    while (samples_.size() > keep) {
        samples_.pop_front();
        ++first_index_;
    }
}

void HistoryBuffer::push(std::span<const double> x) {
    push_at(samples_.empty() ? 0 : last_index() + 1, x);
}

std::span<const double> HistoryBuffer::at(std::int64_t index) const {
    if (samples_.empty() || index < first_index_ || index > last_index()) {
        throw HistoryUnderflowError(static_cast<double>(index) * h_, empty() ? 0.0 : t_first(),
                                    empty() ? 0.0 : t_last());
    }
    return samples_[static_cast<std::size_t>(index - first_index_)];
}

Vector HistoryBuffer::sample(double t_query) const {
    Vector out(dim_);
    sample_into(t_query, 0, out);
    return out;
}

void HistoryBuffer::sample_into(double t_query, std::size_t offset, std::span<double> out) const {
    if (offset + out.size() > dim_) {
        throw DimensionError("HistoryBuffer::sample_into: component range out of bounds");
    }
    if (samples_.empty() || !std::isfinite(t_query)) {
        throw HistoryUnderflowError(t_query, empty() ? 0.0 : t_first(), empty() ? 0.0 : t_last());
    }
    const double u = t_query / h_;
    const double nearest = std::round(u);
    if (std::abs(u - nearest) <= kNodeSnap) {
        const auto k = static_cast<std::int64_t>(nearest);
        if (k < first_index_ || k > last_index()) {
            throw HistoryUnderflowError(t_query, t_first(), t_last());
        }
        const auto& s = samples_[static_cast<std::size_t>(k - first_index_)];
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] = s[offset + i];
        }
        return;
    }
    const double fl = std::floor(u);
    const auto k = static_cast<std::int64_t>(fl);
    if (k < first_index_ || k + 1 > last_index()) {
        throw HistoryUnderflowError(t_query, t_first(), t_last());
    }
    const double frac = u - fl;
    const auto& lo = samples_[static_cast<std::size_t>(k - first_index_)];
    const auto& hi = samples_[static_cast<std::size_t>(k + 1 - first_index_)];
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = lo[offset + i] + frac * (hi[offset + i] - lo[offset + i]);
    }
}

}  // namespace tdsmc
