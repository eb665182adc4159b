#include "rss/spline.hpp"

#include <algorithm>
#include <bit>
#include <cassert>

namespace rss {

namespace {

inline double key_delta(ChunkKey hi, ChunkKey lo) noexcept { return static_cast<double>(hi - lo); }

inline double slope(const SplinePoint& from, ChunkKey x, double y) noexcept {
    return (y - from.rank) / key_delta(x, from.key);
}

} // namespace

std::vector<SplinePoint> collapse_runs(std::span<const SplinePoint> points) {
    std::vector<SplinePoint> out;
    std::size_t i = 0;
    while (i < points.size()) {
        std::size_t j = i + 1;
        while (j < points.size() && points[j].key == points[i].key) ++j;
        out.push_back({points[i].key, (points[i].rank + points[j - 1].rank) / 2.0});
        i = j;
    }
    return out;
}

SplineModel SplineModel::fit(std::span<const SplinePoint> input, const SplineFitOptions& options) {
    if (input.empty()) throw EmptyInputError("fit_spline: no points");
    if (options.key_bits == 0 || options.key_bits > 128) throw ConfigError("fit_spline: key_bits out of range");
    if (options.radix_bits > 30 || options.radix_min_bits == 0 || options.radix_min_bits > options.radix_max_bits ||
        options.radix_max_bits > 30)
        throw ConfigError("fit_spline: radix bits out of range");
    for (std::size_t i = 1; i < input.size(); ++i) {
        if (input[i].key < input[i - 1].key) throw ConfigError("fit_spline: keys must be non-decreasing");
    }

    const std::vector<SplinePoint> points = collapse_runs(input);
    const double e = options.error_bound;

    SplineModel m;
    m.error_bound_ = options.error_bound;
    auto emit = [&m](const SplinePoint& p) {
        m.keys_.push_back(p.key);
        m.ranks_.push_back(p.rank);
    };

    emit(points.front());
    if (points.size() > 1) {
        // Corridor of admissible slopes from `base`: every point since base
        // stays within +-e of a line through base with slope in [lower, upper].
        SplinePoint base = points[0];
        SplinePoint upper{points[1].key, points[1].rank + e};
        SplinePoint lower{points[1].key, points[1].rank - e};
        for (std::size_t i = 2; i < points.size(); ++i) {
            const SplinePoint& prev = points[i - 1];
            const SplinePoint& p = points[i];
            const double s = slope(base, p.key, p.rank);
            if (s > slope(base, upper.key, upper.rank) || s < slope(base, lower.key, lower.rank)) {
                emit(prev);
                base = prev;
                upper = {p.key, p.rank + e};
                lower = {p.key, p.rank - e};
                continue;
            }
            if (slope(base, p.key, p.rank + e) < slope(base, upper.key, upper.rank)) upper = {p.key, p.rank + e};
            if (slope(base, p.key, p.rank - e) > slope(base, lower.key, lower.rank)) lower = {p.key, p.rank - e};
        }
        emit(points.back());
    }
    m.keys_.shrink_to_fit();
    m.ranks_.shrink_to_fit();

    const unsigned requested = options.radix_bits != 0
                                   ? options.radix_bits
                                   : radix_bits_for(m.keys_.size(), options.radix_min_bits, options.radix_max_bits);
    const unsigned bits = std::min(requested, options.key_bits);
    m.radix_bits_ = bits;
    m.radix_shift_ = options.key_bits - bits;
    const std::size_t buckets = std::size_t{1} << bits;
    m.radix_table_.assign(buckets + 1, 0);
    std::size_t knot = 0;
    for (std::size_t b = 0; b <= buckets; ++b) {
        while (knot < m.keys_.size() && m.bucket_of(m.keys_[knot]) < b) ++knot;
        m.radix_table_[b] = static_cast<std::uint32_t>(knot);
    }
    return m;
}

std::pair<std::size_t, std::size_t> SplineModel::radix_lookup(ChunkKey key) const noexcept {
    const std::size_t b = bucket_of(key);
    if (b >= radix_table_.size() - 1) return {keys_.size(), keys_.size()};
    return {radix_table_[b], radix_table_[b + 1]};
}

double SplineModel::predict(ChunkKey key) const noexcept {
    assert(!keys_.empty());
    if (key <= keys_.front()) return ranks_.front();
    if (key >= keys_.back()) return ranks_.back();

    const auto [first, last] = radix_lookup(key);
    const auto it = std::upper_bound(keys_.begin() + static_cast<std::ptrdiff_t>(first),
                                     keys_.begin() + static_cast<std::ptrdiff_t>(last), key);
    const auto i = static_cast<std::size_t>(it - keys_.begin());
    assert(i >= 1 && i < keys_.size());

    const double t = key_delta(key, keys_[i - 1]) / key_delta(keys_[i], keys_[i - 1]);
    return ranks_[i - 1] + t * (ranks_[i] - ranks_[i - 1]);
}

unsigned radix_bits_for(std::size_t n, unsigned min_bits, unsigned max_bits) noexcept {
    const unsigned needed = n <= 1 ? 0u : static_cast<unsigned>(std::bit_width(n - 1));
    return std::clamp(needed, min_bits, max_bits);
}

} // namespace rss
