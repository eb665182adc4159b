#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "rss/keyspace.hpp"

namespace rss {

struct SplinePoint {
    ChunkKey key;
    double rank;
};

struct SplineFitOptions {
    std::uint32_t error_bound = 0;
    /// Radix table width; 0 sizes it from the knot count as
    /// radix_bits_for(knots, radix_min_bits, radix_max_bits).
    unsigned radix_bits = 0;
    unsigned radix_min_bits = 6;
    unsigned radix_max_bits = 20;
    /// Width of the keys being fitted (8*K); radix buckets use its top bits.
    unsigned key_bits = 128;
};

/// Collapses runs of equal keys to one point at the run's midpoint rank.
/// Input ranks must be non-decreasing within each run.
[[nodiscard]] std::vector<SplinePoint> collapse_runs(std::span<const SplinePoint> points);

/// Monotone piecewise-linear approximation of key -> rank whose error at
/// every collapsed input point is at most error_bound, fronted by a radix
/// table over the top radix_bits of the key.
class SplineModel {
public:
    /// Entry widths of the stored layout, used for memory accounting.
    static constexpr std::size_t kKnotBytes = sizeof(ChunkKey) + sizeof(double);
    static constexpr std::size_t kRadixEntryBytes = sizeof(std::uint32_t);

    SplineModel() = default;

    /// Greedy corridor fit. points must be non-empty with non-decreasing keys;
    /// duplicates are collapsed first. Throws EmptyInputError / ConfigError.
    static SplineModel fit(std::span<const SplinePoint> points, const SplineFitOptions& options);

    /// Linear interpolation between bracketing knots, clamped to the first
    /// and last knot outside the fitted key range.
    [[nodiscard]] double predict(ChunkKey key) const noexcept;

    /// Knot index range [first, last] from the radix table: the first knot
    /// whose key exceeds `key` lies in [first, last].
    [[nodiscard]] std::pair<std::size_t, std::size_t> radix_lookup(ChunkKey key) const noexcept;

    [[nodiscard]] std::size_t knot_count() const noexcept { return keys_.size(); }
    [[nodiscard]] std::span<const ChunkKey> knot_keys() const noexcept { return keys_; }
    [[nodiscard]] std::span<const double> knot_ranks() const noexcept { return ranks_; }
    [[nodiscard]] std::span<const std::uint32_t> radix_table() const noexcept { return radix_table_; }
    [[nodiscard]] unsigned radix_bits() const noexcept { return radix_bits_; }
    [[nodiscard]] std::uint32_t error_bound() const noexcept { return error_bound_; }

    /// Heap bytes held by knots and the radix table.
    [[nodiscard]] std::size_t knot_bytes() const noexcept { return keys_.size() * kKnotBytes; }
    [[nodiscard]] std::size_t radix_bytes() const noexcept { return radix_table_.size() * kRadixEntryBytes; }

private:
    [[nodiscard]] std::size_t bucket_of(ChunkKey key) const noexcept {
        return static_cast<std::size_t>(key >> radix_shift_);
    }

    std::vector<ChunkKey> keys_;
    std::vector<double> ranks_;
    std::vector<std::uint32_t> radix_table_;
    unsigned radix_bits_ = 0;
    unsigned radix_shift_ = 0;
    std::uint32_t error_bound_ = 0;
};

/// ceil(log2(n)) clamped to [min_bits, max_bits].
[[nodiscard]] unsigned radix_bits_for(std::size_t n, unsigned min_bits, unsigned max_bits) noexcept;

} // namespace rss
