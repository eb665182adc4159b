#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rss/keyspace.hpp"
#include "rss/spline.hpp"

namespace rss {

struct Config {
    /// Chunk width in bytes. 8 and 16 are the intended settings; smaller
    /// widths are accepted for small illustrative trees.
    unsigned k = 16;
    std::uint32_t error = 127;
    unsigned radix_min_bits = 6;
    unsigned radix_max_bits = 20;
    /// Refit each node's spline over the runs it keeps, repeating until no
    /// further run is redirected. Off by default.
    bool refit_after_redirect = false;

    static constexpr std::uint32_t kMaxError = 1u << 24;

    /// Throws ConfigError on out-of-range fields.
    void validate() const;
};

struct Node {
    /// Half-open rank range [lo, hi) into the dataset.
    std::uint32_t lo = 0;
    std::uint32_t hi = 0;
    std::uint32_t depth = 0;
    /// Sorted chunk values redirected to children[i].
    std::vector<ChunkKey> redirect_keys;
    std::vector<std::uint32_t> children;
    SplineModel spline;

    static constexpr std::size_t kRedirectEntryBytes = sizeof(ChunkKey) + sizeof(std::uint32_t);

    /// Index of the child for `chunk`, if redirected.
    [[nodiscard]] std::optional<std::uint32_t> find_child(ChunkKey chunk) const noexcept;
};

struct Prediction {
    const Node* node;
    std::size_t rank;
};

struct LevelStats {
    std::size_t nodes = 0;
    std::size_t redirector_entries = 0;
    std::size_t spline_knots = 0;
    /// Dataset keys whose query ends at this level.
    std::size_t resolved_keys = 0;

    bool operator==(const LevelStats&) const = default;
};

struct Stats {
    std::size_t nodes = 0;
    /// Number of levels; a lone root has depth 1.
    std::size_t max_depth = 0;
    /// Levels visited by a member lookup, averaged over all dataset keys.
    double mean_key_depth = 0.0;
    std::size_t redirector_entries = 0;
    std::size_t spline_knots = 0;
    std::vector<LevelStats> levels;
    std::vector<ChunkKey> root_redirector;

    bool operator==(const Stats&) const = default;
};

/// Byte accounting of the index structure. Dataset strings are excluded.
struct MemoryReport {
    std::size_t node_headers = 0;
    std::size_t redirector = 0;
    std::size_t spline_knots = 0;
    std::size_t radix_tables = 0;

    [[nodiscard]] std::size_t total() const noexcept { return node_headers + redirector + spline_knots + radix_tables; }
    bool operator==(const MemoryReport&) const = default;
};

struct ErrorSweep {
    std::size_t violations = 0;
    std::size_t max_abs_error = 0;
};

/// RadixStringSpline: a tree of error-bounded splines, each modelling one
/// K-byte chunk of the keys in its rank range. Chunk values whose run cannot
/// be predicted within the error bound are redirected to a child node that
/// models the next chunk of just that run.
///
/// The index holds a reference to the dataset, which must outlive it.
/// A built index is immutable and safe for concurrent queries.
class Index {
public:
    /// Throws EmptyInputError for an empty dataset and ConfigError for a bad config.
    static Index build(const Dataset& data, const Config& config = {});

    /// Walks the redirectors for q and returns the final node with its
    /// rounded, node-clamped spline prediction.
    [[nodiscard]] Prediction predict_rank(std::string_view q) const noexcept;

    [[nodiscard]] std::optional<std::size_t> lookup(std::string_view q) const noexcept;

    /// Smallest rank whose key is >= q, or size() if none.
    [[nodiscard]] std::size_t lower_bound(std::string_view q) const noexcept;

    [[nodiscard]] Stats stats() const;
    [[nodiscard]] MemoryReport memory() const noexcept;

    /// Re-predicts every dataset key and counts |predicted - rank| > E.
    [[nodiscard]] ErrorSweep sweep_error_bound() const noexcept;

    /// Inclusive search window [max(node.lo, p-E), min(node.hi-1, p+E)].
    [[nodiscard]] std::pair<std::size_t, std::size_t> search_window(const Prediction& p) const noexcept;

    [[nodiscard]] const Config& config() const noexcept { return config_; }
    [[nodiscard]] const Dataset& data() const noexcept { return *data_; }
    [[nodiscard]] std::size_t size() const noexcept { return data_->size(); }
    [[nodiscard]] std::span<const Node> nodes() const noexcept { return nodes_; }
    [[nodiscard]] const Node& root() const noexcept { return nodes_.front(); }

private:
    Index(const Dataset& data, const Config& config) : data_(&data), config_(config) {}

    void build_node(std::uint32_t id);
    [[nodiscard]] std::size_t predict_in(const Node& node, ChunkKey chunk) const noexcept;

    const Dataset* data_;
    Config config_;
    std::vector<Node> nodes_;
};

/// round-half-up of a spline prediction, clamped into [lo, hi).
[[nodiscard]] std::size_t round_clamp(double prediction, std::size_t lo, std::size_t hi) noexcept;

} // namespace rss
