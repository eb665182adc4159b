#include "rss/rss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rss {

namespace {

inline std::size_t abs_diff(std::size_t a, std::size_t b) noexcept { return a > b ? a - b : b - a; }

struct Run {
    ChunkKey key;
    std::uint32_t first;
    std::uint32_t last;
};

} // namespace

void Config::validate() const {
    if (k == 0 || k > kMaxChunkBytes) throw ConfigError("chunk width k must be in [1, 16], got " + std::to_string(k));
    if (error > kMaxError) throw ConfigError("error bound too large: " + std::to_string(error));
    if (radix_min_bits == 0 || radix_min_bits > radix_max_bits || radix_max_bits > 30)
        throw ConfigError("radix bits must satisfy 1 <= min <= max <= 30");
}

std::optional<std::uint32_t> Node::find_child(ChunkKey chunk) const noexcept {
    const auto it = std::lower_bound(redirect_keys.begin(), redirect_keys.end(), chunk);
    if (it == redirect_keys.end() || *it != chunk) return std::nullopt;
    return children[static_cast<std::size_t>(it - redirect_keys.begin())];
}

std::size_t round_clamp(double prediction, std::size_t lo, std::size_t hi) noexcept {
    const double r = std::floor(prediction + 0.5);
    if (!(r > static_cast<double>(lo))) return lo;
    if (r >= static_cast<double>(hi - 1)) return hi - 1;
    return static_cast<std::size_t>(r);
}

Index Index::build(const Dataset& data, const Config& config) {
    config.validate();
    if (data.empty()) throw EmptyInputError("cannot build an index over an empty dataset");
    if (data.size() >= std::numeric_limits<std::uint32_t>::max())
        throw ConfigError("dataset too large for 32-bit ranks");

    Index index(data, config);
    Node root;
    root.lo = 0;
    root.hi = static_cast<std::uint32_t>(data.size());
    index.nodes_.push_back(std::move(root));
    // Breadth-first: children are appended behind the node being built.
    for (std::uint32_t id = 0; id < index.nodes_.size(); ++id) index.build_node(id);
    index.nodes_.shrink_to_fit();
    return index;
}

void Index::build_node(std::uint32_t id) {
    const Dataset& data = *data_;
    const unsigned k = config_.k;
    const std::uint32_t lo = nodes_[id].lo;
    const std::uint32_t hi = nodes_[id].hi;
    const std::uint32_t depth = nodes_[id].depth;

    if (depth > data.max_key_length() / k + 1)
        throw std::logic_error("rss build: recursion exceeded the maximum key length");

    std::vector<SplinePoint> points;
    points.reserve(hi - lo);
    std::vector<Run> runs;
    bool all_exhausted = true;
    for (std::uint32_t r = lo; r < hi; ++r) {
        const std::string_view key = data[r];
        const ChunkKey chunk = extract_chunk(key, depth, k);
        all_exhausted = all_exhausted && chunk_exhausted(key, depth, k);
        points.push_back({chunk, static_cast<double>(r)});
        if (runs.empty() || runs.back().key != chunk) runs.push_back({chunk, r, r});
        else runs.back().last = r;
    }
    if (hi - lo >= 2 && all_exhausted)
        throw std::logic_error("rss build: node at depth " + std::to_string(depth) + " holds identical keys");

    const SplineFitOptions options{config_.error, 0, config_.radix_min_bits, config_.radix_max_bits, 8 * k};
    const std::size_t e = config_.error;
    auto fails = [&](const Run& run, const SplineModel& model) {
        const std::size_t p = round_clamp(model.predict(run.key), lo, hi);
        return abs_diff(p, run.first) > e || abs_diff(p, run.last) > e;
    };

    SplineModel spline = SplineModel::fit(points, options);
    std::vector<bool> redirected(runs.size());
    for (std::size_t i = 0; i < runs.size(); ++i) redirected[i] = fails(runs[i], spline);

    if (config_.refit_after_redirect) {
        for (;;) {
            std::vector<SplinePoint> kept;
            for (std::size_t i = 0; i < runs.size(); ++i) {
                if (redirected[i]) continue;
                kept.push_back({runs[i].key, static_cast<double>(runs[i].first)});
                kept.push_back({runs[i].key, static_cast<double>(runs[i].last)});
            }
            if (kept.empty()) break;
            SplineModel refit = SplineModel::fit(kept, options);
            bool changed = false;
            for (std::size_t i = 0; i < runs.size(); ++i) {
                if (!redirected[i] && fails(runs[i], refit)) redirected[i] = changed = true;
            }
            spline = std::move(refit);
            if (!changed) break;
        }
    }

    Node node;
    node.lo = lo;
    node.hi = hi;
    node.depth = depth;
    node.spline = std::move(spline);
    for (std::size_t i = 0; i < runs.size(); ++i) {
        if (!redirected[i]) continue;
        Node child;
        child.lo = runs[i].first;
        child.hi = runs[i].last + 1;
        child.depth = depth + 1;
        node.redirect_keys.push_back(runs[i].key);
        node.children.push_back(static_cast<std::uint32_t>(nodes_.size()));
        nodes_.push_back(std::move(child));
    }
    node.redirect_keys.shrink_to_fit();
    node.children.shrink_to_fit();
    nodes_[id] = std::move(node);
}

std::size_t Index::predict_in(const Node& node, ChunkKey chunk) const noexcept {
    return round_clamp(node.spline.predict(chunk), node.lo, node.hi);
}

Prediction Index::predict_rank(std::string_view q) const noexcept {
    const Node* node = &nodes_.front();
    for (;;) {
        const ChunkKey chunk = extract_chunk(q, node->depth, config_.k);
        const auto child = node->find_child(chunk);
        if (!child) return {node, predict_in(*node, chunk)};
        node = &nodes_[*child];
    }
}

std::pair<std::size_t, std::size_t> Index::search_window(const Prediction& p) const noexcept {
    const std::size_t e = config_.error;
    const std::size_t left = std::max<std::size_t>(p.node->lo, p.rank >= e ? p.rank - e : 0);
    const std::size_t right = std::min<std::size_t>(p.node->hi - 1, p.rank + e);
    return {left, right};
}

std::optional<std::size_t> Index::lookup(std::string_view q) const noexcept {
    const Dataset& data = *data_;
    const auto [left, right] = search_window(predict_rank(q));
    std::size_t a = left;
    std::size_t b = right + 1;
    while (a < b) {
        const std::size_t mid = a + (b - a) / 2;
        if (data[mid] < q) a = mid + 1;
        else b = mid;
    }
    if (a <= right && data[a] == q) return a;
    return std::nullopt;
}

std::size_t Index::lower_bound(std::string_view q) const noexcept {
    const Dataset& data = *data_;
    const Prediction pred = predict_rank(q);
    const std::size_t node_lo = pred.node->lo;
    const std::size_t node_hi = pred.node->hi;
    const auto [left, right] = search_window(pred);

    // Keys before node_lo are < q and keys from node_hi on are > q, since
    // they differ from q at a chunk q was routed on. The answer therefore
    // lies in [node_lo, node_hi]. Search the window first; widen only when
    // the result sits on a window edge that does not bracket q.
    auto search = [&](std::size_t a, std::size_t b) {
        while (a < b) {
            const std::size_t mid = a + (b - a) / 2;
            if (data[mid] < q) a = mid + 1;
            else b = mid;
        }
        return a;
    };
    std::size_t a = left;
    std::size_t b = right + 1;
    const std::size_t r = search(a, b);
    if (r == a && a > node_lo && !(data[a - 1] < q)) {
        for (std::size_t step = 1; a > node_lo && !(data[a - 1] < q); step *= 2) {
            b = a - 1;
            a = a - node_lo > step ? a - step : node_lo;
        }
        return search(a, b);
    }
    if (r == b && b < node_hi && data[b] < q) {
        for (std::size_t step = 1; b < node_hi && data[b] < q; step *= 2) {
            a = b + 1;
            b = node_hi - b > step ? b + step : node_hi;
        }
        return search(a, b);
    }
    return r;
}

ErrorSweep Index::sweep_error_bound() const noexcept {
    ErrorSweep sweep;
    const Dataset& data = *data_;
    for (std::size_t r = 0; r < data.size(); ++r) {
        const std::size_t err = abs_diff(predict_rank(data[r]).rank, r);
        sweep.max_abs_error = std::max(sweep.max_abs_error, err);
        if (err > config_.error) ++sweep.violations;
    }
    return sweep;
}

Stats Index::stats() const {
    Stats s;
    s.nodes = nodes_.size();
    double depth_sum = 0.0;
    for (const Node& node : nodes_) {
        if (node.depth >= s.levels.size()) s.levels.resize(node.depth + 1);
        LevelStats& level = s.levels[node.depth];
        std::size_t redirected_keys = 0;
        for (std::uint32_t c : node.children) redirected_keys += nodes_[c].hi - nodes_[c].lo;
        const std::size_t resolved = (node.hi - node.lo) - redirected_keys;
        ++level.nodes;
        level.redirector_entries += node.redirect_keys.size();
        level.spline_knots += node.spline.knot_count();
        level.resolved_keys += resolved;
        s.redirector_entries += node.redirect_keys.size();
        s.spline_knots += node.spline.knot_count();
        depth_sum += static_cast<double>(resolved) * (node.depth + 1);
    }
    s.max_depth = s.levels.size();
    s.mean_key_depth = depth_sum / static_cast<double>(data_->size());
    s.root_redirector = root().redirect_keys;
    return s;
}

MemoryReport Index::memory() const noexcept {
    MemoryReport m;
    m.node_headers = nodes_.size() * sizeof(Node);
    for (const Node& node : nodes_) {
        m.redirector += node.redirect_keys.size() * Node::kRedirectEntryBytes;
        m.spline_knots += node.spline.knot_bytes();
        m.radix_tables += node.spline.radix_bytes();
    }
    return m;
}

} // namespace rss
