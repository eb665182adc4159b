#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <thread>

#include "rss/oracle.hpp"
#include "rss/rss.hpp"
#include "test_util.hpp"

namespace rss {
namespace {

using Strings = std::vector<std::string>;

const Strings kToy{"abaa", "abab", "abac", "bcaa", "cdee", "cdef", "cdeg", "cdeh", "efgh"};
const Config kToyConfig{.k = 2, .error = 0};

std::size_t dist(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

// Re-derives every structural invariant of the tree from the dataset.
void check_invariants(const Index& index) {
    const Dataset& data = index.data();
    const Config& cfg = index.config();
    const auto nodes = index.nodes();
    ASSERT_EQ(index.root().lo, 0u);
    ASSERT_EQ(index.root().hi, data.size());
    for (const Node& node : nodes) {
        ASSERT_LT(node.lo, node.hi);
        ASSERT_TRUE(std::is_sorted(node.redirect_keys.begin(), node.redirect_keys.end()));
        ASSERT_EQ(std::adjacent_find(node.redirect_keys.begin(), node.redirect_keys.end()), node.redirect_keys.end());
        std::size_t r = node.lo;
        while (r < node.hi) {
            const ChunkKey c = extract_chunk(data[r], node.depth, cfg.k);
            std::size_t last = r;
            while (last + 1 < node.hi && extract_chunk(data[last + 1], node.depth, cfg.k) == c) ++last;
            double pred = node.spline.predict(c);
            std::size_t p = round_clamp(pred, node.lo, node.hi);
            const bool passes = dist(p, r) <= cfg.error && dist(p, last) <= cfg.error;
            const auto child = node.find_child(c);
            if (child) {
                const Node& ch = nodes[*child];
                EXPECT_EQ(ch.lo, r);
                EXPECT_EQ(ch.hi, last + 1);
                EXPECT_EQ(ch.depth, node.depth + 1);
                EXPECT_GE(last - r + 1, 2u) << "unique chunk redirected";
                if (!cfg.refit_after_redirect) { EXPECT_FALSE(passes); }
            } else {
                EXPECT_TRUE(passes) << "kept run violates the bound at depth " << node.depth;
            }
            if (last - r + 1 > 2 * std::size_t{cfg.error} + 1) { EXPECT_TRUE(child.has_value()) << "long run kept"; }
            r = last + 1;
        }
    }
}

TEST(RssBuild, FigureOneTree) {
    const Dataset ds = validate_dataset(kToy);
    const Index index = Index::build(ds, kToyConfig);
    check_invariants(index);
    const Node& root = index.root();
    EXPECT_EQ(root.redirect_keys, (std::vector<ChunkKey>{0x6162, 0x6364}));
    ASSERT_EQ(index.nodes().size(), 3u);

    const Stats s = index.stats();
    EXPECT_EQ(s.nodes, 3u);
    EXPECT_EQ(s.redirector_entries, 2u);
    EXPECT_EQ(s.max_depth, 2u);
    EXPECT_EQ(s.levels[0].resolved_keys, 2u);
    EXPECT_EQ(s.levels[1].resolved_keys, 7u);
    EXPECT_DOUBLE_EQ(s.mean_key_depth, (2.0 * 1 + 7.0 * 2) / 9.0);
}

TEST(RssQuery, FigureOneWalkthroughs) {
    const Dataset ds = validate_dataset(kToy);
    const Index index = Index::build(ds, kToyConfig);

    const Prediction cdeg = index.predict_rank("cdeg");
    EXPECT_EQ(cdeg.node->depth, 1u);
    EXPECT_EQ(cdeg.node->lo, 4u);
    EXPECT_EQ(cdeg.node->hi, 8u);
    EXPECT_EQ(cdeg.rank, 6u);
    EXPECT_EQ(index.lookup("cdeg"), std::optional<std::size_t>(6));

    const Prediction defg = index.predict_rank("defg");
    EXPECT_EQ(defg.node, &index.root());
    EXPECT_EQ(index.lower_bound("defg"), 8u);
    EXPECT_FALSE(index.lookup("defg"));

    EXPECT_FALSE(index.lookup("zzzz"));
    EXPECT_EQ(index.lower_bound("zzzz"), 9u);
    EXPECT_EQ(index.lower_bound(""), 0u);
    EXPECT_EQ(index.lower_bound("abaa"), 0u);
}

TEST(RssBuild, DistinctFirstChunksGiveSingleNode) {
    const Dataset ds = validate_dataset(Strings{"alpha", "bravo", "charlie", "delta", "echo"});
    const Index index = Index::build(ds, {.k = 8, .error = 0});
    const Stats s = index.stats();
    EXPECT_EQ(s.nodes, 1u);
    EXPECT_EQ(s.max_depth, 1u);
    EXPECT_EQ(s.redirector_entries, 0u);
    EXPECT_TRUE(s.root_redirector.empty());
}

// Eight keys share the first 8-byte chunk and differ in the second. With
// E = 3 the run is longer than 2E + 1 and must be redirected.
TEST(RssBuild, LongRunIsForcedIntoRedirector) {
    Strings keys{"aaaa"};
    for (char c = 'a'; c < 'a' + 8; ++c) keys.push_back(std::string("commonpf") + c);
    keys.push_back("zzzz");
    const Dataset ds = validate_dataset(keys);
    const Index index = Index::build(ds, {.k = 8, .error = 3});
    check_invariants(index);
    ASSERT_TRUE(index.root().find_child(extract_chunk("commonpf", 0, 8)).has_value());
}

TEST(RssBuild, RejectsEmptyDatasetAndBadConfig) {
    const Dataset empty = validate_dataset(Strings{});
    EXPECT_THROW((void)Index::build(empty), EmptyInputError);
    const Dataset ds = validate_dataset(kToy);
    EXPECT_THROW((void)Index::build(ds, {.k = 0}), ConfigError);
    EXPECT_THROW((void)Index::build(ds, {.k = 17}), ConfigError);
    EXPECT_THROW((void)Index::build(ds, {.error = Config::kMaxError + 1}), ConfigError);
    EXPECT_THROW((void)Index::build(ds, {.radix_min_bits = 8, .radix_max_bits = 7}), ConfigError);
}

TEST(RssBuild, SingleKey) {
    const Dataset ds = validate_dataset(Strings{"only"});
    const Index index = Index::build(ds);
    EXPECT_EQ(index.lookup("only"), std::optional<std::size_t>(0));
    EXPECT_EQ(index.lower_bound("a"), 0u);
    EXPECT_EQ(index.lower_bound("p"), 1u);
    EXPECT_FALSE(index.lookup(""));
}

// "ab" pads to an all-zero chunk below the "ab" redirect; "a" pads too.
TEST(RssQuery, ShortKeysDescendOnPaddedChunks) {
    const Dataset ds = validate_dataset(Strings{"a", "ab", "abc", "abd", "b"});
    const Index index = Index::build(ds, {.k = 2, .error = 0});
    check_invariants(index);
    for (std::size_t r = 0; r < ds.size(); ++r) EXPECT_EQ(index.lookup(ds[r]), std::optional<std::size_t>(r));
    EXPECT_EQ(index.lower_bound(std::string("ab\0", 3)), 2u);
    EXPECT_EQ(index.lower_bound("aba"), 2u);
    EXPECT_EQ(index.lower_bound("abe"), 4u);
}

TEST(RssMemory, ClosedFormSingleNode) {
    const Dataset ds = validate_dataset(Strings{"a", "b"});
    const Index six = Index::build(ds, {.k = 8, .error = 0});
    ASSERT_EQ(six.nodes().size(), 1u);
    ASSERT_EQ(six.root().spline.knot_count(), 2u);
    const MemoryReport m = six.memory();
    EXPECT_EQ(m.node_headers, sizeof(Node));
    EXPECT_EQ(m.redirector, 0u);
    EXPECT_EQ(m.spline_knots, 2 * (sizeof(ChunkKey) + sizeof(double)));
    EXPECT_EQ(m.radix_tables, 65 * sizeof(std::uint32_t));
    EXPECT_EQ(m.total(), sizeof(Node) + 2 * 24 + 65 * 4);

    const Index seven = Index::build(ds, {.k = 8, .error = 0, .radix_min_bits = 7});
    EXPECT_EQ(seven.memory().radix_tables - m.radix_tables, 64 * sizeof(std::uint32_t));
}

TEST(RssMemory, TotalIsSumOfParts) {
    const Dataset ds = validate_dataset(kToy);
    const MemoryReport m = Index::build(ds, kToyConfig).memory();
    EXPECT_EQ(m.total(), m.node_headers + m.redirector + m.spline_knots + m.radix_tables);
    EXPECT_EQ(m.redirector, 2 * Node::kRedirectEntryBytes);
    EXPECT_EQ(m.node_headers, 3 * sizeof(Node));
}

struct Case {
    unsigned k;
    std::uint32_t e;
    bool refit;
};

class RssProperty : public ::testing::TestWithParam<Case> {};

TEST_P(RssProperty, MatchesOracleAndHoldsBound) {
    const Case c = GetParam();
    std::mt19937_64 rng(c.k * 1000 + c.e + (c.refit ? 7 : 0));
    for (int trial = 0; trial < 6; ++trial) {
        const Strings keys = testing::clustered_keys(rng, 200 + rng() % 3000, 8 + trial * 4);
        const Dataset ds = validate_dataset(keys);
        const Index index = Index::build(ds, {.k = c.k, .error = c.e, .refit_after_redirect = c.refit});
        check_invariants(index);
        const ErrorSweep sweep = index.sweep_error_bound();
        ASSERT_EQ(sweep.violations, 0u);
        ASSERT_LE(sweep.max_abs_error, c.e);
        ASSERT_LE(index.stats().max_depth, (ds.max_key_length() + c.k - 1) / c.k + 1);

        for (const std::string& q : testing::mixed_queries(rng, keys, 4000)) {
            ASSERT_EQ(index.lookup(q), oracle_lookup(ds, q)) << q;
            ASSERT_EQ(index.lower_bound(q), oracle_lower_bound(ds, q)) << q;
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Configs, RssProperty,
                         ::testing::Values(Case{1, 0, false}, Case{2, 0, false}, Case{2, 3, false},
                                           Case{3, 1, false}, Case{8, 0, false}, Case{8, 7, false},
                                           Case{16, 127, false}, Case{16, 0, false}, Case{2, 3, true},
                                           Case{8, 7, true}),
                         [](const ::testing::TestParamInfo<Case>& info) {
                             const Case& c = info.param;
                             return "k" + std::to_string(c.k) + "_e" + std::to_string(c.e) + (c.refit ? "_refit" : "");
                         });

TEST(RssBuild, DeterministicReports) {
    std::mt19937_64 rng(9);
    const Dataset ds = validate_dataset(testing::clustered_keys(rng, 5000, 30));
    const Index a = Index::build(ds, {.k = 8, .error = 7});
    const Index b = Index::build(ds, {.k = 8, .error = 7});
    EXPECT_EQ(a.stats(), b.stats());
    EXPECT_EQ(a.memory(), b.memory());
}

TEST(RssQuery, ConcurrentReadersAgree) {
    std::mt19937_64 rng(10);
    const Strings keys = testing::clustered_keys(rng, 4000, 20);
    const Dataset ds = validate_dataset(keys);
    const Index index = Index::build(ds, {.k = 8, .error = 3});
    const Strings queries = testing::mixed_queries(rng, keys, 8000);
    std::vector<std::size_t> mismatches(4, 0);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < mismatches.size(); ++t) {
        pool.emplace_back([&, t] {
            for (const std::string& q : queries) {
                if (index.lookup(q) != oracle_lookup(ds, q) || index.lower_bound(q) != oracle_lower_bound(ds, q))
                    ++mismatches[t];
            }
        });
    }
    for (auto& th : pool) th.join();
    for (std::size_t m : mismatches) EXPECT_EQ(m, 0u);
}

TEST(RoundClamp, HalfUpThenClamp) {
    EXPECT_EQ(round_clamp(2.5, 0, 10), 3u);
    EXPECT_EQ(round_clamp(2.49, 0, 10), 2u);
    EXPECT_EQ(round_clamp(-3.0, 0, 10), 0u);
    EXPECT_EQ(round_clamp(4.0, 5, 10), 5u);
    EXPECT_EQ(round_clamp(42.0, 5, 10), 9u);
}

} // namespace
} // namespace rss
