#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "cli/commands.hpp"
#include "rss/oracle.hpp"

namespace rss::cli {
namespace {

namespace fs = std::filesystem;
using Strings = std::vector<std::string>;

class TempDir {
public:
    TempDir() : path_(fs::temp_directory_path() / ("rss_cli_test_" + std::to_string(::getpid()))) {
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

const Strings kToy{"abaa", "abab", "abac", "bcaa", "cdee", "cdef", "cdeg", "cdeh", "efgh"};

IndexOptions toy_options() {
    IndexOptions o;
    o.config.k = 2;
    o.config.error = 0;
    return o;
}

TEST(Generate, UniformShape) {
    const Strings keys = generate_corpus(CorpusKind::Uniform, 10, 1);
    ASSERT_EQ(keys.size(), 10u);
    EXPECT_TRUE(std::is_sorted(keys.begin(), keys.end()));
    for (const auto& k : keys) {
        EXPECT_EQ(k.size(), 16u);
        EXPECT_TRUE(std::all_of(k.begin(), k.end(), [](char c) { return std::isalnum(c) && !std::isupper(c); }));
    }
}

TEST(Generate, ReproduciblePerSeed) {
    TempDir dir;
    for (CorpusKind kind : {CorpusKind::Uniform, CorpusKind::PrefixHeavy, CorpusKind::NaturalIsh}) {
        run_gen(kind, 500, 7, dir / "a.txt");
        run_gen(kind, 500, 7, dir / "b.txt");
        run_gen(kind, 500, 8, dir / "c.txt");
        EXPECT_EQ(slurp(dir / "a.txt"), slurp(dir / "b.txt"));
        EXPECT_NE(slurp(dir / "a.txt"), slurp(dir / "c.txt"));
        const Strings keys = read_records(dir / "a.txt");
        EXPECT_EQ(keys.size(), 500u);
        EXPECT_NO_THROW((void)validate_dataset(keys));
    }
}

TEST(Generate, PrefixHeavySharesFewLongPrefixes) {
    const Strings keys = generate_corpus(CorpusKind::PrefixHeavy, 20000, 3);
    std::map<std::string, std::size_t> prefixes;
    for (const auto& k : keys)
        if (k.size() >= 64) ++prefixes[k.substr(0, 64)];
    std::vector<std::size_t> counts;
    for (const auto& [p, c] : prefixes) counts.push_back(c);
    std::sort(counts.rbegin(), counts.rend());
    std::size_t top = 0;
    for (std::size_t i = 0; i < std::min<std::size_t>(8, counts.size()); ++i) top += counts[i];
    EXPECT_GE(static_cast<double>(top) / static_cast<double>(keys.size()), 0.95);
}

TEST(Generate, SingleKeyFile) {
    TempDir dir;
    run_gen(CorpusKind::NaturalIsh, 1, 5, dir / "one.txt");
    const std::string text = slurp(dir / "one.txt");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
    EXPECT_THROW((void)generate_corpus(CorpusKind::Uniform, 0, 1), std::invalid_argument);
}

TEST(Generate, NonMembersAreAbsent) {
    const Dataset ds = validate_dataset(generate_corpus(CorpusKind::NaturalIsh, 3000, 4));
    for (const std::string& q : non_member_queries(ds, 5000, 9)) EXPECT_FALSE(oracle_lookup(ds, q)) << q;
    const Strings members = member_queries(ds, 100, 9);
    for (const std::string& q : members) EXPECT_TRUE(oracle_lookup(ds, q));
}

TEST(Build, ToyReport) {
    TempDir dir;
    write_records(dir / "toy.txt", kToy);
    const Json j = run_build(dir / "toy.txt", toy_options());
    EXPECT_EQ(j["stats"]["nodes"], 3);
    EXPECT_EQ(j["stats"]["redirector_entries"], 2);
    EXPECT_EQ(j["stats"]["root_redirector"], Json::array({"6162", "6364"}));
    EXPECT_EQ(j["error_sweep"]["violations"], 0);
    EXPECT_EQ(j["memory"]["index_total"], j["memory"]["node_headers"].get<std::size_t>() +
                                              j["memory"]["redirector"].get<std::size_t>() +
                                              j["memory"]["spline_knots"].get<std::size_t>() +
                                              j["memory"]["radix_tables"].get<std::size_t>());
    EXPECT_TRUE(j["hash_corrector"].is_null());

    IndexOptions with_hc = toy_options();
    with_hc.hash_corrector = true;
    const Json h = run_build(dir / "toy.txt", with_hc);
    EXPECT_EQ(h["hash_corrector"]["bytes"], 14);
    EXPECT_EQ(h["memory"]["hash_corrector"], 14);
}

TEST(Build, RejectsBadInput) {
    TempDir dir;
    write_records(dir / "empty.txt", {});
    EXPECT_THROW((void)run_build(dir / "empty.txt", {}), EmptyInputError);

    write_records(dir / "unsorted.txt", Strings{"b", "a", "c"});
    try {
        (void)run_build(dir / "unsorted.txt", {});
        FAIL() << "expected NotSorted";
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.kind(), ValidationError::Kind::NotSorted);
        EXPECT_EQ(e.index(), 1u);
    }

    IndexOptions fix;
    fix.sort_dedup = true;
    write_records(dir / "messy.txt", Strings{"b", "a", "b", "c"});
    EXPECT_EQ(run_build(dir / "messy.txt", fix)["dataset"]["n"], 3);
}

TEST(Build, ReportIsDeterministic) {
    TempDir dir;
    run_gen(CorpusKind::NaturalIsh, 5000, 2, dir / "n.txt");
    IndexOptions o;
    o.hash_corrector = true;
    EXPECT_EQ(run_build(dir / "n.txt", o).dump(), run_build(dir / "n.txt", o).dump());
}

TEST(Query, ToyAnswers) {
    TempDir dir;
    write_records(dir / "toy.txt", kToy);
    EXPECT_EQ(run_query(dir / "toy.txt", toy_options(), "cdeg", QueryMode::Equality), "6");
    EXPECT_EQ(run_query(dir / "toy.txt", toy_options(), "defg", QueryMode::LowerBound), "8");
    EXPECT_EQ(run_query(dir / "toy.txt", toy_options(), "defg", QueryMode::Equality), "absent");
}

TEST(Engine, RssMatchesOracleAcrossThreadCounts) {
    const Dataset ds = validate_dataset(generate_corpus(CorpusKind::PrefixHeavy, 20000, 6));
    const Index index = Index::build(ds);
    const HashCorrector hc = HashCorrector::build(index);
    const Strings queries = make_workload(ds, 0.3, 11);
    const QueryResults oracle = evaluate(QueryEngine(ds), queries, 1);
    const QueryResults rss1 = evaluate(QueryEngine(index, &hc), queries, 1);
    const QueryResults rss8 = evaluate(QueryEngine(index, &hc), queries, 8);
    EXPECT_EQ(rss1.eq, oracle.eq);
    EXPECT_EQ(rss1.lb, oracle.lb);
    EXPECT_EQ(rss1, rss8);
    EXPECT_NO_THROW(verify_against_oracle(ds, queries, rss8));

    QueryResults broken = rss1;
    broken.lb[0] += 1;
    EXPECT_THROW(verify_against_oracle(ds, queries, broken), OracleMismatch);
}

TEST(Workload, MissRateShare) {
    const Dataset ds = validate_dataset(generate_corpus(CorpusKind::Uniform, 1000, 6));
    const Strings w = make_workload(ds, 0.25, 3);
    ASSERT_EQ(w.size(), 1000u);
    const auto misses = std::count_if(w.begin(), w.end(), [&](const std::string& q) { return !oracle_lookup(ds, q); });
    EXPECT_EQ(misses, 250);
    EXPECT_THROW((void)make_workload(ds, 1.5, 3), std::invalid_argument);
}

TEST(Bench, ReportSchema) {
    TempDir dir;
    run_gen(CorpusKind::Uniform, 3000, 1, dir / "u.txt");
    BenchOptions o;
    o.index.hash_corrector = true;
    o.min_ops = 1000;
    o.repetitions = 1;
    o.threads = 2;
    const Json j = run_bench(dir / "u.txt", o).to_json();
    Strings fields;
    for (const auto& [key, value] : j.items()) fields.push_back(key);
    EXPECT_EQ(fields, (Strings{"dataset_name", "n", "config", "build_ns_per_item", "lookup_ns_mean",
                               "lower_bound_ns_mean", "index_bytes", "hc_bytes", "fast_path_hit_rate"}));
    EXPECT_EQ(j["n"], 3000);
    EXPECT_EQ(j["hc_bytes"], 4500);
    EXPECT_GT(j["index_bytes"].get<std::size_t>(), 0u);
    EXPECT_GE(j["fast_path_hit_rate"].get<double>(), 0.9);
    EXPECT_GE(j["lookup_ns_mean"].get<double>(), 0.0);

    BenchOptions base;
    base.oracle_baseline = true;
    base.min_ops = 1000;
    base.repetitions = 1;
    base.miss_rate = 0.5;
    const Json b = run_bench(dir / "u.txt", base).to_json();
    EXPECT_EQ(b["config"]["index"], "oracle");
    EXPECT_TRUE(b["fast_path_hit_rate"].is_null());
    EXPECT_EQ(b["index_bytes"], 0);
}

TEST(Bench, QueriesFromFile) {
    TempDir dir;
    write_records(dir / "toy.txt", kToy);
    write_records(dir / "q.txt", Strings{"cdeg", "defg", "zzzz", ""});
    BenchOptions o;
    o.index = toy_options();
    o.queries_file = dir / "q.txt";
    o.min_ops = 100;
    o.repetitions = 1;
    const Json j = run_bench(dir / "toy.txt", o).to_json();
    EXPECT_EQ(j["config"]["queries"], 4);
}

} // namespace
} // namespace rss::cli
