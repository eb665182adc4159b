#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cli/generate.hpp"
#include "cli/report.hpp"
#include "rss/hash_corrector.hpp"
#include "rss/rss.hpp"

namespace rss::cli {

struct IndexOptions {
    Config config;
    bool hash_corrector = false;
    HcConfig hc;
    bool sort_dedup = false;
};

/// Raised when an index answer disagrees with the oracle.
class OracleMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dataset, index and optional corrector kept together; the index points
/// into the heap-allocated dataset, so this type is move-safe.
struct LoadedIndex {
    std::unique_ptr<Dataset> data;
    std::optional<Index> index;
    std::optional<HashCorrector> hc;
};

[[nodiscard]] std::unique_ptr<Dataset> load_dataset(const std::filesystem::path& path, bool sort_dedup);
[[nodiscard]] LoadedIndex load_and_build(const std::filesystem::path& path, const IndexOptions& options);

/// Uniform query interface over the oracle baseline or an RSS (+ corrector).
class QueryEngine {
public:
    explicit QueryEngine(const Dataset& data) : data_(&data) {}
    QueryEngine(const Index& index, const HashCorrector* hc) : data_(&index.data()), index_(&index), hc_(hc) {}

    [[nodiscard]] std::optional<std::size_t> lookup(std::string_view q, bool* fast_path = nullptr) const noexcept;
    [[nodiscard]] std::size_t lower_bound(std::string_view q) const noexcept;
    [[nodiscard]] bool is_oracle() const noexcept { return index_ == nullptr; }

private:
    const Dataset* data_;
    const Index* index_ = nullptr;
    const HashCorrector* hc_ = nullptr;
};

struct QueryResults {
    std::vector<std::optional<std::size_t>> eq;
    std::vector<std::size_t> lb;
    std::vector<bool> fast_path;

    bool operator==(const QueryResults&) const = default;
};

/// Answers every query in both modes, sharding the workload over threads.
[[nodiscard]] QueryResults evaluate(const QueryEngine& engine, std::span<const std::string> queries,
                                    unsigned threads);

/// Throws OracleMismatch naming the first disagreeing query.
void verify_against_oracle(const Dataset& data, std::span<const std::string> queries, const QueryResults& results);

struct BenchOptions {
    IndexOptions index;
    bool oracle_baseline = false;
    std::optional<std::filesystem::path> queries_file;
    double miss_rate = 0.0;
    unsigned threads = 1;
    unsigned repetitions = 3;
    std::size_t min_ops = 100'000;
    std::uint64_t seed = 42;
};

/// Default workload: every member key once, with a miss_rate share replaced
/// by non-members, shuffled.
[[nodiscard]] std::vector<std::string> make_workload(const Dataset& data, double miss_rate, std::uint64_t seed);

[[nodiscard]] Json run_build(const std::filesystem::path& in, const IndexOptions& options);
[[nodiscard]] BenchReport run_bench(const std::filesystem::path& in, const BenchOptions& options);

enum class QueryMode { Equality, LowerBound };
/// Rank as decimal text, or "absent".
[[nodiscard]] std::string run_query(const std::filesystem::path& in, const IndexOptions& options,
                                    std::string_view q, QueryMode mode);

void run_gen(CorpusKind kind, std::size_t n, std::uint64_t seed, const std::filesystem::path& out);

} // namespace rss::cli
