#include "cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "rss/oracle.hpp"

namespace rss::cli {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ns(Clock::time_point start) {
    return std::chrono::duration<double, std::nano>(Clock::now() - start).count();
}

template <class Fn>
void for_each_shard(std::size_t n, unsigned threads, Fn&& fn) {
    threads = std::max(1u, threads);
    if (threads == 1) {
        fn(0u, std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t begin = n * t / threads;
        const std::size_t end = n * (t + 1) / threads;
        pool.emplace_back([&fn, t, begin, end] { fn(t, begin, end); });
    }
    for (std::thread& th : pool) th.join();
}

/// Mean per-operation latency: summed per-thread loop time over operations,
/// minimum across repetitions. Each thread repeats its shard until the
/// whole run reaches min_ops.
template <class Op>
double time_per_op(std::span<const std::string> queries, unsigned threads, std::size_t min_ops, unsigned reps,
                   Op op) {
    if (queries.empty()) return 0.0;
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(queries.size())));
    const std::size_t passes = std::max<std::size_t>(1, (min_ops + queries.size() - 1) / queries.size());
    std::atomic<std::size_t> sink{0};
    double best = std::numeric_limits<double>::infinity();
    for (unsigned rep = 0; rep < std::max(1u, reps); ++rep) {
        std::vector<double> ns(threads, 0.0);
        std::vector<std::size_t> ops(threads, 0);
        for_each_shard(queries.size(), threads, [&](unsigned t, std::size_t begin, std::size_t end) {
            std::size_t local = 0;
            const auto start = Clock::now();
            for (std::size_t p = 0; p < passes; ++p) {
                for (std::size_t i = begin; i < end; ++i) local += op(queries[i]);
            }
            ns[t] = elapsed_ns(start);
            ops[t] = passes * (end - begin);
            sink += local;
        });
        double total_ns = 0.0;
        std::size_t total_ops = 0;
        for (unsigned t = 0; t < threads; ++t) {
            total_ns += ns[t];
            total_ops += ops[t];
        }
        best = std::min(best, total_ns / static_cast<double>(total_ops));
    }
    return best;
}

std::string printable(std::string_view q) {
    std::ostringstream os;
    for (unsigned char c : q) {
        if (c >= 0x20 && c < 0x7F) os << c;
        else os << "\\x" << "0123456789abcdef"[c >> 4] << "0123456789abcdef"[c & 0xF];
    }
    return os.str();
}

std::optional<HcConfig> hc_config_of(const IndexOptions& options) {
    if (!options.hash_corrector) return std::nullopt;
    return options.hc;
}

} // namespace

std::unique_ptr<Dataset> load_dataset(const std::filesystem::path& path, bool sort_dedup_records) {
    std::vector<std::string> records = read_records(path);
    if (sort_dedup_records) sort_dedup(records);
    return std::make_unique<Dataset>(validate_dataset(records));
}

LoadedIndex load_and_build(const std::filesystem::path& path, const IndexOptions& options) {
    LoadedIndex loaded;
    loaded.data = load_dataset(path, options.sort_dedup);
    loaded.index.emplace(Index::build(*loaded.data, options.config));
    if (options.hash_corrector) loaded.hc.emplace(HashCorrector::build(*loaded.index, options.hc));
    return loaded;
}

std::optional<std::size_t> QueryEngine::lookup(std::string_view q, bool* fast_path) const noexcept {
    if (index_ == nullptr) return oracle_lookup(*data_, q);
    if (hc_ == nullptr) return index_->lookup(q);
    const HcLookup r = hc_->lookup_traced(*index_, q);
    if (fast_path) *fast_path = r.fast_path;
    return r.rank;
}

std::size_t QueryEngine::lower_bound(std::string_view q) const noexcept {
    if (index_ == nullptr) return oracle_lower_bound(*data_, q);
    return index_->lower_bound(q);
}

QueryResults evaluate(const QueryEngine& engine, std::span<const std::string> queries, unsigned threads) {
    QueryResults r;
    r.eq.resize(queries.size());
    r.lb.resize(queries.size());
    std::vector<char> fast(queries.size(), 0);
    for_each_shard(queries.size(), threads, [&](unsigned, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            bool hit = false;
            r.eq[i] = engine.lookup(queries[i], &hit);
            r.lb[i] = engine.lower_bound(queries[i]);
            fast[i] = hit;
        }
    });
    r.fast_path.assign(fast.begin(), fast.end());
    return r;
}

void verify_against_oracle(const Dataset& data, std::span<const std::string> queries, const QueryResults& results) {
    for (std::size_t i = 0; i < queries.size(); ++i) {
        const auto eq = oracle_lookup(data, queries[i]);
        const auto lb = oracle_lower_bound(data, queries[i]);
        if (results.eq[i] != eq || results.lb[i] != lb) {
            std::ostringstream os;
            os << "oracle mismatch on query " << i << " \"" << printable(queries[i]) << "\": eq ";
            os << (results.eq[i] ? std::to_string(*results.eq[i]) : "absent") << " vs "
               << (eq ? std::to_string(*eq) : "absent");
            os << ", lower_bound " << results.lb[i] << " vs " << lb;
            throw OracleMismatch(os.str());
        }
    }
}

std::vector<std::string> make_workload(const Dataset& data, double miss_rate, std::uint64_t seed) {
    if (!(miss_rate >= 0.0 && miss_rate <= 1.0)) throw std::invalid_argument("miss rate must be in [0, 1]");
    const std::size_t total = data.size();
    const auto misses = static_cast<std::size_t>(std::llround(static_cast<double>(total) * miss_rate));
    std::vector<std::string> queries = member_queries(data, total - misses, seed);
    std::vector<std::string> absent = non_member_queries(data, misses, seed + 1);
    queries.insert(queries.end(), std::make_move_iterator(absent.begin()), std::make_move_iterator(absent.end()));
    // Interleave members and misses deterministically.
    std::mt19937_64 rng(seed + 2);
    for (std::size_t i = queries.size(); i > 1; --i) std::swap(queries[i - 1], queries[rng() % i]);
    return queries;
}

Json run_build(const std::filesystem::path& in, const IndexOptions& options) {
    LoadedIndex loaded = load_and_build(in, options);
    const ErrorSweep sweep = loaded.index->sweep_error_bound();
    if (sweep.violations != 0) {
        throw std::logic_error("error-bound sweep found " + std::to_string(sweep.violations) +
                               " keys outside the bound (max " + std::to_string(sweep.max_abs_error) + ")");
    }
    return build_report(in.filename().string(), *loaded.index, loaded.hc ? &*loaded.hc : nullptr, sweep);
}

BenchReport run_bench(const std::filesystem::path& in, const BenchOptions& options) {
    const IndexOptions& io = options.index;
    std::unique_ptr<Dataset> data = load_dataset(in, io.sort_dedup);
    if (data->empty()) throw EmptyInputError("cannot benchmark an empty dataset");

    BenchReport report;
    report.dataset_name = in.filename().string();
    report.n = data->size();

    std::optional<Index> index;
    std::optional<HashCorrector> hc;
    if (!options.oracle_baseline) {
        double best = std::numeric_limits<double>::infinity();
        for (unsigned rep = 0; rep < std::max(1u, options.repetitions); ++rep) {
            index.reset();
            hc.reset();
            const auto start = Clock::now();
            index.emplace(Index::build(*data, io.config));
            if (io.hash_corrector) hc.emplace(HashCorrector::build(*index, io.hc));
            best = std::min(best, elapsed_ns(start));
        }
        report.build_ns_per_item = best / static_cast<double>(data->size());
        report.index_bytes = index->memory().total();
        report.hc_bytes = hc ? hc->memory_bytes() : 0;
    }

    const std::vector<std::string> queries =
        options.queries_file ? read_records(*options.queries_file) : make_workload(*data, options.miss_rate, options.seed);

    const QueryEngine engine = options.oracle_baseline ? QueryEngine(*data) : QueryEngine(*index, hc ? &*hc : nullptr);

    // Correctness precedes timing.
    const QueryResults results = evaluate(engine, queries, options.threads);
    verify_against_oracle(*data, queries, results);
    if (hc) {
        std::size_t members = 0;
        std::size_t hits = 0;
        for (std::size_t i = 0; i < queries.size(); ++i) {
            if (!results.eq[i]) continue;
            ++members;
            hits += results.fast_path[i] ? 1 : 0;
        }
        report.fast_path_hit_rate = members == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(members);
    }

    report.lookup_ns_mean = time_per_op(queries, options.threads, options.min_ops, options.repetitions,
                                        [&engine](const std::string& q) { return engine.lookup(q).value_or(0); });
    report.lower_bound_ns_mean = time_per_op(queries, options.threads, options.min_ops, options.repetitions,
                                             [&engine](const std::string& q) { return engine.lower_bound(q); });

    report.config = config_json(io.config, options.oracle_baseline ? std::nullopt : hc_config_of(io));
    report.config["index"] = options.oracle_baseline ? "oracle" : "rss";
    report.config["threads"] = options.threads;
    report.config["repetitions"] = options.repetitions;
    report.config["min_ops"] = options.min_ops;
    report.config["queries"] = queries.size();
    report.config["query_source"] = options.queries_file ? options.queries_file->string() : "shuffled-members";
    report.config["miss_rate"] = options.queries_file ? 0.0 : options.miss_rate;
    return report;
}

std::string run_query(const std::filesystem::path& in, const IndexOptions& options, std::string_view q,
                      QueryMode mode) {
    LoadedIndex loaded = load_and_build(in, options);
    const QueryEngine engine(*loaded.index, loaded.hc ? &*loaded.hc : nullptr);
    if (mode == QueryMode::LowerBound) return std::to_string(engine.lower_bound(q));
    const auto r = engine.lookup(q);
    return r ? std::to_string(*r) : "absent";
}

void run_gen(CorpusKind kind, std::size_t n, std::uint64_t seed, const std::filesystem::path& out) {
    write_records(out, generate_corpus(kind, n, seed));
}

} // namespace rss::cli
