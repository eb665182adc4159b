#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"

namespace {

using namespace rss::cli;

void add_index_flags(CLI::App& cmd, IndexOptions& o) {
    cmd.add_option("--k", o.config.k, "chunk width in bytes (8 or 16; 1-16 accepted)")->capture_default_str();
    cmd.add_option("--error", o.config.error, "spline error bound E")
        ->check(CLI::Range(0u, 127u))
        ->capture_default_str();
    cmd.add_option("--radix-min-bits", o.config.radix_min_bits)->capture_default_str();
    cmd.add_option("--radix-max-bits", o.config.radix_max_bits)->capture_default_str();
    cmd.add_flag("--refit", o.config.refit_after_redirect, "refit node splines after redirecting runs");
    cmd.add_flag("--hash-corrector", o.hash_corrector, "attach the int8 offset hash corrector");
    cmd.add_option("--hc-load", o.hc.load_factor, "corrector load factor")
        ->check(CLI::Range(0.01, 1.0))
        ->default_str("0.6667");
    cmd.add_option("--hc-probes", o.hc.probes, "corrector probes per key")
        ->check(CLI::Range(1u, 64u))
        ->capture_default_str();
    cmd.add_flag("--sort-dedup", o.sort_dedup, "sort and deduplicate the input before validation");
}

void emit(const Json& j, const std::string& json_path) {
    const std::string text = j.dump(2);
    std::cout << text << '\n';
    if (!json_path.empty()) {
        std::ofstream out(json_path, std::ios::trunc);
        if (!(out << text << '\n')) throw std::runtime_error("cannot write " + json_path);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"RadixStringSpline learned string index"};
    app.require_subcommand(1);

    std::string kind_name = "uniform";
    std::size_t gen_n = 0;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    auto* gen = app.add_subcommand("gen", "generate a sorted synthetic corpus");
    gen->add_option("--kind", kind_name)->check(CLI::IsMember({"uniform", "prefix-heavy", "natural-ish"}))->capture_default_str();
    gen->add_option("--n", gen_n, "number of keys")->required()->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_seed)->capture_default_str();
    gen->add_option("--out", gen_out)->required();

    std::string input;
    std::string json_path;
    IndexOptions index_options;

    auto* build = app.add_subcommand("build", "build an index and print stats and memory as JSON");
    build->add_option("input", input, "newline-delimited sorted keys")->required();
    add_index_flags(*build, index_options);
    build->add_option("--json", json_path, "also write the report here");

    BenchOptions bench_options;
    std::string queries_path;
    std::string index_kind = "rss";
    auto* bench = app.add_subcommand("bench", "time build, equality and lower-bound queries");
    bench->add_option("input", input)->required();
    add_index_flags(*bench, index_options);
    bench->add_option("--queries", queries_path, "query file; default is all member keys shuffled");
    bench->add_option("--miss-rate", bench_options.miss_rate, "share of non-member queries")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    bench->add_option("--threads", bench_options.threads)->check(CLI::Range(1u, 256u))->capture_default_str();
    bench->add_option("--index", index_kind)->check(CLI::IsMember({"rss", "oracle"}))->capture_default_str();
    bench->add_option("--repetitions", bench_options.repetitions)->check(CLI::Range(1u, 100u))->capture_default_str();
    bench->add_option("--min-ops", bench_options.min_ops)->capture_default_str();
    bench->add_option("--seed", bench_options.seed)->capture_default_str();
    bench->add_option("--json", json_path);

    std::string query;
    std::string mode = "eq";
    auto* query_cmd = app.add_subcommand("query", "answer a single query");
    query_cmd->add_option("input", input)->required();
    query_cmd->add_option("q", query)->required();
    query_cmd->add_option("--mode", mode)->check(CLI::IsMember({"eq", "lb"}))->capture_default_str();
    add_index_flags(*query_cmd, index_options);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            run_gen(*parse_corpus_kind(kind_name), gen_n, gen_seed, gen_out);
        } else if (*build) {
            emit(run_build(input, index_options), json_path);
        } else if (*bench) {
            bench_options.index = index_options;
            bench_options.oracle_baseline = index_kind == "oracle";
            if (!queries_path.empty()) bench_options.queries_file = queries_path;
            emit(run_bench(input, bench_options).to_json(), json_path);
        } else if (*query_cmd) {
            std::cout << run_query(input, index_options, query, mode == "lb" ? QueryMode::LowerBound : QueryMode::Equality)
                      << '\n';
        }
    } catch (const rss::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const rss::EmptyInputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const OracleMismatch& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
