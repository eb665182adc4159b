#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "rss/hash_corrector.hpp"
#include "rss/rss.hpp"

namespace rss::cli {

using Json = nlohmann::ordered_json;

[[nodiscard]] Json stats_json(const Stats& stats, unsigned k);
[[nodiscard]] Json memory_json(const MemoryReport& memory, std::size_t hc_bytes);
[[nodiscard]] Json config_json(const Config& config, const std::optional<HcConfig>& hc);

/// Report printed by `rss build`. Contains no timings, so identical input
/// and flags give byte-identical output.
[[nodiscard]] Json build_report(const std::string& dataset_name, const Index& index, const HashCorrector* hc,
                                const ErrorSweep& sweep);

struct BenchReport {
    std::string dataset_name;
    std::size_t n = 0;
    Json config;
    double build_ns_per_item = 0.0;
    double lookup_ns_mean = 0.0;
    double lower_bound_ns_mean = 0.0;
    std::size_t index_bytes = 0;
    std::size_t hc_bytes = 0;
    /// Share of member equality queries answered by a corrector probe.
    std::optional<double> fast_path_hit_rate;

    [[nodiscard]] Json to_json() const;
};

} // namespace rss::cli
