#include "cli/report.hpp"

namespace rss::cli {

Json stats_json(const Stats& stats, unsigned k) {
    Json root_keys = Json::array();
    for (ChunkKey c : stats.root_redirector) root_keys.push_back(chunk_to_hex(c, k));

    Json levels = Json::array();
    for (std::size_t d = 0; d < stats.levels.size(); ++d) {
        const LevelStats& l = stats.levels[d];
        levels.push_back({{"level", d + 1},
                          {"nodes", l.nodes},
                          {"redirector_entries", l.redirector_entries},
                          {"spline_knots", l.spline_knots},
                          {"resolved_keys", l.resolved_keys}});
    }
    return {{"nodes", stats.nodes},
            {"max_depth", stats.max_depth},
            {"mean_key_depth", stats.mean_key_depth},
            {"redirector_entries", stats.redirector_entries},
            {"spline_knots", stats.spline_knots},
            {"root_redirector", std::move(root_keys)},
            {"levels", std::move(levels)}};
}

Json memory_json(const MemoryReport& memory, std::size_t hc_bytes) {
    return {{"node_headers", memory.node_headers},
            {"redirector", memory.redirector},
            {"spline_knots", memory.spline_knots},
            {"radix_tables", memory.radix_tables},
            {"index_total", memory.total()},
            {"hash_corrector", hc_bytes},
            {"total", memory.total() + hc_bytes}};
}

Json config_json(const Config& config, const std::optional<HcConfig>& hc) {
    Json j = {{"k", config.k},
              {"error", config.error},
              {"radix_min_bits", config.radix_min_bits},
              {"radix_max_bits", config.radix_max_bits},
              {"refit_after_redirect", config.refit_after_redirect},
              {"hash_corrector", hc.has_value()}};
    if (hc) {
        j["hc_load"] = hc->load_factor;
        j["hc_probes"] = hc->probes;
    }
    return j;
}

Json build_report(const std::string& dataset_name, const Index& index, const HashCorrector* hc,
                  const ErrorSweep& sweep) {
    std::optional<HcConfig> hc_config;
    if (hc) hc_config = hc->config();
    Json hc_json = nullptr;
    if (hc) {
        hc_json = {{"slots", hc->slot_count()},
                   {"bytes", hc->memory_bytes()},
                   {"inserted", hc->inserted()},
                   {"inserted_fraction", static_cast<double>(hc->inserted()) / static_cast<double>(index.size())}};
    }
    return {{"dataset", {{"name", dataset_name}, {"n", index.size()}, {"raw_key_bytes", index.data().raw_bytes()}}},
            {"config", config_json(index.config(), hc_config)},
            {"stats", stats_json(index.stats(), index.config().k)},
            {"memory", memory_json(index.memory(), hc ? hc->memory_bytes() : 0)},
            {"error_sweep", {{"violations", sweep.violations}, {"max_abs_error", sweep.max_abs_error}}},
            {"hash_corrector", std::move(hc_json)}};
}

Json BenchReport::to_json() const {
    Json hit = nullptr;
    if (fast_path_hit_rate) hit = *fast_path_hit_rate;
    return {{"dataset_name", dataset_name},
            {"n", n},
            {"config", config},
            {"build_ns_per_item", build_ns_per_item},
            {"lookup_ns_mean", lookup_ns_mean},
            {"lower_bound_ns_mean", lower_bound_ns_mean},
            {"index_bytes", index_bytes},
            {"hc_bytes", hc_bytes},
            {"fast_path_hit_rate", hit}};
}

} // namespace rss::cli
