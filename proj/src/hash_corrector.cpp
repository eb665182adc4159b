#include "rss/hash_corrector.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rss/murmur3.hpp"

namespace rss {

namespace {
constexpr unsigned kMaxProbes = 64;
constexpr unsigned kLanes = 4;
} // namespace

void HcConfig::validate() const {
    if (!(load_factor > 0.0 && load_factor <= 1.0)) throw ConfigError("hash corrector load factor must be in (0, 1]");
    if (probes == 0 || probes > kMaxProbes) throw ConfigError("hash corrector probes must be in [1, 64]");
}

std::size_t HashCorrector::slots_for(std::size_t n, double load_factor) {
    const double exact = static_cast<double>(n) / load_factor;
    // Absorb the representation error of fractions like 2/3.
    const auto m = static_cast<std::size_t>(std::ceil(exact - exact * 1e-12));
    return m == 0 ? 1 : m;
}

void HashCorrector::probe_slots(std::string_view key, std::span<std::size_t> out) const noexcept {
    const std::size_t m = slots_.size();
    Hash128 h{};
    for (unsigned i = 0; i < out.size(); ++i) {
        if (i % kLanes == 0) h = murmur3_x64_128(key, config_.seed + i / kLanes);
        out[i] = h.lane(i % kLanes) % m;
    }
}

HashCorrector HashCorrector::build(const Index& index, const HcConfig& config) {
    config.validate();
    if (index.config().error > kMaxErrorBound)
        throw ErrorBoundTooLarge("hash corrector needs an error bound <= 127, index has " +
                                 std::to_string(index.config().error));

    const Dataset& data = index.data();
    HashCorrector hc(config);
    hc.slots_.assign(slots_for(data.size(), config.load_factor), kEmpty);

    std::vector<std::size_t> probes(config.probes);
    for (std::size_t r = 0; r < data.size(); ++r) {
        const std::string_view key = data[r];
        const auto offset = static_cast<std::ptrdiff_t>(r) - static_cast<std::ptrdiff_t>(index.predict_rank(key).rank);
        if (offset < -127 || offset > 127) throw std::logic_error("hash corrector: prediction outside error bound");
        hc.probe_slots(key, probes);
        for (std::size_t pos : probes) {
            if (hc.slots_[pos] == kEmpty) {
                hc.slots_[pos] = static_cast<std::int8_t>(offset);
                ++hc.inserted_;
                break;
            }
        }
    }
    return hc;
}

HcLookup HashCorrector::lookup_traced(const Index& index, std::string_view q) const noexcept {
    const Dataset& data = index.data();
    const Prediction pred = index.predict_rank(q);
    const auto [left, right] = index.search_window(pred);
    auto lb = static_cast<std::ptrdiff_t>(left);
    auto rb = static_cast<std::ptrdiff_t>(right);
    const auto p = static_cast<std::ptrdiff_t>(pred.rank);

    HcLookup result;
    std::size_t probes[kMaxProbes];
    probe_slots(q, std::span<std::size_t>(probes, config_.probes));
    for (unsigned i = 0; i < config_.probes && lb <= rb; ++i) {
        const std::int8_t offset = slots_[probes[i]];
        if (offset == kEmpty) continue;
        const std::ptrdiff_t cand = p + offset;
        if (cand < lb || cand > rb) continue;
        ++result.probe_compares;
        const int c = data[static_cast<std::size_t>(cand)].compare(q);
        if (c == 0) {
            result.rank = static_cast<std::size_t>(cand);
            result.fast_path = true;
            return result;
        }
        if (c < 0) lb = cand + 1;
        else rb = cand - 1;
    }

    while (lb <= rb) {
        const std::ptrdiff_t mid = lb + (rb - lb) / 2;
        const int c = data[static_cast<std::size_t>(mid)].compare(q);
        if (c == 0) {
            result.rank = static_cast<std::size_t>(mid);
            return result;
        }
        if (c < 0) lb = mid + 1;
        else rb = mid - 1;
    }
    return result;
}

} // namespace rss
