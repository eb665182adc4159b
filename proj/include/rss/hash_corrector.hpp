#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rss/rss.hpp"

namespace rss {

struct HcConfig {
    /// Keys per slot; the table holds ceil(N / load_factor) one-byte slots.
    double load_factor = 2.0 / 3.0;
    /// Slots tried per key. Each 128-bit hash yields four 32-bit lanes;
    /// further groups of four rehash with seed + group.
    unsigned probes = 4;
    std::uint32_t seed = 0x9747b28cu;

    /// Throws ConfigError.
    void validate() const;
};

struct HcLookup {
    std::optional<std::size_t> rank;
    /// Resolved by a probe comparison, without the fallback binary search.
    bool fast_path = false;
    /// Dataset comparisons made against probed candidates.
    unsigned probe_compares = 0;
};

/// Equality-lookup accelerator over a built Index. Each slot holds the
/// signed offset from a key's predicted rank to its true rank; a key's
/// offset sits at the first of its probe slots that was free at build time.
/// Probes that hit another key's offset still narrow the search window.
///
/// Lower-bound queries do not use the corrector.
class HashCorrector {
public:
    static constexpr std::int8_t kEmpty = -128;
    static constexpr std::uint32_t kMaxErrorBound = 127;

    /// Throws ErrorBoundTooLarge if the index was built with E > 127.
    static HashCorrector build(const Index& index, const HcConfig& config = {});

    [[nodiscard]] static std::size_t slots_for(std::size_t n, double load_factor);

    [[nodiscard]] std::optional<std::size_t> lookup(const Index& index, std::string_view q) const noexcept {
        return lookup_traced(index, q).rank;
    }
    [[nodiscard]] HcLookup lookup_traced(const Index& index, std::string_view q) const noexcept;

    /// Slot positions probed for `key`, in probe order. out.size() must equal probes().
    void probe_slots(std::string_view key, std::span<std::size_t> out) const noexcept;

    [[nodiscard]] std::span<const std::int8_t> slots() const noexcept { return slots_; }
    [[nodiscard]] std::size_t slot_count() const noexcept { return slots_.size(); }
    [[nodiscard]] std::size_t memory_bytes() const noexcept { return slots_.size() * sizeof(std::int8_t); }
    /// Keys that found a free probe slot at build time.
    [[nodiscard]] std::size_t inserted() const noexcept { return inserted_; }
    [[nodiscard]] const HcConfig& config() const noexcept { return config_; }

private:
    explicit HashCorrector(const HcConfig& config) : config_(config) {}

    HcConfig config_;
    std::vector<std::int8_t> slots_;
    std::size_t inserted_ = 0;
};

} // namespace rss
