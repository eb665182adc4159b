#pragma once

#include <cstdint>
#include <string_view>

namespace rss {

struct Hash128 {
    std::uint64_t low;
    std::uint64_t high;

    /// 32-bit lane i in [0, 4), low word first.
    [[nodiscard]] constexpr std::uint32_t lane(unsigned i) const noexcept {
        const std::uint64_t word = i < 2 ? low : high;
        return static_cast<std::uint32_t>(word >> (32 * (i & 1)));
    }
};

/// MurmurHash3_x64_128 (Austin Appleby, public domain).
[[nodiscard]] Hash128 murmur3_x64_128(std::string_view key, std::uint32_t seed) noexcept;

} // namespace rss
