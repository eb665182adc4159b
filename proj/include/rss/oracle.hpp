#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "rss/keyspace.hpp"

namespace rss {

// Plain binary search over the whole dataset. These define the query
// semantics every index path is checked against, and serve as the
// benchmark baseline.

[[nodiscard]] inline std::size_t oracle_lower_bound(const Dataset& data, std::string_view q) noexcept {
    std::size_t a = 0;
    std::size_t b = data.size();
    while (a < b) {
        const std::size_t mid = a + (b - a) / 2;
        if (data[mid] < q) a = mid + 1;
        else b = mid;
    }
    return a;
}

[[nodiscard]] inline std::optional<std::size_t> oracle_lookup(const Dataset& data, std::string_view q) noexcept {
    const std::size_t r = oracle_lower_bound(data, q);
    if (r < data.size() && data[r] == q) return r;
    return std::nullopt;
}

} // namespace rss
