#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rss/keyspace.hpp"

namespace rss::cli {

enum class CorpusKind { Uniform, PrefixHeavy, NaturalIsh };

[[nodiscard]] std::optional<CorpusKind> parse_corpus_kind(std::string_view name) noexcept;
[[nodiscard]] std::string_view to_string(CorpusKind kind) noexcept;

struct CorpusOptions {
    // prefix-heavy only
    std::size_t prefix_count = 8;
    std::size_t prefix_length = 64;
    /// Fraction of keys carrying one of the shared prefixes; the rest are
    /// short random keys.
    double prefix_share = 0.98;
};

/// n distinct keys in ascending byte order, free of 0x00 and 0x0A.
/// Output is a pure function of (kind, n, seed, options).
///
///   uniform      16 random lowercase alphanumerics
///   prefix-heavy one of a few long shared prefixes + random tail
///   natural-ish  3-10 words from a small vocabulary, space separated
[[nodiscard]] std::vector<std::string> generate_corpus(CorpusKind kind, std::size_t n, std::uint64_t seed,
                                                       const CorpusOptions& options = {});

/// count member keys drawn uniformly (with replacement once count > N), shuffled.
[[nodiscard]] std::vector<std::string> member_queries(const Dataset& data, std::size_t count, std::uint64_t seed);

/// count strings absent from data: near-miss edits of members (append,
/// truncate, substitute, bump last byte) mixed with fresh random strings.
[[nodiscard]] std::vector<std::string> non_member_queries(const Dataset& data, std::size_t count,
                                                          std::uint64_t seed);

} // namespace rss::cli
