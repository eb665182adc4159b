#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rss/errors.hpp"

namespace rss {

/// A chunk of up to 16 key bytes packed big-endian. Keys built with K < 16
/// occupy the low 8*K bits.
__extension__ typedef unsigned __int128 ChunkKey;

inline constexpr unsigned kMaxChunkBytes = 16;

/// Bytes that may not appear inside a key: 0x00 pads short chunks, 0x0A
/// separates records on disk.
inline constexpr char kPadByte = '\0';
inline constexpr char kRecordSeparator = '\n';

/// Immutable, strictly ascending array of byte strings stored in one
/// contiguous buffer. Only validate_dataset produces non-empty instances.
class Dataset {
public:
    Dataset() = default;

    [[nodiscard]] std::size_t size() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    [[nodiscard]] bool empty() const noexcept { return size() == 0; }

    [[nodiscard]] std::string_view operator[](std::size_t i) const noexcept {
        return std::string_view(blob_).substr(offsets_[i], offsets_[i + 1] - offsets_[i]);
    }

    /// Sum of key lengths, excluding any per-key bookkeeping.
    [[nodiscard]] std::size_t raw_bytes() const noexcept { return blob_.size(); }
    [[nodiscard]] std::size_t max_key_length() const noexcept { return max_len_; }

private:
    friend Dataset validate_dataset(std::span<const std::string> lines);

    std::string blob_;
    std::vector<std::uint64_t> offsets_;
    std::size_t max_len_ = 0;
};

/// Checks sortedness, uniqueness and forbidden bytes, reporting the first
/// violation by record index. Throws ValidationError.
Dataset validate_dataset(std::span<const std::string> lines);

/// Bytes [depth*k, (depth+1)*k) of s, big-endian, right-padded with 0x00.
[[nodiscard]] ChunkKey extract_chunk(std::string_view s, std::size_t depth, unsigned k) noexcept;

/// True iff s has no bytes at or beyond depth*k.
[[nodiscard]] constexpr bool chunk_exhausted(std::string_view s, std::size_t depth, unsigned k) noexcept {
    return s.size() <= depth * k;
}

/// Renders the low 8*k bits of a chunk as 2*k lowercase hex digits.
[[nodiscard]] std::string chunk_to_hex(ChunkKey chunk, unsigned k);

// Dataset file format: records separated by 0x0A, trailing separator optional.

[[nodiscard]] std::vector<std::string> split_records(std::string_view contents);
[[nodiscard]] std::vector<std::string> read_records(const std::filesystem::path& path);
void write_records(const std::filesystem::path& path, std::span<const std::string> records);

/// Sorts byte-wise and drops duplicates in place.
void sort_dedup(std::vector<std::string>& records);

/// Hook for order-preserving key encodings (e.g. a dictionary compressor)
/// applied before indexing. The same transform must be applied to queries.
class KeyTransform {
public:
    virtual ~KeyTransform() = default;
    [[nodiscard]] virtual std::string encode(std::string_view key) const = 0;
    [[nodiscard]] virtual std::string_view name() const noexcept = 0;
};

class IdentityTransform final : public KeyTransform {
public:
    [[nodiscard]] std::string encode(std::string_view key) const override { return std::string(key); }
    [[nodiscard]] std::string_view name() const noexcept override { return "identity"; }
};

[[nodiscard]] std::vector<std::string> apply_transform(const KeyTransform& transform,
                                                       std::span<const std::string> keys);

} // namespace rss
