#include "rss/keyspace.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace rss {

namespace {

std::string describe(ValidationError::Kind kind, std::size_t index, std::size_t offset) {
    std::ostringstream os;
    switch (kind) {
    case ValidationError::Kind::NotSorted:
        os << "NotSorted: record " << index << " is smaller than its predecessor";
        break;
    case ValidationError::Kind::DuplicateKey:
        os << "DuplicateKey: record " << index << " repeats its predecessor";
        break;
    case ValidationError::Kind::ForbiddenByte:
        os << "ForbiddenByte: record " << index << " contains a reserved byte at offset " << offset;
        break;
    }
    return os.str();
}

inline std::uint64_t load_be64(const char* p) noexcept {
    std::uint64_t v;
    std::memcpy(&v, p, sizeof v);
    return __builtin_bswap64(v);
}

} // namespace

ValidationError::ValidationError(Kind kind, std::size_t index, std::size_t offset)
    : std::runtime_error(describe(kind, index, offset)), kind_(kind), index_(index), offset_(offset) {}

Dataset validate_dataset(std::span<const std::string> lines) {
    Dataset ds;
    std::size_t total = 0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string& s = lines[i];
        const auto bad = s.find_first_of(std::string_view("\0\n", 2));
        if (bad != std::string::npos) throw ValidationError(ValidationError::Kind::ForbiddenByte, i, bad);
        if (i > 0) {
            const int c = lines[i - 1].compare(s);
            if (c == 0) throw ValidationError(ValidationError::Kind::DuplicateKey, i);
            if (c > 0) throw ValidationError(ValidationError::Kind::NotSorted, i);
        }
        total += s.size();
    }

    ds.blob_.reserve(total);
    ds.offsets_.reserve(lines.size() + 1);
    ds.offsets_.push_back(0);
    for (const std::string& s : lines) {
        ds.blob_.append(s);
        ds.offsets_.push_back(ds.blob_.size());
        ds.max_len_ = std::max(ds.max_len_, s.size());
    }
    return ds;
}

ChunkKey extract_chunk(std::string_view s, std::size_t depth, unsigned k) noexcept {
    const std::size_t begin = depth * k;
    if (s.size() >= begin + k) {
        if (k == 16) {
            const char* p = s.data() + begin;
            return (static_cast<ChunkKey>(load_be64(p)) << 64) | load_be64(p + 8);
        }
        if (k == 8) return load_be64(s.data() + begin);
    }
    ChunkKey v = 0;
    for (std::size_t i = begin; i < begin + k; ++i) {
        const unsigned char byte = i < s.size() ? static_cast<unsigned char>(s[i]) : 0;
        v = (v << 8) | byte;
    }
    return v;
}

std::string chunk_to_hex(ChunkKey chunk, unsigned k) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(2 * static_cast<std::size_t>(k), '0');
    for (std::size_t i = out.size(); i-- > 0;) {
        out[i] = digits[static_cast<unsigned>(chunk & 0xF)];
        chunk >>= 4;
    }
    return out;
}

std::vector<std::string> split_records(std::string_view contents) {
    std::vector<std::string> records;
    std::size_t pos = 0;
    while (pos < contents.size()) {
        const auto nl = contents.find(kRecordSeparator, pos);
        if (nl == std::string_view::npos) {
            records.emplace_back(contents.substr(pos));
            break;
        }
        records.emplace_back(contents.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return records;
}

std::vector<std::string> read_records(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string contents((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw std::runtime_error("read failed: " + path.string());
    return split_records(contents);
}

void write_records(const std::filesystem::path& path, std::span<const std::string> records) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    for (const std::string& r : records) {
        out.write(r.data(), static_cast<std::streamsize>(r.size()));
        out.put(kRecordSeparator);
    }
    if (!out.flush()) throw std::runtime_error("write failed: " + path.string());
}

void sort_dedup(std::vector<std::string>& records) {
    std::sort(records.begin(), records.end());
    records.erase(std::unique(records.begin(), records.end()), records.end());
}

std::vector<std::string> apply_transform(const KeyTransform& transform, std::span<const std::string> keys) {
    std::vector<std::string> out;
    out.reserve(keys.size());
    for (const std::string& k : keys) out.push_back(transform.encode(k));
    return out;
}

} // namespace rss
