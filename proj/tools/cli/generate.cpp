#include "cli/generate.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <stdexcept>

#include "rss/oracle.hpp"

namespace rss::cli {

namespace {

constexpr std::string_view kAlnum = "abcdefghijklmnopqrstuvwxyz0123456789";
constexpr std::string_view kPathChars = "abcdefghijklmnopqrstuvwxyz0123456789/._-";

constexpr std::array<std::string_view, 128> kVocabulary = {
    "a",        "about",    "after",   "again",    "against", "air",      "all",      "an",       "and",
    "announce", "area",     "art",     "as",       "at",      "back",     "bank",     "be",       "best",
    "big",      "bill",     "book",    "but",      "by",      "call",     "can",      "car",      "case",
    "change",   "city",     "come",    "council",  "court",   "day",      "deal",     "down",     "early",
    "end",      "event",    "face",    "fall",     "family",  "find",     "fire",     "first",    "for",
    "free",     "from",     "game",    "get",      "give",    "good",     "great",    "group",    "health",
    "help",     "high",     "home",    "how",      "in",      "is",       "job",      "just",     "know",
    "last",     "law",      "life",    "local",    "long",    "make",     "man",      "market",   "may",
    "more",     "music",    "new",     "news",     "night",   "not",      "now",      "of",       "off",
    "old",      "on",       "one",     "open",     "or",      "out",      "over",     "party",    "people",
    "plan",     "police",   "power",   "report",   "review",  "right",    "road",     "say",      "school",
    "season",   "see",      "show",    "state",    "still",   "story",    "study",    "take",     "team",
    "the",      "their",    "time",    "to",       "top",     "up",       "vote",     "war",      "water",
    "way",      "week",     "what",    "when",     "who",     "why",      "will",     "win",      "with",
    "woman",    "world"};

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    // Modulo reduction keeps output identical across standard libraries.
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
    std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    char pick(std::string_view alphabet) { return alphabet[below(alphabet.size())]; }

    std::string random_string(std::string_view alphabet, std::size_t len) {
        std::string s(len, ' ');
        for (char& c : s) c = pick(alphabet);
        return s;
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 engine_;
};

class Generator {
public:
    Generator(CorpusKind kind, std::uint64_t seed, const CorpusOptions& options)
        : kind_(kind), rng_(seed), options_(options) {
        if (kind_ == CorpusKind::PrefixHeavy) {
            for (std::size_t i = 0; i < options_.prefix_count; ++i) {
                std::string p = "http://" + rng_.random_string(kAlnum, 8) + ".example.org/";
                while (p.size() < options_.prefix_length) p.push_back(rng_.pick(kPathChars));
                p.resize(options_.prefix_length);
                prefixes_.push_back(std::move(p));
            }
        }
    }

    std::string next() {
        switch (kind_) {
        case CorpusKind::Uniform:
            return rng_.random_string(kAlnum, 16);
        case CorpusKind::PrefixHeavy:
            if (prefixes_.empty() || rng_.unit() >= options_.prefix_share)
                return rng_.random_string(kAlnum, rng_.between(16, 40));
            return prefixes_[rng_.below(prefixes_.size())] + rng_.random_string(kAlnum, rng_.between(8, 24));
        case CorpusKind::NaturalIsh: {
            std::string s;
            const std::size_t words = rng_.between(3, 10);
            for (std::size_t i = 0; i < words; ++i) {
                if (i > 0) s.push_back(' ');
                s.append(kVocabulary[rng_.below(kVocabulary.size())]);
            }
            return s;
        }
        }
        return {};
    }

private:
    CorpusKind kind_;
    Rng rng_;
    CorpusOptions options_;
    std::vector<std::string> prefixes_;
};

} // namespace

std::optional<CorpusKind> parse_corpus_kind(std::string_view name) noexcept {
    if (name == "uniform") return CorpusKind::Uniform;
    if (name == "prefix-heavy") return CorpusKind::PrefixHeavy;
    if (name == "natural-ish") return CorpusKind::NaturalIsh;
    return std::nullopt;
}

std::string_view to_string(CorpusKind kind) noexcept {
    switch (kind) {
    case CorpusKind::Uniform: return "uniform";
    case CorpusKind::PrefixHeavy: return "prefix-heavy";
    case CorpusKind::NaturalIsh: return "natural-ish";
    }
    return "unknown";
}

std::vector<std::string> generate_corpus(CorpusKind kind, std::size_t n, std::uint64_t seed,
                                         const CorpusOptions& options) {
    if (n == 0) throw std::invalid_argument("corpus size must be at least 1");
    Generator gen(kind, seed, options);
    std::vector<std::string> keys;
    keys.reserve(n);
    while (keys.size() < n) {
        const std::size_t missing = n - keys.size();
        for (std::size_t i = 0; i < missing; ++i) keys.push_back(gen.next());
        sort_dedup(keys);
    }
    return keys;
}

std::vector<std::string> member_queries(const Dataset& data, std::size_t count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::string> out;
    out.reserve(count);
    if (data.empty()) return out;
    if (count <= data.size()) {
        std::vector<std::size_t> ranks(data.size());
        for (std::size_t i = 0; i < ranks.size(); ++i) ranks[i] = i;
        rng.shuffle(ranks);
        for (std::size_t i = 0; i < count; ++i) out.emplace_back(data[ranks[i]]);
    } else {
        for (std::size_t i = 0; i < count; ++i) out.emplace_back(data[rng.below(data.size())]);
    }
    return out;
}

std::vector<std::string> non_member_queries(const Dataset& data, std::size_t count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::string> out;
    out.reserve(count);
    const std::size_t max_attempts = 100 * count + 1000;
    for (std::size_t attempt = 0; out.size() < count && attempt < max_attempts; ++attempt) {
        std::string q;
        const std::size_t mode = data.empty() ? 4 : rng.below(5);
        if (mode < 4) q = std::string(data[rng.below(data.size())]);
        switch (mode) {
        case 0:
            q.push_back(rng.pick(kAlnum));
            break;
        case 1:
            q.resize(q.empty() ? 0 : rng.below(q.size()));
            break;
        case 2:
            if (q.empty()) q.push_back(rng.pick(kAlnum));
            else q[rng.below(q.size())] = rng.pick(kAlnum);
            break;
        case 3:
            if (!q.empty() && static_cast<unsigned char>(q.back()) < 0xFF) ++q.back();
            else q.push_back('~');
            break;
        default:
            q = rng.random_string(kPathChars, rng.between(0, 40));
            break;
        }
        if (!oracle_lookup(data, q)) out.push_back(std::move(q));
    }
    if (out.size() < count) throw std::runtime_error("could not generate enough non-member queries");
    return out;
}

} // namespace rss::cli
