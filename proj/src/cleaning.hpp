#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corpus_model.hpp"

namespace fincorpus {

struct CleanReport {
    std::uint64_t input_docs = 0;
    std::uint64_t kept = 0;
    std::uint64_t dropped_length = 0;
    std::uint64_t dropped_garbled = 0;
    std::uint64_t dropped_banned = 0;
    std::uint64_t chars_removed = 0;

    void merge(const CleanReport& other) {
        input_docs += other.input_docs;
        kept += other.kept;
        dropped_length += other.dropped_length;
        dropped_garbled += other.dropped_garbled;
        dropped_banned += other.dropped_banned;
        chars_removed += other.chars_removed;
    }
};

// Removes table/figure remnants: box-drawing runs, lines that are mostly
// digits/punctuation (>60% of non-space scalars), repeated separator lines,
// control characters other than newline, and replacement characters.
// Prose scalars (CJK, Latin, digits, standard punctuation) pass through.
std::string strip_artifacts(std::string_view text);
std::u32string strip_artifacts(std::u32string_view scalars);

// A scalar is garbled when it belongs to no allow-listed block: CJK,
// Latin, common punctuation, digits, currency, or whitespace.
bool is_garbled_scalar(char32_t c);

// garbled scalars / total scalars; empty text is defined as 1.0.
double garbled_ratio(std::string_view text);
double garbled_ratio(std::u32string_view scalars);

// Traditional -> simplified Chinese via the bundled 1:1 character table.
// Scalars without a mapping pass through; output length equals input length.
char32_t to_simplified_scalar(char32_t c);
std::string to_simplified(std::string_view text);
std::u32string to_simplified(std::u32string_view scalars);

// Substring dictionary matcher (Aho-Corasick over bytes).
class BannedWordIndex {
public:
    BannedWordIndex();
    ~BannedWordIndex();
    BannedWordIndex(BannedWordIndex&&) noexcept;
    BannedWordIndex& operator=(BannedWordIndex&&) noexcept;

    // One term per line; blank lines and '#' comments ignored.
    static BannedWordIndex from_file(const std::string& path);
    static BannedWordIndex from_terms(const std::vector<std::string>& terms);

    // Distinct dictionary terms occurring as substrings, in dictionary order.
    std::vector<std::string> find_all(std::string_view text) const;
    bool contains_any(std::string_view text) const;

    std::size_t size() const;
    bool empty() const { return size() == 0; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct BannedMatch {
    bool matched = false;
    std::vector<std::string> terms;
};

BannedMatch contains_banned(std::string_view text, const BannedWordIndex& dictionary);

enum class DropReason { length, garbled, banned };
std::string_view to_string(DropReason reason);

struct CleanOutcome {
    std::optional<CleanDocument> doc;     // set when kept
    std::optional<DropReason> drop;       // set when dropped
    std::uint64_t chars_removed = 0;      // scalars removed by cleaning
};

// Fixed pipeline: strip_artifacts -> to_simplified (if enabled) -> garbled
// check (drop when ratio > max, else remove garbled scalars) -> banned check
// -> length check against the post-cleaning scalar count.
// `dictionary` may be null only when the policy does not filter banned words.
CleanOutcome apply_policy(const RawDocument& doc, const SourcePolicy& policy,
                          const BannedWordIndex* dictionary);

}  // namespace fincorpus
