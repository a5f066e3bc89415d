#include "cleaning.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <unordered_map>
#include <utility>

#include "errors.hpp"
#include "utf8.hpp"

namespace fincorpus {

namespace {

#include "t2s_table.inc"

bool is_box_drawing(char32_t c) {
    // Box drawing + block elements + geometric table fills.
    return c >= 0x2500 && c <= 0x259F;
}

bool is_control(char32_t c) {
    return c < 0x20 || c == 0x7F || (c >= 0x80 && c <= 0x9F);
}

bool is_ws(char32_t c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == 0x00A0 || c == 0x3000;
}

bool is_letterlike(char32_t c) {
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) return true;
    if (c >= 0x00C0 && c <= 0x024F) return true;              // Latin supplements
    if (c >= 0x3400 && c <= 0x4DBF) return true;              // CJK ext A
    if (c >= 0x4E00 && c <= 0x9FFF) return true;              // CJK unified
    if (c >= 0xF900 && c <= 0xFAFF) return true;              // CJK compatibility
    if (c >= 0xFF21 && c <= 0xFF3A) return true;              // fullwidth A-Z
    if (c >= 0xFF41 && c <= 0xFF5A) return true;              // fullwidth a-z
    if (c >= 0x20000 && c <= 0x2EBEF) return true;            // CJK ext B..F
    return false;
}

bool is_digit_scalar(char32_t c) {
    return (c >= '0' && c <= '9') || (c >= 0xFF10 && c <= 0xFF19);
}

}  // namespace

std::u32string strip_artifacts(std::u32string_view scalars) {
    std::u32string out;
    out.reserve(scalars.size());
    std::u32string line;
    line.reserve(256);
    bool first_line = true;

    auto flush_line = [&](std::u32string_view raw) {
        // Per-scalar removal first: box drawing, controls, replacement chars.
        line.clear();
        bool had_content = false;
        for (char32_t c : raw) {
            if (c == '\r') continue;
            if (!is_ws(c)) had_content = true;
            if (is_box_drawing(c) || is_control(c) || c == 0xFFFD) continue;
            line.push_back(c);
        }
        std::uint64_t nonspace = 0;
        std::uint64_t digit_punct = 0;
        char32_t repeated = 0;
        bool all_same = true;
        for (char32_t c : line) {
            if (is_ws(c)) continue;
            if (nonspace == 0) {
                repeated = c;
            } else if (c != repeated) {
                all_same = false;
            }
            ++nonspace;
            if (is_digit_scalar(c) || (!is_letterlike(c))) ++digit_punct;
        }
        bool drop = false;
        if (had_content && nonspace == 0) {
            drop = true;  // line was pure remnant scalars
        } else if (nonspace >= 3 && all_same && !is_letterlike(repeated) &&
                   !is_digit_scalar(repeated)) {
            drop = true;  // separator line ("----", "====", "····")
        } else if (nonspace > 0 &&
                   static_cast<double>(digit_punct) > 0.6 * static_cast<double>(nonspace)) {
            drop = true;  // table-like line
        }
        if (!drop) {
            if (!first_line) out.push_back(U'\n');
            out.append(line);
            first_line = false;
        }
    };

    std::size_t start = 0;
    for (std::size_t i = 0; i <= scalars.size(); ++i) {
        if (i == scalars.size() || scalars[i] == U'\n') {
            flush_line(scalars.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

std::string strip_artifacts(std::string_view text) {
    return utf8::encode(strip_artifacts(utf8::decode(text)));
}

bool is_garbled_scalar(char32_t c) {
    if (c == '\n' || c == '\t' || c == '\r' || c == ' ') return false;
    if (c >= 0x21 && c <= 0x7E) return false;        // ASCII printable
    if (c >= 0xA0 && c <= 0xFF) return false;        // Latin-1 printable
    if (c >= 0x0100 && c <= 0x017F) return false;    // Latin extended A
    if (c >= 0x2000 && c <= 0x206F) {                // general punctuation,
        if (c >= 0x200B && c <= 0x200F) return true;  // minus invisible
        if (c >= 0x2028 && c <= 0x202E) return true;  // format characters
        if (c >= 0x2060) return true;
        return false;
    }
    if (c >= 0x20A0 && c <= 0x20CF) return false;    // currency signs
    if (c >= 0x2100 && c <= 0x214F) return false;    // letterlike (℃, №, ™)
    if (c >= 0x3000 && c <= 0x303F) return false;    // CJK symbols/punctuation
    if (c >= 0x3400 && c <= 0x4DBF) return false;    // CJK ext A
    if (c >= 0x4E00 && c <= 0x9FFF) return false;    // CJK unified
    if (c >= 0xF900 && c <= 0xFAFF) return false;    // CJK compatibility
    if (c >= 0xFF01 && c <= 0xFF64) return false;    // fullwidth forms
    if (c >= 0xFFE0 && c <= 0xFFE6) return false;    // fullwidth currency
    if (c >= 0x20000 && c <= 0x2EBEF) return false;  // CJK ext B..F
    if (c >= 0x2F800 && c <= 0x2FA1F) return false;  // CJK compat supplement
    return true;
}

double garbled_ratio(std::u32string_view scalars) {
    if (scalars.empty()) return 1.0;
    std::size_t garbled = 0;
    for (char32_t c : scalars) {
        if (is_garbled_scalar(c)) ++garbled;
    }
    return static_cast<double>(garbled) / static_cast<double>(scalars.size());
}

double garbled_ratio(std::string_view text) { return garbled_ratio(utf8::decode(text)); }

char32_t to_simplified_scalar(char32_t c) {
    constexpr std::size_t n = sizeof(kTradToSimplified) / sizeof(kTradToSimplified[0]);
    const auto* begin = kTradToSimplified;
    const auto* end = kTradToSimplified + n;
    const auto* it = std::lower_bound(begin, end, c, [](const auto& pair, char32_t key) {
        return pair.first < key;
    });
    if (it != end && it->first == c) return it->second;
    return c;
}

std::u32string to_simplified(std::u32string_view scalars) {
    std::u32string out(scalars);
    for (auto& c : out) c = to_simplified_scalar(c);
    return out;
}

std::string to_simplified(std::string_view text) {
    return utf8::encode(to_simplified(utf8::decode(text)));
}

// --- banned-word matching -------------------------------------------------

struct BannedWordIndex::Impl {
    struct Node {
        std::unordered_map<unsigned char, std::int32_t> next;
        std::int32_t fail = 0;
        std::vector<std::int32_t> outputs;  // indices into terms
    };

    std::vector<Node> nodes;
    std::vector<std::string> terms;

    Impl() { nodes.emplace_back(); }

    void add_term(const std::string& term) {
        std::int32_t cur = 0;
        for (unsigned char b : term) {
            auto it = nodes[static_cast<std::size_t>(cur)].next.find(b);
            if (it == nodes[static_cast<std::size_t>(cur)].next.end()) {
                nodes.emplace_back();
                const auto idx = static_cast<std::int32_t>(nodes.size() - 1);
                nodes[static_cast<std::size_t>(cur)].next.emplace(b, idx);
                cur = idx;
            } else {
                cur = it->second;
            }
        }
        nodes[static_cast<std::size_t>(cur)].outputs.push_back(
            static_cast<std::int32_t>(terms.size()));
        terms.push_back(term);
    }

    void build_links() {
        std::queue<std::int32_t> q;
        for (auto& [b, child] : nodes[0].next) {
            nodes[static_cast<std::size_t>(child)].fail = 0;
            q.push(child);
        }
        while (!q.empty()) {
            const auto u = q.front();
            q.pop();
            for (auto& [b, v] : nodes[static_cast<std::size_t>(u)].next) {
                std::int32_t f = nodes[static_cast<std::size_t>(u)].fail;
                while (f != 0 && nodes[static_cast<std::size_t>(f)].next.count(b) == 0) {
                    f = nodes[static_cast<std::size_t>(f)].fail;
                }
                const auto it = nodes[static_cast<std::size_t>(f)].next.find(b);
                const std::int32_t link = (it != nodes[static_cast<std::size_t>(f)].next.end() &&
                                           it->second != v)
                                              ? it->second
                                              : 0;
                nodes[static_cast<std::size_t>(v)].fail = link;
                const auto& fo = nodes[static_cast<std::size_t>(link)].outputs;
                auto& vo = nodes[static_cast<std::size_t>(v)].outputs;
                vo.insert(vo.end(), fo.begin(), fo.end());
                q.push(v);
            }
        }
    }
};

BannedWordIndex::BannedWordIndex() : impl_(std::make_unique<Impl>()) {}
BannedWordIndex::~BannedWordIndex() = default;
BannedWordIndex::BannedWordIndex(BannedWordIndex&&) noexcept = default;
BannedWordIndex& BannedWordIndex::operator=(BannedWordIndex&&) noexcept = default;

BannedWordIndex BannedWordIndex::from_terms(const std::vector<std::string>& terms) {
    BannedWordIndex index;
    for (const auto& t : terms) {
        if (!t.empty()) index.impl_->add_term(t);
    }
    index.impl_->build_links();
    return index;
}

BannedWordIndex BannedWordIndex::from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_config("cannot open banned-word dictionary: " + path);
    std::vector<std::string> terms;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        terms.push_back(line);
    }
    return from_terms(terms);
}

std::size_t BannedWordIndex::size() const { return impl_->terms.size(); }

std::vector<std::string> BannedWordIndex::find_all(std::string_view text) const {
    const auto& nodes = impl_->nodes;
    std::vector<bool> hit(impl_->terms.size(), false);
    std::int32_t cur = 0;
    for (unsigned char b : text) {
        while (cur != 0 && nodes[static_cast<std::size_t>(cur)].next.count(b) == 0) {
            cur = nodes[static_cast<std::size_t>(cur)].fail;
        }
        const auto it = nodes[static_cast<std::size_t>(cur)].next.find(b);
        cur = (it != nodes[static_cast<std::size_t>(cur)].next.end()) ? it->second : 0;
        for (std::int32_t t : nodes[static_cast<std::size_t>(cur)].outputs) {
            hit[static_cast<std::size_t>(t)] = true;
        }
    }
    std::vector<std::string> out;
    for (std::size_t i = 0; i < hit.size(); ++i) {
        if (hit[i]) out.push_back(impl_->terms[i]);
    }
    return out;
}

bool BannedWordIndex::contains_any(std::string_view text) const {
    const auto& nodes = impl_->nodes;
    std::int32_t cur = 0;
    for (unsigned char b : text) {
        while (cur != 0 && nodes[static_cast<std::size_t>(cur)].next.count(b) == 0) {
            cur = nodes[static_cast<std::size_t>(cur)].fail;
        }
        const auto it = nodes[static_cast<std::size_t>(cur)].next.find(b);
        cur = (it != nodes[static_cast<std::size_t>(cur)].next.end()) ? it->second : 0;
        if (!nodes[static_cast<std::size_t>(cur)].outputs.empty()) return true;
    }
    return false;
}

BannedMatch contains_banned(std::string_view text, const BannedWordIndex& dictionary) {
    BannedMatch m;
    m.terms = dictionary.find_all(text);
    m.matched = !m.terms.empty();
    return m;
}

std::string_view to_string(DropReason reason) {
    switch (reason) {
        case DropReason::length: return "length";
        case DropReason::garbled: return "garbled";
        case DropReason::banned: return "banned";
    }
    return "unknown";
}

CleanOutcome apply_policy(const RawDocument& doc, const SourcePolicy& policy,
                          const BannedWordIndex* dictionary) {
    CleanOutcome outcome;
    const std::u32string original = utf8::decode(doc.text);
    std::u32string scalars = strip_artifacts(std::u32string_view(original));
    if (policy.to_simplified) {
        for (auto& c : scalars) c = to_simplified_scalar(c);
    }
    const double ratio = garbled_ratio(std::u32string_view(scalars));
    if (policy.garbled_ratio_max.has_value() && ratio > *policy.garbled_ratio_max) {
        outcome.drop = DropReason::garbled;
        outcome.chars_removed = original.size() - scalars.size();
        return outcome;
    }
    std::u32string cleaned;
    cleaned.reserve(scalars.size());
    for (char32_t c : scalars) {
        if (!is_garbled_scalar(c)) cleaned.push_back(c);
    }
    outcome.chars_removed = original.size() - cleaned.size();
    const std::string clean_text = utf8::encode(cleaned);
    if (policy.banned_word_filter) {
        if (dictionary == nullptr) {
            throw_config("banned_word_filter enabled for " + std::string(to_tag(policy.source)) +
                         " but no dictionary loaded");
        }
        if (dictionary->contains_any(clean_text)) {
            outcome.drop = DropReason::banned;
            return outcome;
        }
    }
    if (cleaned.size() < policy.min_chars) {
        outcome.drop = DropReason::length;
        return outcome;
    }
    CleanDocument out;
    out.id = doc.id;
    out.source = doc.source;
    out.timestamp = doc.timestamp;
    out.text = doc.text;
    out.metadata = doc.metadata;
    out.clean_text = clean_text;
    out.char_count = cleaned.size();
    out.garbled_ratio = ratio;
    outcome.doc = std::move(out);
    return outcome;
}

}  // namespace fincorpus
