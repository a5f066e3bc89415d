#include "stats.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <sstream>

#include "errors.hpp"
#include "parallel.hpp"
#include "records.hpp"
#include "utf8.hpp"

namespace fincorpus {

StatsCounts StatsSection::totals() const {
    StatsCounts t;
    for (const auto& row : rows) t.merge(row.counts);
    return t;
}

double StatsSection::pct_tokens(const StatsRow& row) const {
    const auto total = totals().tokens;
    if (total == 0) return 0.0;
    return 100.0 * static_cast<double>(row.counts.tokens) / static_cast<double>(total);
}

double StatsSection::chars_per_doc() const {
    const auto t = totals();
    return t.docs == 0 ? 0.0 : static_cast<double>(t.chars) / static_cast<double>(t.docs);
}

double StatsSection::tokens_per_doc() const {
    const auto t = totals();
    return t.docs == 0 ? 0.0 : static_cast<double>(t.tokens) / static_cast<double>(t.docs);
}

double StatsSection::storage_gb() const {
    return static_cast<double>(totals().bytes) / (1024.0 * 1024.0 * 1024.0);
}

StatsReport StatsReport::from_counts(const std::map<SubDataset, StatsCounts>& counts) {
    StatsReport report;
    StatsSection pre{"Pretraining", {}};
    StatsSection sft{"Supervised fine-tuning", {}};
    for (const SubDataset s : kPretrainingSets) {
        if (const auto it = counts.find(s); it != counts.end()) {
            pre.rows.push_back(StatsRow{s, it->second});
        }
    }
    for (const SubDataset s : kSftSets) {
        if (const auto it = counts.find(s); it != counts.end()) {
            sft.rows.push_back(StatsRow{s, it->second});
        }
    }
    if (!pre.rows.empty()) report.pretraining = std::move(pre);
    if (!sft.rows.empty()) report.sft = std::move(sft);
    return report;
}

StatsReport compute_stats(std::span<const CleanDocument> docs, const TokenizerSpec& tokenizer,
                          int threads) {
    // Counters merge under a lock; token counting dominates, so contention
    // is negligible and the merge stays a commutative-monoid fold.
    std::map<SubDataset, StatsCounts> merged;
    std::mutex merge_mutex;
    parallel_for(docs.size(), threads, [&](std::size_t i) {
        const auto& doc = docs[i];
        StatsCounts c;
        c.docs = 1;
        c.chars = doc.char_count;
        c.tokens = tokenizer.count_tokens(doc.clean_text);
        c.bytes = doc.clean_text.size();
        std::lock_guard<std::mutex> lock(merge_mutex);
        merged[doc.source].merge(c);
    });
    return StatsReport::from_counts(merged);
}

StatsReport compute_pair_stats(std::span<const InstructionPair> pairs,
                               const TokenizerSpec& tokenizer, int threads) {
    std::map<SubDataset, StatsCounts> merged;
    std::mutex merge_mutex;
    parallel_for(pairs.size(), threads, [&](std::size_t i) {
        const auto& pair = pairs[i];
        StatsCounts c;
        c.docs = 1;
        c.chars = utf8::scalar_count(pair.instruction) + utf8::scalar_count(pair.input) +
                  utf8::scalar_count(pair.output);
        c.tokens = tokenizer.count_tokens(pair.instruction) +
                   tokenizer.count_tokens(pair.input) + tokenizer.count_tokens(pair.output);
        c.bytes = pair.instruction.size() + pair.input.size() + pair.output.size();
        std::lock_guard<std::mutex> lock(merge_mutex);
        merged[pair.task].merge(c);
    });
    return StatsReport::from_counts(merged);
}

namespace {

std::string with_separators(std::uint64_t v) {
    std::string digits = std::to_string(v);
    std::string out;
    out.reserve(digits.size() + digits.size() / 3);
    const std::size_t first = digits.size() % 3 == 0 ? 3 : digits.size() % 3;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i != 0 && (i - first) % 3 == 0 && i >= first) out.push_back(',');
        out.push_back(digits[i]);
    }
    return out;
}

std::string rounded_ratio(double v) {
    return with_separators(static_cast<std::uint64_t>(std::llround(v)));
}

std::string fixed2(double v) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(2) << v;
    return ss.str();
}

void render_section(std::ostringstream& out, const StatsSection& section,
                    const std::vector<std::size_t>& widths) {
    auto cell = [&](const std::string& text, std::size_t col, bool left) {
        out << (left ? std::left : std::right) << std::setw(static_cast<int>(widths[col]))
            << text;
        out << (col + 1 == widths.size() ? "\n" : "  ");
    };
    const auto totals = section.totals();
    cell(section.label, 0, true);
    cell(with_separators(totals.docs), 1, false);
    cell(with_separators(totals.chars), 2, false);
    cell(with_separators(totals.tokens), 3, false);
    cell(rounded_ratio(section.chars_per_doc()), 4, false);
    cell(rounded_ratio(section.tokens_per_doc()), 5, false);
    cell(fixed2(totals.tokens == 0 ? 0.0 : 100.0), 6, false);
    cell(fixed2(section.storage_gb()), 7, false);
    for (const auto& row : section.rows) {
        cell(std::string(to_tag(row.source)), 0, true);
        cell(with_separators(row.counts.docs), 1, false);
        cell(with_separators(row.counts.chars), 2, false);
        cell(with_separators(row.counts.tokens), 3, false);
        cell(rounded_ratio(row.chars_per_doc()), 4, false);
        cell(rounded_ratio(row.tokens_per_doc()), 5, false);
        cell(fixed2(section.pct_tokens(row)), 6, false);
        cell(fixed2(row.storage_gb()), 7, false);
    }
}

}  // namespace

std::string format_table(const StatsReport& report) {
    if (!report.pretraining.has_value() && !report.sft.has_value()) {
        throw_data("format_table: no rows to render");
    }
    const std::vector<std::string> headers = {"Dataset",   "Docs",       "Chars",  "Tokens",
                                              "Chars/Doc", "Tokens/Doc", "%Token", "Storage(GB)"};
    std::vector<std::size_t> widths(headers.size());
    for (std::size_t i = 0; i < headers.size(); ++i) widths[i] = headers[i].size();
    auto grow = [&](const StatsSection& section) {
        const auto totals = section.totals();
        widths[0] = std::max(widths[0], section.label.size());
        widths[1] = std::max(widths[1], with_separators(totals.docs).size());
        widths[2] = std::max(widths[2], with_separators(totals.chars).size());
        widths[3] = std::max(widths[3], with_separators(totals.tokens).size());
        widths[4] = std::max(widths[4], rounded_ratio(section.chars_per_doc()).size());
        widths[5] = std::max(widths[5], rounded_ratio(section.tokens_per_doc()).size());
        widths[7] = std::max(widths[7], fixed2(section.storage_gb()).size());
        for (const auto& row : section.rows) {
            widths[1] = std::max(widths[1], with_separators(row.counts.docs).size());
            widths[2] = std::max(widths[2], with_separators(row.counts.chars).size());
            widths[3] = std::max(widths[3], with_separators(row.counts.tokens).size());
            widths[4] = std::max(widths[4], rounded_ratio(row.chars_per_doc()).size());
            widths[5] = std::max(widths[5], rounded_ratio(row.tokens_per_doc()).size());
            widths[7] = std::max(widths[7], fixed2(row.storage_gb()).size());
        }
    };
    if (report.pretraining) grow(*report.pretraining);
    if (report.sft) grow(*report.sft);

    std::ostringstream out;
    for (std::size_t i = 0; i < headers.size(); ++i) {
        out << (i == 0 ? std::left : std::right) << std::setw(static_cast<int>(widths[i]))
            << headers[i] << (i + 1 == headers.size() ? "\n" : "  ");
    }
    std::size_t total_width = 0;
    for (const auto w : widths) total_width += w;
    out << std::string(total_width + 2 * (widths.size() - 1), '-') << '\n';
    if (report.pretraining) render_section(out, *report.pretraining, widths);
    if (report.sft) {
        if (report.pretraining) {
            out << std::string(total_width + 2 * (widths.size() - 1), '-') << '\n';
        }
        render_section(out, *report.sft, widths);
    }
    return out.str();
}

std::string stats_to_jsonl(const StatsReport& report) {
    std::ostringstream out;
    auto emit = [&](const StatsSection& section, const char* section_name) {
        const auto totals = section.totals();
        ojson total_row;
        total_row["source"] = "TOTAL";
        total_row["section"] = section_name;
        total_row["docs"] = totals.docs;
        total_row["chars"] = totals.chars;
        total_row["tokens"] = totals.tokens;
        total_row["bytes"] = totals.bytes;
        total_row["chars_per_doc"] = section.chars_per_doc();
        total_row["tokens_per_doc"] = section.tokens_per_doc();
        total_row["pct_tokens"] = totals.tokens == 0 ? 0.0 : 100.0;
        total_row["storage_gb"] = section.storage_gb();
        out << total_row.dump() << '\n';
        for (const auto& row : section.rows) {
            ojson j;
            j["source"] = to_tag(row.source);
            j["section"] = section_name;
            j["docs"] = row.counts.docs;
            j["chars"] = row.counts.chars;
            j["tokens"] = row.counts.tokens;
            j["bytes"] = row.counts.bytes;
            j["chars_per_doc"] = row.chars_per_doc();
            j["tokens_per_doc"] = row.tokens_per_doc();
            j["pct_tokens"] = section.pct_tokens(row);
            j["storage_gb"] = row.storage_gb();
            out << j.dump() << '\n';
        }
    };
    if (report.pretraining) emit(*report.pretraining, "pretraining");
    if (report.sft) emit(*report.sft, "sft");
    return out.str();
}

StatsReport stats_from_jsonl(std::string_view text) {
    std::map<SubDataset, StatsCounts> counts;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto nl = text.find('\n', pos);
        const auto line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos
                                                                        : nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() : nl + 1;
        if (line.empty()) continue;
        ojson j = ojson::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) throw_data("stats: malformed row");
        const std::string source = j.value("source", "");
        if (source == "TOTAL") continue;  // totals are recomputed
        const auto tag = parse_tag(source);
        if (!tag.has_value()) throw_data("stats: unknown source '" + source + "'");
        StatsCounts c;
        c.docs = j.value("docs", std::uint64_t{0});
        c.chars = j.value("chars", std::uint64_t{0});
        c.tokens = j.value("tokens", std::uint64_t{0});
        c.bytes = j.value("bytes", std::uint64_t{0});
        counts[*tag] = c;
    }
    return StatsReport::from_counts(counts);
}

}  // namespace fincorpus
