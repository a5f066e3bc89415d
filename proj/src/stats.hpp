#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "corpus_model.hpp"
#include "packing.hpp"
#include "sft_builder.hpp"

namespace fincorpus {

struct StatsCounts {
    std::uint64_t docs = 0;
    std::uint64_t chars = 0;
    std::uint64_t tokens = 0;
    std::uint64_t bytes = 0;

    void merge(const StatsCounts& other) {
        docs += other.docs;
        chars += other.chars;
        tokens += other.tokens;
        bytes += other.bytes;
    }
};

// Counts stay exact integers; ratio columns are derived at render time.
struct StatsRow {
    SubDataset source = SubDataset::CP;
    StatsCounts counts;

    double chars_per_doc() const {
        return counts.docs == 0 ? 0.0
                                : static_cast<double>(counts.chars) /
                                      static_cast<double>(counts.docs);
    }
    double tokens_per_doc() const {
        return counts.docs == 0 ? 0.0
                                : static_cast<double>(counts.tokens) /
                                      static_cast<double>(counts.docs);
    }
    double storage_gb() const {
        return static_cast<double>(counts.bytes) / (1024.0 * 1024.0 * 1024.0);
    }
};

struct StatsSection {
    std::string label;
    std::vector<StatsRow> rows;  // fixed sub-dataset order

    StatsCounts totals() const;
    // Percentage of this section's tokens contributed by `row`.
    double pct_tokens(const StatsRow& row) const;
    double chars_per_doc() const;
    double tokens_per_doc() const;
    double storage_gb() const;
};

struct StatsReport {
    std::optional<StatsSection> pretraining;
    std::optional<StatsSection> sft;

    static StatsReport from_counts(const std::map<SubDataset, StatsCounts>& counts);
};

StatsReport compute_stats(std::span<const CleanDocument> docs, const TokenizerSpec& tokenizer,
                          int threads = 0);
StatsReport compute_pair_stats(std::span<const InstructionPair> pairs,
                               const TokenizerSpec& tokenizer, int threads = 0);

// Fixed-column text table, total row first per section.
std::string format_table(const StatsReport& report);

// Machine-readable rows {"source","section","docs","chars","tokens",...}.
std::string stats_to_jsonl(const StatsReport& report);
StatsReport stats_from_jsonl(std::string_view text);

}  // namespace fincorpus
