#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "corpus_model.hpp"
#include "packing.hpp"

namespace fincorpus {

// One supervised fine-tuning record. `slots` and `content_slot` keep enough
// state to re-render the instruction during truncation; they are not part of
// the serialized schema.
struct InstructionPair {
    SubDataset task = SubDataset::SA;
    std::string instruction;
    std::string input;
    std::string output;
    std::vector<std::string> provenance;

    std::map<std::string, std::string> slots;
    std::string content_slot;
};

nlohmann::ordered_json pair_to_json(const InstructionPair& pair);
InstructionPair pair_from_json(const nlohmann::ordered_json& j);

// Task prompt template with [slot] placeholders.
std::string_view template_for(SubDataset task);
std::vector<std::string> template_slots(SubDataset task);

// Substitutes every [slot]; a placeholder without a value is a data error
// naming the slot. No placeholder survives in the result.
std::string render_prompt(SubDataset task, const std::map<std::string, std::string>& slots);

struct BuildLog {
    std::uint64_t built = 0;
    std::uint64_t skipped = 0;
    std::uint64_t errors = 0;
    std::vector<std::pair<std::string, std::string>> entries;  // (record id, reason)

    void skip(const std::string& id, const std::string& reason) {
        ++skipped;
        entries.emplace_back(id, reason);
    }
    void error(const std::string& id, const std::string& reason) {
        ++errors;
        entries.emplace_back(id, reason);
    }
};

// rating<TAB>sentiment lines; sentiments restricted to Positive/Negative/Neutral.
struct RatingMap {
    std::map<std::string, std::string> ratings;

    static RatingMap from_file(const std::string& path);
    std::optional<std::string> map(const std::string& rating) const;
};

// Research reports (2000..3000 chars) whose invest rating maps to a sentiment.
std::vector<InstructionPair> build_sa_from_reports(std::span<const CleanDocument> reports,
                                                   const RatingMap& rating_map, BuildLog* log);

// Externally labeled posts longer than 100 chars; labels outside the
// three-value set are record-level errors.
std::vector<InstructionPair> build_sa_from_posts(std::span<const CleanDocument> posts,
                                                 BuildLog* log);

struct EdOptions {
    int negatives_per_positive = 1;
    std::uint64_t seed = 0;
};

// One pair per (document, queried category). Positive queries answer with the
// detected event; sampled negative queries answer "None".
std::vector<InstructionPair> build_ed(std::span<const CleanDocument> docs,
                                      const EventTaxonomy& taxonomy, const EdOptions& options,
                                      BuildLog* log);

// Topic decomposition: title -> outline.
std::vector<InstructionPair> build_td(std::span<const CleanDocument> reports, BuildLog* log);

// Report summarization: body -> conclusion + "\n" + abstract.
std::vector<InstructionPair> build_rs(std::span<const CleanDocument> reports, BuildLog* log);

struct QaTurn {
    std::string question;
    std::string answer;
};

struct QaRecord {
    std::string id;
    std::string paragraph;
    std::vector<QaTurn> history;
    std::string question;
    std::string answer;
};

QaRecord qa_record_from_json(const nlohmann::ordered_json& j);
std::string serialize_history(std::span<const QaTurn> history);

std::vector<InstructionPair> build_qa(std::span<const QaRecord> records, BuildLog* log);

enum class MovementLabel { Ascend, Descend, Hold };
std::string_view to_string(MovementLabel label);

// rate > 0.0050 -> Ascend; rate < -0.0050 -> Descend; otherwise Hold.
MovementLabel label_movement(double rate);

struct PriceRecord {
    std::string stock_id;
    std::string date;
    std::array<double, 5> closes_5d{};
    double next_day_change_rate = 0.0;
};

struct SpRecord {
    std::string id;
    std::string stock_id;
    std::string stock_name;  // falls back to stock_id when empty
    std::string news;
    std::string posts;
    PriceRecord price;
};

SpRecord sp_record_from_json(const nlohmann::ordered_json& j);

// Output labels: canonical Ascend/Descend/Hold, or the sentiment remap.
enum class SpLabelStyle { movement, sentiment };

std::vector<InstructionPair> build_sp(std::span<const SpRecord> records, SpLabelStyle style,
                                      BuildLog* log);

// Tail-truncates the content slot at a token boundary until
// tokens(instruction) + tokens(input) <= max_tokens. Template text and the
// output are never cut; a template that alone exceeds the budget is an error.
InstructionPair truncate_pair(InstructionPair pair, const TokenizerSpec& tokenizer,
                              std::uint64_t max_tokens = 2048);

struct BatchParams {
    std::uint64_t token_budget = 131072;
    std::uint64_t min_batch = 64;
    std::uint64_t max_batch = 512;
};

struct BatchPlanEntry {
    std::uint64_t batch_id = 0;
    std::vector<std::string> pair_ids;
    std::uint64_t max_len = 0;
    bool remainder = false;
};

// Sorts by token length ascending and groups greedily with
// batch_size = clamp(floor(token_budget / max_len_in_batch), min, max).
// Only a trailing batch may fall below the minimum; it is flagged.
std::vector<BatchPlanEntry> plan_batches(std::span<const std::pair<std::string, std::uint64_t>>
                                             id_lengths,
                                         const BatchParams& params);
std::vector<BatchPlanEntry> plan_batches(std::span<const InstructionPair> pairs,
                                         const TokenizerSpec& tokenizer,
                                         const BatchParams& params);

}  // namespace fincorpus
