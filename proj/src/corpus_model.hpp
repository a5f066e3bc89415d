#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "config.hpp"

namespace fincorpus {

// Sub-dataset taxonomy: six pre-training sources and six fine-tuning tasks.
enum class SubDataset : int {
    CP,    // corporate prospectuses
    CA,    // corporate announcements
    RR,    // research reports
    FN,    // financial news
    SM,    // social media posts
    Wiki,  // encyclopedia text
    SA,    // sentiment analysis
    ED,    // event detection
    TD,    // topic decomposition
    RS,    // report summarization
    QA,    // question answering
    SP,    // stock movement prediction
};

inline constexpr std::array<SubDataset, 6> kPretrainingSets = {
    SubDataset::CP, SubDataset::CA, SubDataset::RR,
    SubDataset::FN, SubDataset::SM, SubDataset::Wiki,
};

inline constexpr std::array<SubDataset, 6> kSftSets = {
    SubDataset::SA, SubDataset::ED, SubDataset::TD,
    SubDataset::RS, SubDataset::QA, SubDataset::SP,
};

std::string_view to_tag(SubDataset s);
std::optional<SubDataset> parse_tag(std::string_view tag);
bool is_pretraining(SubDataset s);
bool is_sft(SubDataset s);

struct RawDocument {
    std::string id;
    SubDataset source = SubDataset::FN;
    std::string timestamp;  // optional ISO-8601 date; empty when absent
    std::string text;
    std::map<std::string, std::string> metadata;
};

struct CleanDocument {
    std::string id;
    SubDataset source = SubDataset::FN;
    std::string timestamp;
    std::string text;  // original text as ingested
    std::map<std::string, std::string> metadata;
    std::string clean_text;
    std::uint64_t char_count = 0;  // Unicode scalar count of clean_text
    double garbled_ratio = 0.0;
};

// Per-source cleaning and filtering thresholds.
struct SourcePolicy {
    SubDataset source = SubDataset::FN;
    std::uint64_t min_chars = 0;
    std::optional<double> garbled_ratio_max;
    bool banned_word_filter = false;
    bool to_simplified = false;
    bool dedup = false;
};

SourcePolicy default_policy(SubDataset source);
std::map<SubDataset, SourcePolicy> default_policies();

// Reads `[policies.<SOURCE>]` sections; unspecified fields keep their
// defaults. Unknown sources and unknown keys are configuration errors.
std::map<SubDataset, SourcePolicy> load_policies(const Config& config);

// Category tree for event detection. Labels are unique across the tree;
// leaves are the queryable event categories.
class EventTaxonomy {
public:
    struct Node {
        std::string label;
        std::vector<Node> children;
    };

    static EventTaxonomy parse_string(std::string_view text);
    static EventTaxonomy parse_file(const std::string& path);

    int depth() const { return depth_; }
    std::size_t leaf_count() const { return leaves_.size(); }
    const std::vector<std::string>& leaves() const { return leaves_; }
    bool contains(std::string_view label) const;
    const Node& root() const { return root_; }

private:
    Node root_;
    int depth_ = 0;
    std::vector<std::string> leaves_;
    std::vector<std::string> all_labels_;  // sorted
};

}  // namespace fincorpus
