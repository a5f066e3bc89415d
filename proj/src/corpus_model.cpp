#include "corpus_model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace fincorpus {

namespace {

constexpr std::array<std::string_view, 12> kTags = {
    "CP", "CA", "RR", "FN", "SM", "Wiki", "SA", "ED", "TD", "RS", "QA", "SP",
};

}  // namespace

std::string_view to_tag(SubDataset s) { return kTags[static_cast<std::size_t>(s)]; }

std::optional<SubDataset> parse_tag(std::string_view tag) {
    for (std::size_t i = 0; i < kTags.size(); ++i) {
        if (kTags[i] == tag) return static_cast<SubDataset>(i);
    }
    return std::nullopt;
}

bool is_pretraining(SubDataset s) {
    return static_cast<int>(s) <= static_cast<int>(SubDataset::Wiki);
}

bool is_sft(SubDataset s) { return !is_pretraining(s); }

SourcePolicy default_policy(SubDataset source) {
    SourcePolicy p;
    p.source = source;
    switch (source) {
        case SubDataset::CP:
            p.min_chars = 10000;
            break;
        case SubDataset::CA:
            p.min_chars = 1000;
            break;
        case SubDataset::RR:
            p.min_chars = 2000;
            break;
        case SubDataset::FN:
            p.min_chars = 100;
            p.dedup = true;
            break;
        case SubDataset::SM:
            p.min_chars = 50;
            p.dedup = true;
            p.banned_word_filter = true;
            p.garbled_ratio_max = 0.30;
            break;
        case SubDataset::Wiki:
            p.to_simplified = true;
            break;
        default:
            throw_data("no cleaning policy exists for SFT task " + std::string(to_tag(source)));
    }
    return p;
}

std::map<SubDataset, SourcePolicy> default_policies() {
    std::map<SubDataset, SourcePolicy> out;
    for (SubDataset s : kPretrainingSets) out.emplace(s, default_policy(s));
    return out;
}

std::map<SubDataset, SourcePolicy> load_policies(const Config& config) {
    auto policies = default_policies();
    for (const auto& name : config.subsections("policies")) {
        const auto tag = parse_tag(name);
        if (!tag.has_value()) {
            throw_config("policies." + name + ": unknown sub-dataset '" + name + "'");
        }
        if (!is_pretraining(*tag)) {
            throw_config("policies." + name + ": '" + name + "' is not a pre-training source");
        }
        auto& policy = policies.at(*tag);
        const std::string section = "policies." + name;
        for (const auto& key : config.keys_in(section)) {
            const std::string full = section + "." + key;
            if (key == "min_chars") {
                const auto v = config.get_int(full).value();
                if (v < 0) throw_config(full + ": must be >= 0");
                policy.min_chars = static_cast<std::uint64_t>(v);
            } else if (key == "garbled_ratio_max") {
                const auto v = config.get_double(full).value();
                if (v < 0.0 || v > 1.0) throw_config(full + ": must be in [0,1]");
                policy.garbled_ratio_max = v;
            } else if (key == "banned_word_filter") {
                policy.banned_word_filter = config.get_bool(full).value();
            } else if (key == "to_simplified") {
                policy.to_simplified = config.get_bool(full).value();
            } else if (key == "dedup") {
                policy.dedup = config.get_bool(full).value();
            } else {
                throw_config(full + ": unknown policy key '" + key + "'");
            }
        }
    }
    return policies;
}

namespace {

int node_depth(const EventTaxonomy::Node& node) {
    int best = 0;
    for (const auto& child : node.children) best = std::max(best, node_depth(child));
    return 1 + best;
}

void collect(const EventTaxonomy::Node& node, std::vector<std::string>& labels,
             std::vector<std::string>& leaves, bool is_root) {
    if (!is_root) {
        labels.push_back(node.label);
        if (node.children.empty()) leaves.push_back(node.label);
    }
    for (const auto& child : node.children) collect(child, labels, leaves, false);
}

}  // namespace

EventTaxonomy EventTaxonomy::parse_string(std::string_view text) {
    // Indented-tree format: two spaces per level, first line is the root.
    EventTaxonomy tax;
    std::vector<Node*> stack;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    bool have_root = false;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(
            pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        std::size_t indent = 0;
        while (indent < line.size() && line[indent] == ' ') ++indent;
        std::string_view label = line.substr(indent);
        if (label.empty() || label.front() == '#') continue;
        if (indent % 2 != 0) {
            throw_data("taxonomy line " + std::to_string(line_no) + ": odd indentation");
        }
        const std::size_t level = indent / 2;
        if (!have_root) {
            if (level != 0) {
                throw_data("taxonomy line " + std::to_string(line_no) + ": first node must be root");
            }
            tax.root_.label = std::string(label);
            stack = {&tax.root_};
            have_root = true;
            continue;
        }
        if (level == 0) {
            throw_data("taxonomy line " + std::to_string(line_no) + ": multiple roots");
        }
        if (level > stack.size()) {
            throw_data("taxonomy line " + std::to_string(line_no) + ": indentation skips a level");
        }
        stack.resize(level);
        Node& parent = *stack.back();
        parent.children.push_back(Node{std::string(label), {}});
        stack.push_back(&parent.children.back());
    }
    if (!have_root) throw_data("taxonomy: empty input");
    collect(tax.root_, tax.all_labels_, tax.leaves_, true);
    std::vector<std::string> sorted = tax.all_labels_;
    sorted.push_back(tax.root_.label);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw_data("taxonomy: duplicate label '" +
                   *std::adjacent_find(sorted.begin(), sorted.end()) + "'");
    }
    tax.all_labels_ = std::move(sorted);
    tax.depth_ = node_depth(tax.root_);
    if (tax.depth_ > 7) {
        throw_data("taxonomy: depth " + std::to_string(tax.depth_) + " exceeds 7");
    }
    return tax;
}

EventTaxonomy EventTaxonomy::parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io("cannot open taxonomy file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str());
}

bool EventTaxonomy::contains(std::string_view label) const {
    return std::binary_search(all_labels_.begin(), all_labels_.end(), label);
}

}  // namespace fincorpus
