#include "sft_builder.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "errors.hpp"
#include "hashing.hpp"
#include "utf8.hpp"

namespace fincorpus {

namespace {

// Task prompt templates. Quotes are plain ASCII; the SP template keeps the
// source's double space after "of".
constexpr std::string_view kTemplateSA =
    "Please analyze the sentiment of the following financial paragraph. "
    "The answer should be choose from {\"Positive\", \"Negative\", \"Neutral\"}. "
    "The paragraph is \"[paragraph]\".";

constexpr std::string_view kTemplateED =
    "Please detect the \"[event category]\" from the following financial paragraph. "
    "If the \"[event category]\" exists, find all the event, otherwise, return None. "
    "The paragraph is \"[paragraph]\".";

constexpr std::string_view kTemplateRS =
    "Please summarize the following financial report. The report is \"[report]\".";

constexpr std::string_view kTemplateTD =
    "Please decompose the following financial topic from multiple small aspects. "
    "The topic is \"[topic]\".";

constexpr std::string_view kTemplateQA =
    "Please answer the questions based on given financial paragraph and conversation history. "
    "The financial paragraph is \"[paragraph]\". The conversation history is \"[history]\". "
    "The question is \"[question]\".";

constexpr std::string_view kTemplateSP =
    "Please analyze the text information and price information of  \"[stock name]\", "
    "and determine how will the price change. "
    "The answer should be choose from {\"Positive\", \"Negative\", \"Neutral\"}. "
    "The text information is \"[text]\". The price information is \"[price]\".";

const std::array<std::string, 3> kSentiments = {"Positive", "Negative", "Neutral"};

bool valid_sentiment(const std::string& s) {
    return std::find(kSentiments.begin(), kSentiments.end(), s) != kSentiments.end();
}

std::string meta_or_empty(const CleanDocument& doc, const std::string& key) {
    const auto it = doc.metadata.find(key);
    return it == doc.metadata.end() ? std::string() : it->second;
}

std::string format_double(double v) {
    char buf[32];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw_data("cannot format number");
    return std::string(buf, p);
}

}  // namespace

std::string_view template_for(SubDataset task) {
    switch (task) {
        case SubDataset::SA: return kTemplateSA;
        case SubDataset::ED: return kTemplateED;
        case SubDataset::RS: return kTemplateRS;
        case SubDataset::TD: return kTemplateTD;
        case SubDataset::QA: return kTemplateQA;
        case SubDataset::SP: return kTemplateSP;
        default:
            throw_data("no instruction template for pre-training source " +
                       std::string(to_tag(task)));
    }
}

std::vector<std::string> template_slots(SubDataset task) {
    const auto tmpl = template_for(task);
    std::vector<std::string> slots;
    std::size_t pos = 0;
    while ((pos = tmpl.find('[', pos)) != std::string_view::npos) {
        const auto end = tmpl.find(']', pos);
        if (end == std::string_view::npos) break;
        const std::string name(tmpl.substr(pos + 1, end - pos - 1));
        if (std::find(slots.begin(), slots.end(), name) == slots.end()) {
            slots.push_back(name);
        }
        pos = end + 1;
    }
    return slots;
}

std::string render_prompt(SubDataset task, const std::map<std::string, std::string>& slots) {
    const auto tmpl = template_for(task);
    std::string out;
    out.reserve(tmpl.size() + 256);
    std::size_t pos = 0;
    while (pos < tmpl.size()) {
        const auto open = tmpl.find('[', pos);
        if (open == std::string_view::npos) {
            out.append(tmpl.substr(pos));
            break;
        }
        const auto close = tmpl.find(']', open);
        if (close == std::string_view::npos) {
            out.append(tmpl.substr(pos));
            break;
        }
        out.append(tmpl.substr(pos, open - pos));
        const std::string name(tmpl.substr(open + 1, close - open - 1));
        const auto it = slots.find(name);
        if (it == slots.end()) {
            throw_data("render_prompt: missing slot '" + name + "' for task " +
                       std::string(to_tag(task)));
        }
        out.append(it->second);
        pos = close + 1;
    }
    return out;
}

nlohmann::ordered_json pair_to_json(const InstructionPair& pair) {
    nlohmann::ordered_json j;
    j["task"] = to_tag(pair.task);
    j["instruction"] = pair.instruction;
    j["input"] = pair.input;
    j["output"] = pair.output;
    j["provenance"] = pair.provenance;
    return j;
}

InstructionPair pair_from_json(const nlohmann::ordered_json& j) {
    if (!j.is_object()) throw_data("instruction pair is not a JSON object");
    InstructionPair pair;
    const auto task = j.find("task");
    if (task == j.end() || !task->is_string()) throw_data("pair missing string 'task'");
    const auto tag = parse_tag(task->get<std::string>());
    if (!tag.has_value() || !is_sft(*tag)) {
        throw_data("pair has unknown task tag '" + task->get<std::string>() + "'");
    }
    pair.task = *tag;
    for (const char* key : {"instruction", "input", "output"}) {
        const auto it = j.find(key);
        if (it == j.end() || !it->is_string()) {
            throw_data("pair missing string '" + std::string(key) + "'");
        }
    }
    pair.instruction = j["instruction"].get<std::string>();
    pair.input = j["input"].get<std::string>();
    pair.output = j["output"].get<std::string>();
    if (pair.output.empty()) throw_data("pair has empty 'output'");
    if (const auto prov = j.find("provenance"); prov != j.end() && prov->is_array()) {
        for (const auto& p : *prov) {
            if (p.is_string()) pair.provenance.push_back(p.get<std::string>());
        }
    }
    return pair;
}

RatingMap RatingMap::from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_config("cannot open rating map: " + path);
    RatingMap map;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw_config(path + ":" + std::to_string(line_no) +
                         ": expected 'rating<TAB>sentiment'");
        }
        const std::string rating = line.substr(0, tab);
        const std::string sentiment = line.substr(tab + 1);
        if (!valid_sentiment(sentiment)) {
            throw_config(path + ":" + std::to_string(line_no) + ": sentiment '" + sentiment +
                         "' is not Positive/Negative/Neutral");
        }
        map.ratings[rating] = sentiment;
    }
    return map;
}

std::optional<std::string> RatingMap::map(const std::string& rating) const {
    const auto it = ratings.find(rating);
    if (it == ratings.end()) return std::nullopt;
    return it->second;
}

std::vector<InstructionPair> build_sa_from_reports(std::span<const CleanDocument> reports,
                                                   const RatingMap& rating_map, BuildLog* log) {
    std::vector<InstructionPair> pairs;
    for (const auto& doc : reports) {
        if (doc.char_count < 2000 || doc.char_count > 3000) {
            if (log) log->skip(doc.id, "length");
            continue;
        }
        const std::string rating = meta_or_empty(doc, "rating");
        const auto sentiment = rating.empty() ? std::nullopt : rating_map.map(rating);
        if (!sentiment.has_value()) {
            if (log) log->skip(doc.id, "unmapped");
            continue;
        }
        InstructionPair pair;
        pair.task = SubDataset::SA;
        pair.slots = {{"paragraph", doc.clean_text}};
        pair.content_slot = "paragraph";
        pair.instruction = render_prompt(pair.task, pair.slots);
        pair.output = *sentiment;
        pair.provenance = {doc.id};
        pairs.push_back(std::move(pair));
        if (log) ++log->built;
    }
    return pairs;
}

std::vector<InstructionPair> build_sa_from_posts(std::span<const CleanDocument> posts,
                                                 BuildLog* log) {
    std::vector<InstructionPair> pairs;
    for (const auto& doc : posts) {
        if (doc.char_count <= 100) {
            if (log) log->skip(doc.id, "length");
            continue;
        }
        const std::string label = meta_or_empty(doc, "sentiment");
        if (!valid_sentiment(label)) {
            if (log) log->error(doc.id, "invalid-label");
            continue;
        }
        InstructionPair pair;
        pair.task = SubDataset::SA;
        pair.slots = {{"paragraph", doc.clean_text}};
        pair.content_slot = "paragraph";
        pair.instruction = render_prompt(pair.task, pair.slots);
        pair.output = label;
        pair.provenance = {doc.id};
        pairs.push_back(std::move(pair));
        if (log) ++log->built;
    }
    return pairs;
}

namespace {

std::vector<std::string> split_labels(const std::string& joined) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= joined.size()) {
        const auto bar = joined.find('|', start);
        const auto part = joined.substr(
            start, bar == std::string::npos ? joined.size() - start : bar - start);
        if (!part.empty()) out.push_back(part);
        if (bar == std::string::npos) break;
        start = bar + 1;
    }
    return out;
}

}  // namespace

std::vector<InstructionPair> build_ed(std::span<const CleanDocument> docs,
                                      const EventTaxonomy& taxonomy, const EdOptions& options,
                                      BuildLog* log) {
    std::vector<InstructionPair> pairs;
    const auto& leaves = taxonomy.leaves();
    if (leaves.empty()) throw_config("event taxonomy has no leaf categories");
    for (const auto& doc : docs) {
        const auto labels = split_labels(meta_or_empty(doc, "events"));
        bool bad = false;
        for (const auto& label : labels) {
            if (!taxonomy.contains(label)) {
                if (log) log->error(doc.id, "label-not-in-taxonomy:" + label);
                bad = true;
                break;
            }
        }
        if (bad) continue;
        auto emit = [&](const std::string& category, const std::string& output) {
            InstructionPair pair;
            pair.task = SubDataset::ED;
            pair.slots = {{"event category", category}, {"paragraph", doc.clean_text}};
            pair.content_slot = "paragraph";
            pair.instruction = render_prompt(pair.task, pair.slots);
            pair.output = output;
            pair.provenance = {doc.id};
            pairs.push_back(std::move(pair));
            if (log) ++log->built;
        };
        for (const auto& label : labels) {
            emit(label, label);
        }
        // Seeded negative sampling: categories absent from the document
        // answer "None". One RNG stream per document keeps output stable
        // under reordering.
        std::uint64_t state = mix64(options.seed ^ hash_bytes(doc.id, 0xED));
        const std::size_t negatives =
            labels.size() * static_cast<std::size_t>(std::max(0, options.negatives_per_positive));
        std::size_t emitted = 0;
        std::size_t attempts = 0;
        while (emitted < negatives && attempts < negatives * 16 + 16) {
            ++attempts;
            state += 0x9e3779b97f4a7c15ULL;
            const auto& candidate = leaves[mix64(state) % leaves.size()];
            if (std::find(labels.begin(), labels.end(), candidate) != labels.end()) continue;
            emit(candidate, "None");
            ++emitted;
        }
    }
    return pairs;
}

std::vector<InstructionPair> build_td(std::span<const CleanDocument> reports, BuildLog* log) {
    std::vector<InstructionPair> pairs;
    for (const auto& doc : reports) {
        const std::string title = meta_or_empty(doc, "title");
        const std::string outline = meta_or_empty(doc, "outline");
        if (title.empty() || outline.empty()) {
            if (log) log->skip(doc.id, title.empty() ? "missing-title" : "missing-outline");
            continue;
        }
        InstructionPair pair;
        pair.task = SubDataset::TD;
        pair.slots = {{"topic", title}};
        pair.content_slot = "topic";
        pair.instruction = render_prompt(pair.task, pair.slots);
        pair.output = outline;
        pair.provenance = {doc.id};
        pairs.push_back(std::move(pair));
        if (log) ++log->built;
    }
    return pairs;
}

std::vector<InstructionPair> build_rs(std::span<const CleanDocument> reports, BuildLog* log) {
    std::vector<InstructionPair> pairs;
    for (const auto& doc : reports) {
        const std::string conclusion = meta_or_empty(doc, "conclusion");
        const std::string abstract = meta_or_empty(doc, "abstract");
        if (conclusion.empty() || abstract.empty()) {
            if (log) {
                log->skip(doc.id, conclusion.empty() ? "missing-conclusion" : "missing-abstract");
            }
            continue;
        }
        InstructionPair pair;
        pair.task = SubDataset::RS;
        pair.slots = {{"report", doc.clean_text}};
        pair.content_slot = "report";
        pair.instruction = render_prompt(pair.task, pair.slots);
        pair.input = doc.clean_text;
        pair.output = conclusion + "\n" + abstract;
        pair.provenance = {doc.id};
        pairs.push_back(std::move(pair));
        if (log) ++log->built;
    }
    return pairs;
}

QaRecord qa_record_from_json(const nlohmann::ordered_json& j) {
    if (!j.is_object()) throw_data("QA record is not a JSON object");
    QaRecord rec;
    rec.id = j.value("id", "");
    rec.paragraph = j.value("paragraph", "");
    rec.question = j.value("question", "");
    rec.answer = j.value("answer", "");
    if (const auto hist = j.find("history"); hist != j.end() && !hist->is_null()) {
        if (!hist->is_array()) throw_data("QA record 'history' is not an array");
        for (const auto& turn : *hist) {
            if (!turn.is_object() || !turn.contains("question") || !turn.contains("answer") ||
                !turn["question"].is_string() || !turn["answer"].is_string()) {
                throw_data("QA record has a malformed history turn");
            }
            rec.history.push_back(
                {turn["question"].get<std::string>(), turn["answer"].get<std::string>()});
        }
    }
    return rec;
}

std::string serialize_history(std::span<const QaTurn> history) {
    std::string out;
    for (std::size_t i = 0; i < history.size(); ++i) {
        if (i > 0) out.push_back('\n');
        out += "Q: " + history[i].question + "\nA: " + history[i].answer;
    }
    return out;
}

std::vector<InstructionPair> build_qa(std::span<const QaRecord> records, BuildLog* log) {
    std::vector<InstructionPair> pairs;
    for (const auto& rec : records) {
        if (rec.paragraph.empty() || rec.question.empty() || rec.answer.empty()) {
            if (log) log->error(rec.id, "missing-field");
            continue;
        }
        bool bad_turn = false;
        for (const auto& turn : rec.history) {
            if (turn.question.empty() || turn.answer.empty()) {
                bad_turn = true;
                break;
            }
        }
        if (bad_turn) {
            if (log) log->error(rec.id, "malformed-turn");
            continue;
        }
        InstructionPair pair;
        pair.task = SubDataset::QA;
        pair.slots = {{"paragraph", rec.paragraph},
                      {"history", serialize_history(rec.history)},
                      {"question", rec.question}};
        pair.content_slot = "paragraph";
        pair.instruction = render_prompt(pair.task, pair.slots);
        pair.output = rec.answer;
        pair.provenance = {rec.id};
        pairs.push_back(std::move(pair));
        if (log) ++log->built;
    }
    return pairs;
}

std::string_view to_string(MovementLabel label) {
    switch (label) {
        case MovementLabel::Ascend: return "Ascend";
        case MovementLabel::Descend: return "Descend";
        case MovementLabel::Hold: return "Hold";
    }
    return "Hold";
}

MovementLabel label_movement(double rate) {
    if (!std::isfinite(rate)) throw_data("label_movement: rate is not finite");
    if (rate > 0.0050) return MovementLabel::Ascend;
    if (rate < -0.0050) return MovementLabel::Descend;
    return MovementLabel::Hold;
}

SpRecord sp_record_from_json(const nlohmann::ordered_json& j) {
    if (!j.is_object()) throw_data("SP record is not a JSON object");
    SpRecord rec;
    rec.id = j.value("id", "");
    rec.stock_id = j.value("stock_id", "");
    rec.stock_name = j.value("stock_name", "");
    rec.news = j.value("news", "");
    rec.posts = j.value("posts", "");
    rec.price.stock_id = rec.stock_id;
    rec.price.date = j.value("date", "");
    const auto closes = j.find("closes_5d");
    if (closes == j.end() || !closes->is_array() || closes->size() != 5) {
        throw_data("SP record '" + rec.id + "': closes_5d must have exactly 5 entries");
    }
    for (std::size_t i = 0; i < 5; ++i) {
        if (!(*closes)[i].is_number()) {
            throw_data("SP record '" + rec.id + "': closes_5d entries must be numbers");
        }
        rec.price.closes_5d[i] = (*closes)[i].get<double>();
    }
    const auto rate = j.find("next_day_change_rate");
    if (rate == j.end() || !rate->is_number()) {
        throw_data("SP record '" + rec.id + "': missing next_day_change_rate");
    }
    rec.price.next_day_change_rate = rate->get<double>();
    return rec;
}

std::vector<InstructionPair> build_sp(std::span<const SpRecord> records, SpLabelStyle style,
                                      BuildLog* log) {
    std::vector<InstructionPair> pairs;
    for (const auto& rec : records) {
        bool bad = false;
        for (const double close : rec.price.closes_5d) {
            if (!(close > 0.0) || !std::isfinite(close)) bad = true;
        }
        if (bad) {
            if (log) log->error(rec.id, "invalid-closes");
            continue;
        }
        MovementLabel label;
        try {
            label = label_movement(rec.price.next_day_change_rate);
        } catch (const PipelineError&) {
            if (log) log->error(rec.id, "invalid-rate");
            continue;
        }
        std::string price;
        for (std::size_t i = 0; i < 5; ++i) {
            if (i > 0) price.push_back(',');
            price += format_double(rec.price.closes_5d[i]);
        }
        InstructionPair pair;
        pair.task = SubDataset::SP;
        pair.slots = {{"stock name", rec.stock_name.empty() ? rec.stock_id : rec.stock_name},
                      {"text", rec.news + rec.posts},
                      {"price", price}};
        pair.content_slot = "text";
        pair.instruction = render_prompt(pair.task, pair.slots);
        switch (style) {
            case SpLabelStyle::movement:
                pair.output = std::string(to_string(label));
                break;
            case SpLabelStyle::sentiment:
                pair.output = label == MovementLabel::Ascend    ? "Positive"
                              : label == MovementLabel::Descend ? "Negative"
                                                                : "Neutral";
                break;
        }
        pair.provenance = {rec.id};
        pairs.push_back(std::move(pair));
        if (log) ++log->built;
    }
    return pairs;
}

InstructionPair truncate_pair(InstructionPair pair, const TokenizerSpec& tokenizer,
                              std::uint64_t max_tokens) {
    std::uint64_t total =
        tokenizer.count_tokens(pair.instruction) + tokenizer.count_tokens(pair.input);
    if (total <= max_tokens) return pair;
    const auto slot = pair.slots.find(pair.content_slot);
    if (pair.content_slot.empty() || slot == pair.slots.end()) {
        throw_data("pair exceeds " + std::to_string(max_tokens) +
                   " tokens and has no truncatable content slot");
    }
    const bool input_is_content = pair.input == slot->second;
    // Each removed content token shrinks the total once per place the
    // content appears (instruction slot, plus the input when it mirrors it).
    const std::uint64_t occurrences = input_is_content ? 2 : 1;
    auto content_tokens = tokenizer.tokenize(slot->second);
    int guard = 0;
    while (total > max_tokens) {
        if (++guard > 64) throw_data("truncate_pair failed to converge");
        const std::uint64_t excess = total - max_tokens;
        if (content_tokens.empty()) {
            throw_data("instruction template alone exceeds " + std::to_string(max_tokens) +
                       " tokens");
        }
        const std::size_t cut =
            std::min<std::uint64_t>((excess + occurrences - 1) / occurrences,
                                    content_tokens.size());
        content_tokens.resize(content_tokens.size() - cut);
        slot->second = tokenizer.detokenize(content_tokens);
        pair.instruction = render_prompt(pair.task, pair.slots);
        if (input_is_content) pair.input = slot->second;
        total = tokenizer.count_tokens(pair.instruction) + tokenizer.count_tokens(pair.input);
    }
    return pair;
}

std::vector<BatchPlanEntry> plan_batches(
    std::span<const std::pair<std::string, std::uint64_t>> id_lengths,
    const BatchParams& params) {
    if (params.min_batch < 1 || params.max_batch < params.min_batch) {
        throw_config("batching: require 1 <= min_batch <= max_batch");
    }
    if (params.token_budget < 1) throw_config("batching.token_budget must be >= 1");
    std::vector<std::size_t> order(id_lengths.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return id_lengths[a].second < id_lengths[b].second;
    });
    std::vector<BatchPlanEntry> plan;
    std::size_t p = 0;
    const std::size_t n = order.size();
    while (p < n) {
        std::size_t m = 0;
        while (p + m < n && m < params.max_batch) {
            const std::uint64_t len = std::max<std::uint64_t>(id_lengths[order[p + m]].second, 1);
            const std::uint64_t allowed =
                std::clamp(params.token_budget / len, params.min_batch, params.max_batch);
            if (m + 1 > allowed) break;
            ++m;
        }
        if (m == 0) m = 1;
        BatchPlanEntry entry;
        entry.batch_id = plan.size();
        entry.pair_ids.reserve(m);
        for (std::size_t i = 0; i < m; ++i) {
            entry.pair_ids.push_back(id_lengths[order[p + i]].first);
            entry.max_len = std::max(entry.max_len, id_lengths[order[p + i]].second);
        }
        entry.remainder = m < params.min_batch;
        plan.push_back(std::move(entry));
        p += m;
    }
    return plan;
}

std::vector<BatchPlanEntry> plan_batches(std::span<const InstructionPair> pairs,
                                         const TokenizerSpec& tokenizer,
                                         const BatchParams& params) {
    std::vector<std::pair<std::string, std::uint64_t>> id_lengths;
    id_lengths.reserve(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& pair = pairs[i];
        const std::uint64_t len = tokenizer.count_tokens(pair.instruction) +
                                  tokenizer.count_tokens(pair.input) +
                                  tokenizer.count_tokens(pair.output);
        id_lengths.emplace_back(std::to_string(i), len);
    }
    return plan_batches(id_lengths, params);
}

}  // namespace fincorpus
