#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "corpus_model.hpp"
#include "errors.hpp"
#include "sft_builder.hpp"
#include "utf8.hpp"

using namespace fincorpus;

namespace {

CleanDocument doc_of(std::string id, SubDataset source, std::string text,
                     std::map<std::string, std::string> metadata = {}) {
    CleanDocument d;
    d.id = std::move(id);
    d.source = source;
    d.clean_text = std::move(text);
    d.char_count = utf8::scalar_count(d.clean_text);
    d.metadata = std::move(metadata);
    return d;
}

std::string chars(std::size_t n, char32_t c = U'文') {
    std::string out;
    for (std::size_t i = 0; i < n; ++i) utf8::append_scalar(out, c);
    return out;
}

}  // namespace

TEST_CASE("render_prompt: SA output is byte-exact") {
    const auto rendered = render_prompt(SubDataset::SA, {{"paragraph", "X"}});
    CHECK(rendered ==
          "Please analyze the sentiment of the following financial paragraph. "
          "The answer should be choose from {\"Positive\", \"Negative\", \"Neutral\"}. "
          "The paragraph is \"X\".");
}

TEST_CASE("render_prompt: RS output is byte-exact") {
    const auto rendered = render_prompt(SubDataset::RS, {{"report", "Y"}});
    CHECK(rendered == "Please summarize the following financial report. The report is \"Y\".");
}

TEST_CASE("render_prompt: missing slot is an error naming the slot") {
    CHECK_THROWS_WITH_AS(render_prompt(SubDataset::ED, {{"paragraph", "p"}}),
                         doctest::Contains("event category"), PipelineError);
}

TEST_CASE("render_prompt: repeated slots are all substituted") {
    const auto rendered =
        render_prompt(SubDataset::ED, {{"event category", "M&A"}, {"paragraph", "p"}});
    CHECK(rendered.find("[event category]") == std::string::npos);
    CHECK(rendered.find("[paragraph]") == std::string::npos);
    CHECK(rendered.find("\"M&A\"") != std::string::npos);
    // The category appears twice in the ED template.
    const auto first = rendered.find("M&A");
    CHECK(rendered.find("M&A", first + 1) != std::string::npos);
}

TEST_CASE("template slots inventory") {
    CHECK(template_slots(SubDataset::SA) == std::vector<std::string>{"paragraph"});
    CHECK(template_slots(SubDataset::ED) ==
          std::vector<std::string>{"event category", "paragraph"});
    CHECK(template_slots(SubDataset::QA) ==
          std::vector<std::string>{"paragraph", "history", "question"});
    CHECK(template_slots(SubDataset::SP) ==
          std::vector<std::string>{"stock name", "text", "price"});
    CHECK_THROWS_AS(template_for(SubDataset::FN), PipelineError);
}

TEST_CASE("build_sa_from_reports: length window and rating mapping") {
    RatingMap map;
    map.ratings = {{"买入", "Positive"}, {"卖出", "Negative"}, {"中性", "Neutral"}};
    std::vector<CleanDocument> reports;
    reports.push_back(doc_of("r1", SubDataset::RR, chars(2500), {{"rating", "买入"}}));
    reports.push_back(doc_of("r2", SubDataset::RR, chars(1999), {{"rating", "买入"}}));
    reports.push_back(doc_of("r3", SubDataset::RR, chars(2000), {{"rating", "卖出"}}));
    reports.push_back(doc_of("r4", SubDataset::RR, chars(3000), {{"rating", "中性"}}));
    reports.push_back(doc_of("r5", SubDataset::RR, chars(3001), {{"rating", "中性"}}));
    reports.push_back(doc_of("r6", SubDataset::RR, chars(2500), {{"rating", "强烈看多"}}));
    reports.push_back(doc_of("r7", SubDataset::RR, chars(2500)));  // rating absent

    BuildLog log;
    const auto pairs = build_sa_from_reports(reports, map, &log);
    REQUIRE(pairs.size() == 3);
    CHECK(pairs[0].provenance == std::vector<std::string>{"r1"});
    CHECK(pairs[0].output == "Positive");
    CHECK(pairs[1].output == "Negative");
    CHECK(pairs[2].output == "Neutral");
    CHECK(log.built == 3);
    CHECK(log.skipped == 4);
    // r2 (1999) and r5 (3001) fall outside [2000, 3000]; r6/r7 unmapped.
    std::set<std::string> skipped_ids;
    for (const auto& [id, reason] : log.entries) skipped_ids.insert(id);
    CHECK(skipped_ids == std::set<std::string>{"r2", "r5", "r6", "r7"});
}

TEST_CASE("build_sa_from_posts: strict >100 chars and closed label set") {
    std::vector<CleanDocument> posts;
    posts.push_back(doc_of("p1", SubDataset::SM, chars(150), {{"sentiment", "Neutral"}}));
    posts.push_back(doc_of("p2", SubDataset::SM, chars(100), {{"sentiment", "Positive"}}));
    posts.push_back(doc_of("p3", SubDataset::SM, chars(101), {{"sentiment", "Positive"}}));
    posts.push_back(doc_of("p4", SubDataset::SM, chars(150), {{"sentiment", "Bullish"}}));

    BuildLog log;
    const auto pairs = build_sa_from_posts(posts, &log);
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0].output == "Neutral");
    CHECK(pairs[1].output == "Positive");
    CHECK(log.skipped == 1);  // p2 at exactly 100
    CHECK(log.errors == 1);   // p4 invalid label
}

TEST_CASE("build_ed: positive and sampled negative queries") {
    const auto tax = EventTaxonomy::parse_string(
        "root\n  corporate\n    M&A\n    Bankruptcy\n    IPO\n  market\n    Crash\n");
    std::vector<CleanDocument> docs;
    docs.push_back(doc_of("e1", SubDataset::FN, "公司宣布并购交易", {{"events", "M&A"}}));

    EdOptions options;
    options.negatives_per_positive = 1;
    options.seed = 99;
    BuildLog log;
    const auto pairs = build_ed(docs, tax, options, &log);
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0].task == SubDataset::ED);
    CHECK(pairs[0].output == "M&A");
    CHECK(pairs[0].instruction.find("\"M&A\"") != std::string::npos);
    CHECK(pairs[1].output == "None");
    CHECK(pairs[1].instruction.find("M&A") == std::string::npos);

    // Deterministic under the same seed.
    BuildLog log2;
    const auto again = build_ed(docs, tax, options, &log2);
    REQUIRE(again.size() == 2);
    CHECK(again[1].instruction == pairs[1].instruction);
}

TEST_CASE("build_ed: multi-label documents and taxonomy enforcement") {
    const auto tax = EventTaxonomy::parse_string("root\n  M&A\n  Bankruptcy\n  IPO\n");
    std::vector<CleanDocument> docs;
    docs.push_back(doc_of("e1", SubDataset::FN, "text", {{"events", "M&A|Bankruptcy"}}));
    docs.push_back(doc_of("e2", SubDataset::FN, "text", {{"events", "NotACategory"}}));

    EdOptions options;
    options.negatives_per_positive = 0;
    BuildLog log;
    const auto pairs = build_ed(docs, tax, options, &log);
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0].output == "M&A");
    CHECK(pairs[1].output == "Bankruptcy");
    CHECK(log.errors == 1);  // e2 rejected
}

TEST_CASE("build_td: field routing and skips") {
    std::vector<CleanDocument> reports;
    reports.push_back(doc_of("t1", SubDataset::RR, "body",
                             {{"title", "新能源汽车行业分析"},
                              {"outline", "1.市场规模\n2.竞争格局"}}));
    reports.push_back(doc_of("t2", SubDataset::RR, "body", {{"title", "无提纲"}}));
    reports.push_back(doc_of("t3", SubDataset::RR, "body",
                             {{"title", ""}, {"outline", "提纲"}}));

    BuildLog log;
    const auto pairs = build_td(reports, &log);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].instruction ==
          "Please decompose the following financial topic from multiple small aspects. "
          "The topic is \"新能源汽车行业分析\".");
    CHECK(pairs[0].output == "1.市场规模\n2.竞争格局");
    CHECK(pairs[0].input.empty());
    CHECK(log.skipped == 2);
}

TEST_CASE("build_rs: conclusion before abstract, separated by one newline") {
    std::vector<CleanDocument> reports;
    reports.push_back(doc_of("s1", SubDataset::RR, "B",
                             {{"conclusion", "C"}, {"abstract", "A"}}));
    BuildLog log;
    const auto pairs = build_rs(reports, &log);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].input == "B");
    CHECK(pairs[0].output == "C\nA");
    CHECK(pairs[0].instruction.find("\"B\"") != std::string::npos);
}

TEST_CASE("build_rs: 1000 synthetic reports, field-presence count oracle") {
    std::mt19937_64 rng(606);
    std::vector<CleanDocument> reports;
    std::size_t expected = 0;  // independent scan while generating
    for (int i = 0; i < 1000; ++i) {
        std::map<std::string, std::string> meta;
        const bool has_conclusion = rng() % 3 != 0;
        const bool has_abstract = rng() % 3 != 0;
        if (has_conclusion) meta["conclusion"] = "结论" + std::to_string(i);
        if (has_abstract) meta["abstract"] = "摘要" + std::to_string(i);
        if (has_conclusion && has_abstract) ++expected;
        reports.push_back(
            doc_of("r" + std::to_string(i), SubDataset::RR, "正文" + std::to_string(i),
                   std::move(meta)));
    }
    BuildLog log;
    const auto pairs = build_rs(reports, &log);
    CHECK(pairs.size() == expected);
    CHECK(log.built == expected);
    CHECK(log.skipped == 1000 - expected);
}

TEST_CASE("build_qa: history serialization") {
    QaRecord empty_history;
    empty_history.id = "q1";
    empty_history.paragraph = "营收数据";
    empty_history.question = "增长率是多少？";
    empty_history.answer = "12%";

    QaRecord two_turns = empty_history;
    two_turns.id = "q2";
    two_turns.history = {{"q1", "a1"}, {"q2", "a2"}};

    QaRecord bad_turn = empty_history;
    bad_turn.id = "q3";
    bad_turn.history = {{"q1", ""}};

    BuildLog log;
    const auto pairs = build_qa(std::vector<QaRecord>{empty_history, two_turns, bad_turn}, &log);
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0].instruction.find("The conversation history is \"\".") != std::string::npos);
    CHECK(pairs[1].instruction.find("\"Q: q1\nA: a1\nQ: q2\nA: a2\"") != std::string::npos);
    CHECK(log.errors == 1);

    CHECK(serialize_history({}) == "");
    const std::vector<QaTurn> turns = {{"q1", "a1"}, {"q2", "a2"}};
    CHECK(serialize_history(turns) == "Q: q1\nA: a1\nQ: q2\nA: a2");
}

TEST_CASE("label_movement: boundaries are strict") {
    CHECK(label_movement(0.0051) == MovementLabel::Ascend);
    CHECK(label_movement(-0.0051) == MovementLabel::Descend);
    CHECK(label_movement(0.0050) == MovementLabel::Hold);
    CHECK(label_movement(-0.0050) == MovementLabel::Hold);
    CHECK(label_movement(0.0) == MovementLabel::Hold);
    CHECK(label_movement(0.02) == MovementLabel::Ascend);
    CHECK_THROWS_AS(label_movement(std::numeric_limits<double>::quiet_NaN()), PipelineError);
    CHECK_THROWS_AS(label_movement(std::numeric_limits<double>::infinity()), PipelineError);
}

TEST_CASE("label_movement: 10k random rates against the one-line oracle") {
    std::mt19937_64 rng(31415);
    std::uniform_real_distribution<double> dist(-0.02, 0.02);
    std::map<MovementLabel, int> counts;
    for (int i = 0; i < 10000; ++i) {
        const double rate = dist(rng);
        const auto oracle = rate > 0.0050   ? MovementLabel::Ascend
                            : rate < -0.0050 ? MovementLabel::Descend
                                             : MovementLabel::Hold;
        const auto got = label_movement(rate);
        CHECK(got == oracle);
        ++counts[got];
    }
    // Partition + monotonicity: every rate got exactly one label; the label
    // set splits the line, so all three appear on this range.
    CHECK(counts[MovementLabel::Ascend] > 0);
    CHECK(counts[MovementLabel::Descend] > 0);
    CHECK(counts[MovementLabel::Hold] > 0);
}

TEST_CASE("build_sp: movement output and record validation") {
    SpRecord rec;
    rec.id = "sp1";
    rec.stock_id = "600519";
    rec.stock_name = "贵州茅台";
    rec.news = "白酒板块领涨。";
    rec.posts = "看多情绪升温。";
    rec.price.closes_5d = {1700.0, 1712.5, 1698.0, 1705.25, 1711.0};
    rec.price.next_day_change_rate = 0.02;

    BuildLog log;
    const auto pairs = build_sp(std::vector<SpRecord>{rec}, SpLabelStyle::movement, &log);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].output == "Ascend");
    CHECK(pairs[0].instruction.find("\"贵州茅台\"") != std::string::npos);
    CHECK(pairs[0].instruction.find("\"1700,1712.5,1698,1705.25,1711\"") != std::string::npos);
    CHECK(pairs[0].instruction.find("白酒板块领涨。看多情绪升温。") != std::string::npos);

    const auto remapped = build_sp(std::vector<SpRecord>{rec}, SpLabelStyle::sentiment, nullptr);
    CHECK(remapped[0].output == "Positive");

    SpRecord bad = rec;
    bad.price.closes_5d[2] = -1.0;
    BuildLog bad_log;
    CHECK(build_sp(std::vector<SpRecord>{bad}, SpLabelStyle::movement, &bad_log).empty());
    CHECK(bad_log.errors == 1);
}

TEST_CASE("sp_record_from_json rejects a 4-close record") {
    const auto j = nlohmann::ordered_json::parse(
        R"({"id":"x","stock_id":"s","news":"n","posts":"p",
            "closes_5d":[1,2,3,4],"next_day_change_rate":0.0})");
    CHECK_THROWS_WITH_AS(sp_record_from_json(j), doctest::Contains("closes_5d"), PipelineError);
}

TEST_CASE("build_sp: 10,000 synthetic records match per-record relabeling") {
    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> dist(-0.02, 0.02);
    std::vector<SpRecord> records(10000);
    std::vector<std::string> oracle(10000);
    for (std::size_t i = 0; i < records.size(); ++i) {
        auto& r = records[i];
        r.id = "sp" + std::to_string(i);
        r.stock_id = "000001";
        r.news = "新闻";
        r.posts = "帖子";
        r.price.closes_5d = {10, 10, 10, 10, 10};
        r.price.next_day_change_rate = dist(rng);
        const double rate = r.price.next_day_change_rate;
        oracle[i] = rate > 0.0050 ? "Ascend" : rate < -0.0050 ? "Descend" : "Hold";
    }
    const auto pairs = build_sp(records, SpLabelStyle::movement, nullptr);
    REQUIRE(pairs.size() == records.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        CHECK(pairs[i].output == oracle[i]);
    }
}

TEST_CASE("truncate_pair: identity under budget, boundary truncation") {
    const ByteTokenizer tok;
    InstructionPair pair;
    pair.task = SubDataset::SA;
    pair.slots = {{"paragraph", chars(100, U'a')}};
    pair.content_slot = "paragraph";
    pair.instruction = render_prompt(pair.task, pair.slots);

    const auto in_budget = truncate_pair(pair, tok, 2048);
    CHECK(in_budget.instruction == pair.instruction);  // unchanged

    // Drive the total to exactly 2049 tokens: overhead is the template
    // minus the slot marker.
    const auto overhead = tok.count_tokens(render_prompt(SubDataset::SA, {{"paragraph", ""}}));
    InstructionPair big;
    big.task = SubDataset::SA;
    big.slots = {{"paragraph", chars(2049 - overhead, U'a')}};
    big.content_slot = "paragraph";
    big.instruction = render_prompt(big.task, big.slots);
    REQUIRE(tok.count_tokens(big.instruction) == 2049);

    const auto cut = truncate_pair(big, tok, 2048);
    CHECK(tok.count_tokens(cut.instruction) == 2048);
    CHECK(cut.slots.at("paragraph") == chars(2049 - overhead - 1, U'a'));
}

TEST_CASE("truncate_pair: detokenized result is a prefix of the original") {
    const ByteTokenizer tok;
    std::mt19937_64 rng(8088);
    for (int trial = 0; trial < 50; ++trial) {
        std::u32string content;
        const std::size_t len = 3000 + rng() % 3000;
        for (std::size_t i = 0; i < len; ++i) {
            content.push_back(rng() % 2 == 0 ? static_cast<char32_t>(U'a' + rng() % 26)
                                             : static_cast<char32_t>(0x4E00 + rng() % 100));
        }
        InstructionPair pair;
        pair.task = SubDataset::RS;
        const std::string original = utf8::encode(content);
        pair.slots = {{"report", original}};
        pair.content_slot = "report";
        pair.instruction = render_prompt(pair.task, pair.slots);
        pair.input = original;

        const auto cut = truncate_pair(pair, tok, 2048);
        CHECK(tok.count_tokens(cut.instruction) + tok.count_tokens(cut.input) <= 2048);
        const auto& truncated = cut.slots.at("report");
        CHECK(truncated.size() < original.size());
        CHECK(original.compare(0, truncated.size(), truncated) == 0);  // prefix
        CHECK(cut.input == truncated);  // input tracks the content slot
        CHECK(cut.output == pair.output);  // output never truncated
    }
}

TEST_CASE("truncate_pair: template alone over budget is an error") {
    const ByteTokenizer tok;
    InstructionPair pair;
    pair.task = SubDataset::SA;
    pair.slots = {{"paragraph", "xy"}};
    pair.content_slot = "paragraph";
    pair.instruction = render_prompt(pair.task, pair.slots);
    CHECK_THROWS_AS(truncate_pair(pair, tok, 16), PipelineError);
}

TEST_CASE("plan_batches: clamp arithmetic from the examples") {
    BatchParams params;  // budget 131072, batch in [64, 512]

    SUBCASE("1000 pairs of length 256 pack into two batches of 512/488") {
        std::vector<std::pair<std::string, std::uint64_t>> pairs;
        for (int i = 0; i < 1000; ++i) pairs.emplace_back("p" + std::to_string(i), 256);
        const auto plan = plan_batches(pairs, params);
        REQUIRE(plan.size() == 2);
        CHECK(plan[0].pair_ids.size() == 512);
        CHECK(plan[1].pair_ids.size() == 488);
        CHECK_FALSE(plan[0].remainder);
        CHECK_FALSE(plan[1].remainder);
        CHECK(plan[0].max_len == 256);
    }

    SUBCASE("100 pairs of length 2048 pack into 64 + remainder 36") {
        std::vector<std::pair<std::string, std::uint64_t>> pairs;
        for (int i = 0; i < 100; ++i) pairs.emplace_back("p" + std::to_string(i), 2048);
        const auto plan = plan_batches(pairs, params);
        REQUIRE(plan.size() == 2);
        CHECK(plan[0].pair_ids.size() == 64);
        CHECK(plan[1].pair_ids.size() == 36);
        CHECK_FALSE(plan[0].remainder);
        CHECK(plan[1].remainder);
    }

    SUBCASE("empty input yields an empty plan") {
        CHECK(plan_batches(std::vector<std::pair<std::string, std::uint64_t>>{}, params)
                  .empty());
    }
}

TEST_CASE("plan_batches: partition, size bounds, and length homogeneity") {
    BatchParams params;
    std::mt19937_64 rng(7777);
    std::vector<std::pair<std::string, std::uint64_t>> pairs;
    std::multiset<std::string> input_ids;
    for (int i = 0; i < 5000; ++i) {
        const auto id = "p" + std::to_string(i);
        pairs.emplace_back(id, 256 + rng() % (2048 - 256 + 1));
        input_ids.insert(id);
    }
    const auto plan = plan_batches(pairs, params);
    const auto plan_again = plan_batches(pairs, params);
    REQUIRE(plan.size() == plan_again.size());

    std::multiset<std::string> planned_ids;
    std::map<std::string, std::uint64_t> length_of(pairs.begin(), pairs.end());
    std::uint64_t previous_max = 0;
    for (std::size_t b = 0; b < plan.size(); ++b) {
        const auto& batch = plan[b];
        CHECK(batch.batch_id == b);
        CHECK(batch.pair_ids == plan_again[b].pair_ids);  // deterministic
        if (!batch.remainder) {
            CHECK(batch.pair_ids.size() >= params.min_batch);
            CHECK(batch.pair_ids.size() <= params.max_batch);
        } else {
            CHECK(b == plan.size() - 1);  // only the trailing batch
        }
        std::uint64_t batch_min = UINT64_MAX;
        std::uint64_t batch_max = 0;
        for (const auto& id : batch.pair_ids) {
            planned_ids.insert(id);
            batch_min = std::min(batch_min, length_of.at(id));
            batch_max = std::max(batch_max, length_of.at(id));
        }
        CHECK(batch.max_len == batch_max);
        CHECK(batch_max >= previous_max);  // sorted grouping
        previous_max = batch_max;
        // Within-batch spread stays tight under sorted grouping.
        CHECK(static_cast<double>(batch_max) / static_cast<double>(batch_min) <= 2.0);
    }
    CHECK(planned_ids == input_ids);  // multiset equality: every pair exactly once
}

TEST_CASE("pair serialization round-trips the record schema") {
    InstructionPair pair;
    pair.task = SubDataset::SA;
    pair.instruction = render_prompt(SubDataset::SA, {{"paragraph", "看多"}});
    pair.input = "";
    pair.output = "Positive";
    pair.provenance = {"sm-1", "sm-2"};
    const auto j = pair_to_json(pair);
    CHECK(j["task"] == "SA");
    const auto back = pair_from_json(j);
    CHECK(back.task == pair.task);
    CHECK(back.instruction == pair.instruction);
    CHECK(back.input == pair.input);
    CHECK(back.output == pair.output);
    CHECK(back.provenance == pair.provenance);

    auto missing_output = j;
    missing_output.erase("output");
    CHECK_THROWS_AS(pair_from_json(missing_output), PipelineError);
}
