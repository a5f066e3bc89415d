#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "cleaning.hpp"
#include "errors.hpp"
#include "utf8.hpp"

using namespace fincorpus;

namespace {

std::string repeat_scalar(char32_t c, std::size_t n) {
    std::string out;
    for (std::size_t i = 0; i < n; ++i) utf8::append_scalar(out, c);
    return out;
}

RawDocument make_doc(std::string id, SubDataset source, std::string text) {
    RawDocument doc;
    doc.id = std::move(id);
    doc.source = source;
    doc.text = std::move(text);
    return doc;
}

}  // namespace

TEST_CASE("strip_artifacts removes table-like lines, keeps prose") {
    CHECK(strip_artifacts("营收│123│456\n公司经营稳健") == "公司经营稳健");
    CHECK(strip_artifacts("正常段落。") == "正常段落。");
    CHECK(strip_artifacts("1.市场规模") == "1.市场规模");  // digits embedded in prose survive
    CHECK(strip_artifacts("－－－－－\n报告正文") == "报告正文");
    CHECK(strip_artifacts("========\n正文继续") == "正文继续");
    CHECK(strip_artifacts("────────") == "");  // pure box-drawing line vanishes entirely
}

TEST_CASE("strip_artifacts removes replacement and control characters in place") {
    std::string text = "营收增长";
    utf8::append_scalar(text, 0xFFFD);
    utf8::append_scalar(text, 0xFFFD);
    utf8::append_scalar(text, 0xFFFD);
    text += "平稳";
    CHECK(strip_artifacts(text) == "营收增长平稳");
    CHECK(strip_artifacts("a\x01\x02z") == "az");
    CHECK(strip_artifacts("第一段\n\n第二段") == "第一段\n\n第二段");  // blank lines survive
}

TEST_CASE("strip_artifacts: >60% digit/punct boundary is strict") {
    // 3 digits out of 5 scalars = 60%: not "more than", so the line stays.
    CHECK(strip_artifacts("123中文") == "123中文");
    // 4 of 5 = 80%: table-like, dropped.
    CHECK(strip_artifacts("1234中") == "");
}

TEST_CASE("garbled_ratio: construction-based oracle") {
    CHECK(garbled_ratio("股市上涨") == doctest::Approx(0.0));
    CHECK(garbled_ratio("") == doctest::Approx(1.0));

    // 3 garbled + 7 CJK scalars -> 0.3 by definition.
    std::string text = repeat_scalar(0xE000, 3) + repeat_scalar(U'涨', 7);
    CHECK(garbled_ratio(text) == doctest::Approx(0.3));

    // Random 1000-scalar strings assembled from known-garbled and
    // known-clean alphabets; expected ratio is known by construction.
    const std::vector<char32_t> clean = {U'股', U'市', U'a', U'Z', U'9', U'。', U'，',
                                         U'￥', 0x20AC, U' ', U'\n', 0x2014};
    const std::vector<char32_t> garbled = {0xE000, 0xE123, 0x0378, 0x3040 + 2, 0x0489,
                                           0xFFFD, 0x200B, 0x1F600};
    std::mt19937_64 rng(20240501);
    for (int trial = 0; trial < 20; ++trial) {
        std::u32string scalars;
        std::size_t planted = 0;
        for (int i = 0; i < 1000; ++i) {
            if (rng() % 4 == 0) {
                scalars.push_back(garbled[rng() % garbled.size()]);
                ++planted;
            } else {
                scalars.push_back(clean[rng() % clean.size()]);
            }
        }
        CHECK(garbled_ratio(scalars) ==
              doctest::Approx(static_cast<double>(planted) / 1000.0).epsilon(1e-12));
    }
}

TEST_CASE("to_simplified maps the bundled table and nothing else") {
    CHECK(to_simplified("臺灣經濟") == "台湾经济");
    CHECK(to_simplified("已是简体") == "已是简体");
    CHECK(to_simplified("ABC123") == "ABC123");
    CHECK(to_simplified("銀行貸款風險") == "银行贷款风险");
}

TEST_CASE("to_simplified is idempotent and length-preserving") {
    const std::vector<std::string> samples = {
        "臺灣經濟體系穩定發展", "證券市場交易量創新高", "đã mixed 中英文 text 123",
        "漢語簡化字測試", "已经是简体的句子"};
    for (const auto& s : samples) {
        const auto once = to_simplified(s);
        CHECK(to_simplified(once) == once);
        CHECK(utf8::scalar_count(once) == utf8::scalar_count(s));
    }
}

TEST_CASE("contains_banned: per-term brute-force scan oracle") {
    const std::vector<std::string> terms = {"博彩", "诈骗", "传销", "scam"};
    const auto index = BannedWordIndex::from_terms(terms);

    const std::vector<std::string> texts = {
        "正常的财经讨论内容",
        "这里有博彩广告",
        "既有博彩又有诈骗的内容",
        "传销组织和scam网站都出现了",
        "博彩博彩博彩",  // repeated hits reported once
        "扑朔迷离的市场",
    };
    for (const auto& text : texts) {
        // Oracle: scan each term independently with std::string::find.
        std::vector<std::string> expected;
        for (const auto& term : terms) {
            if (text.find(term) != std::string::npos) expected.push_back(term);
        }
        const auto result = contains_banned(text, index);
        CHECK(result.matched == !expected.empty());
        CHECK(result.terms == expected);
    }
}

TEST_CASE("contains_banned: overlapping and nested terms") {
    const auto index = BannedWordIndex::from_terms({"abc", "bcd", "abcd", "cd"});
    const auto result = contains_banned("xabcdy", index);
    CHECK(result.matched);
    CHECK(result.terms == std::vector<std::string>{"abc", "bcd", "abcd", "cd"});
}

TEST_CASE("banned dictionary file: comments ignored, missing file is a config error") {
    CHECK_THROWS_AS(BannedWordIndex::from_file("/nonexistent/banned.txt"), PipelineError);
    const auto index = BannedWordIndex::from_file(std::string(FINCORPUS_SOURCE_DIR) +
                                                  "/data/banned_words.txt");
    CHECK(index.size() == 20);
    CHECK(contains_banned("推荐一个博彩网站", index).matched);
    CHECK_FALSE(contains_banned("今日大盘点评", index).matched);
}

TEST_CASE("apply_policy: fixed order and drop reasons") {
    const auto policies = default_policies();
    const BannedWordIndex dict = BannedWordIndex::from_terms({"博彩"});

    SUBCASE("CP document one char below threshold drops for length") {
        const auto doc = make_doc("cp1", SubDataset::CP, repeat_scalar(U'文', 9999));
        const auto outcome = apply_policy(doc, policies.at(SubDataset::CP), nullptr);
        REQUIRE(outcome.drop.has_value());
        CHECK(*outcome.drop == DropReason::length);
    }

    SUBCASE("CP document at threshold survives") {
        const auto doc = make_doc("cp2", SubDataset::CP, repeat_scalar(U'文', 10000));
        const auto outcome = apply_policy(doc, policies.at(SubDataset::CP), nullptr);
        REQUIRE(outcome.doc.has_value());
        CHECK(outcome.doc->char_count == 10000);
    }

    SUBCASE("SM garbled ratio 0.31 drops, 0.30 is kept with garbled scalars removed") {
        const std::string garbled31 =
            repeat_scalar(U'涨', 69) + repeat_scalar(0xE000, 31);
        const std::string garbled30 =
            repeat_scalar(U'涨', 70) + repeat_scalar(0xE000, 30);
        const auto drop =
            apply_policy(make_doc("sm1", SubDataset::SM, garbled31), policies.at(SubDataset::SM),
                         &dict);
        REQUIRE(drop.drop.has_value());
        CHECK(*drop.drop == DropReason::garbled);

        const auto keep =
            apply_policy(make_doc("sm2", SubDataset::SM, garbled30), policies.at(SubDataset::SM),
                         &dict);
        REQUIRE(keep.doc.has_value());
        CHECK(keep.doc->garbled_ratio == doctest::Approx(0.30));
        CHECK(keep.doc->char_count == 70);  // garbled scalars removed from the survivor
        CHECK(keep.doc->clean_text == repeat_scalar(U'涨', 70));
    }

    SUBCASE("SM banned term drops after cleaning") {
        const std::string text = "本帖推荐博彩网站" + repeat_scalar(U'栗', 60);
        const auto outcome =
            apply_policy(make_doc("sm3", SubDataset::SM, text), policies.at(SubDataset::SM),
                         &dict);
        REQUIRE(outcome.drop.has_value());
        CHECK(*outcome.drop == DropReason::banned);
    }

    SUBCASE("banned filter without a dictionary is a configuration error") {
        const auto doc = make_doc("sm4", SubDataset::SM, repeat_scalar(U'文', 60));
        CHECK_THROWS_AS(apply_policy(doc, policies.at(SubDataset::SM), nullptr), PipelineError);
    }

    SUBCASE("Wiki documents are converted to simplified before the length check") {
        auto policy = policies.at(SubDataset::Wiki);
        policy.min_chars = 4;
        const auto outcome =
            apply_policy(make_doc("w1", SubDataset::Wiki, "臺灣經濟"), policy, nullptr);
        REQUIRE(outcome.doc.has_value());
        CHECK(outcome.doc->clean_text == "台湾经济");
    }

    SUBCASE("length check runs on the post-cleaning count") {
        // 100 prose scalars plus a table line; the table line is stripped
        // first, so the document falls below FN's 100-char minimum.
        const std::string text = repeat_scalar(U'文', 99) + "\n12345│678│90";
        const auto outcome =
            apply_policy(make_doc("fn1", SubDataset::FN, text), policies.at(SubDataset::FN),
                         nullptr);
        REQUIRE(outcome.drop.has_value());
        CHECK(*outcome.drop == DropReason::length);
    }
}

TEST_CASE("apply_policy: kept documents satisfy every policy invariant") {
    const auto policies = default_policies();
    const BannedWordIndex dict = BannedWordIndex::from_terms({"博彩", "诈骗"});
    std::mt19937_64 rng(771155);
    const std::u32string alphabet = U"股市上涨下跌公司财报分析师德abcxyz0129。，！—１";
    std::vector<char32_t> garbled_pool = {0xE000, 0x0378, 0xFFFD, 0x3041};

    int kept_count = 0;
    for (int i = 0; i < 500; ++i) {
        std::u32string scalars;
        const std::size_t len = 20 + rng() % 150;
        for (std::size_t k = 0; k < len; ++k) {
            if (rng() % 10 == 0) {
                scalars.push_back(garbled_pool[rng() % garbled_pool.size()]);
            } else {
                scalars.push_back(alphabet[rng() % alphabet.size()]);
            }
        }
        const auto doc = make_doc("d" + std::to_string(i), SubDataset::SM,
                                  utf8::encode(scalars));
        const auto& policy = policies.at(SubDataset::SM);
        const auto outcome = apply_policy(doc, policy, &dict);
        // Determinism: identical inputs give identical results.
        const auto outcome2 = apply_policy(doc, policy, &dict);
        CHECK(outcome.doc.has_value() == outcome2.doc.has_value());
        if (!outcome.doc.has_value()) {
            CHECK(*outcome.drop == *outcome2.drop);
            continue;
        }
        ++kept_count;
        CHECK(outcome.doc->clean_text == outcome2.doc->clean_text);
        CHECK(outcome.doc->char_count >= policy.min_chars);
        CHECK(outcome.doc->garbled_ratio <= *policy.garbled_ratio_max);
        CHECK_FALSE(contains_banned(outcome.doc->clean_text, dict).matched);
        CHECK(utf8::scalar_count(outcome.doc->clean_text) == outcome.doc->char_count);
        CHECK(garbled_ratio(outcome.doc->clean_text) == doctest::Approx(0.0));
    }
    CHECK(kept_count > 0);
}
