#include <doctest.h>

#include "config.hpp"
#include "corpus_model.hpp"
#include "errors.hpp"

using namespace fincorpus;

TEST_CASE("sub-dataset tags round-trip through parse and print") {
    const char* tags[] = {"CP", "CA", "RR", "FN", "SM", "Wiki", "SA", "ED", "TD", "RS", "QA", "SP"};
    for (const char* tag : tags) {
        const auto parsed = parse_tag(tag);
        REQUIRE(parsed.has_value());
        CHECK(to_tag(*parsed) == tag);
    }
    CHECK_FALSE(parse_tag("XX").has_value());
    CHECK_FALSE(parse_tag("wiki").has_value());
    CHECK_FALSE(parse_tag("").has_value());
}

TEST_CASE("taxonomy split: six pre-training and six fine-tuning tags") {
    int pretraining = 0;
    int sft = 0;
    for (int i = 0; i < 12; ++i) {
        const auto s = static_cast<SubDataset>(i);
        if (is_pretraining(s)) ++pretraining;
        if (is_sft(s)) ++sft;
        CHECK(is_pretraining(s) != is_sft(s));
    }
    CHECK(pretraining == 6);
    CHECK(sft == 6);
}

TEST_CASE("default policy table matches the per-source thresholds") {
    const auto policies = default_policies();
    REQUIRE(policies.size() == 6);

    CHECK(policies.at(SubDataset::CP).min_chars == 10000);
    CHECK(policies.at(SubDataset::CA).min_chars == 1000);
    CHECK(policies.at(SubDataset::RR).min_chars == 2000);
    CHECK(policies.at(SubDataset::FN).min_chars == 100);
    CHECK(policies.at(SubDataset::SM).min_chars == 50);
    CHECK(policies.at(SubDataset::Wiki).min_chars == 0);

    CHECK(policies.at(SubDataset::FN).dedup);
    CHECK(policies.at(SubDataset::SM).dedup);
    CHECK_FALSE(policies.at(SubDataset::CP).dedup);
    CHECK_FALSE(policies.at(SubDataset::Wiki).dedup);

    CHECK(policies.at(SubDataset::SM).banned_word_filter);
    CHECK_FALSE(policies.at(SubDataset::FN).banned_word_filter);

    REQUIRE(policies.at(SubDataset::SM).garbled_ratio_max.has_value());
    CHECK(*policies.at(SubDataset::SM).garbled_ratio_max == doctest::Approx(0.30));
    CHECK_FALSE(policies.at(SubDataset::CP).garbled_ratio_max.has_value());

    CHECK(policies.at(SubDataset::Wiki).to_simplified);
    CHECK_FALSE(policies.at(SubDataset::SM).to_simplified);
}

TEST_CASE("load_policies: empty config yields the default table") {
    const auto policies = load_policies(Config{});
    CHECK(policies.at(SubDataset::CP).min_chars == 10000);
    CHECK(policies.at(SubDataset::CA).min_chars == 1000);
    CHECK(policies.at(SubDataset::RR).min_chars == 2000);
    CHECK(policies.at(SubDataset::FN).min_chars == 100);
    CHECK(policies.at(SubDataset::SM).min_chars == 50);
}

TEST_CASE("load_policies: single-field override keeps the rest") {
    const auto cfg = Config::parse_string("[policies.SM]\nmin_chars = 60\n");
    const auto policies = load_policies(cfg);
    CHECK(policies.at(SubDataset::SM).min_chars == 60);
    CHECK(policies.at(SubDataset::SM).banned_word_filter);  // untouched default
    CHECK(*policies.at(SubDataset::SM).garbled_ratio_max == doctest::Approx(0.30));
    CHECK(policies.at(SubDataset::CP).min_chars == 10000);  // other sources untouched
}

TEST_CASE("load_policies: unknown source is rejected by name") {
    const auto cfg = Config::parse_string("[policies.XX]\nmin_chars = 10\n");
    CHECK_THROWS_WITH_AS(load_policies(cfg), doctest::Contains("XX"), PipelineError);
    try {
        load_policies(cfg);
        FAIL("expected a configuration error");
    } catch (const PipelineError& e) {
        CHECK(e.kind() == ErrorKind::config);
    }
}

TEST_CASE("load_policies: fine-tuning tags are not cleaning sources") {
    const auto cfg = Config::parse_string("[policies.SA]\nmin_chars = 10\n");
    CHECK_THROWS_AS(load_policies(cfg), PipelineError);
}

TEST_CASE("load_policies: unknown key inside a policy section is named") {
    const auto cfg = Config::parse_string("[policies.SM]\nmin_charss = 10\n");
    CHECK_THROWS_WITH_AS(load_policies(cfg), doctest::Contains("min_charss"), PipelineError);
}

TEST_CASE("reference taxonomy fixture: 98 leaves, depth 7, labels unique") {
    const auto tax =
        EventTaxonomy::parse_file(std::string(FINCORPUS_SOURCE_DIR) + "/data/taxonomy.txt");
    CHECK(tax.leaf_count() == 98);
    CHECK(tax.depth() == 7);
    CHECK(tax.contains("M&A"));
    CHECK(tax.contains("Bankruptcy"));
    CHECK(tax.contains("Rate Hike"));
    CHECK_FALSE(tax.contains("NotACategory"));
}

TEST_CASE("taxonomy parser rejects duplicates and over-deep trees") {
    CHECK_THROWS_AS(EventTaxonomy::parse_string("root\n  a\n  a\n"), PipelineError);
    CHECK_THROWS_AS(
        EventTaxonomy::parse_string("r\n  a\n    b\n      c\n        d\n          e\n"
                                    "            f\n              g\n"),
        PipelineError);  // depth 8
    CHECK_THROWS_AS(EventTaxonomy::parse_string(""), PipelineError);
    CHECK_THROWS_AS(EventTaxonomy::parse_string("r\n      skip-levels\n"), PipelineError);

    const auto ok = EventTaxonomy::parse_string("root\n  a\n    a1\n    a2\n  b\n");
    CHECK(ok.depth() == 3);
    CHECK(ok.leaf_count() == 3);  // a1, a2, b
    CHECK(ok.contains("a"));
    CHECK(ok.contains("b"));
}
