#include "support/synthetic.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "dedup.hpp"
#include "hashing.hpp"
#include "records.hpp"
#include "utf8.hpp"

namespace fincorpus::testsupport {

namespace {

std::uint64_t next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    return mix64(state);
}

double exact_jaccard(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    std::vector<std::uint64_t> inter;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(inter));
    const auto uni = a.size() + b.size() - inter.size();
    return uni == 0 ? 1.0 : static_cast<double>(inter.size()) / static_cast<double>(uni);
}

// Substitute `edits` scalars; retried with fewer edits until the shingle
// Jaccard stays above `min_jaccard`.
std::string near_duplicate(std::uint64_t& state, const std::string& original,
                           std::size_t edits, double min_jaccard) {
    const auto base = utf8::decode(original);
    const auto base_shingles = shingle_hashes(base, 5);
    for (std::size_t tries = edits; tries > 0; --tries) {
        std::u32string copy = base;
        for (std::size_t e = 0; e < tries; ++e) {
            const auto pos = next(state) % copy.size();
            copy[pos] = static_cast<char32_t>(0x4E00 + next(state) % 2000);
        }
        const auto copy_shingles = shingle_hashes(copy, 5);
        if (exact_jaccard(base_shingles, copy_shingles) >= min_jaccard) {
            return utf8::encode(copy);
        }
    }
    return original;  // exact duplicate still satisfies the bound
}

const std::vector<std::string>& event_labels() {
    static const std::vector<std::string> labels = {
        "M&A", "Bankruptcy", "IPO", "Share Buyback", "Bond Default",
        "Profit Warning", "Executive Change", "New Product Launch",
    };
    return labels;
}

}  // namespace

std::string cjk_prose(std::uint64_t& state, std::size_t scalars) {
    std::u32string text;
    text.reserve(scalars);
    for (std::size_t i = 0; i < scalars; ++i) {
        text.push_back(static_cast<char32_t>(0x4E00 + next(state) % 2000));
    }
    return utf8::encode(text);
}

SyntheticCorpus make_mixed_corpus(std::uint64_t seed) {
    SyntheticCorpus corpus;
    auto& truth = corpus.truth;
    std::uint64_t state = mix64(seed ^ 0x636f7270757321ULL);

    const std::array<std::string, 3> ratings = {"买入", "卖出", "中性"};
    const std::array<std::string, 3> sentiments = {"Positive", "Negative", "Neutral"};

    auto add = [&](RawDocument doc) { corpus.docs.push_back(std::move(doc)); };

    // --- keepers ----------------------------------------------------------
    auto keeper = [&](SubDataset source, const std::string& id, std::size_t scalars,
                      std::map<std::string, std::string> metadata = {}) {
        RawDocument doc;
        doc.id = id;
        doc.source = source;
        doc.text = cjk_prose(state, scalars);
        doc.metadata = std::move(metadata);
        ++truth.kept_after_clean[source];
        add(std::move(doc));
    };

    for (int i = 0; i < 30; ++i) {
        keeper(SubDataset::CP, "cp-" + std::to_string(i), 10050 + next(state) % 500);
    }
    for (int i = 0; i < 120; ++i) {
        keeper(SubDataset::CA, "ca-" + std::to_string(i), 1100 + next(state) % 800);
    }
    for (int i = 0; i < 120; ++i) {
        // Research reports inside the 2000..3000 selection window carry the
        // fine-tuning metadata fields.
        std::map<std::string, std::string> meta;
        const bool mapped_rating = i % 4 != 3;
        meta["rating"] = mapped_rating ? ratings[static_cast<std::size_t>(i) % 3] : "未评级";
        if (i % 5 != 4) {
            meta["title"] = "行业研究" + std::to_string(i);
            meta["outline"] = "一、概况\n二、分析" + std::to_string(i);
            ++truth.td_pairs;
        }
        if (i % 6 != 5) {
            meta["conclusion"] = "结论" + std::to_string(i);
            meta["abstract"] = "摘要" + std::to_string(i);
            ++truth.rs_pairs;
        }
        if (mapped_rating) ++truth.sa_pairs;
        keeper(SubDataset::RR, "rr-" + std::to_string(i), 2100 + next(state) % 800,
               std::move(meta));
    }
    for (int i = 0; i < 250; ++i) {
        std::map<std::string, std::string> meta;
        if (i % 2 == 0) {
            const auto& labels = event_labels();
            std::string events = labels[next(state) % labels.size()];
            ++truth.ed_positive_labels;
            if (i % 6 == 0) {
                std::string second;
                do {
                    second = labels[next(state) % labels.size()];
                } while (events == second);
                events += "|" + second;
                ++truth.ed_positive_labels;
            }
            meta["events"] = events;
        }
        keeper(SubDataset::FN, "fn-" + std::to_string(i), 250 + next(state) % 350,
               std::move(meta));
    }
    for (int i = 0; i < 350; ++i) {
        std::map<std::string, std::string> meta;
        if (i % 3 != 2) {
            meta["sentiment"] = sentiments[static_cast<std::size_t>(i) % 3];
            ++truth.sa_pairs;  // all SM keepers exceed 100 chars
        }
        keeper(SubDataset::SM, "sm-" + std::to_string(i), 150 + next(state) % 250,
               std::move(meta));
    }
    for (int i = 0; i < 60; ++i) {
        keeper(SubDataset::Wiki, "wiki-" + std::to_string(i), 300 + next(state) % 300);
    }

    // --- planted drops ------------------------------------------------------
    auto short_doc = [&](SubDataset source, const std::string& id, std::size_t scalars) {
        RawDocument doc;
        doc.id = id;
        doc.source = source;
        doc.text = cjk_prose(state, scalars);
        ++truth.dropped_length;
        add(std::move(doc));
    };
    for (int i = 0; i < 8; ++i) short_doc(SubDataset::CP, "cp-short-" + std::to_string(i), 5000);
    for (int i = 0; i < 8; ++i) short_doc(SubDataset::CA, "ca-short-" + std::to_string(i), 500);
    for (int i = 0; i < 8; ++i) short_doc(SubDataset::RR, "rr-short-" + std::to_string(i), 900);
    for (int i = 0; i < 8; ++i) short_doc(SubDataset::FN, "fn-short-" + std::to_string(i), 40);
    for (int i = 0; i < 8; ++i) short_doc(SubDataset::SM, "sm-short-" + std::to_string(i), 20);

    for (int i = 0; i < 15; ++i) {
        // 40% private-use scalars: over the 0.30 ceiling.
        RawDocument doc;
        doc.id = "sm-garbled-" + std::to_string(i);
        doc.source = SubDataset::SM;
        std::u32string text = utf8::decode(cjk_prose(state, 120));
        for (std::size_t k = 0; k < 80; ++k) {
            text.push_back(static_cast<char32_t>(0xE000 + next(state) % 256));
        }
        deterministic_shuffle(std::span<char32_t>(text.data(), text.size()), next(state));
        doc.text = utf8::encode(text);
        ++truth.dropped_garbled;
        add(std::move(doc));
    }
    for (int i = 0; i < 15; ++i) {
        RawDocument doc;
        doc.id = "sm-banned-" + std::to_string(i);
        doc.source = SubDataset::SM;
        doc.text = cjk_prose(state, 80) + "博彩" + cjk_prose(state, 80);
        ++truth.dropped_banned;
        add(std::move(doc));
    }

    // --- planted near-duplicates (appended, so originals are first-seen) ----
    auto plant_dups = [&](SubDataset source, const std::string& prefix, int count) {
        for (int i = 0; i < count; ++i) {
            const std::string orig_id = prefix + std::to_string(i * 3);
            const auto it = std::find_if(corpus.docs.begin(), corpus.docs.end(),
                                         [&](const RawDocument& d) { return d.id == orig_id; });
            if (it == corpus.docs.end()) throw std::logic_error("missing original " + orig_id);
            RawDocument dup;
            dup.id = "dup-of-" + orig_id;
            dup.source = source;
            dup.text = near_duplicate(state, it->text, 2, 0.9);
            ++truth.kept_after_clean[source];  // survives cleaning, dies in dedup
            truth.dup_pairs.emplace_back(orig_id, dup.id);
            add(std::move(dup));
        }
    };
    plant_dups(SubDataset::FN, "fn-", 20);
    plant_dups(SubDataset::SM, "sm-", 20);

    return corpus;
}

std::vector<RawDocument> make_posts(std::uint64_t seed, std::size_t count,
                                    std::size_t avg_chars) {
    std::uint64_t state = mix64(seed ^ 0x706f737473ULL);
    std::vector<RawDocument> docs;
    docs.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        RawDocument doc;
        doc.id = "post-" + std::to_string(i);
        doc.source = SubDataset::SM;
        const std::size_t len = avg_chars / 2 + next(state) % avg_chars;
        doc.text = cjk_prose(state, len);
        docs.push_back(std::move(doc));
    }
    return docs;
}

std::vector<QaRecord> make_qa_records(std::uint64_t seed, std::size_t count) {
    std::uint64_t state = mix64(seed ^ 0x7161ULL);
    std::vector<QaRecord> records;
    records.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        QaRecord rec;
        rec.id = "qa-" + std::to_string(i);
        rec.paragraph = "营业收入为" + std::to_string(next(state) % 1000) + "亿元。" +
                        cjk_prose(state, 60);
        const std::size_t turns = next(state) % 3;
        for (std::size_t t = 0; t < turns; ++t) {
            rec.history.push_back({"第" + std::to_string(t + 1) + "个问题？",
                                   "回答" + std::to_string(t + 1)});
        }
        rec.question = "同比增长率是多少？";
        rec.answer = std::to_string(next(state) % 40) + "%";
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<SpRecord> make_sp_records(std::uint64_t seed, std::size_t count) {
    std::uint64_t state = mix64(seed ^ 0x7370ULL);
    std::vector<SpRecord> records;
    records.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        SpRecord rec;
        rec.id = "sp-" + std::to_string(i);
        rec.stock_id = std::to_string(600000 + next(state) % 1000);
        rec.stock_name = "股票" + std::to_string(i % 500);
        rec.news = cjk_prose(state, 80);
        rec.posts = cjk_prose(state, 60);
        double close = 5.0 + static_cast<double>(next(state) % 10000) / 100.0;
        for (auto& c : rec.price.closes_5d) {
            close *= 1.0 + (static_cast<double>(next(state) % 2001) - 1000.0) / 50000.0;
            c = close;
        }
        rec.price.next_day_change_rate =
            (static_cast<double>(next(state) % 4001) - 2000.0) / 100000.0;  // [-0.02, 0.02]
        records.push_back(std::move(rec));
    }
    return records;
}

void write_raw_jsonl(const std::string& path, const std::vector<RawDocument>& docs) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& doc : docs) {
        out << raw_document_to_json(doc).dump() << '\n';
    }
}

void write_qa_jsonl(const std::string& path, const std::vector<QaRecord>& records) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& rec : records) {
        ojson turns = ojson::array();
        for (const auto& t : rec.history) {
            turns.push_back({{"question", t.question}, {"answer", t.answer}});
        }
        ojson j;
        j["id"] = rec.id;
        j["paragraph"] = rec.paragraph;
        j["history"] = turns;
        j["question"] = rec.question;
        j["answer"] = rec.answer;
        out << j.dump() << '\n';
    }
}

void write_sp_jsonl(const std::string& path, const std::vector<SpRecord>& records) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& rec : records) {
        ojson j;
        j["id"] = rec.id;
        j["stock_id"] = rec.stock_id;
        j["stock_name"] = rec.stock_name;
        j["news"] = rec.news;
        j["posts"] = rec.posts;
        j["closes_5d"] = rec.price.closes_5d;
        j["next_day_change_rate"] = rec.price.next_day_change_rate;
        out << j.dump() << '\n';
    }
}

}  // namespace fincorpus::testsupport
