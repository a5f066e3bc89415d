#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "corpus_model.hpp"
#include "sft_builder.hpp"

namespace fincorpus::testsupport {

// Ground truth recorded while the corpus is generated; the pipeline under
// test must reproduce these numbers.
struct GroundTruth {
    std::map<SubDataset, std::uint64_t> kept_after_clean;
    std::uint64_t dropped_length = 0;
    std::uint64_t dropped_garbled = 0;
    std::uint64_t dropped_banned = 0;
    // Planted near-duplicate pairs (kept id, dropped id), per dedup group.
    std::vector<std::pair<std::string, std::string>> dup_pairs;
    std::uint64_t sa_pairs = 0;  // rating-mapped reports + labeled posts
    std::uint64_t td_pairs = 0;
    std::uint64_t rs_pairs = 0;
    std::uint64_t ed_positive_labels = 0;  // pairs = labels * (1 + negatives)
};

struct SyntheticCorpus {
    std::vector<RawDocument> docs;  // stream order: originals, then dup copies
    GroundTruth truth;
};

// Mixed-source corpus (~1k documents) with planted drops, near-duplicate
// pairs, and fine-tuning metadata. Deterministic in `seed`.
SyntheticCorpus make_mixed_corpus(std::uint64_t seed);

// Social-media-like posts of ~avg_chars scalars each (throughput runs).
std::vector<RawDocument> make_posts(std::uint64_t seed, std::size_t count,
                                    std::size_t avg_chars);

std::vector<QaRecord> make_qa_records(std::uint64_t seed, std::size_t count);
std::vector<SpRecord> make_sp_records(std::uint64_t seed, std::size_t count);

void write_raw_jsonl(const std::string& path, const std::vector<RawDocument>& docs);
void write_qa_jsonl(const std::string& path, const std::vector<QaRecord>& records);
void write_sp_jsonl(const std::string& path, const std::vector<SpRecord>& records);

// Random CJK prose of exactly `scalars` scalar values.
std::string cjk_prose(std::uint64_t& state, std::size_t scalars);

}  // namespace fincorpus::testsupport
