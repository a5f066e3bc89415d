#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corpus_model.hpp"

namespace fincorpus {

// Hashes of every contiguous k-scalar window; de-duplicated and sorted so
// identical texts always produce identical sets.
struct ShingleSet {
    std::string doc_id;
    std::vector<std::uint64_t> shingles;
};

ShingleSet shingles(std::string_view text, int k, std::string doc_id = {});
std::vector<std::uint64_t> shingle_hashes(std::u32string_view scalars, int k);

struct MinHashSignature {
    std::string doc_id;
    std::vector<std::uint64_t> values;
};

// Seeded family of H pairwise-independent 64-bit permutations
// h_i(x) = a_i * x + b_i with odd a_i (mod 2^64).
class MinHashFamily {
public:
    MinHashFamily(int num_hashes, std::uint64_t seed);

    MinHashSignature signature(std::span<const std::uint64_t> shingle_set,
                               std::string doc_id = {}) const;
    int num_hashes() const { return static_cast<int>(mul_.size()); }

private:
    std::vector<std::uint64_t> mul_;
    std::vector<std::uint64_t> add_;
};

// Fraction of agreeing positions; unbiased estimator of the Jaccard
// similarity of the underlying shingle sets.
double jaccard_estimate(const MinHashSignature& a, const MinHashSignature& b);

struct LshParams {
    int shingle_k = 5;
    int num_hashes = 128;
    int bands = 32;
    int rows_per_band = 4;
    double similarity_threshold = 0.8;
    std::uint64_t seed = 0;
    bool cross_source = false;

    void validate() const;  // bands * rows_per_band == num_hashes, etc.
};

// Band keys for one signature; two documents are LSH candidates iff they
// share a key at any band position.
std::vector<std::uint64_t> band_keys(const MinHashSignature& sig, int bands, int rows_per_band);
bool bands_collide(const MinHashSignature& a, const MinHashSignature& b, int bands,
                   int rows_per_band);

// Banded index over insertion order. query_and_insert returns the indices
// of previously inserted documents sharing at least one band bucket, then
// inserts the new signature.
class LshIndex {
public:
    explicit LshIndex(const LshParams& params);

    std::vector<std::uint32_t> query_and_insert(const MinHashSignature& sig);
    std::uint32_t size() const { return next_index_; }

private:
    int bands_;
    int rows_;
    std::vector<std::unordered_map<std::uint64_t, std::vector<std::uint32_t>>> buckets_;
    std::uint32_t next_index_ = 0;
};

struct DuplicateCluster {
    std::string kept_id;
    std::vector<std::string> dropped_ids;  // stream order
};

struct DedupResult {
    std::vector<std::size_t> kept_indices;  // stream order
    std::vector<DuplicateCluster> clusters;  // only clusters with drops
    std::uint64_t candidate_pairs = 0;
    std::uint64_t duplicate_pairs = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> verified_pairs;
};

// Single pass in stream order: each document is queried against everything
// inserted before it; a pair is duplicate iff LSH proposes it and the
// signature estimate reaches the threshold. The first-seen document of each
// connected cluster is kept.
DedupResult dedup_corpus(std::span<const CleanDocument> docs, const LshParams& params,
                         int threads = 0);

// Same pass over pre-computed shingle sets (testing and synthetic corpora).
DedupResult dedup_shingle_sets(std::span<const std::vector<std::uint64_t>> sets,
                               std::span<const std::string> ids, const LshParams& params,
                               int threads = 0);

}  // namespace fincorpus
