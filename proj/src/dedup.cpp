#include "dedup.hpp"

#include <algorithm>
#include <numeric>

#include "errors.hpp"
#include "hashing.hpp"
#include "parallel.hpp"
#include "utf8.hpp"

namespace fincorpus {

std::vector<std::uint64_t> shingle_hashes(std::u32string_view scalars, int k) {
    if (k < 1) throw_config("shingle size k must be >= 1");
    std::vector<std::uint64_t> out;
    const auto uk = static_cast<std::size_t>(k);
    if (scalars.size() < uk) return out;
    out.reserve(scalars.size() - uk + 1);
    constexpr std::uint64_t kMul = 0x9e3779b97f4a7c15ULL;
    for (std::size_t i = 0; i + uk <= scalars.size(); ++i) {
        std::uint64_t h = 0x8f1bbcdcbfa53e0bULL ^ (static_cast<std::uint64_t>(k) * kMul);
        for (std::size_t j = 0; j < uk; ++j) {
            h = mix64(h ^ static_cast<std::uint64_t>(scalars[i + j])) * kMul;
        }
        out.push_back(mix64(h));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ShingleSet shingles(std::string_view text, int k, std::string doc_id) {
    ShingleSet set;
    set.doc_id = std::move(doc_id);
    set.shingles = shingle_hashes(utf8::decode(text), k);
    return set;
}

MinHashFamily::MinHashFamily(int num_hashes, std::uint64_t seed) {
    if (num_hashes < 1) throw_config("num_hashes must be >= 1");
    mul_.reserve(static_cast<std::size_t>(num_hashes));
    add_.reserve(static_cast<std::size_t>(num_hashes));
    std::uint64_t state = seed ^ 0xa0761d6478bd642fULL;
    auto next = [&state]() {
        state += 0x9e3779b97f4a7c15ULL;
        return mix64(state);
    };
    for (int i = 0; i < num_hashes; ++i) {
        mul_.push_back(next() | 1ULL);  // odd multiplier keeps the map bijective
        add_.push_back(next());
    }
}

MinHashSignature MinHashFamily::signature(std::span<const std::uint64_t> shingle_set,
                                          std::string doc_id) const {
    MinHashSignature sig;
    sig.doc_id = std::move(doc_id);
    const std::size_t h = mul_.size();
    sig.values.assign(h, UINT64_MAX);
    for (const std::uint64_t s : shingle_set) {
        for (std::size_t i = 0; i < h; ++i) {
            const std::uint64_t v = mul_[i] * s + add_[i];
            if (v < sig.values[i]) sig.values[i] = v;
        }
    }
    return sig;
}

double jaccard_estimate(const MinHashSignature& a, const MinHashSignature& b) {
    if (a.values.size() != b.values.size() || a.values.empty()) {
        throw_data("jaccard_estimate: signature sizes differ (" +
                   std::to_string(a.values.size()) + " vs " + std::to_string(b.values.size()) +
                   ")");
    }
    std::size_t match = 0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        if (a.values[i] == b.values[i]) ++match;
    }
    return static_cast<double>(match) / static_cast<double>(a.values.size());
}

void LshParams::validate() const {
    if (shingle_k < 1) throw_config("dedup.shingle_k must be >= 1");
    if (num_hashes < 1) throw_config("dedup.num_hashes must be >= 1");
    if (bands < 1 || rows_per_band < 1) {
        throw_config("dedup.bands and dedup.rows_per_band must be >= 1");
    }
    if (bands * rows_per_band != num_hashes) {
        throw_config("dedup: bands * rows_per_band must equal num_hashes (" +
                     std::to_string(bands) + " * " + std::to_string(rows_per_band) +
                     " != " + std::to_string(num_hashes) + ")");
    }
    if (similarity_threshold < 0.0 || similarity_threshold > 1.0) {
        throw_config("dedup.similarity_threshold must be in [0,1]");
    }
}

std::vector<std::uint64_t> band_keys(const MinHashSignature& sig, int bands, int rows_per_band) {
    const auto ub = static_cast<std::size_t>(bands);
    const auto ur = static_cast<std::size_t>(rows_per_band);
    if (sig.values.size() != ub * ur) {
        throw_data("band_keys: signature length does not match bands * rows");
    }
    std::vector<std::uint64_t> keys(ub);
    for (std::size_t b = 0; b < ub; ++b) {
        std::uint64_t h = mix64(0x51ed270b0a1ce78bULL ^ b);
        for (std::size_t r = 0; r < ur; ++r) {
            h = mix64(h ^ sig.values[b * ur + r]) * 0x9e3779b97f4a7c15ULL;
        }
        keys[b] = mix64(h);
    }
    return keys;
}

bool bands_collide(const MinHashSignature& a, const MinHashSignature& b, int bands,
                   int rows_per_band) {
    const auto ka = band_keys(a, bands, rows_per_band);
    const auto kb = band_keys(b, bands, rows_per_band);
    for (std::size_t i = 0; i < ka.size(); ++i) {
        if (ka[i] == kb[i]) return true;
    }
    return false;
}

LshIndex::LshIndex(const LshParams& params)
    : bands_(params.bands), rows_(params.rows_per_band) {
    params.validate();
    buckets_.resize(static_cast<std::size_t>(bands_));
}

std::vector<std::uint32_t> LshIndex::query_and_insert(const MinHashSignature& sig) {
    const auto keys = band_keys(sig, bands_, rows_);
    std::vector<std::uint32_t> candidates;
    for (std::size_t b = 0; b < keys.size(); ++b) {
        auto& bucket = buckets_[b][keys[b]];
        candidates.insert(candidates.end(), bucket.begin(), bucket.end());
        bucket.push_back(next_index_);
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    ++next_index_;
    return candidates;
}

namespace {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        // Smaller index wins the root so first-seen is always the keeper.
        if (a < b) {
            parent_[b] = a;
        } else {
            parent_[a] = b;
        }
    }

private:
    std::vector<std::size_t> parent_;
};

DedupResult run_dedup(std::span<const MinHashSignature> sigs,
                      std::span<const std::string> ids, const LshParams& params) {
    DedupResult result;
    const std::size_t n = sigs.size();
    LshIndex index(params);
    UnionFind uf(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto candidates = index.query_and_insert(sigs[i]);
        result.candidate_pairs += candidates.size();
        for (const std::uint32_t c : candidates) {
            const double est = jaccard_estimate(sigs[i], sigs[c]);
            if (est >= params.similarity_threshold) {
                ++result.duplicate_pairs;
                result.verified_pairs.emplace_back(c, static_cast<std::uint32_t>(i));
                uf.unite(c, i);
            }
        }
    }
    std::unordered_map<std::size_t, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < n; ++i) {
        members[uf.find(i)].push_back(i);
    }
    result.kept_indices.reserve(members.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (uf.find(i) == i) result.kept_indices.push_back(i);
    }
    for (const std::size_t root : result.kept_indices) {
        const auto& m = members.at(root);
        if (m.size() < 2) continue;
        DuplicateCluster cluster;
        cluster.kept_id = ids[root];
        for (const std::size_t idx : m) {
            if (idx != root) cluster.dropped_ids.push_back(ids[idx]);
        }
        result.clusters.push_back(std::move(cluster));
    }
    return result;
}

}  // namespace

DedupResult dedup_corpus(std::span<const CleanDocument> docs, const LshParams& params,
                         int threads) {
    params.validate();
    const MinHashFamily family(params.num_hashes, params.seed);
    std::vector<MinHashSignature> sigs(docs.size());
    parallel_for(docs.size(), threads, [&](std::size_t i) {
        sigs[i] = family.signature(
            shingle_hashes(utf8::decode(docs[i].clean_text), params.shingle_k));
    });
    std::vector<std::string> ids(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) ids[i] = docs[i].id;
    return run_dedup(sigs, ids, params);
}

DedupResult dedup_shingle_sets(std::span<const std::vector<std::uint64_t>> sets,
                               std::span<const std::string> ids, const LshParams& params,
                               int threads) {
    params.validate();
    const MinHashFamily family(params.num_hashes, params.seed);
    std::vector<MinHashSignature> sigs(sets.size());
    parallel_for(sets.size(), threads, [&](std::size_t i) {
        sigs[i] = family.signature(sets[i]);
    });
    return run_dedup(sigs, ids, params);
}

}  // namespace fincorpus
