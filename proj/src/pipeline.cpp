#include "pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "cleaning.hpp"
#include "dedup.hpp"
#include "errors.hpp"
#include "hashing.hpp"
#include "ingestion.hpp"
#include "log.hpp"
#include "packing.hpp"
#include "parallel.hpp"
#include "records.hpp"
#include "sft_builder.hpp"
#include "stats.hpp"

namespace fincorpus {

namespace {

namespace fs = std::filesystem;

constexpr const char* kDefaultBannedWords = "data/banned_words.txt";
constexpr const char* kDefaultRatingMap = "data/rating_map.tsv";
constexpr const char* kDefaultTaxonomy = "data/taxonomy.txt";

struct ManifestWriter {
    std::string stage;
    const PipelineOptions* opts = nullptr;
    ojson inputs = ojson::array();
    ojson data_files = ojson::object();
    ojson params = ojson::object();
    ojson outputs = ojson::array();

    void add_input(const std::string& path) {
        inputs.push_back({{"path", path}, {"digest", to_hex(hash_file(path))}});
    }
    void add_data_file(const std::string& name, const std::string& path) {
        data_files[name] = {{"path", path}, {"digest", to_hex(hash_file(path))}};
    }
    void add_output(const std::string& path) {
        outputs.push_back({{"path", path}, {"digest", to_hex(hash_file(path))}});
    }

    void write(const std::string& out_path, const StageCounts& counts) const {
        ojson j;
        std::string key = stage + "|" + std::to_string(opts->seed) + "|" +
                          opts->config.digest_hex();
        for (const auto& in : inputs) key += "|" + in["digest"].get<std::string>();
        j["run_id"] = to_hex(hash_bytes(key, 0x52554e49ULL));
        j["stage"] = stage;
        j["seed"] = opts->seed;
        j["config_digest"] = opts->config.digest_hex();
        if (!opts->config_path.empty()) j["config_path"] = opts->config_path;
        j["inputs"] = inputs;
        if (!data_files.empty()) j["data_files"] = data_files;
        if (!params.empty()) j["params"] = params;
        ojson c = ojson::object();
        for (const auto& [k, v] : counts.values) c[k] = v;
        j["counts"] = c;
        j["outputs"] = outputs;
        const std::string path = out_path + ".manifest.json";
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw_io("cannot write run manifest: " + path);
        out << j.dump(2) << '\n';
    }
};

// When an upstream stage produced <in>.manifest.json, verify the input's
// digest before trusting it.
void verify_input_digest(const std::string& in_path) {
    const std::string manifest_path = in_path + ".manifest.json";
    std::ifstream in(manifest_path, std::ios::binary);
    if (!in) return;
    ojson j = ojson::parse(in, nullptr, false);
    if (j.is_discarded() || !j.contains("outputs")) return;
    for (const auto& out : j["outputs"]) {
        if (!out.is_object() || out.value("path", "") != in_path) continue;
        const std::string recorded = out.value("digest", "");
        const std::string actual = to_hex(hash_file(in_path));
        if (!recorded.empty() && recorded != actual) {
            throw_data(in_path + ": digest mismatch with " + manifest_path +
                       " (file changed since it was produced)");
        }
    }
}

std::vector<RawDocument> read_raw_documents(const std::string& path,
                                            std::optional<SubDataset> fallback_source) {
    std::vector<RawDocument> docs;
    for_each_line(path, [&](std::string_view line, std::size_t line_no) {
        ojson j = ojson::parse(line, nullptr, false);
        if (j.is_discarded()) {
            throw_data(path + ":" + std::to_string(line_no) + ": malformed JSON record");
        }
        RawDocument doc = raw_document_from_json(j);
        if (!j.contains("source")) {
            if (!fallback_source.has_value()) {
                throw_data(path + ":" + std::to_string(line_no) +
                           ": record has no 'source' and no --source was given");
            }
            doc.source = *fallback_source;
        }
        docs.push_back(std::move(doc));
    });
    return docs;
}

std::unique_ptr<TokenizerSpec> tokenizer_from(const Config& config) {
    return make_tokenizer(config.string_or("packing.tokenizer", "byte"));
}

LshParams lsh_params_from(const PipelineOptions& opts) {
    LshParams p;
    p.shingle_k = static_cast<int>(opts.config.int_or("dedup.shingle_k", 5));
    p.num_hashes = static_cast<int>(opts.config.int_or("dedup.num_hashes", 128));
    p.bands = static_cast<int>(opts.config.int_or("dedup.bands", 32));
    p.rows_per_band = static_cast<int>(opts.config.int_or("dedup.rows_per_band", 4));
    p.similarity_threshold = opts.config.double_or("dedup.similarity_threshold", 0.8);
    p.cross_source = opts.config.bool_or("dedup.cross_source", false);
    p.seed = opts.seed;
    p.validate();
    return p;
}

}  // namespace

PipelineOptions PipelineOptions::from_config_file(const std::string& config_path,
                                                  std::uint64_t seed, int threads) {
    PipelineOptions opts;
    if (!config_path.empty()) {
        opts.config = Config::parse_file(config_path);
        opts.config_path = config_path;
    }
    opts.seed = seed;
    opts.threads = threads;
    return opts;
}

std::string PipelineOptions::resolve_data_path(const std::string& key,
                                               const std::string& fallback) const {
    const auto configured = config.get_string("paths." + key);
    if (!configured.has_value()) return fallback;
    fs::path p(*configured);
    if (p.is_absolute() || config_path.empty()) return p.string();
    return (fs::path(config_path).parent_path() / p).string();
}

StageCounts run_ingest(const PipelineOptions& opts, const std::string& manifest_path,
                       const std::string& out_path) {
    const auto manifest = IngestManifest::parse_file(manifest_path);
    ManifestWriter mw{"ingest", &opts};
    mw.add_input(manifest_path);
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw_io("cannot open output file: " + out_path);
    const auto stats = ingest_manifest(manifest, [&](RawDocument&& doc) {
        if (opts.source_filter.has_value() && doc.source != *opts.source_filter) return;
        out << raw_document_to_json(doc).dump() << '\n';
    });
    out.close();
    StageCounts counts;
    counts.values["files"] = stats.files;
    counts.values["documents"] = stats.documents;
    counts.values["skipped"] = stats.skipped;
    mw.add_output(out_path);
    mw.write(out_path, counts);
    log::info("ingest")
        .field("files", stats.files)
        .field("documents", stats.documents)
        .field("skipped", stats.skipped);
    return counts;
}

StageCounts run_clean(const PipelineOptions& opts, const std::string& in_path,
                      const std::string& out_path) {
    verify_input_digest(in_path);
    const auto policies = load_policies(opts.config);
    bool needs_dictionary = false;
    for (const auto& [_, policy] : policies) {
        if (policy.banned_word_filter) needs_dictionary = true;
    }
    std::optional<BannedWordIndex> dictionary;
    const std::string dict_path = opts.resolve_data_path("banned_words", kDefaultBannedWords);
    if (needs_dictionary) {
        dictionary = BannedWordIndex::from_file(dict_path);
    }

    auto docs = read_raw_documents(in_path, opts.source_filter);
    if (opts.source_filter.has_value()) {
        std::erase_if(docs, [&](const RawDocument& d) { return d.source != *opts.source_filter; });
    }

    std::vector<CleanOutcome> outcomes(docs.size());
    parallel_for(docs.size(), opts.threads, [&](std::size_t i) {
        const auto it = policies.find(docs[i].source);
        if (it == policies.end()) {
            throw_data("document '" + docs[i].id + "' has non-pre-training source " +
                       std::string(to_tag(docs[i].source)));
        }
        outcomes[i] = apply_policy(docs[i], it->second,
                                   dictionary.has_value() ? &*dictionary : nullptr);
    });

    CleanReport report;
    report.input_docs = docs.size();
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw_io("cannot open output file: " + out_path);
    const std::string drops_path = out_path + ".drops.jsonl";
    std::ofstream drops(drops_path, std::ios::binary | std::ios::trunc);
    if (!drops) throw_io("cannot open drop log: " + drops_path);
    for (std::size_t i = 0; i < docs.size(); ++i) {
        auto& outcome = outcomes[i];
        report.chars_removed += outcome.chars_removed;
        if (outcome.doc.has_value()) {
            ++report.kept;
            out << clean_document_to_json(*outcome.doc).dump() << '\n';
            continue;
        }
        switch (*outcome.drop) {
            case DropReason::length: ++report.dropped_length; break;
            case DropReason::garbled: ++report.dropped_garbled; break;
            case DropReason::banned: ++report.dropped_banned; break;
        }
        ojson d;
        d["id"] = docs[i].id;
        d["reason"] = to_string(*outcome.drop);
        drops << d.dump() << '\n';
    }
    out.close();
    drops.close();

    ManifestWriter mw{"clean", &opts};
    mw.add_input(in_path);
    if (dictionary.has_value()) mw.add_data_file("banned_words", dict_path);
    for (const auto& [source, policy] : policies) {
        ojson p;
        p["min_chars"] = policy.min_chars;
        if (policy.garbled_ratio_max.has_value()) p["garbled_ratio_max"] = *policy.garbled_ratio_max;
        p["banned_word_filter"] = policy.banned_word_filter;
        p["to_simplified"] = policy.to_simplified;
        p["dedup"] = policy.dedup;
        mw.params["policies"][std::string(to_tag(source))] = p;
    }
    StageCounts counts;
    counts.values["input_docs"] = report.input_docs;
    counts.values["kept"] = report.kept;
    counts.values["dropped_length"] = report.dropped_length;
    counts.values["dropped_garbled"] = report.dropped_garbled;
    counts.values["dropped_banned"] = report.dropped_banned;
    counts.values["chars_removed"] = report.chars_removed;
    mw.add_output(out_path);
    mw.add_output(drops_path);
    mw.write(out_path, counts);
    log::info("clean")
        .field("input_docs", report.input_docs)
        .field("kept", report.kept)
        .field("dropped_length", report.dropped_length)
        .field("dropped_garbled", report.dropped_garbled)
        .field("dropped_banned", report.dropped_banned)
        .field("chars_removed", report.chars_removed);
    return counts;
}

StageCounts run_dedup(const PipelineOptions& opts, const std::string& in_path,
                      const std::string& out_path) {
    verify_input_digest(in_path);
    const auto policies = load_policies(opts.config);
    const auto params = lsh_params_from(opts);
    auto docs = read_clean_documents(in_path);
    if (opts.source_filter.has_value()) {
        std::erase_if(docs,
                      [&](const CleanDocument& d) { return d.source != *opts.source_filter; });
    }

    // Group assignment: one group per dedup-enabled source, or a single
    // group when cross_source is set. Other sources pass through untouched.
    std::map<int, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        const auto it = policies.find(docs[i].source);
        const bool dedup_enabled = it != policies.end() && it->second.dedup;
        if (!dedup_enabled) continue;
        const int group = params.cross_source ? -1 : static_cast<int>(docs[i].source);
        groups[group].push_back(i);
    }

    std::vector<bool> kept(docs.size(), true);
    std::vector<DuplicateCluster> clusters;
    std::uint64_t candidate_pairs = 0;
    std::uint64_t duplicate_pairs = 0;
    for (const auto& [group, indices] : groups) {
        std::vector<CleanDocument> group_docs;
        group_docs.reserve(indices.size());
        for (const auto idx : indices) group_docs.push_back(docs[idx]);
        auto result = dedup_corpus(group_docs, params, opts.threads);
        candidate_pairs += result.candidate_pairs;
        duplicate_pairs += result.duplicate_pairs;
        std::vector<bool> group_kept(indices.size(), false);
        for (const auto k : result.kept_indices) group_kept[k] = true;
        for (std::size_t i = 0; i < indices.size(); ++i) kept[indices[i]] = group_kept[i];
        for (auto& cluster : result.clusters) clusters.push_back(std::move(cluster));
    }

    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw_io("cannot open output file: " + out_path);
    std::uint64_t kept_count = 0;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        if (!kept[i]) continue;
        ++kept_count;
        out << clean_document_to_json(docs[i]).dump() << '\n';
    }
    out.close();
    const std::string clusters_path = out_path + ".clusters.jsonl";
    std::ofstream cl(clusters_path, std::ios::binary | std::ios::trunc);
    if (!cl) throw_io("cannot open cluster report: " + clusters_path);
    for (const auto& cluster : clusters) {
        ojson j;
        j["kept"] = cluster.kept_id;
        j["dropped"] = cluster.dropped_ids;
        cl << j.dump() << '\n';
    }
    cl.close();

    ManifestWriter mw{"dedup", &opts};
    mw.add_input(in_path);
    mw.params["shingle_k"] = params.shingle_k;
    mw.params["num_hashes"] = params.num_hashes;
    mw.params["bands"] = params.bands;
    mw.params["rows_per_band"] = params.rows_per_band;
    mw.params["similarity_threshold"] = params.similarity_threshold;
    mw.params["cross_source"] = params.cross_source;
    StageCounts counts;
    counts.values["input_docs"] = docs.size();
    counts.values["kept"] = kept_count;
    counts.values["dropped"] = docs.size() - kept_count;
    counts.values["clusters"] = clusters.size();
    counts.values["candidate_pairs"] = candidate_pairs;
    counts.values["duplicate_pairs"] = duplicate_pairs;
    mw.add_output(out_path);
    mw.add_output(clusters_path);
    mw.write(out_path, counts);
    log::info("dedup")
        .field("input_docs", docs.size())
        .field("kept", kept_count)
        .field("dropped", docs.size() - kept_count)
        .field("clusters", clusters.size());
    return counts;
}

StageCounts run_sft(const PipelineOptions& opts, SubDataset task, const std::string& in_path,
                    const std::string& out_path) {
    if (!is_sft(task)) {
        throw_config("--task must name a fine-tuning task (SA/ED/TD/RS/QA/SP), got " +
                     std::string(to_tag(task)));
    }
    verify_input_digest(in_path);
    const auto tokenizer = tokenizer_from(opts.config);
    const auto max_tokens =
        static_cast<std::uint64_t>(opts.config.int_or("sft.max_input_tokens", 2048));
    BuildLog build_log;
    std::vector<InstructionPair> pairs;
    ManifestWriter mw{"sft", &opts};
    mw.add_input(in_path);
    mw.params["task"] = to_tag(task);
    mw.params["max_input_tokens"] = max_tokens;

    if (task == SubDataset::QA) {
        std::vector<QaRecord> records;
        for_each_line(in_path, [&](std::string_view line, std::size_t line_no) {
            ojson j = ojson::parse(line, nullptr, false);
            if (j.is_discarded()) {
                build_log.error("line:" + std::to_string(line_no), "parse-error");
                return;
            }
            try {
                records.push_back(qa_record_from_json(j));
            } catch (const PipelineError& e) {
                build_log.error("line:" + std::to_string(line_no), e.what());
            }
        });
        pairs = build_qa(records, &build_log);
    } else if (task == SubDataset::SP) {
        const std::string style_name = opts.config.string_or("sft.sp_labels", "movement");
        SpLabelStyle style;
        if (style_name == "movement") {
            style = SpLabelStyle::movement;
        } else if (style_name == "sentiment") {
            style = SpLabelStyle::sentiment;
        } else {
            throw_config("sft.sp_labels must be 'movement' or 'sentiment', got '" + style_name +
                         "'");
        }
        mw.params["sp_labels"] = style_name;
        std::vector<SpRecord> records;
        for_each_line(in_path, [&](std::string_view line, std::size_t line_no) {
            ojson j = ojson::parse(line, nullptr, false);
            if (j.is_discarded()) {
                build_log.error("line:" + std::to_string(line_no), "parse-error");
                return;
            }
            try {
                records.push_back(sp_record_from_json(j));
            } catch (const PipelineError& e) {
                build_log.error("line:" + std::to_string(line_no), e.what());
            }
        });
        pairs = build_sp(records, style, &build_log);
    } else {
        const auto docs = read_clean_documents(in_path);
        if (task == SubDataset::SA) {
            std::vector<CleanDocument> reports;
            std::vector<CleanDocument> posts;
            for (const auto& doc : docs) {
                if (doc.source == SubDataset::RR) {
                    reports.push_back(doc);
                } else if (doc.source == SubDataset::SM) {
                    posts.push_back(doc);
                } else {
                    build_log.skip(doc.id, "source-not-usable");
                }
            }
            if (!reports.empty()) {
                const std::string map_path =
                    opts.resolve_data_path("rating_map", kDefaultRatingMap);
                const auto rating_map = RatingMap::from_file(map_path);
                mw.add_data_file("rating_map", map_path);
                auto from_reports = build_sa_from_reports(reports, rating_map, &build_log);
                pairs.insert(pairs.end(), std::make_move_iterator(from_reports.begin()),
                             std::make_move_iterator(from_reports.end()));
            }
            auto from_posts = build_sa_from_posts(posts, &build_log);
            pairs.insert(pairs.end(), std::make_move_iterator(from_posts.begin()),
                         std::make_move_iterator(from_posts.end()));
        } else if (task == SubDataset::ED) {
            const std::string tax_path = opts.resolve_data_path("taxonomy", kDefaultTaxonomy);
            const auto taxonomy = EventTaxonomy::parse_file(tax_path);
            mw.add_data_file("taxonomy", tax_path);
            EdOptions ed;
            ed.negatives_per_positive =
                static_cast<int>(opts.config.int_or("sft.negatives_per_positive", 1));
            ed.seed = opts.seed;
            mw.params["negatives_per_positive"] = ed.negatives_per_positive;
            pairs = build_ed(docs, taxonomy, ed, &build_log);
        } else if (task == SubDataset::TD) {
            pairs = build_td(docs, &build_log);
        } else {
            pairs = build_rs(docs, &build_log);
        }
    }

    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw_io("cannot open output file: " + out_path);
    for (auto& pair : pairs) {
        pair = truncate_pair(std::move(pair), *tokenizer, max_tokens);
        out << pair_to_json(pair).dump() << '\n';
    }
    out.close();
    const std::string skips_path = out_path + ".skips.jsonl";
    std::ofstream skips(skips_path, std::ios::binary | std::ios::trunc);
    if (!skips) throw_io("cannot open skip log: " + skips_path);
    for (const auto& [id, reason] : build_log.entries) {
        ojson j;
        j["id"] = id;
        j["reason"] = reason;
        skips << j.dump() << '\n';
    }
    skips.close();

    StageCounts counts;
    counts.values["built"] = build_log.built;
    counts.values["skipped"] = build_log.skipped;
    counts.values["errors"] = build_log.errors;
    mw.add_output(out_path);
    mw.add_output(skips_path);
    mw.write(out_path, counts);
    log::info("sft")
        .field("task", to_tag(task))
        .field("built", build_log.built)
        .field("skipped", build_log.skipped)
        .field("errors", build_log.errors);
    return counts;
}

StageCounts run_pack(const PipelineOptions& opts, const std::string& in_path,
                     const std::string& out_path) {
    verify_input_digest(in_path);
    const auto tokenizer = tokenizer_from(opts.config);
    WindowParams params;
    params.length = static_cast<std::uint32_t>(opts.config.int_or("packing.window_len", 1024));
    params.gap = static_cast<std::uint32_t>(opts.config.int_or("packing.window_gap", 512));
    params.validate();
    const bool shuffle = opts.config.bool_or("packing.shuffle", false);

    auto docs = read_clean_documents(in_path);
    if (opts.source_filter.has_value()) {
        std::erase_if(docs,
                      [&](const CleanDocument& d) { return d.source != *opts.source_filter; });
    }
    order_documents(docs, shuffle ? std::optional<std::uint64_t>(opts.seed) : std::nullopt);
    std::uint64_t skipped = 0;
    const auto stream = build_token_stream(docs, *tokenizer, &skipped);
    write_window_file(out_path, stream, params, *tokenizer);

    ManifestWriter mw{"pack", &opts};
    mw.add_input(in_path);
    mw.params["window_len"] = params.length;
    mw.params["window_gap"] = params.gap;
    mw.params["tokenizer"] = tokenizer->name();
    mw.params["shuffle"] = shuffle;
    StageCounts counts;
    counts.values["documents"] = docs.size();
    counts.values["tokenizer_skipped"] = skipped;
    counts.values["stream_tokens"] = stream.size();
    counts.values["windows"] = window_count(stream.size(), params);
    mw.add_output(out_path);
    mw.write(out_path, counts);
    log::info("pack")
        .field("documents", docs.size())
        .field("stream_tokens", stream.size())
        .field("windows", counts.values["windows"]);
    return counts;
}

StageCounts run_plan_batches(const PipelineOptions& opts, const std::string& in_path,
                             const std::string& out_path) {
    verify_input_digest(in_path);
    const auto tokenizer = tokenizer_from(opts.config);
    BatchParams params;
    params.token_budget =
        static_cast<std::uint64_t>(opts.config.int_or("batching.token_budget", 131072));
    params.min_batch = static_cast<std::uint64_t>(opts.config.int_or("batching.min_batch", 64));
    params.max_batch = static_cast<std::uint64_t>(opts.config.int_or("batching.max_batch", 512));

    std::vector<InstructionPair> pairs;
    for_each_line(in_path, [&](std::string_view line, std::size_t line_no) {
        ojson j = ojson::parse(line, nullptr, false);
        if (j.is_discarded()) {
            throw_data(in_path + ":" + std::to_string(line_no) + ": malformed pair record");
        }
        pairs.push_back(pair_from_json(j));
    });
    const auto plan = plan_batches(pairs, *tokenizer, params);

    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw_io("cannot open output file: " + out_path);
    std::uint64_t remainder_batches = 0;
    for (const auto& entry : plan) {
        if (entry.remainder) ++remainder_batches;
        ojson j;
        j["batch_id"] = entry.batch_id;
        j["pair_ids"] = entry.pair_ids;
        j["max_len"] = entry.max_len;
        j["remainder"] = entry.remainder;
        out << j.dump() << '\n';
    }
    out.close();

    ManifestWriter mw{"plan-batches", &opts};
    mw.add_input(in_path);
    mw.params["token_budget"] = params.token_budget;
    mw.params["min_batch"] = params.min_batch;
    mw.params["max_batch"] = params.max_batch;
    StageCounts counts;
    counts.values["pairs"] = pairs.size();
    counts.values["batches"] = plan.size();
    counts.values["remainder_batches"] = remainder_batches;
    mw.add_output(out_path);
    mw.write(out_path, counts);
    log::info("plan-batches").field("pairs", pairs.size()).field("batches", plan.size());
    return counts;
}

StatsOutput run_stats(const PipelineOptions& opts, const std::string& in_path,
                      const std::string& out_path) {
    verify_input_digest(in_path);
    const auto tokenizer = tokenizer_from(opts.config);

    // Sniff the record kind from the first parsable line.
    bool is_pairs = false;
    bool decided = false;
    for_each_line(in_path, [&](std::string_view line, std::size_t) {
        if (decided) return;
        ojson j = ojson::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) return;
        if (j.contains("instruction")) {
            is_pairs = true;
            decided = true;
        } else if (j.contains("clean_text")) {
            is_pairs = false;
            decided = true;
        }
    });
    if (!decided) throw_data(in_path + ": cannot determine record type for stats");

    StatsReport report;
    if (is_pairs) {
        std::vector<InstructionPair> pairs;
        for_each_line(in_path, [&](std::string_view line, std::size_t line_no) {
            ojson j = ojson::parse(line, nullptr, false);
            if (j.is_discarded()) {
                throw_data(in_path + ":" + std::to_string(line_no) + ": malformed pair record");
            }
            pairs.push_back(pair_from_json(j));
        });
        report = compute_pair_stats(pairs, *tokenizer, opts.threads);
    } else {
        auto docs = read_clean_documents(in_path);
        if (opts.source_filter.has_value()) {
            std::erase_if(docs,
                          [&](const CleanDocument& d) { return d.source != *opts.source_filter; });
        }
        report = compute_stats(docs, *tokenizer, opts.threads);
    }

    StatsOutput output;
    output.table = format_table(report);
    output.jsonl = stats_to_jsonl(report);
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
        if (!out) throw_io("cannot open output file: " + out_path);
        out << output.jsonl;
        out.close();
        ManifestWriter mw{"stats", &opts};
        mw.add_input(in_path);
        StageCounts counts;
        mw.add_output(out_path);
        mw.write(out_path, counts);
    }
    return output;
}

}  // namespace fincorpus
