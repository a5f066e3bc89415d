#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "config.hpp"
#include "corpus_model.hpp"

namespace fincorpus {

// Shared stage context: parsed config, seed, worker cap, optional source
// filter. Each run_* function is a pure function of (inputs, config, seed);
// outputs come with a deterministic run manifest at <out>.manifest.json.
struct PipelineOptions {
    Config config;
    std::string config_path;  // empty when running on defaults
    std::uint64_t seed = 0;
    int threads = 0;
    std::optional<SubDataset> source_filter;

    static PipelineOptions from_config_file(const std::string& config_path, std::uint64_t seed,
                                            int threads);

    // Resolves a [paths] entry: explicit values resolve relative to the
    // config file's directory, defaults relative to the working directory.
    std::string resolve_data_path(const std::string& key, const std::string& fallback) const;
};

struct StageCounts {
    std::map<std::string, std::uint64_t> values;
};

StageCounts run_ingest(const PipelineOptions& opts, const std::string& manifest_path,
                       const std::string& out_path);
StageCounts run_clean(const PipelineOptions& opts, const std::string& in_path,
                      const std::string& out_path);
StageCounts run_dedup(const PipelineOptions& opts, const std::string& in_path,
                      const std::string& out_path);
StageCounts run_sft(const PipelineOptions& opts, SubDataset task, const std::string& in_path,
                    const std::string& out_path);
StageCounts run_pack(const PipelineOptions& opts, const std::string& in_path,
                     const std::string& out_path);
StageCounts run_plan_batches(const PipelineOptions& opts, const std::string& in_path,
                             const std::string& out_path);

struct StatsOutput {
    std::string table;
    std::string jsonl;
};

// When out_path is empty the stats are only returned, and no artifacts or
// manifest are written.
StatsOutput run_stats(const PipelineOptions& opts, const std::string& in_path,
                      const std::string& out_path = {});

}  // namespace fincorpus
