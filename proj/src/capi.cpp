#include "fincorpus/fincorpus.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "errors.hpp"
#include "pipeline.hpp"

using fincorpus::ErrorKind;
using fincorpus::PipelineError;
using fincorpus::PipelineOptions;

struct fcf_pipeline {
    PipelineOptions opts;
    std::string last_error;
};

namespace {

fcf_status status_from(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::usage: return FCF_ERR_USAGE;
        case ErrorKind::config: return FCF_ERR_CONFIG;
        case ErrorKind::io: return FCF_ERR_IO;
        case ErrorKind::data: return FCF_ERR_DATA;
    }
    return FCF_ERR_USAGE;
}

fcf_status fail(fcf_pipeline* p, fcf_status status, const std::string& message) {
    if (p != nullptr) p->last_error = message;
    return status;
}

template <typename Fn>
fcf_status guarded(fcf_pipeline* p, Fn&& fn) {
    if (p == nullptr) return FCF_ERR_USAGE;
    try {
        fn();
        p->last_error.clear();
        return FCF_OK;
    } catch (const PipelineError& e) {
        return fail(p, status_from(e.kind()), e.what());
    } catch (const std::exception& e) {
        return fail(p, FCF_ERR_DATA, e.what());
    } catch (...) {
        return fail(p, FCF_ERR_DATA, "unknown error");
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

}  // namespace

extern "C" {

fcf_status fcf_pipeline_new(const char* config_path, uint64_t seed, int threads,
                            fcf_pipeline** out) {
    if (out == nullptr) return FCF_ERR_USAGE;
    *out = nullptr;
    auto* p = new (std::nothrow) fcf_pipeline;
    if (p == nullptr) return FCF_ERR_IO;
    const fcf_status status = guarded(p, [&] {
        p->opts = PipelineOptions::from_config_file(
            config_path == nullptr ? std::string() : std::string(config_path), seed, threads);
    });
    if (status != FCF_OK) {
        delete p;
        return status;
    }
    *out = p;
    return FCF_OK;
}

void fcf_pipeline_free(fcf_pipeline* pipeline) { delete pipeline; }

const char* fcf_pipeline_last_error(const fcf_pipeline* pipeline) {
    return pipeline == nullptr ? "" : pipeline->last_error.c_str();
}

fcf_status fcf_pipeline_set_source(fcf_pipeline* pipeline, const char* source_tag) {
    if (pipeline == nullptr) return FCF_ERR_USAGE;
    if (source_tag == nullptr) {
        pipeline->opts.source_filter.reset();
        return FCF_OK;
    }
    const auto tag = fincorpus::parse_tag(source_tag);
    if (!tag.has_value()) {
        return fail(pipeline, FCF_ERR_USAGE,
                    "unknown sub-dataset tag '" + std::string(source_tag) + "'");
    }
    pipeline->opts.source_filter = *tag;
    return FCF_OK;
}

fcf_status fcf_run_ingest(fcf_pipeline* pipeline, const char* manifest_path,
                          const char* out_path) {
    if (manifest_path == nullptr || out_path == nullptr) {
        return fail(pipeline, FCF_ERR_USAGE, "ingest requires manifest and output paths");
    }
    return guarded(pipeline,
                   [&] { fincorpus::run_ingest(pipeline->opts, manifest_path, out_path); });
}

fcf_status fcf_run_clean(fcf_pipeline* pipeline, const char* in_path, const char* out_path) {
    if (in_path == nullptr || out_path == nullptr) {
        return fail(pipeline, FCF_ERR_USAGE, "clean requires input and output paths");
    }
    return guarded(pipeline, [&] { fincorpus::run_clean(pipeline->opts, in_path, out_path); });
}

fcf_status fcf_run_dedup(fcf_pipeline* pipeline, const char* in_path, const char* out_path) {
    if (in_path == nullptr || out_path == nullptr) {
        return fail(pipeline, FCF_ERR_USAGE, "dedup requires input and output paths");
    }
    return guarded(pipeline, [&] { fincorpus::run_dedup(pipeline->opts, in_path, out_path); });
}

fcf_status fcf_run_sft(fcf_pipeline* pipeline, const char* task_tag, const char* in_path,
                       const char* out_path) {
    if (task_tag == nullptr || in_path == nullptr || out_path == nullptr) {
        return fail(pipeline, FCF_ERR_USAGE, "sft requires --task, input, and output paths");
    }
    const auto task = fincorpus::parse_tag(task_tag);
    if (!task.has_value() || !fincorpus::is_sft(*task)) {
        return fail(pipeline, FCF_ERR_USAGE,
                    "--task must be one of SA/ED/TD/RS/QA/SP, got '" + std::string(task_tag) +
                        "'");
    }
    return guarded(pipeline,
                   [&] { fincorpus::run_sft(pipeline->opts, *task, in_path, out_path); });
}

fcf_status fcf_run_pack(fcf_pipeline* pipeline, const char* in_path, const char* out_path) {
    if (in_path == nullptr || out_path == nullptr) {
        return fail(pipeline, FCF_ERR_USAGE, "pack requires input and output paths");
    }
    return guarded(pipeline, [&] { fincorpus::run_pack(pipeline->opts, in_path, out_path); });
}

fcf_status fcf_run_plan_batches(fcf_pipeline* pipeline, const char* in_path,
                                const char* out_path) {
    if (in_path == nullptr || out_path == nullptr) {
        return fail(pipeline, FCF_ERR_USAGE, "plan-batches requires input and output paths");
    }
    return guarded(pipeline,
                   [&] { fincorpus::run_plan_batches(pipeline->opts, in_path, out_path); });
}

fcf_status fcf_run_stats(fcf_pipeline* pipeline, const char* in_path, const char* out_path,
                         char** table_out, char** jsonl_out) {
    if (in_path == nullptr) {
        return fail(pipeline, FCF_ERR_USAGE, "stats requires an input path");
    }
    if (table_out != nullptr) *table_out = nullptr;
    if (jsonl_out != nullptr) *jsonl_out = nullptr;
    return guarded(pipeline, [&] {
        const auto output = fincorpus::run_stats(
            pipeline->opts, in_path, out_path == nullptr ? std::string() : std::string(out_path));
        if (table_out != nullptr) *table_out = dup_string(output.table);
        if (jsonl_out != nullptr) *jsonl_out = dup_string(output.jsonl);
    });
}

void fcf_string_free(char* s) { std::free(s); }

const char* fcf_version(void) { return "0.1.0"; }

}  // extern "C"
