/* fincorpus - financial text corpus curation pipeline.
 *
 * C interface to the pipeline stages. All entry points operate on an opaque
 * pipeline handle and return an fcf_status; FCF_OK means success, anything
 * else is an error whose message can be read with fcf_pipeline_last_error().
 * Status values double as CLI exit codes.
 *
 * Every stage is a pure function of (inputs, configuration, seed): rerunning
 * a stage with identical inputs produces byte-identical artifacts, and each
 * output is accompanied by a <out>.manifest.json recording input digests and
 * parameters.
 */
#ifndef FINCORPUS_FINCORPUS_H
#define FINCORPUS_FINCORPUS_H

#include <stdint.h>

#if defined(_WIN32)
#define FCF_API __declspec(dllexport)
#else
#define FCF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fcf_status {
    FCF_OK = 0,
    FCF_ERR_USAGE = 1,  /* bad arguments */
    FCF_ERR_CONFIG = 2, /* configuration problem (bad key, missing data file) */
    FCF_ERR_IO = 3,     /* unreadable or unwritable file */
    FCF_ERR_DATA = 4    /* data-contract violation in an input artifact */
} fcf_status;

typedef struct fcf_pipeline fcf_pipeline;

/* Creates a pipeline handle. config_path may be NULL to run on defaults.
 * threads <= 0 selects the available hardware parallelism. */
FCF_API fcf_status fcf_pipeline_new(const char* config_path, uint64_t seed, int threads,
                                    fcf_pipeline** out);

FCF_API void fcf_pipeline_free(fcf_pipeline* pipeline);

/* Message describing the most recent failure on this handle. The pointer is
 * owned by the handle and valid until the next call on it. */
FCF_API const char* fcf_pipeline_last_error(const fcf_pipeline* pipeline);

/* Restricts subsequent stages to one sub-dataset (e.g. "SM"); NULL clears. */
FCF_API fcf_status fcf_pipeline_set_source(fcf_pipeline* pipeline, const char* source_tag);

/* Stage runners. Inputs and outputs are file paths; formats are documented
 * in the project README. */
FCF_API fcf_status fcf_run_ingest(fcf_pipeline* pipeline, const char* manifest_path,
                                  const char* out_path);
FCF_API fcf_status fcf_run_clean(fcf_pipeline* pipeline, const char* in_path,
                                 const char* out_path);
FCF_API fcf_status fcf_run_dedup(fcf_pipeline* pipeline, const char* in_path,
                                 const char* out_path);
FCF_API fcf_status fcf_run_sft(fcf_pipeline* pipeline, const char* task_tag,
                               const char* in_path, const char* out_path);
FCF_API fcf_status fcf_run_pack(fcf_pipeline* pipeline, const char* in_path,
                                const char* out_path);
FCF_API fcf_status fcf_run_plan_batches(fcf_pipeline* pipeline, const char* in_path,
                                        const char* out_path);

/* Computes corpus statistics. out_path may be NULL (no artifact written).
 * table_out/jsonl_out, when non-NULL, receive malloc'd strings the caller
 * releases with fcf_string_free(). */
FCF_API fcf_status fcf_run_stats(fcf_pipeline* pipeline, const char* in_path,
                                 const char* out_path, char** table_out, char** jsonl_out);

FCF_API void fcf_string_free(char* s);

FCF_API const char* fcf_version(void);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FINCORPUS_FINCORPUS_H */
