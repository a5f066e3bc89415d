// Command-line front end for the fincorpus pipeline. Talks to the shared
// library exclusively through the public C interface.

#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include <fincorpus/fincorpus.h>

namespace {

struct CommonArgs {
    std::string config;
    std::uint64_t seed = 0;
    int threads = 0;
    std::string in;
    std::string out;
    std::string source;
    std::string task;
};

void add_common_flags(CLI::App* cmd, CommonArgs& args, bool with_out = true) {
    cmd->add_option("--config", args.config, "Configuration file (TOML-style)");
    cmd->add_option("--seed", args.seed, "Seed for all randomized steps");
    cmd->add_option("--threads", args.threads, "Worker cap (0 = available parallelism)");
    cmd->add_option("--in", args.in, "Input path")->required();
    if (with_out) cmd->add_option("--out", args.out, "Output path")->required();
    cmd->add_option("--source", args.source, "Restrict to one sub-dataset tag");
}

class Pipeline {
public:
    explicit Pipeline(const CommonArgs& args) {
        status_ = fcf_pipeline_new(args.config.empty() ? nullptr : args.config.c_str(),
                                   args.seed, args.threads, &handle_);
        if (status_ == FCF_OK && !args.source.empty()) {
            status_ = fcf_pipeline_set_source(handle_, args.source.c_str());
        }
    }
    ~Pipeline() { fcf_pipeline_free(handle_); }

    Pipeline(const Pipeline&) = delete;
    Pipeline& operator=(const Pipeline&) = delete;

    fcf_pipeline* get() const { return handle_; }
    fcf_status status() const { return status_; }

    int finish(fcf_status status) const {
        if (status != FCF_OK) {
            std::fprintf(stderr, "fincorpus: error: %s\n", fcf_pipeline_last_error(handle_));
        }
        return static_cast<int>(status);
    }

private:
    fcf_pipeline* handle_ = nullptr;
    fcf_status status_ = FCF_OK;
};

int run_stage(const CommonArgs& args,
              fcf_status (*stage)(fcf_pipeline*, const char*, const char*)) {
    Pipeline pipeline(args);
    if (pipeline.status() != FCF_OK) return pipeline.finish(pipeline.status());
    return pipeline.finish(stage(pipeline.get(), args.in.c_str(), args.out.c_str()));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fincorpus - corpus curation pipeline for financial text"};
    app.require_subcommand(1);

    CommonArgs ingest_args, clean_args, dedup_args, sft_args, pack_args, stats_args, plan_args;

    auto* ingest = app.add_subcommand("ingest", "Read a manifest of source files into records");
    add_common_flags(ingest, ingest_args);

    auto* clean = app.add_subcommand("clean", "Apply per-source cleaning and filtering");
    add_common_flags(clean, clean_args);

    auto* dedup = app.add_subcommand("dedup", "Remove near-duplicate documents (MinHash/LSH)");
    add_common_flags(dedup, dedup_args);

    auto* sft = app.add_subcommand("sft", "Build supervised fine-tuning instruction pairs");
    add_common_flags(sft, sft_args);
    sft->add_option("--task", sft_args.task, "Task tag (SA/ED/TD/RS/QA/SP)")->required();

    auto* pack = app.add_subcommand("pack", "Pack documents into fixed-length token windows");
    add_common_flags(pack, pack_args);

    auto* stats = app.add_subcommand("stats", "Report per-source corpus statistics");
    add_common_flags(stats, stats_args, /*with_out=*/false);
    stats->add_option("--out", stats_args.out, "Also write machine-readable rows here");

    auto* plan = app.add_subcommand("plan-batches", "Group pairs into length-bucketed batches");
    add_common_flags(plan, plan_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return static_cast<int>(FCF_ERR_USAGE);
    }

    if (ingest->parsed()) return run_stage(ingest_args, fcf_run_ingest);
    if (clean->parsed()) return run_stage(clean_args, fcf_run_clean);
    if (dedup->parsed()) return run_stage(dedup_args, fcf_run_dedup);
    if (pack->parsed()) return run_stage(pack_args, fcf_run_pack);
    if (plan->parsed()) return run_stage(plan_args, fcf_run_plan_batches);

    if (sft->parsed()) {
        Pipeline pipeline(sft_args);
        if (pipeline.status() != FCF_OK) return pipeline.finish(pipeline.status());
        return pipeline.finish(fcf_run_sft(pipeline.get(), sft_args.task.c_str(),
                                           sft_args.in.c_str(), sft_args.out.c_str()));
    }

    if (stats->parsed()) {
        Pipeline pipeline(stats_args);
        if (pipeline.status() != FCF_OK) return pipeline.finish(pipeline.status());
        char* table = nullptr;
        char* jsonl = nullptr;
        const fcf_status status =
            fcf_run_stats(pipeline.get(), stats_args.in.c_str(),
                          stats_args.out.empty() ? nullptr : stats_args.out.c_str(), &table,
                          &jsonl);
        if (status == FCF_OK && table != nullptr) {
            std::fputs(table, stdout);
        }
        fcf_string_free(table);
        fcf_string_free(jsonl);
        return pipeline.finish(status);
    }

    return static_cast<int>(FCF_ERR_USAGE);
}
