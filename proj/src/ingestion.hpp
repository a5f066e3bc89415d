#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "corpus_model.hpp"

namespace fincorpus {

enum class IngestFormat { jsonl, html, txt };

std::string_view to_string(IngestFormat f);

struct ManifestEntry {
    std::string path;
    SubDataset source = SubDataset::FN;
    IngestFormat format = IngestFormat::jsonl;
};

struct IngestManifest {
    std::vector<ManifestEntry> entries;

    // Line-delimited records {"path","source","format"}; validates that
    // every path exists and is readable.
    static IngestManifest parse_file(const std::string& path);
};

using DocumentSink = std::function<void(RawDocument&&)>;

// Streams one line-delimited record file in file order. Malformed lines are
// skipped and counted; more than 50% malformed lines is a hard data error.
// `seen_ids`, when provided, enforces id uniqueness across calls.
std::uint64_t read_record_stream(const std::string& path, SubDataset source,
                                 const DocumentSink& sink,
                                 std::unordered_set<std::string>* seen_ids = nullptr);

// Tag-stripping text extraction: removes markup, script/style blocks, and
// comments; decodes common entities; collapses whitespace runs to single
// spaces; block-level boundaries become single newlines.
std::string extract_text_from_html(std::string_view html);

struct IngestStats {
    std::uint64_t documents = 0;
    std::uint64_t skipped = 0;
    std::uint64_t files = 0;
};

// Runs every manifest entry through the sink. html/txt entries yield one
// document per file (id derived from the file name).
IngestStats ingest_manifest(const IngestManifest& manifest, const DocumentSink& sink);

}  // namespace fincorpus
