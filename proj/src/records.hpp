#pragma once

#include <functional>
#include <string>

#include <json.hpp>

#include "corpus_model.hpp"

namespace fincorpus {

using ojson = nlohmann::ordered_json;

// Calls `fn(line, line_no)` for every non-empty line; line numbers are 1-based.
// Throws an I/O error if the file cannot be opened.
void for_each_line(const std::string& path,
                   const std::function<void(std::string_view, std::size_t)>& fn);

// Serialization for the line-delimited record formats. Raw document records
// use the ingestion schema {"id","source","timestamp"?,"text","metadata"?};
// clean documents replace "text" with {"clean_text","char_count","garbled_ratio"}.
ojson raw_document_to_json(const RawDocument& doc);
RawDocument raw_document_from_json(const ojson& j);  // throws data errors

ojson clean_document_to_json(const CleanDocument& doc);
CleanDocument clean_document_from_json(const ojson& j);

std::vector<CleanDocument> read_clean_documents(const std::string& path);
void write_clean_documents(const std::string& path, const std::vector<CleanDocument>& docs);

}  // namespace fincorpus
