#include "records.hpp"

#include <fstream>

#include "errors.hpp"
#include "utf8.hpp"

namespace fincorpus {

void for_each_line(const std::string& path,
                   const std::function<void(std::string_view, std::size_t)>& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io("cannot open input file: " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        fn(line, line_no);
    }
}

ojson raw_document_to_json(const RawDocument& doc) {
    ojson j;
    j["id"] = doc.id;
    j["source"] = to_tag(doc.source);
    if (!doc.timestamp.empty()) j["timestamp"] = doc.timestamp;
    j["text"] = doc.text;
    if (!doc.metadata.empty()) j["metadata"] = doc.metadata;
    return j;
}

RawDocument raw_document_from_json(const ojson& j) {
    if (!j.is_object()) throw_data("record is not a JSON object");
    RawDocument doc;
    const auto id = j.find("id");
    if (id == j.end() || !id->is_string()) throw_data("record missing string 'id'");
    doc.id = id->get<std::string>();
    if (doc.id.empty()) throw_data("record has empty 'id'");
    const auto text = j.find("text");
    if (text == j.end() || !text->is_string()) throw_data("record missing string 'text'");
    doc.text = text->get<std::string>();
    if (!utf8::is_valid(doc.text)) throw_data("record 'text' is not valid UTF-8");
    if (const auto ts = j.find("timestamp"); ts != j.end() && !ts->is_null()) {
        if (!ts->is_string()) throw_data("record 'timestamp' is not a string");
        doc.timestamp = ts->get<std::string>();
    }
    if (const auto src = j.find("source"); src != j.end() && !src->is_null()) {
        if (!src->is_string()) throw_data("record 'source' is not a string");
        const auto tag = parse_tag(src->get<std::string>());
        if (!tag.has_value()) throw_data("record has unknown source tag");
        doc.source = *tag;
    }
    if (const auto meta = j.find("metadata"); meta != j.end() && !meta->is_null()) {
        if (!meta->is_object()) throw_data("record 'metadata' is not an object");
        for (const auto& [k, v] : meta->items()) {
            if (!v.is_string()) throw_data("metadata value for '" + k + "' is not a string");
            doc.metadata.emplace(k, v.get<std::string>());
        }
    }
    return doc;
}

ojson clean_document_to_json(const CleanDocument& doc) {
    ojson j;
    j["id"] = doc.id;
    j["source"] = to_tag(doc.source);
    if (!doc.timestamp.empty()) j["timestamp"] = doc.timestamp;
    if (!doc.metadata.empty()) j["metadata"] = doc.metadata;
    j["clean_text"] = doc.clean_text;
    j["char_count"] = doc.char_count;
    j["garbled_ratio"] = doc.garbled_ratio;
    return j;
}

CleanDocument clean_document_from_json(const ojson& j) {
    if (!j.is_object()) throw_data("record is not a JSON object");
    CleanDocument doc;
    const auto id = j.find("id");
    if (id == j.end() || !id->is_string()) throw_data("record missing string 'id'");
    doc.id = id->get<std::string>();
    const auto src = j.find("source");
    if (src == j.end() || !src->is_string()) throw_data("record missing string 'source'");
    const auto tag = parse_tag(src->get<std::string>());
    if (!tag.has_value()) throw_data("record has unknown source tag");
    doc.source = *tag;
    if (const auto ts = j.find("timestamp"); ts != j.end() && ts->is_string()) {
        doc.timestamp = ts->get<std::string>();
    }
    if (const auto meta = j.find("metadata"); meta != j.end() && meta->is_object()) {
        for (const auto& [k, v] : meta->items()) {
            if (!v.is_string()) throw_data("metadata value for '" + k + "' is not a string");
            doc.metadata.emplace(k, v.get<std::string>());
        }
    }
    const auto ct = j.find("clean_text");
    if (ct == j.end() || !ct->is_string()) throw_data("record missing string 'clean_text'");
    doc.clean_text = ct->get<std::string>();
    if (const auto cc = j.find("char_count"); cc != j.end() && cc->is_number_unsigned()) {
        doc.char_count = cc->get<std::uint64_t>();
    } else {
        doc.char_count = utf8::scalar_count(doc.clean_text);
    }
    if (const auto gr = j.find("garbled_ratio"); gr != j.end() && gr->is_number()) {
        doc.garbled_ratio = gr->get<double>();
    }
    return doc;
}

std::vector<CleanDocument> read_clean_documents(const std::string& path) {
    std::vector<CleanDocument> docs;
    for_each_line(path, [&](std::string_view line, std::size_t line_no) {
        ojson j = ojson::parse(line, nullptr, false);
        if (j.is_discarded()) {
            throw_data(path + ":" + std::to_string(line_no) + ": malformed JSON record");
        }
        docs.push_back(clean_document_from_json(j));
    });
    return docs;
}

void write_clean_documents(const std::string& path, const std::vector<CleanDocument>& docs) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw_io("cannot open output file: " + path);
    for (const auto& doc : docs) {
        out << clean_document_to_json(doc).dump() << '\n';
    }
    if (!out) throw_io("failed writing output file: " + path);
}

}  // namespace fincorpus
