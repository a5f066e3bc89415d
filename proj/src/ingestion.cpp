#include "ingestion.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "errors.hpp"
#include "log.hpp"
#include "records.hpp"
#include "utf8.hpp"

namespace fincorpus {

namespace {

namespace fs = std::filesystem;

std::string read_whole_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string lower_ascii(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool is_block_tag(std::string_view name) {
    static const std::unordered_map<std::string_view, bool> kBlocks = {
        {"p", true},        {"br", true},      {"hr", true},       {"div", true},
        {"h1", true},       {"h2", true},      {"h3", true},       {"h4", true},
        {"h5", true},       {"h6", true},      {"li", true},       {"ul", true},
        {"ol", true},       {"dl", true},      {"dt", true},       {"dd", true},
        {"tr", true},       {"td", true},      {"th", true},       {"table", true},
        {"thead", true},    {"tbody", true},   {"tfoot", true},    {"blockquote", true},
        {"pre", true},      {"section", true}, {"article", true},  {"aside", true},
        {"header", true},   {"footer", true},  {"nav", true},      {"main", true},
        {"figure", true},   {"figcaption", true}, {"form", true},  {"fieldset", true},
        {"address", true},  {"center", true},  {"title", true},
    };
    return kBlocks.count(name) != 0;
}

// Named entities that appear in real-world financial pages.
bool decode_named_entity(std::string_view name, char32_t& out) {
    static const std::unordered_map<std::string_view, char32_t> kEntities = {
        {"amp", U'&'},    {"lt", U'<'},      {"gt", U'>'},      {"quot", U'"'},
        {"apos", U'\''},  {"nbsp", U' '},    {"copy", 0xA9},    {"reg", 0xAE},
        {"trade", 0x2122},{"hellip", 0x2026},{"mdash", 0x2014}, {"ndash", 0x2013},
        {"ldquo", 0x201C},{"rdquo", 0x201D}, {"lsquo", 0x2018}, {"rsquo", 0x2019},
        {"middot", 0xB7}, {"laquo", 0xAB},   {"raquo", 0xBB},   {"times", 0xD7},
        {"divide", 0xF7}, {"yen", 0xA5},     {"cent", 0xA2},    {"pound", 0xA3},
        {"euro", 0x20AC}, {"sect", 0xA7},    {"deg", 0xB0},     {"plusmn", 0xB1},
        {"bull", 0x2022}, {"para", 0xB6},
    };
    const auto it = kEntities.find(name);
    if (it == kEntities.end()) return false;
    out = it->second;
    return true;
}

// Accumulates extracted text: whitespace runs collapse to one space,
// block boundaries to one newline, leading/trailing separators dropped.
class TextBuilder {
public:
    void append(char32_t c) {
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == 0x00A0) {
            pending_space_ = true;
            return;
        }
        if (!out_.empty()) {
            if (pending_break_) {
                out_.push_back('\n');
            } else if (pending_space_) {
                out_.push_back(' ');
            }
        }
        pending_break_ = false;
        pending_space_ = false;
        utf8::append_scalar(out_, c);
    }

    void append_bytes(std::string_view bytes) {
        // Raw UTF-8 pass-through for non-entity, non-tag text.
        std::size_t i = 0;
        while (i < bytes.size()) {
            const auto b = static_cast<unsigned char>(bytes[i]);
            if (b < 0x80) {
                append(static_cast<char32_t>(b));
                ++i;
            } else {
                // Copy a full multibyte sequence without re-validating.
                std::size_t len = 1;
                if ((b & 0xE0) == 0xC0) len = 2;
                else if ((b & 0xF0) == 0xE0) len = 3;
                else if ((b & 0xF8) == 0xF0) len = 4;
                len = std::min(len, bytes.size() - i);
                flush_separators();
                out_.append(bytes.substr(i, len));
                i += len;
            }
        }
    }

    void mark_break() { pending_break_ = true; }

    std::string take() { return std::move(out_); }

private:
    void flush_separators() {
        if (!out_.empty()) {
            if (pending_break_) {
                out_.push_back('\n');
            } else if (pending_space_) {
                out_.push_back(' ');
            }
        }
        pending_break_ = false;
        pending_space_ = false;
    }

    std::string out_;
    bool pending_space_ = false;
    bool pending_break_ = false;
};

// Case-insensitive search for `needle` (ASCII) in `hay` starting at `from`.
std::size_t ifind(std::string_view hay, std::string_view needle, std::size_t from) {
    if (needle.empty() || hay.size() < needle.size()) return std::string_view::npos;
    for (std::size_t i = from; i + needle.size() <= hay.size(); ++i) {
        bool ok = true;
        for (std::size_t k = 0; k < needle.size(); ++k) {
            if (std::tolower(static_cast<unsigned char>(hay[i + k])) !=
                std::tolower(static_cast<unsigned char>(needle[k]))) {
                ok = false;
                break;
            }
        }
        if (ok) return i;
    }
    return std::string_view::npos;
}

}  // namespace

std::string extract_text_from_html(std::string_view html) {
    TextBuilder text;
    std::size_t i = 0;
    const std::size_t n = html.size();
    while (i < n) {
        const char c = html[i];
        if (c == '<') {
            if (html.substr(i, 4) == "<!--") {
                const auto end = html.find("-->", i + 4);
                i = (end == std::string_view::npos) ? n : end + 3;
                continue;
            }
            const char next = (i + 1 < n) ? html[i + 1] : '\0';
            const bool tag_start = next == '/' || next == '!' || next == '?' ||
                                   std::isalpha(static_cast<unsigned char>(next));
            if (!tag_start) {
                text.append(U'<');
                ++i;
                continue;
            }
            std::size_t p = i + 1;
            const bool closing = html[p] == '/';
            if (closing) ++p;
            std::size_t name_start = p;
            while (p < n && (std::isalnum(static_cast<unsigned char>(html[p])) ||
                             html[p] == '!' || html[p] == '?')) {
                ++p;
            }
            const std::string name = lower_ascii(html.substr(name_start, p - name_start));
            // Consume through the matching '>', honoring quoted attributes.
            char quote = '\0';
            bool self_closing = false;
            while (p < n) {
                const char t = html[p];
                if (quote != '\0') {
                    if (t == quote) quote = '\0';
                } else if (t == '"' || t == '\'') {
                    quote = t;
                } else if (t == '>') {
                    self_closing = p > 0 && html[p - 1] == '/';
                    ++p;
                    break;
                }
                ++p;
            }
            if (!closing && !self_closing && (name == "script" || name == "style")) {
                const std::string close_tag = "</" + name;
                const auto close = ifind(html, close_tag, p);
                if (close == std::string_view::npos) {
                    p = n;
                } else {
                    const auto gt = html.find('>', close);
                    p = (gt == std::string_view::npos) ? n : gt + 1;
                }
            }
            if (is_block_tag(name)) text.mark_break();
            i = p;
            continue;
        }
        if (c == '&') {
            std::size_t p = i + 1;
            if (p < n && html[p] == '#') {
                ++p;
                bool hex = false;
                if (p < n && (html[p] == 'x' || html[p] == 'X')) {
                    hex = true;
                    ++p;
                }
                std::uint32_t value = 0;
                std::size_t digits = 0;
                while (p < n && digits < 7) {
                    const char d = html[p];
                    if (hex && std::isxdigit(static_cast<unsigned char>(d))) {
                        value = value * 16 +
                                static_cast<std::uint32_t>(
                                    std::isdigit(static_cast<unsigned char>(d))
                                        ? d - '0'
                                        : std::tolower(static_cast<unsigned char>(d)) - 'a' + 10);
                    } else if (!hex && std::isdigit(static_cast<unsigned char>(d))) {
                        value = value * 10 + static_cast<std::uint32_t>(d - '0');
                    } else {
                        break;
                    }
                    ++p;
                    ++digits;
                }
                if (digits > 0 && p < n && html[p] == ';') {
                    if (value == 0 || value > 0x10FFFF || (value >= 0xD800 && value <= 0xDFFF)) {
                        value = 0xFFFD;
                    }
                    text.append(static_cast<char32_t>(value));
                    i = p + 1;
                    continue;
                }
            } else {
                std::size_t q = p;
                while (q < n && q - p < 10 &&
                       std::isalnum(static_cast<unsigned char>(html[q]))) {
                    ++q;
                }
                char32_t decoded;
                if (q < n && html[q] == ';' && q > p &&
                    decode_named_entity(html.substr(p, q - p), decoded)) {
                    text.append(decoded);
                    i = q + 1;
                    continue;
                }
            }
            text.append(U'&');
            ++i;
            continue;
        }
        // Plain text run up to the next special character.
        const auto stop = html.find_first_of("<&", i);
        const auto end = (stop == std::string_view::npos) ? n : stop;
        text.append_bytes(html.substr(i, end - i));
        i = end;
    }
    return text.take();
}

std::string_view to_string(IngestFormat f) {
    switch (f) {
        case IngestFormat::jsonl: return "jsonl";
        case IngestFormat::html: return "html";
        case IngestFormat::txt: return "txt";
    }
    return "unknown";
}

IngestManifest IngestManifest::parse_file(const std::string& path) {
    IngestManifest manifest;
    for_each_line(path, [&](std::string_view line, std::size_t line_no) {
        const auto where = path + ":" + std::to_string(line_no);
        ojson j = ojson::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            throw_data(where + ": malformed manifest entry");
        }
        ManifestEntry entry;
        if (!j.contains("path") || !j["path"].is_string()) {
            throw_data(where + ": manifest entry missing 'path'");
        }
        entry.path = j["path"].get<std::string>();
        if (!j.contains("source") || !j["source"].is_string()) {
            throw_data(where + ": manifest entry missing 'source'");
        }
        const auto tag = parse_tag(j["source"].get<std::string>());
        if (!tag.has_value()) {
            throw_data(where + ": unknown source '" + j["source"].get<std::string>() + "'");
        }
        entry.source = *tag;
        const std::string fmt = j.value("format", "jsonl");
        if (fmt == "jsonl") {
            entry.format = IngestFormat::jsonl;
        } else if (fmt == "html") {
            entry.format = IngestFormat::html;
        } else if (fmt == "txt") {
            entry.format = IngestFormat::txt;
        } else {
            throw_data(where + ": unknown format '" + fmt + "'");
        }
        std::ifstream probe(entry.path, std::ios::binary);
        if (!probe) throw_io(where + ": cannot read '" + entry.path + "'");
        manifest.entries.push_back(std::move(entry));
    });
    return manifest;
}

std::uint64_t read_record_stream(const std::string& path, SubDataset source,
                                 const DocumentSink& sink,
                                 std::unordered_set<std::string>* seen_ids) {
    std::uint64_t total = 0;
    std::uint64_t skipped = 0;
    for_each_line(path, [&](std::string_view line, std::size_t line_no) {
        ++total;
        ojson j = ojson::parse(line, nullptr, false);
        if (j.is_discarded()) {
            ++skipped;
            log::debug("ingest").field("file", path).field("line", line_no)
                .field("skip", "parse-error");
            return;
        }
        RawDocument doc;
        try {
            doc = raw_document_from_json(j);
        } catch (const PipelineError&) {
            ++skipped;
            log::debug("ingest").field("file", path).field("line", line_no)
                .field("skip", "bad-record");
            return;
        }
        doc.source = source;
        if (seen_ids != nullptr && !seen_ids->insert(doc.id).second) {
            ++skipped;
            log::debug("ingest").field("file", path).field("line", line_no)
                .field("skip", "duplicate-id");
            return;
        }
        sink(std::move(doc));
    });
    if (total > 0 && skipped * 2 > total) {
        throw_data(path + ": " + std::to_string(skipped) + " of " + std::to_string(total) +
                   " lines malformed; input looks corrupt");
    }
    return skipped;
}

IngestStats ingest_manifest(const IngestManifest& manifest, const DocumentSink& sink) {
    IngestStats stats;
    std::unordered_set<std::string> seen_ids;
    for (const auto& entry : manifest.entries) {
        ++stats.files;
        if (entry.format == IngestFormat::jsonl) {
            std::uint64_t docs_before = stats.documents;
            stats.skipped += read_record_stream(
                entry.path, entry.source,
                [&](RawDocument&& doc) {
                    ++stats.documents;
                    sink(std::move(doc));
                },
                &seen_ids);
            log::debug("ingest").field("file", entry.path)
                .field("docs", stats.documents - docs_before);
            continue;
        }
        std::string contents = read_whole_file(entry.path);
        if (entry.format == IngestFormat::html) {
            contents = extract_text_from_html(contents);
        }
        if (!utf8::is_valid(contents)) {
            ++stats.skipped;
            log::debug("ingest").field("file", entry.path).field("skip", "invalid-utf8");
            continue;
        }
        RawDocument doc;
        doc.id = fs::path(entry.path).stem().string();
        doc.source = entry.source;
        doc.text = std::move(contents);
        doc.metadata.emplace("path", entry.path);
        if (doc.id.empty() || !seen_ids.insert(doc.id).second) {
            ++stats.skipped;
            log::debug("ingest").field("file", entry.path).field("skip", "duplicate-id");
            continue;
        }
        ++stats.documents;
        sink(std::move(doc));
    }
    return stats;
}

}  // namespace fincorpus
