#include "packing.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>

static_assert(std::endian::native == std::endian::little,
              "window file I/O writes raw little-endian token ids");

#include "errors.hpp"
#include "hashing.hpp"
#include "log.hpp"

namespace fincorpus {

std::vector<std::uint32_t> ByteTokenizer::tokenize(std::string_view text) const {
    std::vector<std::uint32_t> out;
    out.reserve(text.size());
    for (const char c : text) {
        out.push_back(static_cast<std::uint32_t>(static_cast<unsigned char>(c)) + 1);
    }
    return out;
}

std::string ByteTokenizer::detokenize(std::span<const std::uint32_t> tokens) const {
    std::string out;
    out.reserve(tokens.size());
    for (const std::uint32_t t : tokens) {
        if (t == 0 || t > 256) {
            throw_data("byte tokenizer: token id " + std::to_string(t) + " out of range");
        }
        out.push_back(static_cast<char>(static_cast<unsigned char>(t - 1)));
    }
    return out;
}

std::unique_ptr<TokenizerSpec> make_tokenizer(const std::string& name) {
    if (name == "byte") return std::make_unique<ByteTokenizer>();
    throw_config("unknown tokenizer '" + name + "' (available: byte)");
}

void WindowParams::validate() const {
    if (length < 1) throw_config("packing.window_len must be >= 1");
    if (gap < 1 || gap > length) {
        throw_config("packing.window_gap must satisfy 1 <= gap <= window_len");
    }
}

void order_documents(std::vector<CleanDocument>& docs,
                     std::optional<std::uint64_t> shuffle_seed) {
    std::sort(docs.begin(), docs.end(),
              [](const CleanDocument& a, const CleanDocument& b) { return a.id < b.id; });
    if (shuffle_seed.has_value()) {
        deterministic_shuffle(std::span<CleanDocument>(docs), *shuffle_seed);
    }
}

std::vector<std::uint32_t> build_token_stream(std::span<const CleanDocument> docs,
                                              const TokenizerSpec& tokenizer,
                                              std::uint64_t* skipped) {
    std::vector<std::uint32_t> stream;
    const std::uint32_t eos = tokenizer.eos_id();
    for (const auto& doc : docs) {
        std::vector<std::uint32_t> tokens;
        try {
            tokens = tokenizer.tokenize(doc.clean_text);
        } catch (const std::exception&) {
            if (skipped != nullptr) ++(*skipped);
            log::error("pack").field("doc", doc.id).field("skip", "tokenizer-error");
            continue;
        }
        stream.insert(stream.end(), tokens.begin(), tokens.end());
        stream.push_back(eos);
    }
    return stream;
}

std::uint64_t window_count(std::uint64_t stream_len, const WindowParams& params) {
    params.validate();
    if (stream_len < params.length) return 0;
    return (stream_len - params.length) / params.gap + 1;
}

std::vector<PackedWindow> window_stream(std::span<const std::uint32_t> stream,
                                        const WindowParams& params) {
    const std::uint64_t count = window_count(stream.size(), params);
    std::vector<PackedWindow> windows;
    windows.reserve(count);
    for (std::uint64_t w = 0; w < count; ++w) {
        const std::uint64_t offset = w * params.gap;
        PackedWindow win;
        win.start_offset = offset;
        win.tokens.assign(stream.begin() + static_cast<std::ptrdiff_t>(offset),
                          stream.begin() + static_cast<std::ptrdiff_t>(offset + params.length));
        windows.push_back(std::move(win));
    }
    return windows;
}

namespace {

constexpr char kMagic[4] = {'F', 'C', 'W', 'N'};

template <typename T>
void write_pod(std::ofstream& out, T value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in, const std::string& path) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw_io("truncated window file: " + path);
    return value;
}

}  // namespace

void write_window_file(const std::string& path, std::span<const std::uint32_t> stream,
                       const WindowParams& params, const TokenizerSpec& tokenizer) {
    const std::uint64_t count = window_count(stream.size(), params);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw_io("cannot open window file for writing: " + path);
    out.write(kMagic, 4);
    write_pod<std::uint32_t>(out, 1);  // version
    write_pod<std::uint32_t>(out, params.length);
    write_pod<std::uint32_t>(out, params.gap);
    write_pod<std::uint32_t>(out, tokenizer.eos_id());
    const std::string name(tokenizer.name());
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    write_pod<std::uint64_t>(out, count);
    // Records are written straight out of the stream buffer; windows overlap
    // by length - gap tokens, so no window copy is materialized.
    for (std::uint64_t w = 0; w < count; ++w) {
        const std::uint64_t offset = w * params.gap;
        out.write(reinterpret_cast<const char*>(stream.data() + offset),
                  static_cast<std::streamsize>(sizeof(std::uint32_t) * params.length));
    }
    if (!out) throw_io("failed writing window file: " + path);
}

WindowFileHeader read_window_file_header(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io("cannot open window file: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw_data("not a window file (bad magic): " + path);
    }
    WindowFileHeader h;
    h.version = read_pod<std::uint32_t>(in, path);
    if (h.version != 1) throw_data("unsupported window file version: " + path);
    h.length = read_pod<std::uint32_t>(in, path);
    h.gap = read_pod<std::uint32_t>(in, path);
    h.eos_id = read_pod<std::uint32_t>(in, path);
    const auto name_len = read_pod<std::uint32_t>(in, path);
    h.tokenizer_name.resize(name_len);
    in.read(h.tokenizer_name.data(), name_len);
    if (!in) throw_io("truncated window file: " + path);
    h.count = read_pod<std::uint64_t>(in, path);
    return h;
}

std::vector<PackedWindow> read_window_file(const std::string& path) {
    const auto header = read_window_file_header(path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io("cannot open window file: " + path);
    in.seekg(static_cast<std::streamoff>(4 + 4 * 5 + header.tokenizer_name.size() + 8));
    std::vector<PackedWindow> windows;
    windows.reserve(header.count);
    for (std::uint64_t w = 0; w < header.count; ++w) {
        PackedWindow win;
        win.start_offset = w * header.gap;
        win.tokens.resize(header.length);
        in.read(reinterpret_cast<char*>(win.tokens.data()),
                static_cast<std::streamsize>(sizeof(std::uint32_t) * header.length));
        if (!in) throw_io("truncated window file: " + path);
        windows.push_back(std::move(win));
    }
    return windows;
}

}  // namespace fincorpus
