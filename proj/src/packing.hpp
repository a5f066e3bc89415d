#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corpus_model.hpp"

namespace fincorpus {

// Tokenizer abstraction for packing and token accounting. The production
// tokenizer plugs in behind this interface; the bundled byte-level tokenizer
// is fully reversible, so every packing property is testable without it.
class TokenizerSpec {
public:
    virtual ~TokenizerSpec() = default;

    virtual std::string_view name() const = 0;
    virtual std::uint32_t vocab_size() const = 0;
    virtual std::uint32_t eos_id() const = 0;
    virtual std::vector<std::uint32_t> tokenize(std::string_view text) const = 0;
    virtual std::string detokenize(std::span<const std::uint32_t> tokens) const = 0;

    virtual std::uint64_t count_tokens(std::string_view text) const {
        return tokenize(text).size();
    }
};

// id = byte + 1; id 0 is reserved for EOS. detokenize(tokenize(t)) == t.
class ByteTokenizer final : public TokenizerSpec {
public:
    std::string_view name() const override { return "byte"; }
    std::uint32_t vocab_size() const override { return 257; }
    std::uint32_t eos_id() const override { return 0; }
    std::vector<std::uint32_t> tokenize(std::string_view text) const override;
    std::string detokenize(std::span<const std::uint32_t> tokens) const override;
    std::uint64_t count_tokens(std::string_view text) const override { return text.size(); }
};

std::unique_ptr<TokenizerSpec> make_tokenizer(const std::string& name);  // config error if unknown

struct PackedWindow {
    std::vector<std::uint32_t> tokens;  // exactly `length` ids
    std::uint64_t start_offset = 0;     // multiple of `gap`
};

struct WindowParams {
    std::uint32_t length = 1024;
    std::uint32_t gap = 512;

    void validate() const;  // length >= 1, 1 <= gap <= length
};

// Sorts documents by id, optionally followed by a seeded shuffle, so packs
// are reproducible from the run manifest.
void order_documents(std::vector<CleanDocument>& docs, std::optional<std::uint64_t> shuffle_seed);

// tok(d1) ++ [eos] ++ tok(d2) ++ [eos] ++ ... ++ tok(dn) ++ [eos].
// Tokenizer failures skip the document and are counted via `skipped`.
std::vector<std::uint32_t> build_token_stream(std::span<const CleanDocument> docs,
                                              const TokenizerSpec& tokenizer,
                                              std::uint64_t* skipped = nullptr);

// floor((n - L) / G) + 1 full windows (0 when n < L).
std::uint64_t window_count(std::uint64_t stream_len, const WindowParams& params);

std::vector<PackedWindow> window_stream(std::span<const std::uint32_t> stream,
                                        const WindowParams& params);

// Binary window file: fixed header followed by `count` records of exactly
// `length` little-endian u32 token ids.
struct WindowFileHeader {
    std::uint32_t version = 1;
    std::uint32_t length = 0;
    std::uint32_t gap = 0;
    std::uint32_t eos_id = 0;
    std::string tokenizer_name;
    std::uint64_t count = 0;
};

void write_window_file(const std::string& path, std::span<const std::uint32_t> stream,
                       const WindowParams& params, const TokenizerSpec& tokenizer);
WindowFileHeader read_window_file_header(const std::string& path);
std::vector<PackedWindow> read_window_file(const std::string& path);

}  // namespace fincorpus
