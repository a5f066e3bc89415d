#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace fincorpus::utf8 {

// Strict UTF-8: rejects overlong encodings, surrogates, and code points
// above U+10FFFF.
bool is_valid(std::string_view bytes);

// Decode to Unicode scalar values. Throws a data error on invalid input.
std::u32string decode(std::string_view bytes);

// Non-throwing decode; returns false (and leaves `out` partially filled)
// on the first invalid sequence.
bool try_decode(std::string_view bytes, std::u32string& out);

std::string encode(std::u32string_view scalars);

void append_scalar(std::string& out, char32_t c);

// Scalar count of already-validated text.
std::size_t scalar_count(std::string_view bytes);

}  // namespace fincorpus::utf8
