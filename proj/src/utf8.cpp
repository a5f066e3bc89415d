#include "utf8.hpp"

#include "errors.hpp"

namespace fincorpus::utf8 {

namespace {

// Decodes one scalar starting at bytes[i]. Returns false on malformed input.
bool decode_one(std::string_view bytes, std::size_t& i, char32_t& out) {
    const auto b0 = static_cast<unsigned char>(bytes[i]);
    if (b0 < 0x80) {
        out = b0;
        i += 1;
        return true;
    }
    int len = 0;
    char32_t cp = 0;
    char32_t min = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
        min = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
        min = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
        min = 0x10000;
    } else {
        return false;
    }
    if (i + static_cast<std::size_t>(len) > bytes.size()) return false;
    for (int k = 1; k < len; ++k) {
        const auto b = static_cast<unsigned char>(bytes[i + static_cast<std::size_t>(k)]);
        if ((b & 0xC0) != 0x80) return false;
        cp = (cp << 6) | (b & 0x3F);
    }
    if (cp < min) return false;                         // overlong
    if (cp >= 0xD800 && cp <= 0xDFFF) return false;     // surrogate
    if (cp > 0x10FFFF) return false;
    out = cp;
    i += static_cast<std::size_t>(len);
    return true;
}

}  // namespace

bool is_valid(std::string_view bytes) {
    std::size_t i = 0;
    char32_t cp;
    while (i < bytes.size()) {
        if (!decode_one(bytes, i, cp)) return false;
    }
    return true;
}

bool try_decode(std::string_view bytes, std::u32string& out) {
    out.clear();
    out.reserve(bytes.size());
    std::size_t i = 0;
    char32_t cp;
    while (i < bytes.size()) {
        if (!decode_one(bytes, i, cp)) return false;
        out.push_back(cp);
    }
    return true;
}

std::u32string decode(std::string_view bytes) {
    std::u32string out;
    if (!try_decode(bytes, out)) {
        throw_data("invalid UTF-8 byte sequence");
    }
    return out;
}

void append_scalar(std::string& out, char32_t c) {
    if (c < 0x80) {
        out.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (c >> 6)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (c >> 12)));
        out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (c >> 18)));
        out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
}

std::string encode(std::u32string_view scalars) {
    std::string out;
    out.reserve(scalars.size() * 3);
    for (char32_t c : scalars) append_scalar(out, c);
    return out;
}

std::size_t scalar_count(std::string_view bytes) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        if ((static_cast<unsigned char>(bytes[i]) & 0xC0) != 0x80) ++n;
    }
    return n;
}

}  // namespace fincorpus::utf8
