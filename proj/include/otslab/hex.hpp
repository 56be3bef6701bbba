#pragma once

#include "otslab/errors.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace otslab {

/// Canonical rendering of a k-bit integer: "0x" prefix, uppercase,
/// zero-padded to ceil(k/4) digits.
inline std::string format_hex(std::uint64_t value, unsigned bits) {
    static constexpr char digits[] = "0123456789ABCDEF";
    const unsigned width = (bits + 3) / 4;
    std::string out(width + 2, '0');
    out[0] = '0';
    out[1] = 'x';
    for (unsigned i = 0; i < width; ++i) {
        out[2 + width - 1 - i] = digits[(value >> (4 * i)) & 0xF];
    }
    return out;
}

/// Uppercase hex of a byte string, no prefix, two digits per byte.
inline std::string format_hex(std::span<const std::uint8_t> bytes) {
    static constexpr char digits[] = "0123456789ABCDEF";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xF]);
    }
    return out;
}

inline int hex_digit(char ch) {
    if (ch >= '0' && ch <= '9') return ch - '0';
    if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
    if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
    return -1;
}

/// Parses an unsigned integer from hex text. Accepts an optional 0x/0X
/// prefix, any digit case, and leading zeros. Rejects values over 64 bits.
inline std::uint64_t parse_hex_u64(std::string_view text) {
    std::string_view body = text;
    if (body.size() >= 2 && body[0] == '0' && (body[1] == 'x' || body[1] == 'X')) {
        body.remove_prefix(2);
    }
    if (body.empty()) {
        throw ParseError("empty hex value: \"" + std::string(text) + "\"");
    }
    std::uint64_t value = 0;
    std::size_t significant = 0;
    for (char ch : body) {
        const int d = hex_digit(ch);
        if (d < 0) {
            throw ParseError("invalid hex digit '" + std::string(1, ch) + "' in \"" +
                             std::string(text) + "\"");
        }
        if (value != 0 || d != 0) {
            ++significant;
        }
        if (significant > 16) {
            throw ParseError("hex value exceeds 64 bits: \"" + std::string(text) + "\"");
        }
        value = (value << 4) | static_cast<std::uint64_t>(d);
    }
    return value;
}

/// Parses a hex byte string (even digit count, optional 0x prefix).
inline std::vector<std::uint8_t> parse_hex_bytes(std::string_view text) {
    std::string_view body = text;
    if (body.size() >= 2 && body[0] == '0' && (body[1] == 'x' || body[1] == 'X')) {
        body.remove_prefix(2);
    }
    if (body.empty() || body.size() % 2 != 0) {
        throw ParseError("hex byte string needs an even, non-zero digit count: \"" +
                         std::string(text) + "\"");
    }
    std::vector<std::uint8_t> out(body.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int hi = hex_digit(body[2 * i]);
        const int lo = hex_digit(body[2 * i + 1]);
        if (hi < 0 || lo < 0) {
            throw ParseError("invalid hex digit in \"" + std::string(text) + "\"");
        }
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

/// Parses a non-negative integer given as decimal or 0x-prefixed hex.
inline std::uint64_t parse_u64(std::string_view text) {
    if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
        return parse_hex_u64(text);
    }
    if (text.empty()) {
        throw ParseError("empty integer value");
    }
    std::uint64_t value = 0;
    for (char ch : text) {
        if (ch < '0' || ch > '9') {
            throw ParseError("invalid decimal digit '" + std::string(1, ch) + "' in \"" +
                             std::string(text) + "\"");
        }
        const std::uint64_t d = static_cast<std::uint64_t>(ch - '0');
        if (value > (UINT64_MAX - d) / 10) {
            throw ParseError("integer exceeds 64 bits: \"" + std::string(text) + "\"");
        }
        value = value * 10 + d;
    }
    return value;
}

} // namespace otslab
