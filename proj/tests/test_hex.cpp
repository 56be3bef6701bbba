#include "otslab/hex.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace otslab;

TEST_CASE("hex formatting pads to the requested bit width", "[hex]") {
    CHECK(format_hex(0, 24) == "0x000000");
    CHECK(format_hex(0xB, 48) == "0x00000000000B");
    CHECK(format_hex(0xABC, 12) == "0xABC");
    CHECK(format_hex(0x7FFFFFFF, 31) == "0x7FFFFFFF");
}

TEST_CASE("hex parsing accepts either case and optional prefix", "[hex]") {
    CHECK(parse_hex_u64("0xBB1AD5732407") == 0xBB1AD5732407ULL);
    CHECK(parse_hex_u64("0Xbb1ad5732407") == 0xBB1AD5732407ULL);
    CHECK(parse_hex_u64("bb1ad5732407") == 0xBB1AD5732407ULL);
    CHECK(parse_hex_u64("0x0000000000000000ffff") == 0xFFFF); // leading zeros ok
}

TEST_CASE("hex parsing rejects malformed input", "[hex]") {
    CHECK_THROWS_AS(parse_hex_u64(""), ParseError);
    CHECK_THROWS_AS(parse_hex_u64("0x"), ParseError);
    CHECK_THROWS_AS(parse_hex_u64("0xZZ"), ParseError);
    CHECK_THROWS_AS(parse_hex_u64("0x10000000000000000"), ParseError); // 65 bits
    CHECK_THROWS_AS(parse_hex_bytes("0xABC"), ParseError);             // odd digits
    CHECK_THROWS_AS(parse_hex_bytes(""), ParseError);
}

TEST_CASE("decimal-or-hex integer parsing", "[hex]") {
    CHECK(parse_u64("12345678") == 12345678);
    CHECK(parse_u64("0x13579BDE") == 0x13579BDE);
    CHECK(parse_u64("0") == 0);
    CHECK_THROWS_AS(parse_u64("12x"), ParseError);
    CHECK_THROWS_AS(parse_u64("99999999999999999999999"), ParseError);
}

TEST_CASE("print then parse is the identity", "[hex]") {
    std::mt19937_64 rng(404);
    for (unsigned bits : {8u, 24u, 31u, 48u, 64u}) {
        const std::uint64_t mask = bits == 64 ? ~std::uint64_t{0}
                                              : (std::uint64_t{1} << bits) - 1;
        for (int trial = 0; trial < 200; ++trial) {
            const std::uint64_t value = rng() & mask;
            REQUIRE(parse_hex_u64(format_hex(value, bits)) == value);
        }
    }
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::uint8_t> bytes(1 + rng() % 64);
        for (auto& b : bytes) b = static_cast<std::uint8_t>(rng());
        REQUIRE(parse_hex_bytes(format_hex(bytes)) == bytes);
    }
}
