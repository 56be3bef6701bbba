#include "otslab/audit.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace otslab;

namespace {
const char* kBuiltinNames[] = {"vb", "gcc", "posix", "mmix"};
}

TEST_CASE("forward forgery extends a generator-chain signature", "[audit]") {
    const LcgParams& posix = registry_get("posix");
    const PrngOtsKeyPair pair = prng_keygen(0x13579BDE, posix, 24);
    const PrngOtsSignature sig = prng_sign(0x13579BDE, 12345678, posix, 24);

    SECTION("forging to the chain endpoint yields the masked public value") {
        const std::uint64_t forged =
            forge_forward_prng(sig.S, 12345678, 16777215, posix, 24);
        CHECK(forged == ((posix.a ^ pair.P) & posix.mask()));
        CHECK(prng_verify(pair.P, forged, 16777215, posix, 24));
    }
    SECTION("every forward target verifies") {
        std::mt19937_64 rng(42);
        for (const char* name : kBuiltinNames) {
            const LcgParams& params = registry_get(name);
            for (int trial = 0; trial < 50; ++trial) {
                const unsigned w = 4 + static_cast<unsigned>(rng() % 9);
                const std::uint64_t limit = (std::uint64_t{1} << w) - 1;
                const std::uint64_t p = rng() & params.mask();
                const std::uint64_t t = rng() % limit; // leaves room above
                const std::uint64_t target = t + 1 + rng() % (limit - t);
                const PrngOtsKeyPair kp = prng_keygen(p, params, w);
                const PrngOtsSignature honest = prng_sign(p, t, params, w);
                const std::uint64_t forged =
                    forge_forward_prng(honest.S, t, target, params, w);
                REQUIRE(prng_verify(kp.P, forged, target, params, w));
            }
        }
    }
    SECTION("a target at or below t is refused") {
        CHECK_THROWS_AS(forge_forward_prng(sig.S, 12345678, 12345678, posix, 24),
                        DomainError);
        CHECK_THROWS_AS(forge_forward_prng(sig.S, 12345678, 12, posix, 24), DomainError);
    }
}

TEST_CASE("forward forgery extends a hash-chain signature", "[audit]") {
    const WotsParams params{10};
    std::mt19937_64 rng(43);
    ChainValue r(params.digest().length());
    for (auto& b : r) b = static_cast<std::uint8_t>(rng());
    const ChainValue pub = wots_keygen(r, params);

    SECTION("every forward target verifies") {
        for (int trial = 0; trial < 50; ++trial) {
            const std::uint64_t limit = params.chain_length();
            const std::uint64_t t = rng() % limit;
            const std::uint64_t target = t + 1 + rng() % (limit - t);
            const ChainValue honest = wots_sign(r, t, params);
            const ChainValue forged = forge_forward_wots(honest, t, target, params);
            REQUIRE(wots_verify(pub, forged, target, params));
        }
    }
    SECTION("forging to the endpoint reproduces the public key") {
        const ChainValue honest = wots_sign(r, 123, params);
        CHECK(forge_forward_wots(honest, 123, params.chain_length(), params) == pub);
    }
    SECTION("a target at or below t is refused") {
        const ChainValue honest = wots_sign(r, 123, params);
        CHECK_THROWS_AS(forge_forward_wots(honest, 123, 123, params), DomainError);
        CHECK_THROWS_AS(forge_forward_wots(honest, 123, 7, params), DomainError);
    }
}

TEST_CASE("seed recovery from a signature", "[audit]") {
    const LcgParams& posix = registry_get("posix");

    SECTION("the worked demo signature gives back the demo seed") {
        CHECK(recover_seed(0xECE38D6DD84CULL, 12345678, posix) == 0x13579BDE);
    }
    SECTION("t = 0 discloses the seed directly") {
        const PrngOtsSignature sig = prng_sign(0x13579BDE, 0, posix, 24);
        CHECK(recover_seed(sig.S, 0, posix) == 0x13579BDE);
        CHECK(sig.S == 0x13579BDE);
    }
    SECTION("recovery is exact for random keys, all parameter sets") {
        std::mt19937_64 rng(44);
        for (int trial = 0; trial < 500; ++trial) {
            const LcgParams& params = registry_get(kBuiltinNames[trial % 4]);
            const unsigned w = 4 + static_cast<unsigned>(rng() % 9);
            const std::uint64_t p = rng() & params.mask();
            const std::uint64_t t = rng() & ((std::uint64_t{1} << w) - 1);
            const PrngOtsSignature sig = prng_sign(p, t, params, w);
            REQUIRE(recover_seed(sig.S, t, params) == p);
        }
    }
    SECTION("sequential and jump rewinds agree") {
        std::mt19937_64 rng(45);
        for (int trial = 0; trial < 50; ++trial) {
            const LcgParams& params = registry_get(kBuiltinNames[trial % 4]);
            const std::uint64_t p = rng() & params.mask();
            const std::uint64_t t = rng() % 500;
            const PrngOtsSignature sig = prng_sign(p, t, params, 16);
            REQUIRE(recover_seed(sig.S, t, params, ChainMode::sequential) ==
                    recover_seed(sig.S, t, params, ChainMode::jump));
        }
    }
    SECTION("even multiplier is unsupported") {
        const LcgParams even{"even", 6, 3, 16};
        CHECK_THROWS_AS(recover_seed(5, 3, even), UnsupportedError);
    }
}

TEST_CASE("seed recovery from the public key alone", "[audit]") {
    SECTION("the worked demo public value gives back the demo seed") {
        CHECK(recover_seed_from_public(0xE9694A840B48ULL, registry_get("posix"), 24) ==
              0x13579BDE);
    }
    SECTION("recovery is exact for random keys, all parameter sets") {
        std::mt19937_64 rng(46);
        for (int trial = 0; trial < 200; ++trial) {
            const LcgParams& params = registry_get(kBuiltinNames[trial % 4]);
            const unsigned w = 4 + static_cast<unsigned>(rng() % 29); // up to 32
            const std::uint64_t p = rng() & params.mask();
            const PrngOtsKeyPair pair = prng_keygen(p, params, w);
            REQUIRE(recover_seed_from_public(pair.P, params, w) == p);
        }
    }
}

TEST_CASE("recovered seeds reproduce the original key pair", "[audit]") {
    std::mt19937_64 rng(47);
    for (const char* name : kBuiltinNames) {
        const LcgParams& params = registry_get(name);
        const unsigned w = 12;
        const std::uint64_t p = rng() & params.mask();
        const std::uint64_t t = rng() & ((std::uint64_t{1} << w) - 1);
        const PrngOtsKeyPair pair = prng_keygen(p, params, w);
        const PrngOtsSignature sig = prng_sign(p, t, params, w);
        const std::uint64_t recovered = recover_seed(sig.S, t, params);
        const PrngOtsKeyPair rebuilt = prng_keygen(recovered, params, w);
        CHECK(rebuilt.P == pair.P);
        CHECK(rebuilt.p == pair.p);
    }
}
