#pragma once

#include "otslab/errors.hpp"
#include "otslab/lcg.hpp"

#include <cstdint>
#include <string>

namespace otslab {

/// How chain positions are reached: walking the recurrence one step at a
/// time, or composing the affine map in O(log n).
enum class ChainMode { sequential, jump };

inline const char* to_string(ChainMode mode) {
    return mode == ChainMode::sequential ? "sequential" : "jump";
}

struct PrngOtsKeyPair {
    std::uint64_t p = 0; // private seed
    std::uint64_t P = 0; // chain endpoint f_{2^w - 1}(p)
    LcgParams params;
    unsigned w = 0;
    bool used = false;
};

struct PrngOtsSignature {
    std::uint64_t S = 0; // a XOR f_t(p), reduced mod 2^k
    std::string paramset;
    unsigned w = 0;
};

namespace detail {

inline LcgState advance(const LcgState& state, std::uint64_t n, ChainMode mode) {
    if (mode == ChainMode::jump) {
        return jump(state, n);
    }
    LcgState current = state;
    for (std::uint64_t i = 0; i < n; ++i) {
        current = step(current);
    }
    return current;
}

inline void require_w(unsigned w) {
    if (w < 1 || w > 32) {
        throw DomainError("chain-depth exponent w must be in [1, 32], got " +
                          std::to_string(w));
    }
}

inline void require_value(std::uint64_t value, const LcgParams& params, const char* role) {
    if (value > params.mask()) {
        throw DomainError(std::string(role) + " must be below 2^" +
                          std::to_string(params.k) + " for \"" + params.name + "\"");
    }
}

inline void require_t(std::uint64_t t, unsigned w) {
    require_w(w);
    const std::uint64_t limit = (std::uint64_t{1} << w) - 1;
    if (t > limit) {
        throw DomainError("t = " + std::to_string(t) + " outside [0, 2^w - 1] for w = " +
                          std::to_string(w));
    }
}

} // namespace detail

/// Key generation: seed the generator with p, walk 2^w - 1 steps, publish
/// the endpoint P. The jump mode is the default; sequential mode exists for
/// benchmark fidelity and gives bit-identical output.
inline PrngOtsKeyPair prng_keygen(std::uint64_t p, const LcgParams& params, unsigned w,
                                  ChainMode mode = ChainMode::jump) {
    detail::require_w(w);
    detail::require_value(p, params, "private seed p");
    const std::uint64_t chain = (std::uint64_t{1} << w) - 1;
    const LcgState endpoint = detail::advance(seed_init(p, params), chain, mode);
    return PrngOtsKeyPair{p, endpoint.value, params, w, false};
}

/// Signing: S = a XOR f_t(p) (mod 2^k). Signing t = 0 reveals the private
/// seed; one-time use is enforced by the keystore, not here.
inline PrngOtsSignature prng_sign(std::uint64_t p, std::uint64_t t, const LcgParams& params,
                                  unsigned w, ChainMode mode = ChainMode::jump) {
    detail::require_t(t, w);
    detail::require_value(p, params, "private seed p");
    const LcgState f_t = detail::advance(seed_init(p, params), t, mode);
    return PrngOtsSignature{(params.a ^ f_t.value) & params.mask(), params.name, w};
}

/// The verifier's recomputed endpoint V: re-seeding with S unmasks f_t(p),
/// because a XOR (a XOR f_t(p)) = f_t(p); advancing the remaining
/// 2^w - 1 - t steps retraces the chain.
inline std::uint64_t prng_verification_value(std::uint64_t S, std::uint64_t t,
                                             const LcgParams& params, unsigned w,
                                             ChainMode mode = ChainMode::jump) {
    detail::require_t(t, w);
    detail::require_value(S, params, "signature S");
    const std::uint64_t chain = (std::uint64_t{1} << w) - 1;
    return detail::advance(seed_init(S, params), chain - t, mode).value;
}

/// Verification accepts iff V lands on P exactly. Out-of-range inputs are
/// errors, not rejections.
inline bool prng_verify(std::uint64_t P, std::uint64_t S, std::uint64_t t,
                        const LcgParams& params, unsigned w,
                        ChainMode mode = ChainMode::jump) {
    detail::require_value(P, params, "public value P");
    return prng_verification_value(S, t, params, w, mode) == P;
}

} // namespace otslab
