#pragma once

#include "otslab/errors.hpp"
#include "otslab/hashchain.hpp"
#include "otslab/lcg.hpp"
#include "otslab/prngots.hpp"

#include <cstdint>

namespace otslab {

// Mechanized demonstrations of the schemes' documented limitations. Every
// function here succeeds by design; none of them is an attack on a healthy
// deployment, they show what a single disclosed signature already gives away.

namespace detail {

inline void require_target(std::uint64_t t, std::uint64_t t_target, unsigned w) {
    require_t(t, w);
    require_t(t_target, w);
    if (t_target <= t) {
        throw DomainError("forgery target t' = " + std::to_string(t_target) +
                          " must exceed the signed t = " + std::to_string(t));
    }
}

} // namespace detail

/// Forward forgery against the hash-chain scheme: anyone holding a
/// signature for t can extend the chain to any t' > t.
inline ChainValue forge_forward_wots(const ChainValue& zeta, std::uint64_t t,
                                     std::uint64_t t_target, const WotsParams& params) {
    detail::require_chain_value(zeta, params, "signature zeta");
    detail::require_target(t, t_target, params.w);
    return hash_iterate(zeta, t_target - t, params.digest());
}

/// Forward forgery against the generator-chain scheme: unmask f_t(p) with
/// the public multiplier, advance the chain, re-mask.
inline std::uint64_t forge_forward_prng(std::uint64_t S, std::uint64_t t,
                                        std::uint64_t t_target, const LcgParams& params,
                                        unsigned w, ChainMode mode = ChainMode::jump) {
    detail::require_target(t, t_target, w);
    detail::require_value(S, params, "signature S");
    const LcgState advanced = detail::advance(seed_init(S, params), t_target - t, mode);
    return (params.a ^ advanced.value) & params.mask();
}

namespace detail {

inline LcgState rewind(const LcgState& state, std::uint64_t n, ChainMode mode) {
    if (mode == ChainMode::jump) {
        const AffineMap back = affine_power(inverse_step_map(state.params), n, state.params);
        return LcgState{back.apply(state.value, state.params), state.params, 0};
    }
    LcgState current = state;
    for (std::uint64_t i = 0; i < n; ++i) {
        current = step_inverse(current);
    }
    return current;
}

} // namespace detail

/// Recovers the private seed from a signature: unmask f_t(p), invert t
/// generator steps back to f_0(p), strip the seed mix. Exact whenever the
/// multiplier is odd, which holds for every built-in parameter set.
inline std::uint64_t recover_seed(std::uint64_t S, std::uint64_t t, const LcgParams& params,
                                  ChainMode mode = ChainMode::jump) {
    detail::require_value(S, params, "signature S");
    const std::uint64_t m = params.mask();
    const LcgState f_t = seed_init(S, params); // a XOR S == f_t(p)
    const LcgState f_0 = detail::rewind(f_t, t, mode);
    return (params.a ^ f_0.value) & m;
}

/// Same inversion started from the public key alone: P sits 2^w - 1 steps
/// from f_0(p), so an invertible step walks straight back to the seed.
inline std::uint64_t recover_seed_from_public(std::uint64_t P, const LcgParams& params,
                                              unsigned w, ChainMode mode = ChainMode::jump) {
    detail::require_w(w);
    detail::require_value(P, params, "public value P");
    const std::uint64_t chain = (std::uint64_t{1} << w) - 1;
    const LcgState f_0 = detail::rewind(LcgState{P, params, chain}, chain, mode);
    return (params.a ^ f_0.value) & params.mask();
}

} // namespace otslab
