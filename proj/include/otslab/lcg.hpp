#pragma once

#include "otslab/errors.hpp"
#include "otslab/hex.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace otslab {

/// One parameter set of the recurrence x' = a*x + c mod 2^k.
///
/// The modulus is always a power of two; k is its exponent. The four
/// built-in sets (see ParamRegistry) are the ones shipped by Visual Basic,
/// GCC, POSIX rand48, and MMIX.
struct LcgParams {
    std::string name;
    std::uint64_t a = 0;
    std::uint64_t c = 0;
    unsigned k = 0;

    LcgParams(std::string name_, std::uint64_t a_, std::uint64_t c_, unsigned k_)
        : name(std::move(name_)), a(a_), c(c_), k(k_) {
        if (k < 8 || k > 64) {
            throw DomainError("modulus exponent k must be in [8, 64], got " +
                              std::to_string(k));
        }
        if (a == 0 || a > mask()) {
            throw DomainError("multiplier a must satisfy 0 < a < 2^k for \"" + name + "\"");
        }
        if (c > mask()) {
            throw DomainError("increment c must satisfy 0 <= c < 2^k for \"" + name + "\"");
        }
    }

    /// 2^k - 1; values are kept reduced by masking with this.
    std::uint64_t mask() const {
        return k == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
    }

    bool odd_multiplier() const { return (a & 1) != 0; }

    friend bool operator==(const LcgParams& lhs, const LcgParams& rhs) {
        return lhs.a == rhs.a && lhs.c == rhs.c && lhs.k == rhs.k;
    }
};

/// One generator value f_n(s). `index` records how many steps were taken
/// since seeding; it is diagnostic only and excluded from equality.
struct LcgState {
    std::uint64_t value = 0;
    LcgParams params;
    std::uint64_t index = 0;

    friend bool operator==(const LcgState& lhs, const LcgState& rhs) {
        return lhs.value == rhs.value && lhs.params == rhs.params;
    }
};

namespace detail {

inline std::uint64_t mul_mod(std::uint64_t x, std::uint64_t y, std::uint64_t mask) {
    // Product needs up to 2k <= 128 bits before reduction.
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * y) & mask;
}

} // namespace detail

/// The affine map x -> mul*x + add (mod 2^k). One generator step is
/// {a, c}; n steps compose to another affine map, which is how jump()
/// reaches O(log n).
struct AffineMap {
    std::uint64_t mul = 1;
    std::uint64_t add = 0;

    std::uint64_t apply(std::uint64_t x, const LcgParams& params) const {
        const std::uint64_t m = params.mask();
        return (detail::mul_mod(mul, x, m) + add) & m;
    }
};

/// Composition: apply `inner` first, then `outer`.
/// (a1,c1) o (a2,c2) = (a1*a2, a1*c2 + c1), all mod 2^k.
inline AffineMap compose(const AffineMap& outer, const AffineMap& inner,
                         const LcgParams& params) {
    const std::uint64_t m = params.mask();
    return AffineMap{
        detail::mul_mod(outer.mul, inner.mul, m),
        (detail::mul_mod(outer.mul, inner.add, m) + outer.add) & m,
    };
}

/// n-fold self-composition by binary exponentiation. n = 0 yields identity.
inline AffineMap affine_power(AffineMap map, std::uint64_t n, const LcgParams& params) {
    AffineMap acc; // identity
    while (n != 0) {
        if (n & 1) {
            acc = compose(map, acc, params);
        }
        map = compose(map, map, params);
        n >>= 1;
    }
    return acc;
}

/// f_0(s) = a XOR s (mod 2^k). Seeds at or above 2^k are reduced first.
inline LcgState seed_init(std::uint64_t seed, const LcgParams& params) {
    const std::uint64_t m = params.mask();
    return LcgState{(params.a ^ (seed & m)) & m, params, 0};
}

/// One step of the recurrence: value' = (a*value + c) mod 2^k.
inline LcgState step(const LcgState& state) {
    return LcgState{
        AffineMap{state.params.a, state.params.c}.apply(state.value, state.params),
        state.params,
        state.index + 1,
    };
}

/// n steps in O(log n) multiplications. Reference semantics is n
/// applications of step(); any disagreement is a bug here, not there.
inline LcgState jump(const LcgState& state, std::uint64_t n) {
    const AffineMap advance =
        affine_power(AffineMap{state.params.a, state.params.c}, n, state.params);
    return LcgState{advance.apply(state.value, state.params), state.params,
                    state.index + n};
}

/// Multiplicative inverse of the multiplier mod 2^k. Exists iff a is odd.
inline std::uint64_t inverse_multiplier(const LcgParams& params) {
    if (!params.odd_multiplier()) {
        throw UnsupportedError("multiplier of \"" + params.name +
                               "\" is even; no inverse mod 2^k exists");
    }
    // Newton lifting: each round doubles the number of correct low bits.
    std::uint64_t inv = params.a; // correct mod 2^3 for odd a
    for (int round = 0; round < 5; ++round) {
        inv *= 2 - params.a * inv;
    }
    return inv & params.mask();
}

/// The affine map undoing one step: x -> a^{-1}*(x - c) mod 2^k.
inline AffineMap inverse_step_map(const LcgParams& params) {
    const std::uint64_t m = params.mask();
    const std::uint64_t inv = inverse_multiplier(params);
    return AffineMap{inv, detail::mul_mod(inv, (0 - params.c) & m, m)};
}

/// Exact single-step inversion: step_inverse(step(x)) == x.
inline LcgState step_inverse(const LcgState& state) {
    return LcgState{inverse_step_map(state.params).apply(state.value, state.params),
                    state.params,
                    state.index == 0 ? 0 : state.index - 1};
}

/// Named parameter sets. Starts out holding the four built-in rows; custom
/// sets may be added before generators start running (the registry is not
/// synchronized).
class ParamRegistry {
public:
    ParamRegistry() {
        add(LcgParams{"vb", 16598013, 12820163, 24});
        add(LcgParams{"gcc", 1664525, 1013904223, 31});
        add(LcgParams{"posix", 25214903917, 11, 48});
        add(LcgParams{"mmix", 6364136223846793005ULL, 1442695040888963407ULL, 64});
        for (const auto& [name, params] : sets_) {
            if (!params.odd_multiplier()) {
                throw DomainError("built-in parameter set \"" + name +
                                  "\" must have an odd multiplier");
            }
        }
    }

    const LcgParams& get(std::string_view name) const {
        const auto it = sets_.find(std::string(name));
        if (it == sets_.end()) {
            throw LookupError("unknown parameter set \"" + std::string(name) + "\"");
        }
        return it->second;
    }

    void add(LcgParams params) {
        std::string key = params.name;
        sets_.insert_or_assign(std::move(key), std::move(params));
    }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        out.reserve(sets_.size());
        for (const auto& [name, params] : sets_) {
            out.push_back(name);
        }
        return out;
    }

private:
    std::map<std::string, LcgParams, std::less<>> sets_;
};

/// The process-wide registry of built-in sets.
inline const ParamRegistry& builtin_registry() {
    static const ParamRegistry registry;
    return registry;
}

/// Shortcut for one-off access to a built-in parameter set.
inline const LcgParams& registry_get(std::string_view name) {
    return builtin_registry().get(name);
}

/// Canonical hex for a value under the given parameters.
inline std::string format_value(std::uint64_t value, const LcgParams& params) {
    return format_hex(value, params.k);
}

} // namespace otslab
