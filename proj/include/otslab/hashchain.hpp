#pragma once

#include "otslab/errors.hpp"
#include "otslab/hex.hpp"

#include <openssl/evp.h>

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace otslab {

/// One link of a hash chain: raw digest bytes (28 for SHA-224).
using ChainValue = std::vector<std::uint8_t>;

/// A registered digest algorithm with fixed output length.
class Digest {
public:
    /// Looks up a digest by identifier ("sha224", "sha256").
    static const Digest& get(std::string_view name) {
        static const Digest sha224{"sha224", EVP_sha224()};
        static const Digest sha256{"sha256", EVP_sha256()};
        if (name == "sha224") return sha224;
        if (name == "sha256") return sha256;
        throw LookupError("unknown digest \"" + std::string(name) + "\"");
    }

    const std::string& name() const { return name_; }
    std::size_t length() const { return length_; }

    /// One-shot digest of arbitrary input.
    ChainValue operator()(std::span<const std::uint8_t> data) const {
        ChainValue out(length_);
        unsigned int len = 0;
        if (EVP_Digest(data.data(), data.size(), out.data(), &len, md_, nullptr) != 1 ||
            len != length_) {
            throw Error("digest computation failed for " + name_);
        }
        return out;
    }

    const EVP_MD* md() const { return md_; }

private:
    Digest(std::string name, const EVP_MD* md)
        : name_(std::move(name)), md_(md), length_(static_cast<std::size_t>(EVP_MD_size(md))) {}

    std::string name_;
    const EVP_MD* md_;
    std::size_t length_;
};

namespace detail {

struct MdCtxDeleter {
    void operator()(EVP_MD_CTX* ctx) const { EVP_MD_CTX_free(ctx); }
};
using MdCtxPtr = std::unique_ptr<EVP_MD_CTX, MdCtxDeleter>;

} // namespace detail

/// h_n(x): applies the digest n times to the raw bytes. n = 0 returns x
/// unchanged. Composes: hash_iterate(hash_iterate(x, i), j) ==
/// hash_iterate(x, i + j).
inline ChainValue hash_iterate(ChainValue x, std::uint64_t n, const Digest& digest) {
    if (n == 0) {
        return x;
    }
    detail::MdCtxPtr ctx{EVP_MD_CTX_new()};
    if (!ctx) {
        throw Error("EVP_MD_CTX allocation failed");
    }
    ChainValue out(digest.length());
    for (std::uint64_t i = 0; i < n; ++i) {
        unsigned int len = 0;
        if (EVP_DigestInit_ex(ctx.get(), digest.md(), nullptr) != 1 ||
            EVP_DigestUpdate(ctx.get(), x.data(), x.size()) != 1 ||
            EVP_DigestFinal_ex(ctx.get(), out.data(), &len) != 1) {
            throw Error("digest computation failed for " + digest.name());
        }
        x.resize(out.size());
        x.swap(out);
    }
    return x;
}

/// Winternitz chain parameters: chain length 2^w - 1 links of `hash`.
struct WotsParams {
    unsigned w;
    std::string hash = "sha224";

    explicit WotsParams(unsigned w_, std::string hash_ = "sha224")
        : w(w_), hash(std::move(hash_)) {
        if (w < 1 || w > 32) {
            throw DomainError("chain-depth exponent w must be in [1, 32], got " +
                              std::to_string(w));
        }
        Digest::get(hash); // validates the identifier
    }

    std::uint64_t chain_length() const { return (std::uint64_t{1} << w) - 1; }
    const Digest& digest() const { return Digest::get(hash); }
};

/// Maps an arbitrary message to t in [0, 2^w - 1]: digest the message,
/// read it as a big-endian integer, keep the last w bits.
inline std::uint64_t normalize_message(std::span<const std::uint8_t> message, unsigned w,
                                       const Digest& digest) {
    if (w < 1 || w > 32) {
        throw DomainError("chain-depth exponent w must be in [1, 32], got " +
                          std::to_string(w));
    }
    const ChainValue d = digest(message);
    std::uint64_t tail = 0;
    const std::size_t take = d.size() < 8 ? d.size() : 8;
    for (std::size_t i = d.size() - take; i < d.size(); ++i) {
        tail = (tail << 8) | d[i];
    }
    return tail & ((std::uint64_t{1} << w) - 1);
}

namespace detail {

inline void require_chain_value(const ChainValue& value, const WotsParams& params,
                                const char* role) {
    if (value.size() != params.digest().length()) {
        throw DomainError(std::string(role) + " must be exactly " +
                          std::to_string(params.digest().length()) + " bytes for " +
                          params.hash + ", got " + std::to_string(value.size()));
    }
}

} // namespace detail

/// Public key from private chain value: R = h_{2^w - 1}(r).
inline ChainValue wots_keygen(const ChainValue& r, const WotsParams& params) {
    detail::require_chain_value(r, params, "private key r");
    return hash_iterate(r, params.chain_length(), params.digest());
}

/// Signature for normalized message t: zeta = h_t(r). t = 0 discloses r.
inline ChainValue wots_sign(const ChainValue& r, std::uint64_t t, const WotsParams& params) {
    detail::require_chain_value(r, params, "private key r");
    if (t > params.chain_length()) {
        throw DomainError("t = " + std::to_string(t) + " outside [0, 2^w - 1] for w = " +
                          std::to_string(params.w));
    }
    return hash_iterate(r, t, params.digest());
}

/// The verifier's recomputed endpoint: xi = h_{2^w - 1 - t}(zeta).
inline ChainValue wots_verification_value(const ChainValue& zeta, std::uint64_t t,
                                          const WotsParams& params) {
    detail::require_chain_value(zeta, params, "signature zeta");
    if (t > params.chain_length()) {
        throw DomainError("t = " + std::to_string(t) + " outside [0, 2^w - 1] for w = " +
                          std::to_string(params.w));
    }
    return hash_iterate(zeta, params.chain_length() - t, params.digest());
}

/// Verification accepts iff xi equals R byte-for-byte. Out-of-range t is an
/// error, not a rejection.
inline bool wots_verify(const ChainValue& R, const ChainValue& zeta, std::uint64_t t,
                        const WotsParams& params) {
    detail::require_chain_value(R, params, "public key R");
    return wots_verification_value(zeta, t, params) == R;
}

} // namespace otslab
