#pragma once

#include "otslab/errors.hpp"
#include "otslab/hashchain.hpp"
#include "otslab/hex.hpp"
#include "otslab/lcg.hpp"
#include "otslab/prngots.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <atomic>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

namespace otslab {

enum class Scheme { wots, prng_ots };

inline std::string_view to_string(Scheme scheme) {
    return scheme == Scheme::wots ? "wots" : "prng-ots";
}

inline Scheme scheme_from_string(std::string_view text) {
    if (text == "wots") return Scheme::wots;
    if (text == "prng-ots") return Scheme::prng_ots;
    throw ParseError("unknown scheme \"" + std::string(text) + "\"");
}

/// One key file's worth of state. Values are held in canonical hex; the
/// paramset is a generator registry name for prng-ots and a digest name
/// for wots. Private material is absent in public files.
struct KeyRecord {
    Scheme scheme = Scheme::prng_ots;
    std::string paramset;
    unsigned w = 0;
    std::optional<std::string> private_hex; // p or r
    std::string public_hex;                 // P or R
    bool used = false;
    std::string created; // ISO-8601, informational

    friend bool operator==(const KeyRecord&, const KeyRecord&) = default;
};

struct SignatureRecord {
    Scheme scheme = Scheme::prng_ots;
    std::string paramset;
    unsigned w = 0;
    std::uint64_t t = 0;
    std::string value_hex; // S or zeta

    friend bool operator==(const SignatureRecord&, const SignatureRecord&) = default;
};

enum class Visibility { private_key, public_key };

struct SerializedLengths {
    unsigned priv_bits = 0;
    unsigned pub_bits = 0;
    unsigned sig_bits = 0;

    friend bool operator==(const SerializedLengths&, const SerializedLengths&) = default;
};

/// Private, public, and signature widths in bits. All three coincide: one
/// chain value each, bounded by the modulus (prng-ots) or digest (wots).
inline SerializedLengths serialized_lengths(std::string_view paramset, Scheme scheme,
                                            const ParamRegistry& registry = builtin_registry()) {
    if (scheme == Scheme::prng_ots) {
        const unsigned k = registry.get(paramset).k;
        return SerializedLengths{k, k, k};
    }
    const unsigned bits = static_cast<unsigned>(Digest::get(paramset).length() * 8);
    return SerializedLengths{bits, bits, bits};
}

inline std::string iso8601_now() {
    const std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

inline KeyRecord to_record(const PrngOtsKeyPair& pair) {
    KeyRecord record;
    record.scheme = Scheme::prng_ots;
    record.paramset = pair.params.name;
    record.w = pair.w;
    record.private_hex = format_value(pair.p, pair.params);
    record.public_hex = format_value(pair.P, pair.params);
    record.used = pair.used;
    record.created = iso8601_now();
    return record;
}

inline KeyRecord to_record(const ChainValue& r, const ChainValue& R, const WotsParams& params) {
    KeyRecord record;
    record.scheme = Scheme::wots;
    record.paramset = params.hash;
    record.w = params.w;
    record.private_hex = "0x" + format_hex(r);
    record.public_hex = "0x" + format_hex(R);
    record.created = iso8601_now();
    return record;
}

namespace detail {

inline void atomic_write(const std::filesystem::path& path, std::string_view content) {
    namespace fs = std::filesystem;
    static std::atomic<unsigned> sequence{0};
    fs::path dir = path.parent_path();
    if (dir.empty()) {
        dir = ".";
    }
    const fs::path tmp = dir / (path.filename().string() + ".tmp-" +
                                std::to_string(::getpid()) + "-" +
                                std::to_string(sequence.fetch_add(1)));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open " + tmp.string() + " for writing");
        }
        out << content;
        out.flush();
        if (!out) {
            std::error_code ignore;
            fs::remove(tmp, ignore);
            throw IoError("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignore;
        fs::remove(tmp, ignore);
        throw IoError("cannot replace " + path.string() + ": " + ec.message());
    }
}

/// Exclusive advisory lock on a sidecar <path>.lock file. The sidecar is
/// never renamed away, so every contender serializes on the same inode;
/// separate open() calls conflict even within one process, which makes the
/// lock thread-safe as well. Released on destruction.
class FileLock {
public:
    explicit FileLock(const std::filesystem::path& target) {
        const std::string lock_path = target.string() + ".lock";
        fd_ = ::open(lock_path.c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
        if (fd_ < 0) {
            throw IoError("cannot open lock file " + lock_path);
        }
        if (::flock(fd_, LOCK_EX) != 0) {
            ::close(fd_);
            throw IoError("cannot lock " + lock_path);
        }
    }

    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;

    ~FileLock() {
        if (fd_ >= 0) {
            ::close(fd_);
        }
    }

private:
    int fd_ = -1;
};

struct ParsedLines {
    std::map<std::string, std::string> fields;
    std::map<std::string, std::size_t> lines;
};

inline ParsedLines parse_field_lines(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    ParsedLines out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": expected name=value");
        }
        std::string name = line.substr(0, eq);
        if (out.fields.count(name) != 0) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": duplicate field \"" + name + "\"");
        }
        out.lines[name] = line_no;
        out.fields[name] = line.substr(eq + 1);
    }
    return out;
}

inline std::string take_field(ParsedLines& parsed, const std::string& name,
                              const std::filesystem::path& path) {
    const auto it = parsed.fields.find(name);
    if (it == parsed.fields.end()) {
        throw ParseError(path.string() + ": missing field \"" + name + "\"");
    }
    std::string value = it->second;
    parsed.fields.erase(it);
    return value;
}

inline bool parse_bool_field(const std::string& value, const std::string& name,
                             const std::filesystem::path& path) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw ParseError(path.string() + ": field \"" + name + "\" must be true or false, got \"" +
                     value + "\"");
}

inline unsigned parse_w_field(const std::string& value, const std::filesystem::path& path) {
    std::uint64_t w = 0;
    try {
        w = parse_u64(value);
    } catch (const ParseError&) {
        throw ParseError(path.string() + ": field \"w\" is not a number: \"" + value + "\"");
    }
    if (w < 1 || w > 32) {
        throw ParseError(path.string() + ": field \"w\" outside [1, 32]: " + value);
    }
    return static_cast<unsigned>(w);
}

/// Recomputes the public value from private material and compares it with
/// the stored one; also canonicalizes both hex fields.
inline void check_and_canonicalize(KeyRecord& record, const std::filesystem::path& path,
                                   const ParamRegistry& registry) {
    if (record.scheme == Scheme::prng_ots) {
        const LcgParams& params = registry.get(record.paramset);
        std::uint64_t pub = 0;
        try {
            pub = parse_hex_u64(record.public_hex);
        } catch (const ParseError& e) {
            throw ParseError(path.string() + ": field \"P\": " + e.what());
        }
        if (pub > params.mask()) {
            throw ParseError(path.string() + ": field \"P\" exceeds 2^" +
                             std::to_string(params.k));
        }
        record.public_hex = format_value(pub, params);
        if (record.private_hex) {
            std::uint64_t priv = 0;
            try {
                priv = parse_hex_u64(*record.private_hex);
            } catch (const ParseError& e) {
                throw ParseError(path.string() + ": field \"p\": " + e.what());
            }
            if (priv > params.mask()) {
                throw ParseError(path.string() + ": field \"p\" exceeds 2^" +
                                 std::to_string(params.k));
            }
            record.private_hex = format_value(priv, params);
            const PrngOtsKeyPair recomputed = prng_keygen(priv, params, record.w);
            if (recomputed.P != pub) {
                throw ConsistencyError(path.string() + ": stored P = " + record.public_hex +
                                       " but recomputation from p gives " +
                                       format_value(recomputed.P, params));
            }
        }
        return;
    }
    const WotsParams params{record.w, record.paramset};
    ChainValue pub;
    try {
        pub = parse_hex_bytes(record.public_hex);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": field \"R\": " + e.what());
    }
    if (pub.size() != params.digest().length()) {
        throw ParseError(path.string() + ": field \"R\" must be " +
                         std::to_string(params.digest().length()) + " bytes");
    }
    record.public_hex = "0x" + format_hex(pub);
    if (record.private_hex) {
        ChainValue priv;
        try {
            priv = parse_hex_bytes(*record.private_hex);
        } catch (const ParseError& e) {
            throw ParseError(path.string() + ": field \"r\": " + e.what());
        }
        if (priv.size() != params.digest().length()) {
            throw ParseError(path.string() + ": field \"r\" must be " +
                             std::to_string(params.digest().length()) + " bytes");
        }
        record.private_hex = "0x" + format_hex(priv);
        const ChainValue recomputed = wots_keygen(priv, params);
        if (recomputed != pub) {
            throw ConsistencyError(path.string() + ": stored R = " + record.public_hex +
                                   " but recomputation from r gives 0x" +
                                   format_hex(recomputed));
        }
    }
}

} // namespace detail

/// Writes the line-oriented key file. Public visibility strips the private
/// material line; everything else is written in fixed field order with LF
/// endings.
inline void save_key(const KeyRecord& record, const std::filesystem::path& path,
                     Visibility visibility) {
    if (visibility == Visibility::private_key && !record.private_hex) {
        throw DomainError("cannot save a private key file without private material");
    }
    const bool prng = record.scheme == Scheme::prng_ots;
    std::ostringstream out;
    out << "scheme=" << to_string(record.scheme) << '\n';
    out << "paramset=" << record.paramset << '\n';
    out << "w=" << record.w << '\n';
    if (visibility == Visibility::private_key) {
        out << (prng ? "p=" : "r=") << *record.private_hex << '\n';
    }
    out << (prng ? "P=" : "R=") << record.public_hex << '\n';
    out << "used=" << (record.used ? "true" : "false") << '\n';
    out << "created=" << record.created << '\n';
    detail::atomic_write(path, out.str());
}

/// Parses a key file. Private files have their public value recomputed
/// from the private material; a mismatch is a consistency error, not a
/// parse error.
inline KeyRecord load_key(const std::filesystem::path& path,
                          const ParamRegistry& registry = builtin_registry()) {
    detail::ParsedLines parsed = detail::parse_field_lines(path);
    KeyRecord record;
    record.scheme = scheme_from_string(detail::take_field(parsed, "scheme", path));
    record.paramset = detail::take_field(parsed, "paramset", path);
    record.w = detail::parse_w_field(detail::take_field(parsed, "w", path), path);
    const bool prng = record.scheme == Scheme::prng_ots;
    const std::string priv_name = prng ? "p" : "r";
    if (parsed.fields.count(priv_name) != 0) {
        record.private_hex = detail::take_field(parsed, priv_name, path);
    }
    record.public_hex = detail::take_field(parsed, prng ? "P" : "R", path);
    record.used = detail::parse_bool_field(detail::take_field(parsed, "used", path), "used", path);
    if (parsed.fields.count("created") != 0) {
        record.created = detail::take_field(parsed, "created", path);
    }
    if (!parsed.fields.empty()) {
        const auto& [name, value] = *parsed.fields.begin();
        throw ParseError(path.string() + ":" + std::to_string(parsed.lines[name]) +
                         ": unknown field \"" + name + "\"");
    }
    detail::check_and_canonicalize(record, path, registry);
    return record;
}

/// Atomically flips used=false to used=true in a private key file. Under
/// concurrent contention exactly one caller succeeds; the rest see the
/// reuse refusal.
inline void mark_used(const std::filesystem::path& path,
                      const ParamRegistry& registry = builtin_registry()) {
    detail::FileLock lock(path);
    KeyRecord record = load_key(path, registry);
    if (!record.private_hex) {
        throw DomainError("mark_used needs a private key file: " + path.string());
    }
    if (record.used) {
        throw ReuseError("key " + path.string() +
                         " has already signed once; one-time keys sign exactly once");
    }
    record.used = true;
    save_key(record, path, Visibility::private_key);
}

inline void save_signature(const SignatureRecord& record, const std::filesystem::path& path) {
    std::ostringstream out;
    out << "scheme=" << to_string(record.scheme) << '\n';
    out << "paramset=" << record.paramset << '\n';
    out << "w=" << record.w << '\n';
    out << "t=" << record.t << '\n';
    out << (record.scheme == Scheme::prng_ots ? "S=" : "zeta=") << record.value_hex << '\n';
    detail::atomic_write(path, out.str());
}

inline SignatureRecord load_signature(const std::filesystem::path& path,
                                      const ParamRegistry& registry = builtin_registry()) {
    detail::ParsedLines parsed = detail::parse_field_lines(path);
    SignatureRecord record;
    record.scheme = scheme_from_string(detail::take_field(parsed, "scheme", path));
    record.paramset = detail::take_field(parsed, "paramset", path);
    record.w = detail::parse_w_field(detail::take_field(parsed, "w", path), path);
    const std::string t_text = detail::take_field(parsed, "t", path);
    try {
        record.t = parse_u64(t_text);
    } catch (const ParseError&) {
        throw ParseError(path.string() + ": field \"t\" is not a number: \"" + t_text + "\"");
    }
    const bool prng = record.scheme == Scheme::prng_ots;
    record.value_hex = detail::take_field(parsed, prng ? "S" : "zeta", path);
    if (!parsed.fields.empty()) {
        const auto& [name, value] = *parsed.fields.begin();
        throw ParseError(path.string() + ":" + std::to_string(parsed.lines[name]) +
                         ": unknown field \"" + name + "\"");
    }
    if (prng) {
        const LcgParams& params = registry.get(record.paramset);
        std::uint64_t value = 0;
        try {
            value = parse_hex_u64(record.value_hex);
        } catch (const ParseError& e) {
            throw ParseError(path.string() + ": field \"S\": " + e.what());
        }
        if (value > params.mask()) {
            throw ParseError(path.string() + ": field \"S\" exceeds 2^" +
                             std::to_string(params.k));
        }
        record.value_hex = format_value(value, params);
    } else {
        ChainValue value;
        try {
            value = parse_hex_bytes(record.value_hex);
        } catch (const ParseError& e) {
            throw ParseError(path.string() + ": field \"zeta\": " + e.what());
        }
        record.value_hex = "0x" + format_hex(value);
    }
    return record;
}

} // namespace otslab
