#pragma once

#include "otslab/errors.hpp"
#include "otslab/hashchain.hpp"
#include "otslab/lcg.hpp"
#include "otslab/prngots.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <compare>
#include <cstdint>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace otslab::bench {

enum class Operation { keygen, sign, verify };

inline const char* to_string(Operation op) {
    switch (op) {
        case Operation::keygen: return "keygen";
        case Operation::sign: return "sign";
        default: return "verify";
    }
}

/// One timed trial of one operation.
struct TimingRecord {
    std::string scheme;
    std::string paramset;
    Operation operation = Operation::keygen;
    ChainMode mode = ChainMode::sequential;
    unsigned trial = 0;
    std::int64_t duration_ns = 0;
};

/// Box-and-whisker statistics of one (scheme, paramset, operation, mode)
/// group. Quartiles use linear interpolation on the sorted durations.
struct TimingSummary {
    double min_ns = 0;
    double q1_ns = 0;
    double median_ns = 0;
    double q3_ns = 0;
    double max_ns = 0;
    double mean_ns = 0;
    std::size_t trials = 0;

    friend bool operator==(const TimingSummary&, const TimingSummary&) = default;
};

struct GroupKey {
    std::string scheme;
    std::string paramset;
    Operation operation = Operation::keygen;
    ChainMode mode = ChainMode::sequential;

    friend auto operator<=>(const GroupKey&, const GroupKey&) = default;
};

struct BenchConfig {
    std::vector<std::string> schemes = {"prng-ots"};
    std::vector<std::string> paramsets = {"vb", "gcc", "posix", "mmix"};
    unsigned w = 24;
    unsigned trials = 30;
    unsigned warmup = 3;
    std::vector<ChainMode> modes = {ChainMode::sequential};
    std::optional<std::uint64_t> rng_seed; // fixed trial inputs when set
};

namespace detail {

template <class Fn>
std::int64_t time_ns(Fn&& fn) {
    const auto begin = std::chrono::steady_clock::now();
    fn();
    const auto end = std::chrono::steady_clock::now();
    return std::chrono::duration_cast<std::chrono::nanoseconds>(end - begin).count();
}

inline void validate_combination(const std::string& scheme, const std::string& paramset,
                                 const ParamRegistry& registry) {
    if (scheme == "prng-ots") {
        try {
            registry.get(paramset);
        } catch (const LookupError&) {
            throw ConfigError("scheme prng-ots needs a generator parameter set, \"" +
                              paramset + "\" is not one");
        }
        return;
    }
    if (scheme == "wots") {
        try {
            Digest::get(paramset);
        } catch (const LookupError&) {
            throw ConfigError("scheme wots needs a digest name, \"" + paramset +
                              "\" is not one");
        }
        return;
    }
    throw ConfigError("unknown scheme \"" + scheme + "\"");
}

} // namespace detail

/// Runs the timing loop: per (scheme, paramset, mode), `warmup` untimed
/// iterations followed by `trials` timed ones, each with a fresh random
/// key and a fresh random t. Strictly single-threaded, monotonic clock.
/// The hash baseline has no jump path, so wots groups run once, always
/// sequential, whatever modes are requested.
inline std::vector<TimingRecord> run_bench(const BenchConfig& config,
                                           const ParamRegistry& registry = builtin_registry()) {
    if (config.trials < 1) {
        throw ConfigError("trials must be >= 1");
    }
    if (config.w < 1 || config.w > 32) {
        throw ConfigError("w must be in [1, 32], got " + std::to_string(config.w));
    }
    for (const auto& scheme : config.schemes) {
        for (const auto& paramset : config.paramsets) {
            detail::validate_combination(scheme, paramset, registry);
        }
    }
    if (config.modes.empty()) {
        throw ConfigError("at least one chain mode is required");
    }

    const std::uint64_t base_seed =
        config.rng_seed ? *config.rng_seed : std::random_device{}();
    const std::uint64_t t_mask = (std::uint64_t{1} << config.w) - 1;
    std::vector<TimingRecord> records;

    for (const auto& scheme : config.schemes) {
        for (const auto& paramset : config.paramsets) {
            std::vector<ChainMode> modes = config.modes;
            if (scheme == "wots") {
                modes = {ChainMode::sequential};
            }
            for (ChainMode mode : modes) {
                // Every group replays the same trial inputs (same t sequence),
                // so cross-set comparisons time the generator, not the draw.
                std::mt19937_64 rng(base_seed);
                for (unsigned i = 0; i < config.warmup + config.trials; ++i) {
                    const bool timed = i >= config.warmup;
                    const unsigned trial = timed ? i - config.warmup : 0;
                    const std::uint64_t t = rng() & t_mask;
                    std::int64_t keygen_ns = 0;
                    std::int64_t sign_ns = 0;
                    std::int64_t verify_ns = 0;

                    if (scheme == "prng-ots") {
                        const LcgParams& params = registry.get(paramset);
                        const std::uint64_t p = rng() & params.mask();
                        PrngOtsKeyPair pair{0, 0, params, config.w, false};
                        PrngOtsSignature sig;
                        bool accepted = false;
                        keygen_ns = detail::time_ns(
                            [&] { pair = prng_keygen(p, params, config.w, mode); });
                        sign_ns = detail::time_ns(
                            [&] { sig = prng_sign(p, t, params, config.w, mode); });
                        verify_ns = detail::time_ns([&] {
                            accepted = prng_verify(pair.P, sig.S, t, params, config.w, mode);
                        });
                        if (!accepted) {
                            throw Error("benchmark self-check failed: " + scheme + "/" +
                                        paramset + " rejected its own signature");
                        }
                    } else {
                        const WotsParams params{config.w, paramset};
                        ChainValue r(params.digest().length());
                        for (auto& byte : r) {
                            byte = static_cast<std::uint8_t>(rng());
                        }
                        ChainValue pub;
                        ChainValue sig;
                        bool accepted = false;
                        keygen_ns = detail::time_ns([&] { pub = wots_keygen(r, params); });
                        sign_ns = detail::time_ns([&] { sig = wots_sign(r, t, params); });
                        verify_ns = detail::time_ns(
                            [&] { accepted = wots_verify(pub, sig, t, params); });
                        if (!accepted) {
                            throw Error("benchmark self-check failed: " + scheme + "/" +
                                        paramset + " rejected its own signature");
                        }
                    }

                    if (timed) {
                        records.push_back({scheme, paramset, Operation::keygen, mode, trial,
                                           keygen_ns});
                        records.push_back({scheme, paramset, Operation::sign, mode, trial,
                                           sign_ns});
                        records.push_back({scheme, paramset, Operation::verify, mode, trial,
                                           verify_ns});
                    }
                }
            }
        }
    }
    return records;
}

/// Quantile with linear interpolation between adjacent order statistics.
inline double quantile_sorted(const std::vector<std::int64_t>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= sorted.size()) {
        return static_cast<double>(sorted.back());
    }
    return static_cast<double>(sorted[lo]) +
           frac * static_cast<double>(sorted[lo + 1] - sorted[lo]);
}

inline std::map<GroupKey, TimingSummary> summarize(const std::vector<TimingRecord>& records) {
    std::map<GroupKey, std::vector<std::int64_t>> groups;
    for (const auto& record : records) {
        groups[GroupKey{record.scheme, record.paramset, record.operation, record.mode}]
            .push_back(record.duration_ns);
    }
    std::map<GroupKey, TimingSummary> out;
    for (auto& [key, durations] : groups) {
        std::sort(durations.begin(), durations.end());
        std::int64_t sum = 0;
        for (std::int64_t d : durations) {
            sum += d;
        }
        TimingSummary summary;
        summary.min_ns = static_cast<double>(durations.front());
        summary.q1_ns = quantile_sorted(durations, 0.25);
        summary.median_ns = quantile_sorted(durations, 0.5);
        summary.q3_ns = quantile_sorted(durations, 0.75);
        summary.max_ns = static_cast<double>(durations.back());
        summary.mean_ns = static_cast<double>(sum) / static_cast<double>(durations.size());
        summary.trials = durations.size();
        out.emplace(key, summary);
    }
    return out;
}

namespace detail {

/// Shortest decimal form that parses back to the identical double.
inline std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

} // namespace detail

inline void write_raw_csv(std::ostream& out, const std::vector<TimingRecord>& records) {
    out << "scheme,paramset,operation,mode,trial,duration_ns\n";
    for (const auto& record : records) {
        out << record.scheme << ',' << record.paramset << ',' << to_string(record.operation)
            << ',' << to_string(record.mode) << ',' << record.trial << ','
            << record.duration_ns << '\n';
    }
}

inline void write_summary_csv(std::ostream& out,
                              const std::map<GroupKey, TimingSummary>& summaries) {
    out << "scheme,paramset,operation,mode,min_ns,q1_ns,median_ns,q3_ns,max_ns,mean_ns,"
           "trials\n";
    for (const auto& [key, s] : summaries) {
        out << key.scheme << ',' << key.paramset << ',' << to_string(key.operation) << ','
            << to_string(key.mode) << ',' << detail::format_double(s.min_ns) << ','
            << detail::format_double(s.q1_ns) << ',' << detail::format_double(s.median_ns)
            << ',' << detail::format_double(s.q3_ns) << ',' << detail::format_double(s.max_ns)
            << ',' << detail::format_double(s.mean_ns) << ',' << s.trials << '\n';
    }
}

/// Fixed-width table in milliseconds, medians and means side by side.
inline std::string human_summary(const std::map<GroupKey, TimingSummary>& summaries) {
    std::ostringstream out;
    out << std::left << std::setw(10) << "scheme" << std::setw(10) << "paramset"
        << std::setw(8) << "op" << std::setw(12) << "mode" << std::right << std::setw(8)
        << "trials" << std::setw(12) << "min_ms" << std::setw(12) << "q1_ms" << std::setw(12)
        << "median_ms" << std::setw(12) << "q3_ms" << std::setw(12) << "max_ms"
        << std::setw(12) << "mean_ms" << '\n';
    out << std::fixed << std::setprecision(3);
    for (const auto& [key, s] : summaries) {
        out << std::left << std::setw(10) << key.scheme << std::setw(10) << key.paramset
            << std::setw(8) << to_string(key.operation) << std::setw(12) << to_string(key.mode)
            << std::right << std::setw(8) << s.trials << std::setw(12) << s.min_ns / 1e6
            << std::setw(12) << s.q1_ns / 1e6 << std::setw(12) << s.median_ns / 1e6
            << std::setw(12) << s.q3_ns / 1e6 << std::setw(12) << s.max_ns / 1e6
            << std::setw(12) << s.mean_ns / 1e6 << '\n';
    }
    return out.str();
}

} // namespace otslab::bench
