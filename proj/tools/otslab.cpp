// Command-line front end: keygen / sign / verify / rand / bench / audit.
// Exit codes: 0 success or accept, 1 verify reject, 2 usage or malformed
// input, 3 one-time key reuse refused.

#include "otslab/otslab.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace otslab;

namespace {

constexpr int kExitAccept = 0;
constexpr int kExitReject = 1;
constexpr int kExitUsage = 2;
constexpr int kExitReuse = 3;

std::uint64_t random_bits(unsigned bits) {
    std::random_device rd;
    const std::uint64_t value =
        (static_cast<std::uint64_t>(rd()) << 32) ^ static_cast<std::uint64_t>(rd());
    return bits == 64 ? value : value & ((std::uint64_t{1} << bits) - 1);
}

ChainValue random_bytes(std::size_t count) {
    std::random_device rd;
    ChainValue out(count);
    for (auto& b : out) {
        b = static_cast<std::uint8_t>(rd());
    }
    return out;
}

std::vector<std::uint8_t> read_file_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open message file " + path.string());
    }
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                     std::istreambuf_iterator<char>());
}

void warn_t_zero(std::uint64_t t) {
    if (t == 0) {
        std::cerr << "WARNING: t = 0 places the signature at the chain start; "
                     "the signature value IS the private key.\n";
    }
}

struct KeygenOptions {
    std::string scheme;
    std::string params = "posix";
    std::string hash = "sha224";
    unsigned w = 0;
    std::string seed_hex;
    std::string out;
};

int run_keygen(const KeygenOptions& opt, bool verbose) {
    if (opt.scheme == "prng-ots") {
        const LcgParams& params = builtin_registry().get(opt.params);
        const std::uint64_t p =
            opt.seed_hex.empty() ? random_bits(params.k) : parse_hex_u64(opt.seed_hex);
        const PrngOtsKeyPair pair = prng_keygen(p, params, opt.w);
        if (verbose) {
            std::cout << "f_0=" << format_value(seed_init(p, params).value, params) << '\n';
        }
        std::cout << "P=" << format_value(pair.P, params) << '\n';
        if (!opt.out.empty()) {
            const KeyRecord record = to_record(pair);
            save_key(record, opt.out, Visibility::private_key);
            save_key(record, opt.out + ".pub", Visibility::public_key);
            std::cerr << "private key: " << opt.out << "\npublic key: " << opt.out
                      << ".pub\n";
        }
        return kExitAccept;
    }
    const WotsParams params{opt.w, opt.hash};
    const ChainValue r = opt.seed_hex.empty() ? random_bytes(params.digest().length())
                                              : parse_hex_bytes(opt.seed_hex);
    const ChainValue R = wots_keygen(r, params);
    std::cout << "R=0x" << format_hex(R) << '\n';
    if (!opt.out.empty()) {
        const KeyRecord record = to_record(r, R, params);
        save_key(record, opt.out, Visibility::private_key);
        save_key(record, opt.out + ".pub", Visibility::public_key);
        std::cerr << "private key: " << opt.out << "\npublic key: " << opt.out << ".pub\n";
    }
    return kExitAccept;
}

struct SignOptions {
    std::string key;
    std::optional<std::uint64_t> t;
    std::string message_file;
    std::string hash = "sha224"; // normalization digest for prng-ots
    std::string out;
};

int run_sign(const SignOptions& opt, bool verbose) {
    const KeyRecord record = load_key(opt.key);
    if (!record.private_hex) {
        throw DomainError("--key must name a private key file, " + opt.key +
                          " holds only public material");
    }

    std::uint64_t t = 0;
    if (opt.t) {
        t = *opt.t;
    } else {
        const auto message = read_file_bytes(opt.message_file);
        const Digest& digest = record.scheme == Scheme::wots
                                   ? Digest::get(record.paramset)
                                   : Digest::get(opt.hash);
        t = normalize_message(message, record.w, digest);
    }

    SignatureRecord sig{record.scheme, record.paramset, record.w, t, ""};
    // validate t before consuming the one-time key
    if (t > (std::uint64_t{1} << record.w) - 1) {
        throw DomainError("t = " + std::to_string(t) + " outside [0, 2^w - 1] for w = " +
                          std::to_string(record.w));
    }
    if (record.scheme == Scheme::prng_ots) {
        const LcgParams& params = builtin_registry().get(record.paramset);
        const std::uint64_t p = parse_hex_u64(*record.private_hex);
        mark_used(opt.key);
        const PrngOtsSignature s = prng_sign(p, t, params, record.w);
        sig.value_hex = format_value(s.S, params);
        if (verbose) {
            std::cout << "f_t=" << format_value(seed_init(s.S, params).value, params)
                      << '\n';
        }
        std::cout << "t=" << t << "\nS=" << sig.value_hex << '\n';
    } else {
        const WotsParams params{record.w, record.paramset};
        const ChainValue r = parse_hex_bytes(*record.private_hex);
        mark_used(opt.key);
        const ChainValue zeta = wots_sign(r, t, params);
        sig.value_hex = "0x" + format_hex(zeta);
        std::cout << "t=" << t << "\nzeta=" << sig.value_hex << '\n';
    }
    warn_t_zero(t);
    if (!opt.out.empty()) {
        save_signature(sig, opt.out);
        std::cerr << "signature: " << opt.out << '\n';
    }
    return kExitAccept;
}

struct VerifyOptions {
    std::string key;
    std::string sig_file;
    std::string sig_hex;
    std::optional<std::uint64_t> t;
    std::string message_file;
    std::string hash = "sha224";
};

int run_verify(const VerifyOptions& opt, bool verbose) {
    const KeyRecord record = load_key(opt.key);

    std::string value_hex = opt.sig_hex;
    std::optional<std::uint64_t> t = opt.t;
    if (!opt.sig_file.empty()) {
        const SignatureRecord sig = load_signature(opt.sig_file);
        if (sig.scheme != record.scheme || sig.paramset != record.paramset ||
            sig.w != record.w) {
            throw DomainError("signature file " + opt.sig_file +
                              " does not match the key's scheme/paramset/w");
        }
        value_hex = sig.value_hex;
        if (!t && opt.message_file.empty()) {
            t = sig.t;
        }
    }
    if (!t) {
        if (opt.message_file.empty()) {
            throw DomainError("need --t, --message-file, or a signature file carrying t");
        }
        const auto message = read_file_bytes(opt.message_file);
        const Digest& digest = record.scheme == Scheme::wots
                                   ? Digest::get(record.paramset)
                                   : Digest::get(opt.hash);
        t = normalize_message(message, record.w, digest);
    }

    bool accepted = false;
    if (record.scheme == Scheme::prng_ots) {
        const LcgParams& params = builtin_registry().get(record.paramset);
        const std::uint64_t P = parse_hex_u64(record.public_hex);
        const std::uint64_t S = parse_hex_u64(value_hex);
        if (S > params.mask()) {
            throw DomainError("signature value exceeds 2^" + std::to_string(params.k));
        }
        const std::uint64_t V = prng_verification_value(S, *t, params, record.w);
        if (verbose) {
            std::cout << "f_0(S)=" << format_value(seed_init(S, params).value, params)
                      << "\nV=" << format_value(V, params) << '\n';
        }
        accepted = V == P;
    } else {
        const WotsParams params{record.w, record.paramset};
        const ChainValue R = parse_hex_bytes(record.public_hex);
        const ChainValue zeta = parse_hex_bytes(value_hex);
        const ChainValue xi = wots_verification_value(zeta, *t, params);
        if (verbose) {
            std::cout << "xi=0x" << format_hex(xi) << '\n';
        }
        accepted = xi == R;
    }
    std::cout << (accepted ? "accept" : "reject") << '\n';
    return accepted ? kExitAccept : kExitReject;
}

struct RandOptions {
    std::string params;
    std::string seed;
    std::uint64_t count = 0;
};

int run_rand(const RandOptions& opt) {
    const LcgParams& params = builtin_registry().get(opt.params);
    LcgState state = seed_init(parse_u64(opt.seed), params);
    for (std::uint64_t i = 0; i < opt.count; ++i) {
        state = step(state);
        std::cout << format_value(state.value, params) << '\n';
    }
    return kExitAccept;
}

struct BenchOptions {
    std::vector<std::string> schemes = {"prng-ots"};
    std::vector<std::string> paramsets = {"vb", "gcc", "posix", "mmix"};
    unsigned w = 24;
    unsigned trials = 30;
    unsigned warmup = 3;
    std::string mode = "sequential";
    std::string csv;
    std::string raw_csv;
    std::optional<std::uint64_t> rng_seed;
};

int run_bench_cmd(const BenchOptions& opt, const std::string& format) {
    bench::BenchConfig config;
    config.schemes = opt.schemes;
    config.paramsets = opt.paramsets;
    config.w = opt.w;
    config.trials = opt.trials;
    config.warmup = opt.warmup;
    if (opt.mode == "sequential") {
        config.modes = {ChainMode::sequential};
    } else if (opt.mode == "jump") {
        config.modes = {ChainMode::jump};
    } else {
        config.modes = {ChainMode::sequential, ChainMode::jump};
    }
    config.rng_seed = opt.rng_seed;

    const auto records = bench::run_bench(config);
    if (records.empty()) {
        std::cerr << "warning: no timing records produced\n";
        return kExitAccept;
    }
    const auto summaries = bench::summarize(records);

    if (!opt.raw_csv.empty()) {
        std::ofstream out(opt.raw_csv, std::ios::trunc);
        if (!out) {
            throw IoError("cannot write " + opt.raw_csv);
        }
        bench::write_raw_csv(out, records);
    }
    if (!opt.csv.empty()) {
        std::ofstream out(opt.csv, std::ios::trunc);
        if (!out) {
            throw IoError("cannot write " + opt.csv);
        }
        bench::write_summary_csv(out, summaries);
    }
    if (format == "csv") {
        bench::write_summary_csv(std::cout, summaries);
    } else {
        std::cout << bench::human_summary(summaries);
    }
    return kExitAccept;
}

void print_forge_banner() {
    std::cerr << "WARNING: forward-forgery demonstration. A signature for position t\n"
                 "lets anyone derive a valid signature for every t' > t without the\n"
                 "private key. This is the documented one-time-use limitation.\n";
}

void print_recover_banner() {
    std::cerr << "WARNING: seed-recovery demonstration. With an odd multiplier the\n"
                 "generator step is invertible, so one signature (or the public key\n"
                 "alone) walks back to the private seed.\n";
}

struct ForgeOptions {
    std::string sig;
    std::uint64_t t_target = 0;
    std::string key;
    std::string out;
};

int run_forge(const ForgeOptions& opt) {
    const SignatureRecord sig = load_signature(opt.sig);
    print_forge_banner();
    SignatureRecord forged = sig;
    forged.t = opt.t_target;
    if (sig.scheme == Scheme::prng_ots) {
        const LcgParams& params = builtin_registry().get(sig.paramset);
        const std::uint64_t forged_value = forge_forward_prng(
            parse_hex_u64(sig.value_hex), sig.t, opt.t_target, params, sig.w);
        forged.value_hex = format_value(forged_value, params);
        std::cout << "t=" << forged.t << "\nS=" << forged.value_hex << '\n';
    } else {
        const WotsParams params{sig.w, sig.paramset};
        const ChainValue forged_value = forge_forward_wots(
            parse_hex_bytes(sig.value_hex), sig.t, opt.t_target, params);
        forged.value_hex = "0x" + format_hex(forged_value);
        std::cout << "t=" << forged.t << "\nzeta=" << forged.value_hex << '\n';
    }
    if (!opt.key.empty()) {
        const KeyRecord record = load_key(opt.key);
        bool ok = false;
        if (record.scheme == Scheme::prng_ots) {
            const LcgParams& params = builtin_registry().get(record.paramset);
            ok = prng_verify(parse_hex_u64(record.public_hex),
                             parse_hex_u64(forged.value_hex), forged.t, params, record.w);
        } else {
            const WotsParams params{record.w, record.paramset};
            ok = wots_verify(parse_hex_bytes(record.public_hex),
                             parse_hex_bytes(forged.value_hex), forged.t, params);
        }
        std::cout << "forged signature verifies: " << (ok ? "true" : "false") << '\n';
    }
    if (!opt.out.empty()) {
        save_signature(forged, opt.out);
        std::cerr << "forged signature: " << opt.out << '\n';
    }
    return kExitAccept;
}

struct RecoverOptions {
    std::string sig;
    std::string sig_hex;
    std::string params;
    std::optional<std::uint64_t> t;
    bool from_public = false;
    std::string key;
    std::string pub_hex;
    unsigned w = 0;
};

int run_recover(const RecoverOptions& opt) {
    print_recover_banner();
    if (opt.from_public) {
        std::uint64_t P = 0;
        const LcgParams* params = nullptr;
        unsigned w = opt.w;
        if (!opt.key.empty()) {
            const KeyRecord record = load_key(opt.key);
            if (record.scheme != Scheme::prng_ots) {
                throw DomainError("seed recovery applies to prng-ots keys");
            }
            params = &builtin_registry().get(record.paramset);
            P = parse_hex_u64(record.public_hex);
            w = record.w;
        } else if (!opt.pub_hex.empty() && !opt.params.empty() && opt.w != 0) {
            params = &builtin_registry().get(opt.params);
            P = parse_hex_u64(opt.pub_hex);
        } else {
            throw DomainError("--from-public needs --key, or --pub-hex with --params and --w");
        }
        const std::uint64_t p = recover_seed_from_public(P, *params, w);
        std::cout << "p=" << format_value(p, *params) << '\n';
        return kExitAccept;
    }

    std::uint64_t S = 0;
    std::uint64_t t = 0;
    const LcgParams* params = nullptr;
    if (!opt.sig.empty()) {
        const SignatureRecord sig = load_signature(opt.sig);
        if (sig.scheme != Scheme::prng_ots) {
            throw DomainError("seed recovery applies to prng-ots signatures");
        }
        params = &builtin_registry().get(sig.paramset);
        S = parse_hex_u64(sig.value_hex);
        t = opt.t ? *opt.t : sig.t;
    } else if (!opt.sig_hex.empty() && !opt.params.empty() && opt.t) {
        params = &builtin_registry().get(opt.params);
        S = parse_hex_u64(opt.sig_hex);
        t = *opt.t;
    } else {
        throw DomainError("need --sig, or --sig-hex with --params and --t");
    }
    const std::uint64_t p = recover_seed(S, t, *params);
    std::cout << "p=" << format_value(p, *params) << '\n';
    return kExitAccept;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"one-time signature laboratory: generator chains, hash chains, and the\n"
                 "audit/benchmark tooling around them"};
    app.require_subcommand(1);
    bool verbose = false;
    std::string format = "text";
    app.add_flag("--verbose", verbose, "print intermediate chain values");
    app.add_option("--format", format, "output format for tabular commands")
        ->check(CLI::IsMember({"text", "csv"}));

    int rc = kExitAccept;

    KeygenOptions keygen_opt;
    auto* keygen = app.add_subcommand("keygen", "generate a one-time key pair");
    keygen->add_option("--scheme", keygen_opt.scheme, "prng-ots or wots")
        ->required()
        ->check(CLI::IsMember({"prng-ots", "wots"}));
    keygen->add_option("--params", keygen_opt.params,
                       "generator parameter set (prng-ots), default posix");
    keygen->add_option("--hash", keygen_opt.hash, "digest name (wots), default sha224");
    keygen->add_option("--w", keygen_opt.w, "chain-depth exponent in [1, 32]")->required();
    keygen->add_option("--seed-hex", keygen_opt.seed_hex,
                       "private material as hex; random when omitted");
    keygen->add_option("--out", keygen_opt.out, "write <out> and <out>.pub key files");
    keygen->callback([&] { rc = run_keygen(keygen_opt, verbose); });

    SignOptions sign_opt;
    auto* sign = app.add_subcommand("sign", "sign once with a private key file");
    sign->add_option("--key", sign_opt.key, "private key file")->required();
    auto* sign_t = sign->add_option("--t", sign_opt.t, "normalized message (decimal)");
    auto* sign_msg =
        sign->add_option("--message-file", sign_opt.message_file, "message to normalize");
    sign_t->excludes(sign_msg);
    sign->add_option("--hash", sign_opt.hash,
                     "normalization digest for prng-ots, default sha224");
    sign->add_option("--out", sign_opt.out, "write a signature file");
    sign->callback([&] {
        if (!sign_opt.t && sign_opt.message_file.empty()) {
            throw CLI::RequiredError("--t or --message-file");
        }
        rc = run_sign(sign_opt, verbose);
    });

    VerifyOptions verify_opt;
    auto* verify = app.add_subcommand("verify", "verify a signature against a key file");
    verify->add_option("--key", verify_opt.key, "key file (public or private)")->required();
    auto* verify_sig = verify->add_option("--sig", verify_opt.sig_file, "signature file");
    auto* verify_sig_hex =
        verify->add_option("--sig-hex", verify_opt.sig_hex, "signature value as hex");
    verify_sig->excludes(verify_sig_hex);
    auto* verify_t = verify->add_option("--t", verify_opt.t, "normalized message (decimal)");
    auto* verify_msg = verify->add_option("--message-file", verify_opt.message_file,
                                          "message to normalize");
    verify_t->excludes(verify_msg);
    verify->add_option("--hash", verify_opt.hash,
                       "normalization digest for prng-ots, default sha224");
    verify->callback([&] {
        if (verify_opt.sig_file.empty() && verify_opt.sig_hex.empty()) {
            throw CLI::RequiredError("--sig or --sig-hex");
        }
        rc = run_verify(verify_opt, verbose);
    });

    RandOptions rand_opt;
    auto* rand_cmd = app.add_subcommand("rand", "print generator values f_1..f_count");
    rand_cmd->add_option("--params", rand_opt.params, "parameter set name")->required();
    rand_cmd->add_option("--seed", rand_opt.seed, "seed (decimal or 0x hex)")->required();
    rand_cmd->add_option("--count", rand_opt.count, "how many values")->required();
    rand_cmd->callback([&] { rc = run_rand(rand_opt); });

    BenchOptions bench_opt;
    auto* bench_cmd = app.add_subcommand("bench", "time keygen/sign/verify");
    bench_cmd->add_option("--schemes", bench_opt.schemes, "schemes to bench");
    bench_cmd->add_option("--params", bench_opt.paramsets, "paramsets to bench");
    bench_cmd->add_option("--w", bench_opt.w, "chain-depth exponent");
    bench_cmd->add_option("--trials", bench_opt.trials, "timed trials per group");
    bench_cmd->add_option("--warmup", bench_opt.warmup, "untimed warmup iterations");
    bench_cmd->add_option("--mode", bench_opt.mode, "sequential, jump, or both")
        ->check(CLI::IsMember({"sequential", "jump", "both"}));
    bench_cmd->add_option("--csv", bench_opt.csv, "write quartile summaries as CSV");
    bench_cmd->add_option("--raw-csv", bench_opt.raw_csv, "write raw trial records as CSV");
    bench_cmd->add_option("--rng-seed", bench_opt.rng_seed, "fix the trial inputs");
    bench_cmd->callback([&] { rc = run_bench_cmd(bench_opt, format); });

    auto* audit_cmd =
        app.add_subcommand("audit", "mechanized demonstrations of documented limitations");
    audit_cmd->require_subcommand(1);

    ForgeOptions forge_opt;
    auto* forge = audit_cmd->add_subcommand(
        "forge-forward", "derive a signature for a later t from an existing one");
    forge->add_option("--sig", forge_opt.sig, "existing signature file")->required();
    forge->add_option("--t-target", forge_opt.t_target, "forgery position, must exceed t")
        ->required();
    forge->add_option("--key", forge_opt.key, "key file to confirm the forgery verifies");
    forge->add_option("--out", forge_opt.out, "write the forged signature file");
    forge->callback([&] { rc = run_forge(forge_opt); });

    RecoverOptions recover_opt;
    auto* recover = audit_cmd->add_subcommand(
        "recover-seed", "walk a prng-ots signature (or public key) back to the seed");
    recover->add_option("--sig", recover_opt.sig, "signature file");
    recover->add_option("--sig-hex", recover_opt.sig_hex, "signature value as hex");
    recover->add_option("--params", recover_opt.params, "parameter set for hex inputs");
    recover->add_option("--t", recover_opt.t, "position of the signature");
    recover->add_flag("--from-public", recover_opt.from_public,
                      "invert the whole chain from the public value");
    recover->add_option("--key", recover_opt.key, "key file (with --from-public)");
    recover->add_option("--pub-hex", recover_opt.pub_hex, "public value as hex");
    recover->add_option("--w", recover_opt.w, "chain-depth exponent for --pub-hex");
    recover->callback([&] { rc = run_recover(recover_opt); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    } catch (const ReuseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitReuse;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return rc;
}
