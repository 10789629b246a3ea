// kanon: k-anonymous private search over partially homomorphic encryption.
//
// Subcommands:
//   keygen    generate a key pair for one backend
//   genindex  write a deterministic synthetic inverted index
//   serve     serve an index file over the wire protocol
//   query     privately fetch one term's posting from a server
//   bench     measure keygen / encryption / execution / communication
//
// Exit codes: 0 success, 1 usage error, 2 protocol or crypto error.

#include <csignal>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "kanon/bench.hpp"
#include "kanon/client.hpp"
#include "kanon/errors.hpp"
#include "kanon/index_store.hpp"
#include "kanon/keyfile.hpp"
#include "kanon/server.hpp"

namespace {

using namespace kanon;

std::unique_ptr<RandomSource> make_rng(std::optional<std::uint64_t> seed) {
    if (seed) return std::make_unique<SeededRng>(*seed);
    return std::make_unique<SystemRng>();
}

void warn_if_clear(BackendId backend, const char* role) {
    if (backend == BackendId::clear)
        std::cerr << "WARNING: the clear backend provides NO privacy; every selector bit\n"
                  << "crosses the wire in plaintext. Use it only for testing and as the\n"
                  << "protocol-overhead baseline (" << role << ").\n";
}

int cmd_keygen(const std::string& backend_name_arg, unsigned modulus_bits,
               const std::string& out_dir, std::optional<std::uint64_t> seed) {
    const BackendId backend = backend_from_name(backend_name_arg);
    auto rng = make_rng(seed);
    const KeyPair keys = backend_for(backend).keygen(modulus_bits, *rng);
    keyfile::save_keypair(keys, out_dir);
    std::cout << "wrote " << out_dir << "/" << backend_name_arg << ".pub.json and ."
              << "key.json (" << modulus_bits << "-bit modulus)\n";
    return 0;
}

int cmd_genindex(std::size_t terms, std::size_t p, std::uint64_t seed, const std::string& out) {
    const index::InvertedIndex idx = index::gen_synthetic_index(terms, p, seed);
    index::save_index(idx, out);
    std::cout << "wrote " << out << ": " << idx.size() << " terms, p=" << idx.p() << "\n";
    return 0;
}

int cmd_serve(const std::string& index_path, const std::string& backend_name_arg,
              const std::string& keys_dir, const std::string& host, std::uint16_t port,
              std::size_t k) {
    const BackendId backend = backend_from_name(backend_name_arg);
    warn_if_clear(backend, "serving");
    srv::ServerConfig config;
    config.backend = backend;
    config.k = k;
    if (backend == BackendId::clear) {
        config.modulus_bits = 512;  // placeholder; the clear backend has no modulus
        config.public_key = ClearPublicKey{};
    } else {
        auto [pk, modulus_bits] = keyfile::load_public(keys_dir, backend);
        config.public_key = std::move(pk);
        config.modulus_bits = modulus_bits;
    }
    srv::Server server(config, index::load_index(index_path));
    std::signal(SIGPIPE, SIG_IGN);
    std::cout << "serving " << index_path << " with backend " << backend_name_arg << " (k=" << k
              << ", modulus " << config.modulus_bits << " bits) on " << host << ":" << port
              << "\n";
    server.run(host, port);
    return 0;
}

int cmd_query(const std::string& host, std::uint16_t port, const std::string& term,
              const std::string& backend_name_arg, const std::string& keys_dir,
              std::optional<std::uint64_t> seed) {
    const BackendId backend = backend_from_name(backend_name_arg);
    KeyPair keys;
    if (backend == BackendId::clear) {
        keys.backend = backend;
        keys.modulus_bits = 512;
        keys.public_key = ClearPublicKey{};
        keys.secret_key = ClearSecretKey{};
    } else {
        if (keys_dir.empty())
            throw Error("--keys DIR is required for encrypted backends (decryption needs the "
                        "secret key)");
        keys = keyfile::load_keypair(keys_dir, backend);
    }
    cli::Client client = cli::Client::connect(host, port, backend, keys.modulus_bits);
    if (backend != BackendId::clear) {
        // The manifest's public key must be the pair we hold the trapdoor for.
        const auto manifest_pk =
            backend_for(backend).public_elements(client.public_key());
        const auto local_pk = backend_for(backend).public_elements(keys.public_key);
        if (manifest_pk != local_pk)
            throw ProtocolError("server's public key does not match the local key pair");
    }
    auto rng = make_rng(seed);
    const BitVec posting = client.fetch_term(term, keys.secret_key, *rng);
    std::cout << posting.to_hex() << "\n";
    return 0;
}

int cmd_bench(const bench::BenchConfig& config, const std::string& format,
              const std::string& out_path) {
    const std::vector<bench::BenchRecord> records = bench::run_all(config);
    const std::string text =
        format == "markdown" ? bench::emit_markdown(records) : bench::emit_csv(records);
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        std::ofstream out(out_path, std::ios::trunc);
        if (!out) throw Error("cannot write " + out_path);
        out << text;
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

std::vector<BackendId> parse_backends(const std::string& csv) {
    std::vector<BackendId> out;
    std::size_t start = 0;
    while (start <= csv.size()) {
        const std::size_t comma = csv.find(',', start);
        const std::string name = csv.substr(start, comma - start);
        if (!name.empty()) out.push_back(backend_from_name(name));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw Error("no backends given");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"k-anonymous private search over partially homomorphic encryption"};
    app.require_subcommand(1);

    // keygen
    auto* keygen = app.add_subcommand("keygen", "generate a key pair");
    std::string kg_backend = "gm", kg_out = "keys";
    unsigned kg_bits = 2048;
    std::optional<std::uint64_t> kg_seed;
    keygen->add_option("--backend", kg_backend, "clear|gm|paillier")->capture_default_str();
    keygen->add_option("--modulus-bits", kg_bits, "modulus size in bits")->capture_default_str();
    keygen->add_option("--out", kg_out, "output directory")->capture_default_str();
    keygen->add_option("--seed", kg_seed, "deterministic keys (testing only)");

    // genindex
    auto* genindex = app.add_subcommand("genindex", "write a synthetic inverted index");
    std::size_t gi_terms = 1000, gi_p = 720;
    std::uint64_t gi_seed = 1;
    std::string gi_out = "index.kanon";
    genindex->add_option("--terms", gi_terms, "number of terms")->capture_default_str();
    genindex->add_option("--p", gi_p, "posting length in bits")->capture_default_str();
    genindex->add_option("--seed", gi_seed, "generator seed")->capture_default_str();
    genindex->add_option("--out", gi_out, "output file")->capture_default_str();

    // serve
    auto* serve = app.add_subcommand("serve", "serve an index over the wire protocol");
    std::string sv_index, sv_backend = "gm", sv_keys = "keys", sv_host = "0.0.0.0";
    std::uint16_t sv_port = 7450;
    std::size_t sv_k = 10;
    serve->add_option("--index", sv_index, "index file")->required();
    serve->add_option("--backend", sv_backend, "clear|gm|paillier")->capture_default_str();
    serve->add_option("--keys", sv_keys, "key directory (public half is read)")
        ->capture_default_str();
    serve->add_option("--host", sv_host, "listen address")->capture_default_str();
    serve->add_option("--port", sv_port, "listen port")->capture_default_str();
    serve->add_option("--k", sv_k, "anonymity set size (block size)")->capture_default_str();

    // query
    auto* query = app.add_subcommand("query", "privately fetch one term's posting");
    std::string q_host = "127.0.0.1", q_term, q_backend = "gm", q_keys;
    std::uint16_t q_port = 7450;
    std::optional<std::uint64_t> q_seed;
    query->add_option("--host", q_host, "server host")->capture_default_str();
    query->add_option("--port", q_port, "server port")->capture_default_str();
    query->add_option("--term", q_term, "term to fetch")->required();
    query->add_option("--backend", q_backend, "clear|gm|paillier")->capture_default_str();
    query->add_option("--keys", q_keys, "key directory holding <backend>.key.json");
    query->add_option("--seed", q_seed, "deterministic query randomness (testing only)");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "run the measurement harness");
    std::string b_backends = "clear,gm,paillier", b_k = "", b_profile = "", b_format = "csv",
                b_out;
    std::size_t b_p = 0;
    unsigned b_bits = 0, b_trials = 0;
    std::uint64_t b_seed = 1;
    bench_cmd->add_option("--backends", b_backends, "comma list of backends")
        ->capture_default_str();
    bench_cmd->add_option("--k", b_k, "comma list of k values (default per profile)");
    bench_cmd->add_option("--p", b_p, "posting length in bits (default 720)");
    bench_cmd->add_option("--modulus-bits", b_bits, "modulus size (default per profile)");
    bench_cmd->add_option("--trials", b_trials, "trials per median (default 5)");
    bench_cmd->add_option("--seed", b_seed, "rng seed")->capture_default_str();
    bench_cmd->add_option("--profile", b_profile, "desk|paper (parameter presets)");
    bench_cmd->add_option("--format", b_format, "csv|markdown")->capture_default_str();
    bench_cmd->add_option("--out", b_out, "output path (default stdout)");
    std::size_t b_parallel = 0;
    bench_cmd->add_option("--parallel", b_parallel,
                          "measure parallel evaluate_query speedup with N threads instead of "
                          "the standard tables");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*keygen) return cmd_keygen(kg_backend, kg_bits, kg_out, kg_seed);
        if (*genindex) return cmd_genindex(gi_terms, gi_p, gi_seed, gi_out);
        if (*serve) return cmd_serve(sv_index, sv_backend, sv_keys, sv_host, sv_port, sv_k);
        if (*query) return cmd_query(q_host, q_port, q_term, q_backend, q_keys, q_seed);
        if (*bench_cmd) {
            bench::BenchConfig config;
            if (b_profile == "desk")
                config = bench::BenchConfig::desk_profile();
            else if (b_profile == "paper")
                config = bench::BenchConfig::paper_profile();
            else if (!b_profile.empty())
                throw Error("unknown profile \"" + b_profile + "\"");
            config.backends = parse_backends(b_backends);
            if (!b_k.empty()) {
                config.k_values.clear();
                std::size_t start = 0;
                while (start <= b_k.size()) {
                    const std::size_t comma = b_k.find(',', start);
                    config.k_values.push_back(std::stoul(b_k.substr(start, comma - start)));
                    if (comma == std::string::npos) break;
                    start = comma + 1;
                }
            }
            if (b_p) config.p = b_p;
            if (b_bits) config.modulus_bits = b_bits;
            if (b_trials) config.trials = b_trials;
            config.seed = b_seed;
            if (std::find(config.backends.begin(), config.backends.end(), BackendId::clear) !=
                config.backends.end())
                warn_if_clear(BackendId::clear, "benchmarking");
            if (b_parallel > 0) {
                const auto speedups = bench::bench_parallel_execution(config, b_parallel);
                std::cout << bench::emit_speedup_table(speedups);
                return 0;
            }
            return cmd_bench(config, b_format, b_out);
        }
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
