#include "kanon/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "kanon/client.hpp"
#include "kanon/errors.hpp"
#include "kanon/index_store.hpp"
#include "kanon/protocol.hpp"
#include "kanon/server.hpp"
#include "kanon/wire.hpp"

namespace kanon::bench {
namespace {

using clock_type = std::chrono::steady_clock;

constexpr double kMinTrialSeconds = 1e-3;  // repeat fast operations up to this

double seconds_since(clock_type::time_point start) {
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Distinct rng streams per measurement site, all derived from config.seed.
std::uint64_t substream(const BenchConfig& config, std::string_view site, BackendId backend,
                        std::size_t k) {
    std::uint64_t h = config.seed;
    for (char c : site) h = mix(h ^ static_cast<std::uint64_t>(c));
    h = mix(h ^ static_cast<std::uint64_t>(backend));
    return mix(h ^ k);
}

struct TrialStats {
    double median = 0, min = 0, max = 0;
};

// Calibrates a repeat count on the first invocation so one trial costs at
// least kMinTrialSeconds, then reports per-operation time per trial.
template <typename F>
TrialStats run_trials(unsigned trials, F&& op) {
    auto once = [&] {
        const auto start = clock_type::now();
        op();
        return seconds_since(start);
    };
    const double probe = once();
    std::size_t reps = 1;
    if (probe < kMinTrialSeconds)
        reps = std::min<std::size_t>(
            1000000, static_cast<std::size_t>(std::ceil(kMinTrialSeconds / std::max(probe, 1e-9))));
    std::vector<double> samples;
    samples.reserve(trials);
    for (unsigned t = 0; t < trials; ++t) {
        if (reps == 1) {
            samples.push_back(once());
        } else {
            const auto start = clock_type::now();
            for (std::size_t i = 0; i < reps; ++i) op();
            samples.push_back(seconds_since(start) / static_cast<double>(reps));
        }
    }
    std::sort(samples.begin(), samples.end());
    TrialStats stats;
    stats.min = samples.front();
    stats.max = samples.back();
    const std::size_t mid = samples.size() / 2;
    stats.median = samples.size() % 2 ? samples[mid] : (samples[mid - 1] + samples[mid]) / 2;
    return stats;
}

BenchRecord record_of(BackendId backend, std::size_t k, const BenchConfig& config, Quantity q,
                      const TrialStats& stats, unsigned trials) {
    BenchRecord r;
    r.backend = backend_name(backend);
    r.k = k;
    r.p = config.p;
    r.modulus_bits = config.modulus_bits;
    r.quantity = q;
    r.value = stats.median;
    r.trials = trials;
    r.min = stats.min;
    r.max = stats.max;
    return r;
}

PostingBlock synthetic_block(const BenchConfig& config, std::size_t k, std::uint64_t seed) {
    const index::InvertedIndex idx = index::gen_synthetic_index(k, config.p, seed);
    return index::get_block(idx, 0, k);
}

protocol::ProtocolParams params_for(const BenchConfig& config, BackendId backend, std::size_t k) {
    return {backend, k, config.p, config.modulus_bits};
}

}  // namespace

std::string_view quantity_name(Quantity q) {
    switch (q) {
        case Quantity::keygen_s: return "keygen_s";
        case Quantity::query_enc_s: return "query_enc_s";
        case Quantity::query_exec_s: return "query_exec_s";
        case Quantity::comm_bytes_up: return "comm_bytes_up";
        case Quantity::comm_bytes_down: return "comm_bytes_down";
    }
    throw DomainError("unknown quantity");
}

Quantity quantity_from_name(std::string_view name) {
    for (Quantity q : {Quantity::keygen_s, Quantity::query_enc_s, Quantity::query_exec_s,
                       Quantity::comm_bytes_up, Quantity::comm_bytes_down})
        if (name == quantity_name(q)) return q;
    throw ParseError("unknown quantity \"" + std::string(name) + "\"");
}

bool is_timing(Quantity q) {
    return q == Quantity::keygen_s || q == Quantity::query_enc_s || q == Quantity::query_exec_s;
}

BenchConfig BenchConfig::desk_profile() {
    BenchConfig c;
    c.k_values = {10, 20};
    c.modulus_bits = 512;
    return c;
}

BenchConfig BenchConfig::paper_profile() {
    BenchConfig c;
    c.k_values = {10, 20, 50, 100};
    c.modulus_bits = 2048;
    return c;
}

std::vector<BenchRecord> bench_keygen(const BenchConfig& config) {
    std::vector<BenchRecord> out;
    for (BackendId backend : config.backends) {
        SeededRng rng(substream(config, "keygen", backend, 0));
        const Backend& impl = backend_for(backend);
        const TrialStats stats = run_trials(config.trials, [&] {
            KeyPair keys = impl.keygen(config.modulus_bits, rng);
            (void)keys;
        });
        // Functional check outside the timed region: a fresh pair must
        // round-trip a selector bit.
        KeyPair keys = impl.keygen(config.modulus_bits, rng);
        const BigUint one = impl.encrypt_selector_bit(keys.public_key, true, rng);
        if (impl.decrypt_value(keys.secret_key, keys.public_key, one) != 1)
            throw Error("bench: keygen produced a non-functional key pair");
        out.push_back(record_of(backend, 0, config, Quantity::keygen_s, stats, config.trials));
    }
    return out;
}

std::vector<BenchRecord> bench_query_encryption(const BenchConfig& config) {
    std::vector<BenchRecord> out;
    for (BackendId backend : config.backends) {
        const Backend& impl = backend_for(backend);
        SeededRng keyrng(substream(config, "enc-key", backend, 0));
        const KeyPair keys = impl.keygen(config.modulus_bits, keyrng);
        for (std::size_t k : config.k_values) {
            const protocol::ProtocolParams params = params_for(config, backend, k);
            SeededRng rng(substream(config, "enc", backend, k));
            std::size_t turn = 0;
            const TrialStats stats = run_trials(config.trials, [&] {
                protocol::build_query(params, keys.public_key, 0, turn++ % k, rng);
            });
            // The selector must decrypt back to a unit vector.
            const protocol::SelectorQuery probe =
                protocol::build_query(params, keys.public_key, 0, k / 2, rng);
            for (std::size_t j = 0; j < k; ++j) {
                const BigUint bit =
                    impl.decrypt_value(keys.secret_key, keys.public_key, probe.ciphertexts[j]);
                if (bit != (j == k / 2 ? 1 : 0))
                    throw Error("bench: query encryption round-trip failed");
            }
            out.push_back(record_of(backend, k, config, Quantity::query_enc_s, stats,
                                    config.trials));
        }
    }
    return out;
}

std::vector<BenchRecord> bench_query_execution(const BenchConfig& config) {
    std::vector<BenchRecord> out;
    for (BackendId backend : config.backends) {
        const Backend& impl = backend_for(backend);
        SeededRng keyrng(substream(config, "exec-key", backend, 0));
        const KeyPair keys = impl.keygen(config.modulus_bits, keyrng);
        for (std::size_t k : config.k_values) {
            const protocol::ProtocolParams params = params_for(config, backend, k);
            SeededRng rng(substream(config, "exec", backend, k));
            const PostingBlock block = synthetic_block(config, k, substream(config, "blk", backend, k));
            const std::size_t target = k / 2;
            const protocol::SelectorQuery query =
                protocol::build_query(params, keys.public_key, 0, target, rng);
            BitVec retrieved;
            const TrialStats stats = run_trials(config.trials, [&] {
                const protocol::EncryptedResponse response =
                    protocol::evaluate_query(params, keys.public_key, query, block, rng);
                retrieved =
                    protocol::decrypt_response(params, keys.secret_key, keys.public_key, response);
            });
            if (retrieved != block.postings[target])
                throw Error("bench: query execution returned a wrong posting");
            out.push_back(record_of(backend, k, config, Quantity::query_exec_s, stats,
                                    config.trials));
        }
    }
    return out;
}

std::vector<SpeedupRecord> bench_parallel_execution(const BenchConfig& config,
                                                    std::size_t threads) {
    if (threads < 2) throw DomainError("bench_parallel_execution: threads must be >= 2");
    std::vector<SpeedupRecord> out;
    for (BackendId backend : config.backends) {
        if (backend == BackendId::clear) continue;  // nothing to parallelize
        const Backend& impl = backend_for(backend);
        SeededRng keyrng(substream(config, "par-key", backend, 0));
        const KeyPair keys = impl.keygen(config.modulus_bits, keyrng);
        for (std::size_t k : config.k_values) {
            const protocol::ProtocolParams params = params_for(config, backend, k);
            SeededRng rng(substream(config, "par", backend, k));
            const PostingBlock block =
                synthetic_block(config, k, substream(config, "par-blk", backend, k));
            const std::size_t target = k / 2;
            const protocol::SelectorQuery query =
                protocol::build_query(params, keys.public_key, 0, target, rng);
            // Only the server-side evaluation is timed; decryption is not
            // what the thread count parallelizes.
            protocol::EncryptedResponse single_resp, parallel_resp;
            const TrialStats single = run_trials(config.trials, [&] {
                single_resp = protocol::evaluate_query(params, keys.public_key, query, block, rng, 1);
            });
            const TrialStats parallel = run_trials(config.trials, [&] {
                parallel_resp =
                    protocol::evaluate_query(params, keys.public_key, query, block, rng, threads);
            });
            for (const auto* resp : {&single_resp, &parallel_resp}) {
                const BitVec got =
                    protocol::decrypt_response(params, keys.secret_key, keys.public_key, *resp);
                if (got != block.postings[target])
                    throw Error("bench: parallel evaluation returned a wrong posting");
            }
            out.push_back({std::string(backend_name(backend)), k, threads, single.median,
                           parallel.median});
        }
    }
    return out;
}

std::string emit_speedup_table(std::span<const SpeedupRecord> records) {
    std::ostringstream out;
    out << "## Parallel evaluate_query speedup\n\n"
        << "| backend | k | threads | single (s) | parallel (s) | speedup |\n"
        << "|---|---|---|---|---|---|\n";
    for (const SpeedupRecord& r : records) {
        char single[32], parallel[32], speedup[32];
        std::snprintf(single, sizeof single, "%.6f", r.single_s);
        std::snprintf(parallel, sizeof parallel, "%.6f", r.parallel_s);
        std::snprintf(speedup, sizeof speedup, "%.2f",
                      r.parallel_s > 0 ? r.single_s / r.parallel_s : 0.0);
        out << "| " << r.backend << " | " << r.k << " | " << r.threads << " | " << single
            << " | " << parallel << " | " << speedup << " |\n";
    }
    return out.str();
}

std::vector<BenchRecord> bench_communication(const BenchConfig& config) {
    std::vector<BenchRecord> out;
    for (BackendId backend : config.backends) {
        const Backend& impl = backend_for(backend);
        SeededRng keyrng(substream(config, "comm-key", backend, 0));
        const KeyPair keys = impl.keygen(config.modulus_bits, keyrng);
        for (std::size_t k : config.k_values) {
            const index::InvertedIndex idx =
                index::gen_synthetic_index(k, config.p, substream(config, "comm-idx", backend, k));
            srv::ServerConfig server_config;
            server_config.backend = backend;
            server_config.modulus_bits = config.modulus_bits;
            server_config.k = k;
            server_config.public_key = keys.public_key;
            server_config.rng_seed = substream(config, "comm-srv", backend, k);
            srv::Server server(server_config, idx);
            server.start();

            cli::Client client =
                cli::Client::connect("127.0.0.1", server.port(), backend, config.modulus_bits);
            SeededRng rng(substream(config, "comm", backend, k));
            const std::size_t target = k / 2;
            const protocol::SelectorQuery query =
                protocol::build_query(client.params(), client.public_key(), 0, target, rng);
            cli::Client::Exchange ex = client.measure_exchange(query);

            const std::size_t predicted_up = wire::query_frame_size_exact(query.ciphertexts);
            const std::size_t predicted_down =
                wire::response_frame_size_exact(ex.response.ciphertexts);
            if (ex.bytes_up != predicted_up || ex.bytes_down != predicted_down)
                throw Error("bench: measured bytes disagree with the closed-form frame sizes");
            if (ex.bytes_up > wire::query_frame_size_nominal(backend, k, config.modulus_bits) ||
                ex.bytes_down > wire::response_frame_size_nominal(backend, k, config.p,
                                                                  config.modulus_bits))
                throw Error("bench: frame exceeds its nominal size bound");
            const BitVec posting =
                protocol::decrypt_response(client.params(), keys.secret_key, keys.public_key,
                                           ex.response);
            if (posting != index::get_block(idx, 0, k).postings[target])
                throw Error("bench: socket session returned a wrong posting");
            server.stop();

            BenchRecord up = record_of(backend, k, config, Quantity::comm_bytes_up,
                                       TrialStats{static_cast<double>(ex.bytes_up),
                                                  static_cast<double>(ex.bytes_up),
                                                  static_cast<double>(ex.bytes_up)},
                                       1);
            BenchRecord down = record_of(backend, k, config, Quantity::comm_bytes_down,
                                         TrialStats{static_cast<double>(ex.bytes_down),
                                                    static_cast<double>(ex.bytes_down),
                                                    static_cast<double>(ex.bytes_down)},
                                         1);
            out.push_back(std::move(up));
            out.push_back(std::move(down));
        }
    }
    return out;
}

std::vector<BenchRecord> run_all(const BenchConfig& config) {
    std::vector<BenchRecord> out = bench_keygen(config);
    for (auto&& part : {bench_query_encryption(config), bench_query_execution(config),
                        bench_communication(config)})
        out.insert(out.end(), part.begin(), part.end());
    return out;
}

namespace {

std::string format_value(Quantity q, double v) {
    char buf[64];
    if (is_timing(q))
        std::snprintf(buf, sizeof buf, "%.17g", v);
    else
        std::snprintf(buf, sizeof buf, "%.0f", v);
    return buf;
}

}  // namespace

std::string emit_csv(std::span<const BenchRecord> records) {
    std::string out = "backend,k,p,modulus_bits,quantity,value,trials,min,max\n";
    for (const BenchRecord& r : records) {
        out += r.backend;
        out += ',' + std::to_string(r.k);
        out += ',' + std::to_string(r.p);
        out += ',' + std::to_string(r.modulus_bits);
        out += ',';
        out += quantity_name(r.quantity);
        out += ',' + format_value(r.quantity, r.value);
        out += ',' + std::to_string(r.trials);
        out += ',' + format_value(r.quantity, r.min);
        out += ',' + format_value(r.quantity, r.max);
        out += '\n';
    }
    return out;
}

std::vector<BenchRecord> parse_csv(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line) || line != "backend,k,p,modulus_bits,quantity,value,trials,min,max")
        throw ParseError("bad bench csv header");
    std::vector<BenchRecord> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (;;) {
            const std::size_t comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (fields.size() != 9) throw ParseError("bad bench csv row", lineno);
        try {
            BenchRecord r;
            r.backend = fields[0];
            r.k = std::stoul(fields[1]);
            r.p = std::stoul(fields[2]);
            r.modulus_bits = static_cast<unsigned>(std::stoul(fields[3]));
            r.quantity = quantity_from_name(fields[4]);
            r.value = std::stod(fields[5]);
            r.trials = static_cast<unsigned>(std::stoul(fields[6]));
            r.min = std::stod(fields[7]);
            r.max = std::stod(fields[8]);
            out.push_back(std::move(r));
        } catch (const std::exception&) {
            throw ParseError("bad bench csv field", lineno);
        }
    }
    return out;
}

std::string mask_timing_fields(const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    bool first = true;
    while (std::getline(in, line)) {
        if (!first && (line.find("_s,") != std::string::npos)) {
            // Row layout: ...,quantity,value,trials,min,max — blank the three
            // timing fields, keep the trial count.
            std::vector<std::size_t> commas;
            for (std::size_t i = 0; i < line.size(); ++i)
                if (line[i] == ',') commas.push_back(i);
            if (commas.size() == 8) {
                std::string masked = line.substr(0, commas[4] + 1);
                masked += "-";
                masked += line.substr(commas[5], commas[6] - commas[5] + 1);
                masked += "-,-";
                line = masked;
            }
        }
        out += line;
        out += '\n';
        first = false;
    }
    return out;
}

std::string emit_markdown(std::span<const BenchRecord> records) {
    std::ostringstream out;
    std::vector<std::string> backends;
    std::vector<std::size_t> ks;
    for (const BenchRecord& r : records) {
        if (std::find(backends.begin(), backends.end(), r.backend) == backends.end())
            backends.push_back(r.backend);
        if (r.k != 0 && std::find(ks.begin(), ks.end(), r.k) == ks.end()) ks.push_back(r.k);
    }
    std::sort(ks.begin(), ks.end());

    auto find = [&](Quantity q, const std::string& backend, std::size_t k) -> const BenchRecord* {
        for (const BenchRecord& r : records)
            if (r.quantity == q && r.backend == backend && r.k == k) return &r;
        return nullptr;
    };
    auto timing_cell = [&](Quantity q, const std::string& backend, std::size_t k) {
        const BenchRecord* r = find(q, backend, k);
        if (!r) return std::string("-");
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", r->value);
        return std::string(buf);
    };

    out << "## Key generation time (s)\n\n|";
    for (const auto& b : backends) out << ' ' << b << " |";
    out << "\n|";
    for (std::size_t i = 0; i < backends.size(); ++i) out << "---|";
    out << "\n|";
    for (const auto& b : backends) out << ' ' << timing_cell(Quantity::keygen_s, b, 0) << " |";
    out << "\n\n";

    const struct {
        Quantity q;
        const char* title;
    } tables[] = {{Quantity::query_enc_s, "Query encryption time (s)"},
                  {Quantity::query_exec_s, "Query execution time (s)"}};
    for (const auto& [q, title] : tables) {
        out << "## " << title << "\n\n| k |";
        for (const auto& b : backends) out << ' ' << b << " |";
        out << "\n|---|";
        for (std::size_t i = 0; i < backends.size(); ++i) out << "---|";
        out << '\n';
        for (std::size_t k : ks) {
            out << "| " << k << " |";
            for (const auto& b : backends) out << ' ' << timing_cell(q, b, k) << " |";
            out << '\n';
        }
        out << '\n';
    }

    out << "## Communication overhead (bytes, query / response)\n\n| k |";
    for (const auto& b : backends) out << ' ' << b << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < backends.size(); ++i) out << "---|";
    out << '\n';
    for (std::size_t k : ks) {
        out << "| " << k << " |";
        for (const auto& b : backends) {
            const BenchRecord* up = find(Quantity::comm_bytes_up, b, k);
            const BenchRecord* down = find(Quantity::comm_bytes_down, b, k);
            if (up && down)
                out << ' ' << static_cast<std::uint64_t>(up->value) << " / "
                    << static_cast<std::uint64_t>(down->value) << " |";
            else
                out << " - |";
        }
        out << '\n';
    }
    out << '\n';
    return out.str();
}

}  // namespace kanon::bench
