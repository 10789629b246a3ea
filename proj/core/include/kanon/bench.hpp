#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kanon/backend.hpp"

namespace kanon::bench {

enum class Quantity {
    keygen_s,
    query_enc_s,
    query_exec_s,
    comm_bytes_up,
    comm_bytes_down,
};

std::string_view quantity_name(Quantity q);
Quantity quantity_from_name(std::string_view name);
/// Timing quantities are excluded from golden-output comparison.
bool is_timing(Quantity q);

struct BenchConfig {
    std::vector<BackendId> backends{BackendId::clear, BackendId::gm, BackendId::paillier};
    std::vector<std::size_t> k_values{10, 20, 50, 100};
    std::size_t p = 720;
    unsigned modulus_bits = 2048;
    unsigned trials = 5;
    std::uint64_t seed = 1;

    /// 512-bit, k in {10, 20}: seconds of runtime, used by CI and acceptance.
    static BenchConfig desk_profile();
    /// 2048-bit, k in {10, 20, 50, 100}: minutes of runtime.
    static BenchConfig paper_profile();
};

/// One measurement cell. Timings carry the median over `trials` with
/// min/max dispersion; byte counts are exact and have min == max == value.
struct BenchRecord {
    std::string backend;
    std::size_t k = 0;  // 0 when the quantity has no k dimension (keygen)
    std::size_t p = 0;
    unsigned modulus_bits = 0;
    Quantity quantity = Quantity::keygen_s;
    double value = 0;
    unsigned trials = 0;
    double min = 0;
    double max = 0;

    bool operator==(const BenchRecord&) const = default;
};

std::vector<BenchRecord> bench_keygen(const BenchConfig& config);
std::vector<BenchRecord> bench_query_encryption(const BenchConfig& config);
std::vector<BenchRecord> bench_query_execution(const BenchConfig& config);

/// Parallel-evaluation speedup, measured and reported on its own so
/// multi-thread numbers never mix with the single-thread tables.
struct SpeedupRecord {
    std::string backend;
    std::size_t k = 0;
    std::size_t threads = 1;
    double single_s = 0;
    double parallel_s = 0;
};

std::vector<SpeedupRecord> bench_parallel_execution(const BenchConfig& config,
                                                    std::size_t threads);
std::string emit_speedup_table(std::span<const SpeedupRecord> records);
/// Measures exact framing-layer bytes over a loopback socket session and
/// checks them against the closed-form sizes computed from the values sent;
/// any disagreement throws.
std::vector<BenchRecord> bench_communication(const BenchConfig& config);
std::vector<BenchRecord> run_all(const BenchConfig& config);

std::string emit_csv(std::span<const BenchRecord> records);
std::string emit_markdown(std::span<const BenchRecord> records);
std::vector<BenchRecord> parse_csv(const std::string& csv);

/// Replaces value/min/max of timing rows with "-" so two runs of the same
/// seeded configuration compare byte-identical.
std::string mask_timing_fields(const std::string& csv);

}  // namespace kanon::bench
