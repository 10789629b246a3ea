#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "kanon/bench.hpp"

using namespace kanon;
using bench::BenchConfig;
using bench::BenchRecord;
using bench::Quantity;

namespace {

// Small parameters so the whole suite runs in a second; 64-bit modulus is
// the golden-file configuration.
BenchConfig tiny_config() {
    BenchConfig config;
    config.backends = {BackendId::clear, BackendId::gm, BackendId::paillier};
    config.k_values = {2, 3};
    config.p = 16;
    config.modulus_bits = 64;
    config.trials = 1;
    config.seed = 42;
    return config;
}

}  // namespace

TEST_CASE("emit_csv on empty records is header-only") {
    CHECK(bench::emit_csv({}) == "backend,k,p,modulus_bits,quantity,value,trials,min,max\n");
    const auto parsed = bench::parse_csv(bench::emit_csv({}));
    CHECK(parsed.empty());
}

TEST_CASE("csv round-trips records exactly") {
    std::vector<BenchRecord> records;
    BenchRecord r;
    r.backend = "gm";
    r.k = 10;
    r.p = 720;
    r.modulus_bits = 512;
    r.quantity = Quantity::query_enc_s;
    r.value = 0.00012345678901234567;
    r.trials = 5;
    r.min = 0.0001;
    r.max = 0.0002;
    records.push_back(r);
    r.quantity = Quantity::comm_bytes_up;
    r.value = 2608;
    r.min = r.max = 2608;
    r.trials = 1;
    records.push_back(r);
    const auto parsed = bench::parse_csv(bench::emit_csv(records));
    CHECK(parsed == records);
    CHECK_THROWS_AS(bench::parse_csv("nonsense\n"), ParseError);
}

TEST_CASE("quantity names round-trip") {
    for (Quantity q : {Quantity::keygen_s, Quantity::query_enc_s, Quantity::query_exec_s,
                       Quantity::comm_bytes_up, Quantity::comm_bytes_down}) {
        CHECK(bench::quantity_from_name(bench::quantity_name(q)) == q);
        CHECK(bench::is_timing(q) == (std::string(bench::quantity_name(q)).ends_with("_s")));
    }
}

TEST_CASE("mask_timing_fields blanks exactly the timing values") {
    std::vector<BenchRecord> records;
    BenchRecord t;
    t.backend = "gm";
    t.k = 2;
    t.p = 16;
    t.modulus_bits = 64;
    t.quantity = Quantity::keygen_s;
    t.value = 0.5;
    t.trials = 3;
    t.min = 0.4;
    t.max = 0.6;
    BenchRecord b = t;
    b.quantity = Quantity::comm_bytes_down;
    b.value = b.min = b.max = 123;
    b.trials = 1;
    records = {t, b};
    const std::string masked = bench::mask_timing_fields(bench::emit_csv(records));
    CHECK(masked == "backend,k,p,modulus_bits,quantity,value,trials,min,max\n"
                    "gm,2,16,64,keygen_s,-,3,-,-\n"
                    "gm,2,16,64,comm_bytes_down,123,1,123,123\n");
}

TEST_CASE("a full tiny run produces well-formed, reproducible records") {
    const BenchConfig config = tiny_config();
    const auto records = bench::run_all(config);

    // keygen has no k dimension; every other quantity appears per (backend, k).
    std::size_t keygens = 0, comms = 0;
    for (const BenchRecord& r : records) {
        CHECK(r.value >= 0);
        CHECK(r.min <= r.value);
        CHECK(r.value <= r.max);
        if (r.quantity == Quantity::keygen_s) {
            ++keygens;
            CHECK(r.k == 0);
        }
        if (r.quantity == Quantity::comm_bytes_up || r.quantity == Quantity::comm_bytes_down) {
            ++comms;
            CHECK(r.trials == 1);
            CHECK(r.min == r.value);
        }
    }
    CHECK(keygens == 3);
    CHECK(comms == 3 * 2 * 2);

    // Byte counts and record layout are deterministic from the seed; only
    // timing values change between runs.
    const auto again = bench::run_all(config);
    CHECK(bench::mask_timing_fields(bench::emit_csv(records)) ==
          bench::mask_timing_fields(bench::emit_csv(again)));
}

TEST_CASE("timing sanity: clear is a no-op and keygen cost grows with the modulus") {
    BenchConfig config = tiny_config();
    config.trials = 3;
    const auto small = bench::run_all(config);
    double clear_keygen = -1, clear_exec = -1, gm_exec = -1, paillier_exec = -1, gm_keygen_64 = -1;
    for (const BenchRecord& r : small) {
        if (r.quantity == Quantity::keygen_s && r.backend == "clear") clear_keygen = r.value;
        if (r.quantity == Quantity::keygen_s && r.backend == "gm") gm_keygen_64 = r.value;
        if (r.quantity == Quantity::query_exec_s && r.k == 3) {
            if (r.backend == "clear") clear_exec = r.value;
            if (r.backend == "gm") gm_exec = r.value;
            if (r.backend == "paillier") paillier_exec = r.value;
        }
    }
    CHECK(clear_keygen >= 0);
    CHECK(clear_keygen < 1e-3);  // no-op keygen
    CHECK(clear_exec < gm_exec);
    CHECK(clear_exec < paillier_exec);

    // Keygen ordering between modulus sizes, GM only to stay fast.
    config.backends = {BackendId::gm};
    config.modulus_bits = 512;
    const auto at512 = bench::bench_keygen(config);
    config.modulus_bits = 64;
    const auto at64 = bench::bench_keygen(config);
    CHECK(at64[0].value < at512[0].value);
    CHECK(gm_keygen_64 >= 0);
}

TEST_CASE("markdown emission has the table-per-quantity shape") {
    const auto records = bench::run_all(tiny_config());
    const std::string md = bench::emit_markdown(records);
    CHECK(md.find("## Key generation time (s)") != std::string::npos);
    CHECK(md.find("## Query encryption time (s)") != std::string::npos);
    CHECK(md.find("## Query execution time (s)") != std::string::npos);
    CHECK(md.find("## Communication overhead (bytes, query / response)") != std::string::npos);
    CHECK(md.find("| clear |") != std::string::npos);
    CHECK(bench::emit_markdown({}).find("## Key generation time (s)") == 0);
}

TEST_CASE("golden file: seeded tiny run matches the reviewed output") {
    std::ifstream in(std::string(KANON_TEST_DATA_DIR) + "/bench_golden.csv", std::ios::binary);
    REQUIRE(in.good());
    const std::string golden{std::istreambuf_iterator<char>(in),
                             std::istreambuf_iterator<char>()};
    const auto records = bench::run_all(tiny_config());
    CHECK(bench::mask_timing_fields(bench::emit_csv(records)) == golden);
}
