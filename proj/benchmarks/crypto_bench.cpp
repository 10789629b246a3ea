// Microbenchmarks for the primitives underneath the private search scheme.
// The protocol-level tables come from `kanon bench`; these isolate the
// individual operations.

#include <benchmark/benchmark.h>

#include "kanon/gm.hpp"
#include "kanon/index_store.hpp"
#include "kanon/paillier.hpp"
#include "kanon/protocol.hpp"

using namespace kanon;

namespace {

KeyPair gm_keys(unsigned bits) {
    SeededRng rng(1);
    return backend_for(BackendId::gm).keygen(bits, rng);
}

KeyPair paillier_keys(unsigned bits) {
    SeededRng rng(2);
    return backend_for(BackendId::paillier).keygen(bits, rng);
}

void BM_ModPow(benchmark::State& state) {
    const auto bits = static_cast<std::size_t>(state.range(0));
    SeededRng rng(3);
    const BigUint m = rng.bits(bits) | 1;
    const BigUint base = rng.below(m);
    const BigUint exp = rng.bits(bits);
    for (auto _ : state) benchmark::DoNotOptimize(mod_pow(base, exp, m));
}
BENCHMARK(BM_ModPow)->Arg(512)->Arg(1024)->Arg(2048);

void BM_Jacobi(benchmark::State& state) {
    const auto bits = static_cast<std::size_t>(state.range(0));
    SeededRng rng(4);
    const OddModulus m(rng.bits(bits) | 1);
    const BigUint a = rng.below(m.value());
    for (auto _ : state) benchmark::DoNotOptimize(jacobi(a, m));
}
BENCHMARK(BM_Jacobi)->Arg(512)->Arg(2048);

void BM_GenPrime(benchmark::State& state) {
    SeededRng rng(5);
    for (auto _ : state)
        benchmark::DoNotOptimize(gen_prime(static_cast<std::size_t>(state.range(0)), rng));
}
BENCHMARK(BM_GenPrime)->Unit(benchmark::kMillisecond)->Arg(256)->Arg(512)->Arg(1024);

void BM_GmKeygen(benchmark::State& state) {
    SeededRng rng(6);
    for (auto _ : state)
        benchmark::DoNotOptimize(gm::keygen(static_cast<unsigned>(state.range(0)), rng));
}
BENCHMARK(BM_GmKeygen)->Unit(benchmark::kMillisecond)->Arg(512)->Arg(2048);

void BM_PaillierKeygen(benchmark::State& state) {
    SeededRng rng(7);
    for (auto _ : state)
        benchmark::DoNotOptimize(paillier::keygen(static_cast<unsigned>(state.range(0)), rng));
}
BENCHMARK(BM_PaillierKeygen)->Unit(benchmark::kMillisecond)->Arg(512)->Arg(2048);

void BM_GmEncryptBit(benchmark::State& state) {
    const KeyPair keys = gm_keys(static_cast<unsigned>(state.range(0)));
    const auto& pk = std::get<gm::PublicKey>(keys.public_key);
    SeededRng rng(8);
    bool b = false;
    for (auto _ : state) {
        benchmark::DoNotOptimize(gm::encrypt_bit(pk, b, rng));
        b = !b;
    }
}
BENCHMARK(BM_GmEncryptBit)->Arg(512)->Arg(2048);

void BM_PaillierEncrypt(benchmark::State& state) {
    const KeyPair keys = paillier_keys(static_cast<unsigned>(state.range(0)));
    const auto& pk = std::get<paillier::PublicKey>(keys.public_key);
    SeededRng rng(9);
    for (auto _ : state) benchmark::DoNotOptimize(paillier::encrypt(pk, 1, rng));
}
BENCHMARK(BM_PaillierEncrypt)->Arg(512)->Arg(2048);

void BM_GmDecryptBit(benchmark::State& state) {
    const KeyPair keys = gm_keys(static_cast<unsigned>(state.range(0)));
    const auto& pk = std::get<gm::PublicKey>(keys.public_key);
    const auto& sk = std::get<gm::SecretKey>(keys.secret_key);
    SeededRng rng(10);
    const auto c = gm::encrypt_bit(pk, true, rng);
    for (auto _ : state) benchmark::DoNotOptimize(gm::decrypt_bit(sk, c));
}
BENCHMARK(BM_GmDecryptBit)->Arg(512)->Arg(2048);

void BM_PaillierDecrypt(benchmark::State& state) {
    const KeyPair keys = paillier_keys(static_cast<unsigned>(state.range(0)));
    const auto& pk = std::get<paillier::PublicKey>(keys.public_key);
    const auto& sk = std::get<paillier::SecretKey>(keys.secret_key);
    SeededRng rng(11);
    const auto c = paillier::encrypt(pk, 12345, rng);
    for (auto _ : state) benchmark::DoNotOptimize(paillier::decrypt(sk, pk, c));
}
BENCHMARK(BM_PaillierDecrypt)->Arg(512)->Arg(2048);

// Whole-block evaluation, the O(kp) server loop (k selector entries against
// 720-bit postings).
void BM_EvaluateQuery(benchmark::State& state) {
    const auto backend = static_cast<BackendId>(state.range(0));
    const auto k = static_cast<std::size_t>(state.range(1));
    const unsigned bits = 512;
    SeededRng rng(12);
    const KeyPair keys = backend_for(backend).keygen(bits, rng);
    const protocol::ProtocolParams params{backend, k, 720, bits};
    const auto idx = index::gen_synthetic_index(k, 720, 13);
    const PostingBlock block = index::get_block(idx, 0, k);
    const auto query = protocol::build_query(params, keys.public_key, 0, k / 2, rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            protocol::evaluate_query(params, keys.public_key, query, block, rng));
}
BENCHMARK(BM_EvaluateQuery)
    ->Unit(benchmark::kMillisecond)
    ->Args({static_cast<int>(BackendId::gm), 10})
    ->Args({static_cast<int>(BackendId::gm), 100})
    ->Args({static_cast<int>(BackendId::paillier), 10})
    ->Args({static_cast<int>(BackendId::paillier), 100});

}  // namespace

BENCHMARK_MAIN();
