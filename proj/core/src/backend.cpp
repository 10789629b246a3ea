#include "kanon/backend.hpp"

#include <memory>
#include <thread>

#include "kanon/errors.hpp"

namespace kanon {
namespace {

// Runs fn(range_index, thread_rng) over [0, count) split stride-wise across
// workers. Worker seeds are drawn from the caller's rng up front, so the
// output is a deterministic function of (inputs, rng state, threads).
template <typename F>
void parallel_for(std::size_t count, std::size_t threads, RandomSource& rng, F&& fn) {
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i, rng);
        return;
    }
    std::vector<std::uint64_t> seeds(threads);
    for (auto& s : seeds) s = rng.next_u64();
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            SeededRng worker_rng(seeds[t]);
            for (std::size_t i = t; i < count; i += threads) fn(i, worker_rng);
        });
    }
    for (auto& w : pool) w.join();
}

// Bit ranges [begin, end) of a p-bit posting split into chunks.
std::vector<std::pair<std::size_t, std::size_t>> chunk_ranges(std::size_t p,
                                                              std::size_t chunk_bits) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t begin = 0; begin < p; begin += chunk_bits)
        out.emplace_back(begin, std::min(begin + chunk_bits, p));
    return out;
}

// Integer value of posting bits [begin, end), bit `begin` most significant.
BigUint slice_to_uint(const BitVec& posting, std::size_t begin, std::size_t end) {
    BigUint v = 0;
    for (std::size_t s = begin; s < end; ++s) {
        v <<= 1;
        if (posting.get(s)) v |= 1;
    }
    return v;
}

void check_block(const PostingBlock& block, std::size_t k, std::size_t p) {
    if (block.postings.size() != k)
        throw ProtocolError("evaluate: block has " + std::to_string(block.postings.size()) +
                            " postings, query has " + std::to_string(k));
    if (block.p != p) throw ProtocolError("evaluate: block posting length mismatch");
    for (const BitVec& row : block.postings)
        if (row.size() != p) throw ProtocolError("evaluate: ragged posting block");
}

class ClearBackend final : public Backend {
  public:
    BackendId id() const noexcept override { return BackendId::clear; }

    KeyPair keygen(unsigned modulus_bits, RandomSource&) const override {
        return {BackendId::clear, modulus_bits, ClearPublicKey{}, ClearSecretKey{}};
    }

    BigUint encrypt_selector_bit(const AnyPublicKey&, bool b, RandomSource&) const override {
        return b ? 1 : 0;
    }

    BigUint decrypt_value(const AnySecretKey&, const AnyPublicKey&,
                          const BigUint& value) const override {
        return value;
    }

    std::vector<BigUint> evaluate(const AnyPublicKey&, std::span<const BigUint> query,
                                  const PostingBlock& block, unsigned, RandomSource&,
                                  std::size_t) const override {
        check_block(block, query.size(), block.p);
        std::unique_ptr<bool[]> bits(new bool[query.size()]);
        std::vector<BigUint> values(query.size());
        for (std::size_t j = 0; j < query.size(); ++j) {
            if (query[j] != 0 && query[j] != 1)
                throw ProtocolError("clear: selector entry must be 0 or 1");
            bits[j] = query[j] == 1;
            values[j] = block.postings[j].to_uint();
        }
        return {clear::select_combine({bits.get(), query.size()}, values)};
    }

    BitVec decrypt_response(const AnySecretKey&, const AnyPublicKey&,
                            std::span<const BigUint> response, std::size_t p,
                            unsigned) const override {
        if (response.size() != 1) throw ProtocolError("clear: expected a single response value");
        if (bit_length(response[0]) > p)
            throw InvalidCiphertext("clear: response wider than posting length");
        return BitVec::from_uint(response[0], p);
    }

    std::size_t response_count(std::size_t, unsigned) const override { return 1; }

    std::vector<BigUint> public_elements(const AnyPublicKey&) const override { return {}; }

    AnyPublicKey public_from_elements(std::span<const BigUint> elems) const override {
        if (!elems.empty()) throw ProtocolError("clear: public key carries no elements");
        return ClearPublicKey{};
    }
};

class GmBackend final : public Backend {
  public:
    BackendId id() const noexcept override { return BackendId::gm; }

    KeyPair keygen(unsigned modulus_bits, RandomSource& rng) const override {
        auto [pk, sk] = gm::keygen(modulus_bits, rng);
        return {BackendId::gm, modulus_bits, std::move(pk), std::move(sk)};
    }

    BigUint encrypt_selector_bit(const AnyPublicKey& pk, bool b, RandomSource& rng) const override {
        return gm::encrypt_bit(std::get<gm::PublicKey>(pk), b, rng).value;
    }

    BigUint decrypt_value(const AnySecretKey& sk, const AnyPublicKey&,
                          const BigUint& value) const override {
        return gm::decrypt_bit(std::get<gm::SecretKey>(sk), {value}) ? 1 : 0;
    }

    std::vector<BigUint> evaluate(const AnyPublicKey& pk_any, std::span<const BigUint> query,
                                  const PostingBlock& block, unsigned, RandomSource& rng,
                                  std::size_t threads) const override {
        const auto& pk = std::get<gm::PublicKey>(pk_any);
        const std::size_t k = query.size();
        check_block(block, k, block.p);
        std::vector<gm::Ciphertext> cts(k);
        for (std::size_t j = 0; j < k; ++j) {
            if (query[j] < 1 || query[j] >= pk.n)
                throw InvalidCiphertext("gm: selector entry outside [1, n)");
            cts[j].value = query[j];
        }
        std::vector<BigUint> out(block.p);
        parallel_for(block.p, threads, rng, [&](std::size_t s, RandomSource& worker_rng) {
            std::unique_ptr<bool[]> column(new bool[k]);
            for (std::size_t j = 0; j < k; ++j) column[j] = block.postings[j].get(s);
            out[s] = gm::select_combine(pk, cts, {column.get(), k}, worker_rng).value;
        });
        return out;
    }

    BitVec decrypt_response(const AnySecretKey& sk_any, const AnyPublicKey&,
                            std::span<const BigUint> response, std::size_t p,
                            unsigned) const override {
        const auto& sk = std::get<gm::SecretKey>(sk_any);
        if (response.size() != p)
            throw ProtocolError("gm: expected one response ciphertext per posting bit");
        BitVec out(p);
        for (std::size_t s = 0; s < p; ++s) {
            try {
                out.set(s, gm::decrypt_bit(sk, {response[s]}));
            } catch (const InvalidCiphertext& e) {
                throw InvalidCiphertext(std::string(e.what()) + " at offset " + std::to_string(s));
            }
        }
        return out;
    }

    std::size_t response_count(std::size_t p, unsigned) const override { return p; }

    std::vector<BigUint> public_elements(const AnyPublicKey& pk) const override {
        const auto& k = std::get<gm::PublicKey>(pk);
        return {k.n, k.y};
    }

    AnyPublicKey public_from_elements(std::span<const BigUint> elems) const override {
        if (elems.size() != 2) throw ProtocolError("gm: public key must be (n, y)");
        return gm::PublicKey{elems[0], elems[1]};
    }
};

class PaillierBackend final : public Backend {
  public:
    BackendId id() const noexcept override { return BackendId::paillier; }

    KeyPair keygen(unsigned modulus_bits, RandomSource& rng) const override {
        auto [pk, sk] = paillier::keygen(modulus_bits, rng);
        return {BackendId::paillier, modulus_bits, std::move(pk), std::move(sk)};
    }

    BigUint encrypt_selector_bit(const AnyPublicKey& pk, bool b, RandomSource& rng) const override {
        return paillier::encrypt(std::get<paillier::PublicKey>(pk), b ? 1 : 0, rng).value;
    }

    BigUint decrypt_value(const AnySecretKey& sk, const AnyPublicKey& pk,
                          const BigUint& value) const override {
        return paillier::decrypt(std::get<paillier::SecretKey>(sk),
                                 std::get<paillier::PublicKey>(pk), {value});
    }

    std::vector<BigUint> evaluate(const AnyPublicKey& pk_any, std::span<const BigUint> query,
                                  const PostingBlock& block, unsigned modulus_bits,
                                  RandomSource& rng, std::size_t threads) const override {
        const auto& pk = std::get<paillier::PublicKey>(pk_any);
        const std::size_t k = query.size();
        check_block(block, k, block.p);
        std::vector<paillier::Ciphertext> cts(k);
        for (std::size_t j = 0; j < k; ++j) {
            if (query[j] < 1 || query[j] >= pk.n_squared)
                throw InvalidCiphertext("paillier: selector entry outside [1, n^2)");
            cts[j].value = query[j];
        }
        const auto ranges = chunk_ranges(block.p, paillier_chunk_bits(modulus_bits));
        std::vector<BigUint> out(ranges.size());
        parallel_for(ranges.size(), threads, rng, [&](std::size_t c, RandomSource& worker_rng) {
            const auto [begin, end] = ranges[c];
            std::vector<BigUint> constants(k);
            for (std::size_t j = 0; j < k; ++j)
                constants[j] = slice_to_uint(block.postings[j], begin, end);
            out[c] = paillier::select_combine(pk, cts, constants, worker_rng).value;
        });
        return out;
    }

    BitVec decrypt_response(const AnySecretKey& sk_any, const AnyPublicKey& pk_any,
                            std::span<const BigUint> response, std::size_t p,
                            unsigned modulus_bits) const override {
        const auto& sk = std::get<paillier::SecretKey>(sk_any);
        const auto& pk = std::get<paillier::PublicKey>(pk_any);
        const auto ranges = chunk_ranges(p, paillier_chunk_bits(modulus_bits));
        if (response.size() != ranges.size())
            throw ProtocolError("paillier: response chunk count mismatch");
        BitVec out(p);
        for (std::size_t c = 0; c < ranges.size(); ++c) {
            const auto [begin, end] = ranges[c];
            BigUint m;
            try {
                m = paillier::decrypt(sk, pk, {response[c]});
            } catch (const InvalidCiphertext& e) {
                throw InvalidCiphertext(std::string(e.what()) + " in chunk " + std::to_string(c));
            }
            const std::size_t len = end - begin;
            if (bit_length(m) > len)
                throw InvalidCiphertext("paillier: chunk " + std::to_string(c) +
                                        " decrypts wider than its bit range");
            for (std::size_t s = 0; s < len; ++s)
                out.set(begin + s, mpz_tstbit(m.get_mpz_t(), static_cast<mp_bitcnt_t>(len - 1 - s)));
        }
        return out;
    }

    std::size_t response_count(std::size_t p, unsigned modulus_bits) const override {
        const std::size_t b = paillier_chunk_bits(modulus_bits);
        return (p + b - 1) / b;
    }

    std::vector<BigUint> public_elements(const AnyPublicKey& pk) const override {
        return {std::get<paillier::PublicKey>(pk).n};
    }

    AnyPublicKey public_from_elements(std::span<const BigUint> elems) const override {
        if (elems.size() != 1) throw ProtocolError("paillier: public key must be (n)");
        paillier::PublicKey pk;
        pk.n = elems[0];
        pk.n_squared = pk.n * pk.n;
        pk.g = pk.n + 1;
        return pk;
    }
};

}  // namespace

std::string_view backend_name(BackendId id) {
    switch (id) {
        case BackendId::clear: return "clear";
        case BackendId::gm: return "gm";
        case BackendId::paillier: return "paillier";
    }
    throw DomainError("unknown backend id");
}

BackendId backend_from_name(std::string_view name) {
    if (name == "clear") return BackendId::clear;
    if (name == "gm") return BackendId::gm;
    if (name == "paillier") return BackendId::paillier;
    throw DomainError("unknown backend \"" + std::string(name) + "\"");
}

const Backend& backend_for(BackendId id) {
    static const ClearBackend clear_backend;
    static const GmBackend gm_backend;
    static const PaillierBackend paillier_backend;
    switch (id) {
        case BackendId::clear: return clear_backend;
        case BackendId::gm: return gm_backend;
        case BackendId::paillier: return paillier_backend;
    }
    throw DomainError("unknown backend id");
}

}  // namespace kanon
