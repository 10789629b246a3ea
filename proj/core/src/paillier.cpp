#include "kanon/paillier.hpp"

#include "kanon/errors.hpp"

namespace kanon::paillier {
namespace {

// L(u) = (u - 1) / n, defined only when the division is exact.
BigUint l_function(const BigUint& u, const BigUint& n) {
    BigUint t = u - 1;
    if (!mpz_divisible_p(t.get_mpz_t(), n.get_mpz_t()))
        throw InvalidCiphertext("paillier: L-function argument not 1 mod n");
    return t / n;
}

}  // namespace

bool primes_compatible(const BigUint& p, const BigUint& q) {
    BigUint g, n = p * q, phi = (p - 1) * (q - 1);
    mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), phi.get_mpz_t());
    return g == 1;
}

std::pair<PublicKey, SecretKey> keys_from_primes(const BigUint& p, const BigUint& q) {
    if (p == q || p < 3 || q < 3) throw DomainError("paillier: factors must be distinct odd primes");
    if (!primes_compatible(p, q))
        throw DomainError("paillier: gcd(n, (p-1)(q-1)) != 1");
    PublicKey pk;
    pk.n = p * q;
    pk.n_squared = pk.n * pk.n;
    pk.g = pk.n + 1;
    SecretKey sk;
    mpz_lcm(sk.lambda.get_mpz_t(), mpz_class(p - 1).get_mpz_t(), mpz_class(q - 1).get_mpz_t());
    const BigUint u = mod_pow(pk.g, sk.lambda, pk.n_squared);
    sk.mu = mod_inverse(l_function(u, pk.n), pk.n);
    return {std::move(pk), std::move(sk)};
}

std::pair<PublicKey, SecretKey> keygen(unsigned modulus_bits, RandomSource& rng) {
    if (modulus_bits < 32 || modulus_bits % 2 != 0)
        throw DomainError("paillier::keygen: modulus_bits must be even and >= 32");
    const std::size_t half = modulus_bits / 2;
    for (;;) {
        BigUint p = gen_prime(half, rng);
        BigUint q = gen_prime(half, rng);
        while (q == p) q = gen_prime(half, rng);
        if (primes_compatible(p, q)) return keys_from_primes(p, q);
    }
}

Ciphertext encrypt_with_r(const PublicKey& pk, const BigUint& m, const BigUint& r) {
    if (m >= pk.n) throw MessageTooLarge("paillier: plaintext >= n");
    // (n+1)^m mod n^2 == 1 + m*n.
    const BigUint gm = (1 + m * pk.n) % pk.n_squared;
    return {gm * mod_pow(r, pk.n, pk.n_squared) % pk.n_squared};
}

Ciphertext encrypt(const PublicKey& pk, const BigUint& m, RandomSource& rng) {
    return encrypt_with_r(pk, m, rand_coprime(pk.n, rng));
}

BigUint decrypt(const SecretKey& sk, const PublicKey& pk, const Ciphertext& c) {
    BigUint g;
    mpz_gcd(g.get_mpz_t(), c.value.get_mpz_t(), pk.n_squared.get_mpz_t());
    if (c.value < 1 || c.value >= pk.n_squared || g != 1)
        throw InvalidCiphertext("paillier: ciphertext not a unit mod n^2");
    const BigUint u = mod_pow(c.value, sk.lambda, pk.n_squared);
    return l_function(u, pk.n) * sk.mu % pk.n;
}

Ciphertext select_combine(const PublicKey& pk, std::span<const Ciphertext> query,
                          std::span<const BigUint> constants, RandomSource& rng) {
    if (query.size() != constants.size() || query.empty())
        throw ProtocolError("paillier::select_combine: query/constants length mismatch");
    BigUint acc = 0;
    bool any = false;
    for (std::size_t j = 0; j < query.size(); ++j) {
        if (constants[j] == 0) continue;
        if (constants[j] >= pk.n)
            throw ChunkTooLarge("paillier: constant >= n at position " + std::to_string(j));
        BigUint term = mod_pow(query[j].value, constants[j], pk.n_squared);
        acc = any ? acc * term % pk.n_squared : std::move(term);
        any = true;
    }
    if (!any) return encrypt(pk, 0, rng);
    return {acc};
}

}  // namespace kanon::paillier
