#include "kanon/gm.hpp"

#include "kanon/errors.hpp"

namespace kanon::gm {
namespace {

// Legendre symbol of a mod odd prime p via Euler's criterion.
bool is_residue_mod_prime(const BigUint& a, const BigUint& p) {
    return mod_pow(a % p, (p - 1) / 2, p) == 1;
}

BigUint find_pseudo_square(const BigUint& n, const BigUint& p, RandomSource& rng) {
    const OddModulus mod(n);
    for (;;) {
        BigUint y = 2 + rng.below(n - 2);  // uniform in [2, n)
        if (jacobi(y, mod) != 1) continue;
        // Jacobi +1 splits into residue-mod-both and non-residue-mod-both;
        // one Legendre test against the secret factor decides.
        if (!is_residue_mod_prime(y, p)) return {y};
    }
}

}  // namespace

std::pair<PublicKey, SecretKey> keys_from_primes(const BigUint& p, const BigUint& q,
                                                 RandomSource& rng) {
    if (p == q || mpz_even_p(p.get_mpz_t()) || mpz_even_p(q.get_mpz_t()) || p < 3 || q < 3)
        throw DomainError("gm: factors must be distinct odd primes");
    const BigUint n = p * q;
    PublicKey pk{n, find_pseudo_square(n, p, rng)};
    return {std::move(pk), SecretKey{p, q}};
}

std::pair<PublicKey, SecretKey> keygen(unsigned modulus_bits, RandomSource& rng) {
    if (modulus_bits < 32 || modulus_bits % 2 != 0)
        throw DomainError("gm::keygen: modulus_bits must be even and >= 32");
    const std::size_t half = modulus_bits / 2;
    BigUint p = gen_prime(half, rng);
    BigUint q = gen_prime(half, rng);
    while (q == p) q = gen_prime(half, rng);
    return keys_from_primes(p, q, rng);
}

Ciphertext encrypt_bit_with_r(const PublicKey& pk, bool b, const BigUint& r) {
    BigUint c = r * r % pk.n;
    if (b) c = c * pk.y % pk.n;
    return {c};
}

Ciphertext encrypt_bit(const PublicKey& pk, bool b, RandomSource& rng) {
    return encrypt_bit_with_r(pk, b, rand_coprime(pk.n, rng));
}

bool decrypt_bit(const SecretKey& sk, const Ciphertext& c) {
    const BigUint n = sk.p * sk.q;
    BigUint g;
    mpz_gcd(g.get_mpz_t(), c.value.get_mpz_t(), n.get_mpz_t());
    if (c.value < 1 || c.value >= n || g != 1)
        throw InvalidCiphertext("gm: ciphertext not a unit mod n");
    return !is_residue_mod_prime(c.value, sk.p);
}

Ciphertext select_combine(const PublicKey& pk, std::span<const Ciphertext> query,
                          std::span<const bool> column, RandomSource& rng) {
    if (query.size() != column.size() || query.empty())
        throw ProtocolError("gm::select_combine: query/column length mismatch");
    BigUint acc = 0;
    bool any = false;
    for (std::size_t j = 0; j < query.size(); ++j) {
        if (!column[j]) continue;
        acc = any ? acc * query[j].value % pk.n : query[j].value;
        any = true;
    }
    if (!any) return encrypt_bit(pk, false, rng);
    return {acc};
}

}  // namespace kanon::gm
