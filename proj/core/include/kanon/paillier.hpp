#pragma once

#include <span>
#include <utility>
#include <vector>

#include "kanon/numtheory.hpp"

namespace kanon::paillier {

struct PublicKey {
    BigUint n;
    BigUint n_squared;
    BigUint g;  // fixed to n + 1
};

struct SecretKey {
    BigUint lambda;  // lcm(p-1, q-1)
    BigUint mu;      // (L(g^lambda mod n^2))^-1 mod n
};

struct Ciphertext {
    BigUint value;
};

/// True when n = p*q and (p-1)(q-1) are coprime, the keygen admissibility
/// condition. Can only fail for very small primes.
bool primes_compatible(const BigUint& p, const BigUint& q);

std::pair<PublicKey, SecretKey> keys_from_primes(const BigUint& p, const BigUint& q);
std::pair<PublicKey, SecretKey> keygen(unsigned modulus_bits, RandomSource& rng);

/// g^m * r^n mod n^2 with fresh r; g = n+1 makes g^m a single multiplication.
Ciphertext encrypt(const PublicKey& pk, const BigUint& m, RandomSource& rng);
Ciphertext encrypt_with_r(const PublicKey& pk, const BigUint& m, const BigUint& r);

/// L(c^lambda mod n^2) * mu mod n with L(u) = (u-1)/n.
BigUint decrypt(const SecretKey& sk, const PublicKey& pk, const Ciphertext& c);

/// prod_j query[j]^{m_j} mod n^2 over the nonzero constants m_j. With a
/// one-hot query this returns an encryption of the selected constant whole,
/// which is what lets one ciphertext carry an entire posting. An all-zero
/// constant vector yields a fresh encryption of 0.
Ciphertext select_combine(const PublicKey& pk, std::span<const Ciphertext> query,
                          std::span<const BigUint> constants, RandomSource& rng);

}  // namespace kanon::paillier
