#pragma once

#include <span>
#include <vector>

#include "kanon/numtheory.hpp"

namespace kanon::gm {

struct PublicKey {
    BigUint n;  // product of two distinct odd primes
    BigUint y;  // pseudo-square: Jacobi(y, n) = +1, non-residue mod both factors
};

struct SecretKey {
    BigUint p;
    BigUint q;
};

struct Ciphertext {
    BigUint value;
};

/// Modulus from two fresh primes of modulus_bits/2 bits; y by rejection
/// sampling among Jacobi +1 candidates until one is a non-residue mod p.
std::pair<PublicKey, SecretKey> keygen(unsigned modulus_bits, RandomSource& rng);

/// Builds a key pair from given distinct odd primes (toy keys in tests).
std::pair<PublicKey, SecretKey> keys_from_primes(const BigUint& p, const BigUint& q,
                                                 RandomSource& rng);

/// y^b * r^2 mod n with fresh r coprime to n.
Ciphertext encrypt_bit(const PublicKey& pk, bool b, RandomSource& rng);
/// Deterministic core of encrypt_bit, with caller-chosen randomness.
Ciphertext encrypt_bit_with_r(const PublicKey& pk, bool b, const BigUint& r);

/// 0 iff the value is a quadratic residue mod p (Euler criterion).
bool decrypt_bit(const SecretKey& sk, const Ciphertext& c);

/// Product of query[j] over the positions where column[j] is set; the GM
/// group operation is plaintext XOR, so with a one-hot query this selects
/// the chosen row's bit. An empty selection returns a fresh encryption of 0
/// (a random square) so it is not distinguishable by inspection.
Ciphertext select_combine(const PublicKey& pk, std::span<const Ciphertext> query,
                          std::span<const bool> column, RandomSource& rng);

}  // namespace kanon::gm
