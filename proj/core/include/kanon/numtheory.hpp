#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "kanon/errors.hpp"
#include "kanon/rng.hpp"

namespace kanon {

// Arbitrary-precision unsigned integer. Backed by GMP; every function in
// this library keeps values non-negative and canonical.
using BigUint = mpz_class;

/// Number of significant bits; bit_length(0) == 0.
std::size_t bit_length(const BigUint& v);

/// Number of bytes in the minimal big-endian encoding; byte_length(0) == 0.
std::size_t byte_length(const BigUint& v);

/// Minimal big-endian magnitude bytes (empty for 0).
std::vector<std::uint8_t> to_bytes_be(const BigUint& v);
BigUint from_bytes_be(const std::uint8_t* data, std::size_t len);

std::string to_hex(const BigUint& v);
BigUint from_hex(const std::string& hex);

/// Odd modulus >= 3, as required by the Jacobi symbol and both cryptosystems.
class OddModulus {
  public:
    explicit OddModulus(BigUint n);
    const BigUint& value() const noexcept { return n_; }

  private:
    BigUint n_;
};

/// base^exp mod modulus by square-and-multiply. modulus < 2 -> DomainError.
BigUint mod_pow(const BigUint& base, const BigUint& exp, const BigUint& modulus);

/// Jacobi symbol (a/n) in {-1, 0, +1}; 0 iff gcd(a, n) > 1.
int jacobi(const BigUint& a, const OddModulus& n);

/// Miller-Rabin with `rounds` bases drawn from rng. Values below 64 are
/// decided by table. A composite survives with probability <= 4^-rounds.
bool is_probable_prime(const BigUint& n, unsigned rounds, RandomSource& rng);

/// Deterministic variant: bases come from a generator seeded from n itself,
/// so the result is a pure function of (n, rounds).
bool is_probable_prime(const BigUint& n, unsigned rounds = 40);

/// Random prime with bit length exactly `bits` (top bit set), fresh candidate
/// per failure, 40 Miller-Rabin rounds. Requires bits >= 16.
BigUint gen_prime(std::size_t bits, RandomSource& rng);

/// Uniform element of [1, n) coprime to n, by rejection. Requires n >= 3.
BigUint rand_coprime(const BigUint& n, RandomSource& rng);

/// Inverse of a mod n via extended Euclid; gcd(a, n) != 1 -> NotInvertible.
BigUint mod_inverse(const BigUint& a, const BigUint& n);

}  // namespace kanon
