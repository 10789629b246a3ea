#pragma once

#include <cstdint>
#include <memory>
#include <random>

#include <gmpxx.h>

namespace kanon {

/// Source of randomness for key generation and encryption. All big-integer
/// sampling is built on a 64-bit word stream and rejection sampling, so a
/// given implementation produces the same values on every platform.
class RandomSource {
  public:
    virtual ~RandomSource() = default;
    virtual std::uint64_t next_u64() = 0;

    /// Uniform in [0, 2^nbits).
    mpz_class bits(std::size_t nbits);
    /// Uniform in [0, bound) by rejection; bound >= 1.
    mpz_class below(const mpz_class& bound);
};

/// Deterministic stream (mt19937_64); use for tests, benchmarks and any
/// output that must be reproducible from a seed.
class SeededRng final : public RandomSource {
  public:
    explicit SeededRng(std::uint64_t seed) : eng_(seed) {}
    std::uint64_t next_u64() override { return eng_(); }

  private:
    std::mt19937_64 eng_;
};

/// OS-entropy stream for production key material.
class SystemRng final : public RandomSource {
  public:
    std::uint64_t next_u64() override;

  private:
    std::random_device dev_;
};

}  // namespace kanon
