#include "kanon/rng.hpp"

#include "kanon/errors.hpp"
#include "kanon/numtheory.hpp"

namespace kanon {

mpz_class RandomSource::bits(std::size_t nbits) {
    if (nbits == 0) return 0;
    const std::size_t words = (nbits + 63) / 64;
    mpz_class v = 0;
    // Least-significant word first; the layout is part of the deterministic
    // contract of SeededRng.
    for (std::size_t i = 0; i < words; ++i) {
        mpz_class w = static_cast<unsigned long>(next_u64());
        mpz_mul_2exp(w.get_mpz_t(), w.get_mpz_t(), 64 * i);
        v |= w;
    }
    const std::size_t excess = words * 64 - nbits;
    if (excess) mpz_fdiv_q_2exp(v.get_mpz_t(), v.get_mpz_t(), excess);
    return v;
}

mpz_class RandomSource::below(const mpz_class& bound) {
    if (bound <= 0) throw DomainError("RandomSource::below: bound must be >= 1");
    const std::size_t nbits = bit_length(bound);
    for (;;) {
        mpz_class v = bits(nbits);
        if (v < bound) return v;
    }
}

std::uint64_t SystemRng::next_u64() {
    // std::random_device yields 32 bits per call on this platform.
    return (static_cast<std::uint64_t>(dev_()) << 32) | dev_();
}

}  // namespace kanon
