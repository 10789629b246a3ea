#include "kanon/numtheory.hpp"

#include <array>

namespace kanon {
namespace {

// Primes below 64 (the small-value table) double as the trial-division
// prefilter in is_probable_prime.
constexpr std::array<unsigned, 18> kSmallPrimes = {2,  3,  5,  7,  11, 13, 17, 19, 23,
                                                   29, 31, 37, 41, 43, 47, 53, 59, 61};

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// One Miller-Rabin round: true when `a` does not witness n composite.
// n odd, n - 1 = d * 2^r with d odd.
bool mr_round(const BigUint& n, const BigUint& n_minus_1, const BigUint& d,
              unsigned long r, const BigUint& a) {
    BigUint x = mod_pow(a, d, n);
    if (x == 1 || x == n_minus_1) return true;
    for (unsigned long i = 1; i < r; ++i) {
        x = x * x % n;
        if (x == n_minus_1) return true;
    }
    return false;
}

bool miller_rabin(const BigUint& n, unsigned rounds, RandomSource& rng) {
    // n odd, n >= 67 here.
    const BigUint n_minus_1 = n - 1;
    BigUint d = n_minus_1;
    unsigned long r = mpz_scan1(d.get_mpz_t(), 0);
    mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), r);
    const BigUint span = n - 3;  // bases uniform in [2, n-2]
    for (unsigned i = 0; i < rounds; ++i) {
        BigUint a = 2 + rng.below(span);
        if (!mr_round(n, n_minus_1, d, r, a)) return false;
    }
    return true;
}

}  // namespace

std::size_t bit_length(const BigUint& v) {
    if (v == 0) return 0;
    return mpz_sizeinbase(v.get_mpz_t(), 2);
}

std::size_t byte_length(const BigUint& v) { return (bit_length(v) + 7) / 8; }

std::vector<std::uint8_t> to_bytes_be(const BigUint& v) {
    std::vector<std::uint8_t> out(byte_length(v));
    if (!out.empty()) {
        std::size_t written = 0;
        mpz_export(out.data(), &written, 1, 1, 1, 0, v.get_mpz_t());
    }
    return out;
}

BigUint from_bytes_be(const std::uint8_t* data, std::size_t len) {
    BigUint v;
    if (len) mpz_import(v.get_mpz_t(), len, 1, 1, 1, 0, data);
    return v;
}

std::string to_hex(const BigUint& v) { return v.get_str(16); }

BigUint from_hex(const std::string& hex) {
    if (hex.empty() || hex.find_first_not_of("0123456789abcdefABCDEF") != std::string::npos)
        throw ParseError("invalid hex integer \"" + hex + "\"");
    return BigUint(hex, 16);
}

OddModulus::OddModulus(BigUint n) : n_(std::move(n)) {
    if (n_ < 3 || mpz_even_p(n_.get_mpz_t()))
        throw DomainError("OddModulus: modulus must be odd and >= 3");
}

BigUint mod_pow(const BigUint& base, const BigUint& exp, const BigUint& modulus) {
    if (modulus < 2) throw DomainError("mod_pow: modulus must be >= 2");
    BigUint out;
    mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), modulus.get_mpz_t());
    return out;
}

int jacobi(const BigUint& a, const OddModulus& n) {
    // Binary algorithm: pull out factors of two, apply quadratic reciprocity.
    BigUint x = a % n.value();
    BigUint y = n.value();
    int result = 1;
    while (x != 0) {
        unsigned long twos = mpz_scan1(x.get_mpz_t(), 0);
        if (twos) {
            mpz_fdiv_q_2exp(x.get_mpz_t(), x.get_mpz_t(), twos);
            if (twos & 1) {
                unsigned long m8 = mpz_fdiv_ui(y.get_mpz_t(), 8);
                if (m8 == 3 || m8 == 5) result = -result;
            }
        }
        if (mpz_fdiv_ui(x.get_mpz_t(), 4) == 3 && mpz_fdiv_ui(y.get_mpz_t(), 4) == 3)
            result = -result;
        std::swap(x, y);
        x %= y;
    }
    return y == 1 ? result : 0;
}

bool is_probable_prime(const BigUint& n, unsigned rounds, RandomSource& rng) {
    if (rounds < 1) throw DomainError("is_probable_prime: rounds must be >= 1");
    if (n < 64) {
        const unsigned long v = mpz_get_ui(n.get_mpz_t());
        for (unsigned p : kSmallPrimes)
            if (v == p) return true;
        return false;
    }
    for (unsigned p : kSmallPrimes)
        if (mpz_fdiv_ui(n.get_mpz_t(), p) == 0) return false;
    return miller_rabin(n, rounds, rng);
}

bool is_probable_prime(const BigUint& n, unsigned rounds) {
    // Seed the base generator from the candidate itself; a pure function.
    std::uint64_t seed = 0x6b616e6f6eULL;
    seed = splitmix64(seed ^ mpz_fdiv_ui(n.get_mpz_t(), 0xfffffffbUL));
    seed = splitmix64(seed ^ bit_length(n));
    SeededRng rng(seed);
    return is_probable_prime(n, rounds, rng);
}

BigUint gen_prime(std::size_t bits, RandomSource& rng) {
    if (bits < 16) throw DomainError("gen_prime: bits must be >= 16");
    for (;;) {
        BigUint candidate = rng.bits(bits);
        mpz_setbit(candidate.get_mpz_t(), bits - 1);
        mpz_setbit(candidate.get_mpz_t(), 0);
        if (is_probable_prime(candidate, 40, rng)) return candidate;
    }
}

BigUint rand_coprime(const BigUint& n, RandomSource& rng) {
    if (n < 3) throw DomainError("rand_coprime: n must be >= 3");
    BigUint g;
    for (;;) {
        BigUint r = 1 + rng.below(n - 1);  // uniform in [1, n)
        mpz_gcd(g.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t());
        if (g == 1) return r;
    }
}

BigUint mod_inverse(const BigUint& a, const BigUint& n) {
    if (n < 2) throw DomainError("mod_inverse: modulus must be >= 2");
    // Extended Euclid, tracking only the coefficient of a.
    mpz_class old_r = a % n, r = n;
    mpz_class old_s = 1, s = 0;
    while (r != 0) {
        mpz_class quotient = old_r / r;
        mpz_class tmp = old_r - quotient * r;
        old_r = r;
        r = tmp;
        tmp = old_s - quotient * s;
        old_s = s;
        s = tmp;
    }
    if (old_r != 1)
        throw NotInvertible("mod_inverse: gcd(" + a.get_str() + ", " + n.get_str() + ") != 1");
    if (old_s < 0) old_s += n;
    return old_s;
}

}  // namespace kanon
