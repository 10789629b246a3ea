#include "kanon/posting.hpp"

#include "kanon/errors.hpp"

namespace kanon {

bool BitVec::get(std::size_t s) const {
    if (s >= nbits_) throw DomainError("BitVec::get: bit index out of range");
    return (bytes_[s / 8] >> (7 - s % 8)) & 1;
}

void BitVec::set(std::size_t s, bool value) {
    if (s >= nbits_) throw DomainError("BitVec::set: bit index out of range");
    const std::uint8_t mask = static_cast<std::uint8_t>(1u << (7 - s % 8));
    if (value)
        bytes_[s / 8] |= mask;
    else
        bytes_[s / 8] &= static_cast<std::uint8_t>(~mask);
}

BigUint BitVec::to_uint() const {
    BigUint v = from_bytes_be(bytes_.data(), bytes_.size());
    const std::size_t pad = bytes_.size() * 8 - nbits_;
    if (pad) mpz_fdiv_q_2exp(v.get_mpz_t(), v.get_mpz_t(), pad);
    return v;
}

BitVec BitVec::from_uint(const BigUint& value, std::size_t nbits) {
    if (bit_length(value) > nbits)
        throw DomainError("BitVec::from_uint: value does not fit in " +
                          std::to_string(nbits) + " bits");
    BitVec out(nbits);
    const std::size_t pad = out.bytes_.size() * 8 - nbits;
    BigUint shifted;
    mpz_mul_2exp(shifted.get_mpz_t(), value.get_mpz_t(), pad);
    const std::vector<std::uint8_t> be = to_bytes_be(shifted);
    // Right-align into the fixed-width buffer.
    if (!be.empty())
        std::copy(be.begin(), be.end(),
                  out.bytes_.begin() + static_cast<std::ptrdiff_t>(out.bytes_.size() - be.size()));
    return out;
}

std::string BitVec::to_hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes_.size() * 2);
    for (std::uint8_t b : bytes_) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

BitVec BitVec::from_hex(const std::string& hex, std::size_t nbits) {
    const std::size_t want = (nbits + 7) / 8;
    if (hex.size() != want * 2)
        throw ParseError("posting hex has " + std::to_string(hex.size()) +
                         " digits, expected " + std::to_string(want * 2));
    BitVec out(nbits);
    auto nibble = [&](char c) -> unsigned {
        if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
        if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
        throw ParseError(std::string("invalid hex digit '") + c + "'");
    };
    for (std::size_t i = 0; i < want; ++i)
        out.bytes_[i] = static_cast<std::uint8_t>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
    const std::size_t pad = want * 8 - nbits;
    if (pad && (out.bytes_.back() & ((1u << pad) - 1)))
        throw ParseError("posting pad bits are not zero");
    return out;
}

}  // namespace kanon
