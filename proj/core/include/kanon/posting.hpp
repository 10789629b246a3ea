#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kanon/numtheory.hpp"

namespace kanon {

/// Fixed-width bit vector with the protocol's bit order: bit s lives at bit
/// (7 - s % 8) of byte s / 8, i.e. most-significant-bit first inside
/// big-endian bytes. Pad bits in the final byte are kept zero.
class BitVec {
  public:
    BitVec() = default;
    explicit BitVec(std::size_t nbits) : nbits_(nbits), bytes_((nbits + 7) / 8, 0) {}

    std::size_t size() const noexcept { return nbits_; }
    const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }

    bool get(std::size_t s) const;
    void set(std::size_t s, bool value);

    /// Value of the bit string as an integer, bit 0 most significant.
    BigUint to_uint() const;
    /// Inverse of to_uint; requires value < 2^nbits.
    static BitVec from_uint(const BigUint& value, std::size_t nbits);

    /// Lowercase hex of the underlying bytes (two digits per byte).
    std::string to_hex() const;
    /// Parses exactly ceil(nbits/8) bytes of hex; pad bits must be zero.
    static BitVec from_hex(const std::string& hex, std::size_t nbits);

    bool operator==(const BitVec&) const = default;

  private:
    std::size_t nbits_ = 0;
    std::vector<std::uint8_t> bytes_;
};

/// One block of the inverted index: exactly k postings of exactly p bits.
/// Short tail blocks are padded with all-zero postings.
struct PostingBlock {
    std::size_t p = 0;
    std::vector<BitVec> postings;

    std::size_t k() const noexcept { return postings.size(); }
};

}  // namespace kanon
