#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kanon/backend.hpp"
#include "kanon/numtheory.hpp"

namespace kanon::wire {

// Frame layout, all integers big-endian:
//   magic "KAPS" (4) | version u8 (=1) | msg_type u8 | payload_len u32 | payload
// Payloads:
//   0x01 HELLO     backend_id u8, modulus_bits u32
//   0x02 MANIFEST  p u32, k u32, term_count u32, term_count x (len u32, bytes),
//                  then the public key integers to end of payload
//   0x03 QUERY     block_id u32, k u32, k x wire ciphertext
//   0x04 RESPONSE  count u32, count x wire ciphertext
//   0x05 ERROR     code u16, len u32, message bytes
// A wire ciphertext is len u32 followed by the minimal big-endian magnitude
// (no leading zero byte; zero encodes as len 0).

inline constexpr std::uint8_t kVersion = 1;
inline constexpr std::size_t kFrameHeaderSize = 10;
inline constexpr std::uint32_t kMaxPayload = 1u << 30;

enum class MsgType : std::uint8_t {
    hello = 0x01,
    manifest = 0x02,
    query = 0x03,
    response = 0x04,
    error = 0x05,
};

enum class ErrorCode : std::uint16_t {
    unknown_msg_type = 0x0001,
    version_mismatch = 0x0002,
    oversize_payload = 0x0003,
    unsupported_config = 0x0004,
    bad_request = 0x0005,
};

struct Frame {
    std::uint8_t version = kVersion;
    std::uint8_t msg_type = 0;
    std::vector<std::uint8_t> payload;

    bool operator==(const Frame&) const = default;
};

std::vector<std::uint8_t> encode_frame(const Frame& frame);

/// Bounds-checked big-endian reader over a byte buffer.
class Reader {
  public:
    explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}

    std::uint8_t u8();
    std::uint16_t u16();
    std::uint32_t u32();
    std::vector<std::uint8_t> bytes(std::size_t n);
    BigUint integer();  // wire ciphertext
    std::size_t remaining() const noexcept { return data_.size() - pos_; }

  private:
    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

/// Big-endian appender, the inverse of Reader.
class Writer {
  public:
    void u8(std::uint8_t v);
    void u16(std::uint16_t v);
    void u32(std::uint32_t v);
    void bytes(std::span<const std::uint8_t> v);
    void integer(const BigUint& v);
    std::vector<std::uint8_t> take() { return std::move(buf_); }

  private:
    std::vector<std::uint8_t> buf_;
};

struct HelloMsg {
    BackendId backend = BackendId::clear;
    std::uint32_t modulus_bits = 0;
    bool operator==(const HelloMsg&) const = default;
};

struct ManifestMsg {
    std::uint32_t p = 0;
    std::uint32_t k = 0;
    std::vector<std::string> terms;
    std::vector<BigUint> public_elements;
    bool operator==(const ManifestMsg&) const = default;
};

struct QueryMsg {
    std::uint32_t block_id = 0;
    std::vector<BigUint> ciphertexts;
    bool operator==(const QueryMsg&) const = default;
};

struct ResponseMsg {
    std::vector<BigUint> ciphertexts;
    bool operator==(const ResponseMsg&) const = default;
};

struct ErrorMsg {
    std::uint16_t code = 0;
    std::string message;
    bool operator==(const ErrorMsg&) const = default;
};

Frame encode(const HelloMsg&);
Frame encode(const ManifestMsg&);
Frame encode(const QueryMsg&);
Frame encode(const ResponseMsg&);
Frame encode(const ErrorMsg&);

HelloMsg parse_hello(const Frame&);
ManifestMsg parse_manifest(const Frame&);
QueryMsg parse_query(const Frame&);
ResponseMsg parse_response(const Frame&);
ErrorMsg parse_error(const Frame&);

// Closed-form frame sizes (framing layer, headers included). The *_exact
// forms take the actual integers since the minimal encoding makes byte
// counts a function of the values; the nominal forms assume every
// ciphertext at its full width and so give the k-linear upper bound.
std::size_t wire_integer_size(const BigUint& v);
std::size_t hello_frame_size();
std::size_t manifest_frame_size(std::span<const std::string> terms,
                                std::span<const BigUint> public_elements);
std::size_t query_frame_size_exact(std::span<const BigUint> ciphertexts);
std::size_t response_frame_size_exact(std::span<const BigUint> ciphertexts);
std::size_t query_frame_size_nominal(BackendId backend, std::size_t k, unsigned modulus_bits);
std::size_t response_frame_size_nominal(BackendId backend, std::size_t k, std::size_t p,
                                        unsigned modulus_bits);

/// Bytes of one ciphertext at full width: modulus width for GM, twice that
/// for Paillier (mod n^2), one byte per selector bit for clear.
std::size_t ciphertext_nominal_bytes(BackendId backend, unsigned modulus_bits);

}  // namespace kanon::wire
