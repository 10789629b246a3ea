#include "kanon/wire.hpp"

#include <cstring>

#include "kanon/errors.hpp"

namespace kanon::wire {
namespace {

constexpr std::uint8_t kMagic[4] = {'K', 'A', 'P', 'S'};

void require(bool ok, const char* what) {
    if (!ok) throw TransportError(what);
}

Frame frame_of(MsgType type, Writer&& w) {
    Frame f;
    f.msg_type = static_cast<std::uint8_t>(type);
    f.payload = w.take();
    return f;
}

void expect_type(const Frame& f, MsgType type, const char* name) {
    if (f.msg_type != static_cast<std::uint8_t>(type))
        throw TransportError(std::string("frame is not a ") + name + " message");
}

}  // namespace

std::vector<std::uint8_t> encode_frame(const Frame& frame) {
    if (frame.payload.size() > kMaxPayload) throw TransportError("payload exceeds size cap");
    std::vector<std::uint8_t> out;
    out.reserve(kFrameHeaderSize + frame.payload.size());
    for (std::uint8_t m : kMagic) out.push_back(m);
    out.push_back(frame.version);
    out.push_back(frame.msg_type);
    const auto len = static_cast<std::uint32_t>(frame.payload.size());
    out.push_back(static_cast<std::uint8_t>(len >> 24));
    out.push_back(static_cast<std::uint8_t>(len >> 16));
    out.push_back(static_cast<std::uint8_t>(len >> 8));
    out.push_back(static_cast<std::uint8_t>(len));
    out.insert(out.end(), frame.payload.begin(), frame.payload.end());
    return out;
}

std::uint8_t Reader::u8() {
    require(remaining() >= 1, "truncated message");
    return data_[pos_++];
}

std::uint16_t Reader::u16() {
    require(remaining() >= 2, "truncated message");
    std::uint16_t v = static_cast<std::uint16_t>(data_[pos_] << 8 | data_[pos_ + 1]);
    pos_ += 2;
    return v;
}

std::uint32_t Reader::u32() {
    require(remaining() >= 4, "truncated message");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = v << 8 | data_[pos_ + i];
    pos_ += 4;
    return v;
}

std::vector<std::uint8_t> Reader::bytes(std::size_t n) {
    require(remaining() >= n, "truncated message");
    std::vector<std::uint8_t> out(data_.begin() + pos_, data_.begin() + pos_ + n);
    pos_ += n;
    return out;
}

BigUint Reader::integer() {
    const std::uint32_t len = u32();
    require(remaining() >= len, "truncated integer");
    BigUint v = from_bytes_be(data_.data() + pos_, len);
    if (len > 0 && data_[pos_] == 0)
        throw TransportError("non-minimal integer encoding (leading zero byte)");
    pos_ += len;
    return v;
}

void Writer::u8(std::uint8_t v) { buf_.push_back(v); }

void Writer::u16(std::uint16_t v) {
    buf_.push_back(static_cast<std::uint8_t>(v >> 8));
    buf_.push_back(static_cast<std::uint8_t>(v));
}

void Writer::u32(std::uint32_t v) {
    for (int i = 3; i >= 0; --i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void Writer::bytes(std::span<const std::uint8_t> v) { buf_.insert(buf_.end(), v.begin(), v.end()); }

void Writer::integer(const BigUint& v) {
    const std::vector<std::uint8_t> be = to_bytes_be(v);
    u32(static_cast<std::uint32_t>(be.size()));
    bytes(be);
}

Frame encode(const HelloMsg& m) {
    Writer w;
    w.u8(static_cast<std::uint8_t>(m.backend));
    w.u32(m.modulus_bits);
    return frame_of(MsgType::hello, std::move(w));
}

Frame encode(const ManifestMsg& m) {
    Writer w;
    w.u32(m.p);
    w.u32(m.k);
    w.u32(static_cast<std::uint32_t>(m.terms.size()));
    for (const std::string& t : m.terms) {
        w.u32(static_cast<std::uint32_t>(t.size()));
        w.bytes({reinterpret_cast<const std::uint8_t*>(t.data()), t.size()});
    }
    for (const BigUint& e : m.public_elements) w.integer(e);
    return frame_of(MsgType::manifest, std::move(w));
}

Frame encode(const QueryMsg& m) {
    Writer w;
    w.u32(m.block_id);
    w.u32(static_cast<std::uint32_t>(m.ciphertexts.size()));
    for (const BigUint& c : m.ciphertexts) w.integer(c);
    return frame_of(MsgType::query, std::move(w));
}

Frame encode(const ResponseMsg& m) {
    Writer w;
    w.u32(static_cast<std::uint32_t>(m.ciphertexts.size()));
    for (const BigUint& c : m.ciphertexts) w.integer(c);
    return frame_of(MsgType::response, std::move(w));
}

Frame encode(const ErrorMsg& m) {
    Writer w;
    w.u16(m.code);
    w.u32(static_cast<std::uint32_t>(m.message.size()));
    w.bytes({reinterpret_cast<const std::uint8_t*>(m.message.data()), m.message.size()});
    return frame_of(MsgType::error, std::move(w));
}

HelloMsg parse_hello(const Frame& f) {
    expect_type(f, MsgType::hello, "HELLO");
    Reader r(f.payload);
    HelloMsg m;
    const std::uint8_t id = r.u8();
    if (id > 2) throw ProtocolError("unknown backend id " + std::to_string(id));
    m.backend = static_cast<BackendId>(id);
    m.modulus_bits = r.u32();
    require(r.remaining() == 0, "trailing bytes in HELLO");
    return m;
}

ManifestMsg parse_manifest(const Frame& f) {
    expect_type(f, MsgType::manifest, "MANIFEST");
    Reader r(f.payload);
    ManifestMsg m;
    m.p = r.u32();
    m.k = r.u32();
    const std::uint32_t count = r.u32();
    m.terms.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::uint32_t len = r.u32();
        const auto raw = r.bytes(len);
        m.terms.emplace_back(raw.begin(), raw.end());
    }
    // The public key is whatever remains; the count per backend is checked
    // by the session layer, which knows the negotiated backend.
    while (r.remaining() > 0) m.public_elements.push_back(r.integer());
    return m;
}

QueryMsg parse_query(const Frame& f) {
    expect_type(f, MsgType::query, "QUERY");
    Reader r(f.payload);
    QueryMsg m;
    m.block_id = r.u32();
    const std::uint32_t k = r.u32();
    m.ciphertexts.reserve(k);
    for (std::uint32_t i = 0; i < k; ++i) m.ciphertexts.push_back(r.integer());
    require(r.remaining() == 0, "trailing bytes in QUERY");
    return m;
}

ResponseMsg parse_response(const Frame& f) {
    expect_type(f, MsgType::response, "RESPONSE");
    Reader r(f.payload);
    ResponseMsg m;
    const std::uint32_t count = r.u32();
    m.ciphertexts.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) m.ciphertexts.push_back(r.integer());
    require(r.remaining() == 0, "trailing bytes in RESPONSE");
    return m;
}

ErrorMsg parse_error(const Frame& f) {
    expect_type(f, MsgType::error, "ERROR");
    Reader r(f.payload);
    ErrorMsg m;
    m.code = r.u16();
    const std::uint32_t len = r.u32();
    const auto raw = r.bytes(len);
    m.message.assign(raw.begin(), raw.end());
    require(r.remaining() == 0, "trailing bytes in ERROR");
    return m;
}

std::size_t wire_integer_size(const BigUint& v) { return 4 + byte_length(v); }

std::size_t hello_frame_size() { return kFrameHeaderSize + 1 + 4; }

std::size_t manifest_frame_size(std::span<const std::string> terms,
                                std::span<const BigUint> public_elements) {
    std::size_t n = kFrameHeaderSize + 4 + 4 + 4;
    for (const std::string& t : terms) n += 4 + t.size();
    for (const BigUint& e : public_elements) n += wire_integer_size(e);
    return n;
}

std::size_t query_frame_size_exact(std::span<const BigUint> ciphertexts) {
    std::size_t n = kFrameHeaderSize + 4 + 4;
    for (const BigUint& c : ciphertexts) n += wire_integer_size(c);
    return n;
}

std::size_t response_frame_size_exact(std::span<const BigUint> ciphertexts) {
    std::size_t n = kFrameHeaderSize + 4;
    for (const BigUint& c : ciphertexts) n += wire_integer_size(c);
    return n;
}

std::size_t ciphertext_nominal_bytes(BackendId backend, unsigned modulus_bits) {
    switch (backend) {
        case BackendId::clear: return 1;
        case BackendId::gm: return (modulus_bits + 7) / 8;
        case BackendId::paillier: return (2 * modulus_bits + 7) / 8;
    }
    throw DomainError("unknown backend id");
}

std::size_t query_frame_size_nominal(BackendId backend, std::size_t k, unsigned modulus_bits) {
    return kFrameHeaderSize + 4 + 4 + k * (4 + ciphertext_nominal_bytes(backend, modulus_bits));
}

std::size_t response_frame_size_nominal(BackendId backend, std::size_t k, std::size_t p,
                                        unsigned modulus_bits) {
    (void)k;  // response shape does not depend on k for any backend
    const std::size_t count = backend_for(backend).response_count(p, modulus_bits);
    std::size_t per = 0;
    switch (backend) {
        case BackendId::clear: per = (p + 7) / 8; break;
        case BackendId::gm: per = (modulus_bits + 7) / 8; break;
        case BackendId::paillier: per = (2 * modulus_bits + 7) / 8; break;
    }
    return kFrameHeaderSize + 4 + count * (4 + per);
}

}  // namespace kanon::wire
