#include "kanon/client.hpp"

#include "kanon/errors.hpp"

namespace kanon::cli {

namespace {

[[noreturn]] void raise_server_error(const wire::Frame& frame) {
    const wire::ErrorMsg err = wire::parse_error(frame);
    throw ProtocolError("server error 0x" + to_hex(BigUint(err.code)) + ": " + err.message);
}

}  // namespace

Client Client::connect(const std::string& host, std::uint16_t port, BackendId backend,
                       unsigned modulus_bits) {
    Client client;
    client.stream_ = net::TcpStream::connect(host, port);
    client.setup_bytes_ = net::write_frame(
        client.stream_, wire::encode(wire::HelloMsg{backend, modulus_bits}));
    std::size_t down = 0;
    std::optional<wire::Frame> reply = net::read_frame(client.stream_, &down);
    if (!reply) throw TransportError("server closed during handshake");
    client.setup_bytes_ += down;
    if (reply->msg_type == static_cast<std::uint8_t>(wire::MsgType::error))
        raise_server_error(*reply);
    const wire::ManifestMsg m = wire::parse_manifest(*reply);
    client.public_key_ = backend_for(backend).public_from_elements(m.public_elements);
    client.manifest_ = index::Manifest{m.p, m.k, m.terms, backend, modulus_bits};
    client.params_ = protocol::ProtocolParams{backend, m.k, m.p, modulus_bits};
    client.params_.validate();
    return client;
}

Client::Exchange Client::measure_exchange(const protocol::SelectorQuery& query) {
    Exchange ex;
    ex.bytes_up = net::write_frame(
        stream_, wire::encode(wire::QueryMsg{query.block_id, query.ciphertexts}));
    std::optional<wire::Frame> reply = net::read_frame(stream_, &ex.bytes_down);
    if (!reply) throw TransportError("server closed before responding");
    if (reply->msg_type == static_cast<std::uint8_t>(wire::MsgType::error))
        raise_server_error(*reply);
    ex.response.ciphertexts = wire::parse_response(*reply).ciphertexts;
    return ex;
}

BitVec Client::fetch_term(std::string_view term, const AnySecretKey& secret_key,
                          RandomSource& rng) {
    const auto [block_id, index_in_block] =
        protocol::locate_term(manifest_.terms, term, manifest_.k);
    const protocol::SelectorQuery query =
        protocol::build_query(params_, public_key_, block_id, index_in_block, rng);
    Exchange ex = measure_exchange(query);
    return protocol::decrypt_response(params_, secret_key, public_key_, ex.response);
}

}  // namespace kanon::cli
