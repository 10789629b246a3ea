#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "kanon/backend.hpp"
#include "kanon/index_store.hpp"
#include "kanon/net.hpp"
#include "kanon/protocol.hpp"

namespace kanon::cli {

/// One protocol session: HELLO/MANIFEST on connect, then any number of
/// QUERY/RESPONSE exchanges over the same connection.
class Client {
  public:
    static Client connect(const std::string& host, std::uint16_t port, BackendId backend,
                          unsigned modulus_bits);

    const index::Manifest& manifest() const noexcept { return manifest_; }
    const AnyPublicKey& public_key() const noexcept { return public_key_; }
    const protocol::ProtocolParams& params() const noexcept { return params_; }
    /// Bytes of the HELLO + MANIFEST handshake (setup, tracked separately
    /// from per-query traffic).
    std::size_t setup_bytes() const noexcept { return setup_bytes_; }

    struct Exchange {
        protocol::EncryptedResponse response;
        std::size_t bytes_up = 0;
        std::size_t bytes_down = 0;
    };

    /// Sends one query, returns the response with exact framing-layer byte
    /// counts (QUERY frame up, RESPONSE frame down). An ERROR frame from the
    /// server raises ProtocolError.
    Exchange measure_exchange(const protocol::SelectorQuery& query);

    /// Full private fetch of one term: locate, encrypt, exchange, decrypt.
    BitVec fetch_term(std::string_view term, const AnySecretKey& secret_key, RandomSource& rng);

  private:
    Client() = default;

    net::TcpStream stream_;
    index::Manifest manifest_;
    AnyPublicKey public_key_;
    protocol::ProtocolParams params_;
    std::size_t setup_bytes_ = 0;
};

}  // namespace kanon::cli
