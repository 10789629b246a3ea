#pragma once

#include <atomic>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "kanon/backend.hpp"
#include "kanon/index_store.hpp"
#include "kanon/net.hpp"
#include "kanon/protocol.hpp"

namespace kanon::srv {

struct ServerConfig {
    BackendId backend = BackendId::clear;
    unsigned modulus_bits = 512;
    std::size_t k = 10;
    AnyPublicKey public_key;
    /// Seed for the per-connection randomness the evaluator may need
    /// (re-randomized empty selections); nullopt uses OS entropy.
    std::optional<std::uint64_t> rng_seed;
};

/// Serves one inverted index over the framed protocol. Connections are
/// handled on their own threads; the index and keys are immutable shared
/// state, so no cross-connection locking is needed.
class Server {
  public:
    Server(ServerConfig config, index::InvertedIndex index);
    ~Server();

    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Binds and starts the accept thread; port 0 picks an ephemeral port.
    void start(const std::string& host = "127.0.0.1", std::uint16_t port = 0);
    /// Binds and serves on the calling thread until stop() or process exit.
    void run(const std::string& host, std::uint16_t port);
    void stop();

    std::uint16_t port() const noexcept { return listener_.port(); }

  private:
    void accept_loop();
    void handle_connection(net::TcpStream& stream, std::uint64_t conn_id);

    ServerConfig config_;
    index::InvertedIndex index_;
    protocol::ProtocolParams params_;
    net::TcpListener listener_;
    std::thread accept_thread_;
    std::vector<std::thread> workers_;
    std::vector<std::shared_ptr<net::TcpStream>> connections_;
    std::mutex workers_mutex_;
    std::atomic<bool> stopping_{false};
    std::atomic<std::uint64_t> next_conn_id_{0};
};

}  // namespace kanon::srv
