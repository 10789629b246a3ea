#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "kanon/errors.hpp"
#include "kanon/wire.hpp"

namespace kanon::net {

/// payload_len above the sanity cap; the server answers ERROR 0x0003.
struct OversizePayload : TransportError {
    using TransportError::TransportError;
};

class TcpStream {
  public:
    TcpStream() = default;
    explicit TcpStream(int fd) : fd_(fd) {}
    TcpStream(TcpStream&& other) noexcept;
    TcpStream& operator=(TcpStream&& other) noexcept;
    TcpStream(const TcpStream&) = delete;
    TcpStream& operator=(const TcpStream&) = delete;
    ~TcpStream();

    static TcpStream connect(const std::string& host, std::uint16_t port);

    void write_all(std::span<const std::uint8_t> data);
    /// Fills `data` completely; premature EOF -> TransportError.
    void read_exact(std::span<std::uint8_t> data);
    /// Like read_exact but a clean EOF before the first byte returns false.
    bool read_exact_or_eof(std::span<std::uint8_t> data);

    bool valid() const noexcept { return fd_ >= 0; }
    void close();
    /// Shuts down both directions without releasing the descriptor; any
    /// blocked read on the socket returns EOF.
    void shutdown_rw() noexcept;

  private:
    int fd_ = -1;
};

class TcpListener {
  public:
    TcpListener() = default;
    TcpListener(TcpListener&& other) noexcept;
    TcpListener& operator=(TcpListener&& other) noexcept;
    TcpListener(const TcpListener&) = delete;
    TcpListener& operator=(const TcpListener&) = delete;
    ~TcpListener();

    /// port 0 binds an ephemeral port; see port() for the result.
    static TcpListener bind(const std::string& host, std::uint16_t port);

    std::uint16_t port() const noexcept { return port_; }
    /// Blocks; throws TransportError when the listener has been closed.
    TcpStream accept();
    void close();

  private:
    int fd_ = -1;
    std::uint16_t port_ = 0;
};

/// Reads one frame; returns nullopt on clean EOF at a frame boundary.
/// bytes_read, when given, receives the exact framing-layer byte count.
std::optional<wire::Frame> read_frame(TcpStream& stream, std::size_t* bytes_read = nullptr);

/// Writes one frame, returning its exact framing-layer byte count.
std::size_t write_frame(TcpStream& stream, const wire::Frame& frame);

}  // namespace kanon::net
