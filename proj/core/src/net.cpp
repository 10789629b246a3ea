#include "kanon/net.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace kanon::net {
namespace {

[[noreturn]] void raise_errno(const std::string& what) {
    throw TransportError(what + ": " + std::strerror(errno));
}

}  // namespace

TcpStream::TcpStream(TcpStream&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }

TcpStream& TcpStream::operator=(TcpStream&& other) noexcept {
    if (this != &other) {
        close();
        fd_ = other.fd_;
        other.fd_ = -1;
    }
    return *this;
}

TcpStream::~TcpStream() { close(); }

void TcpStream::close() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

void TcpStream::shutdown_rw() noexcept {
    if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

TcpStream TcpStream::connect(const std::string& host, std::uint16_t port) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    const std::string service = std::to_string(port);
    if (int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &res); rc != 0)
        throw TransportError("resolve " + host + ": " + gai_strerror(rc));
    int fd = -1;
    for (addrinfo* ai = res; ai; ai = ai->ai_next) {
        fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) continue;
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(res);
    if (fd < 0) throw TransportError("cannot connect to " + host + ":" + service);
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    return TcpStream(fd);
}

void TcpStream::write_all(std::span<const std::uint8_t> data) {
    if (fd_ < 0) throw TransportError("write on closed stream");
    std::size_t off = 0;
    while (off < data.size()) {
        const ssize_t n = ::send(fd_, data.data() + off, data.size() - off, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            raise_errno("send");
        }
        off += static_cast<std::size_t>(n);
    }
}

bool TcpStream::read_exact_or_eof(std::span<std::uint8_t> data) {
    if (fd_ < 0) throw TransportError("read on closed stream");
    std::size_t off = 0;
    while (off < data.size()) {
        const ssize_t n = ::recv(fd_, data.data() + off, data.size() - off, 0);
        if (n < 0) {
            if (errno == EINTR) continue;
            raise_errno("recv");
        }
        if (n == 0) {
            if (off == 0) return false;
            throw TransportError("connection closed mid-message");
        }
        off += static_cast<std::size_t>(n);
    }
    return true;
}

void TcpStream::read_exact(std::span<std::uint8_t> data) {
    if (!read_exact_or_eof(data)) throw TransportError("unexpected end of stream");
}

TcpListener::TcpListener(TcpListener&& other) noexcept : fd_(other.fd_), port_(other.port_) {
    other.fd_ = -1;
    other.port_ = 0;
}

TcpListener& TcpListener::operator=(TcpListener&& other) noexcept {
    if (this != &other) {
        close();
        fd_ = other.fd_;
        port_ = other.port_;
        other.fd_ = -1;
        other.port_ = 0;
    }
    return *this;
}

TcpListener::~TcpListener() { close(); }

void TcpListener::close() {
    if (fd_ >= 0) {
        ::shutdown(fd_, SHUT_RDWR);
        ::close(fd_);
        fd_ = -1;
    }
}

TcpListener TcpListener::bind(const std::string& host, std::uint16_t port) {
    TcpListener listener;
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
        throw TransportError("bad listen address " + host);
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) raise_errno("socket");
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
        ::close(fd);
        raise_errno("bind " + host + ":" + std::to_string(port));
    }
    if (::listen(fd, 16) != 0) {
        ::close(fd);
        raise_errno("listen");
    }
    socklen_t len = sizeof addr;
    if (::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len) != 0) {
        ::close(fd);
        raise_errno("getsockname");
    }
    listener.fd_ = fd;
    listener.port_ = ntohs(addr.sin_port);
    return listener;
}

TcpStream TcpListener::accept() {
    if (fd_ < 0) throw TransportError("listener closed");
    const int fd = ::accept(fd_, nullptr, nullptr);
    if (fd < 0) raise_errno("accept");
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    return TcpStream(fd);
}

std::optional<wire::Frame> read_frame(TcpStream& stream, std::size_t* bytes_read) {
    std::uint8_t header[wire::kFrameHeaderSize];
    if (!stream.read_exact_or_eof(header)) return std::nullopt;
    if (std::memcmp(header, "KAPS", 4) != 0) throw TransportError("bad frame magic");
    wire::Frame frame;
    frame.version = header[4];
    frame.msg_type = header[5];
    std::uint32_t len = 0;
    for (int i = 0; i < 4; ++i) len = len << 8 | header[6 + i];
    if (len > wire::kMaxPayload)
        throw OversizePayload("payload of " + std::to_string(len) + " bytes exceeds cap");
    frame.payload.resize(len);
    stream.read_exact(frame.payload);
    if (bytes_read) *bytes_read = wire::kFrameHeaderSize + len;
    return frame;
}

std::size_t write_frame(TcpStream& stream, const wire::Frame& frame) {
    const std::vector<std::uint8_t> encoded = wire::encode_frame(frame);
    stream.write_all(encoded);
    return encoded.size();
}

}  // namespace kanon::net
