#include "kanon/server.hpp"

#include <mutex>

namespace kanon::srv {

using wire::ErrorCode;
using wire::ErrorMsg;
using wire::Frame;
using wire::MsgType;

Server::Server(ServerConfig config, index::InvertedIndex index)
    : config_(std::move(config)), index_(std::move(index)) {
    params_.backend = config_.backend;
    params_.k = config_.k;
    params_.p = index_.p();
    params_.modulus_bits = config_.modulus_bits;
    params_.validate();
}

Server::~Server() { stop(); }

void Server::start(const std::string& host, std::uint16_t port) {
    listener_ = net::TcpListener::bind(host, port);
    accept_thread_ = std::thread([this] { accept_loop(); });
}

void Server::run(const std::string& host, std::uint16_t port) {
    listener_ = net::TcpListener::bind(host, port);
    accept_loop();
}

void Server::stop() {
    stopping_ = true;
    listener_.close();
    if (accept_thread_.joinable()) accept_thread_.join();
    std::vector<std::thread> workers;
    std::vector<std::shared_ptr<net::TcpStream>> connections;
    {
        std::lock_guard lock(workers_mutex_);
        workers.swap(workers_);
        connections.swap(connections_);
    }
    // Unblock any worker still waiting on its socket, then reap.
    for (auto& conn : connections) conn->shutdown_rw();
    for (std::thread& w : workers)
        if (w.joinable()) w.join();
}

void Server::accept_loop() {
    for (;;) {
        auto stream = std::make_shared<net::TcpStream>();
        try {
            *stream = listener_.accept();
        } catch (const TransportError&) {
            return;  // listener closed
        }
        if (stopping_) return;
        const std::uint64_t conn_id = next_conn_id_++;
        std::lock_guard lock(workers_mutex_);
        connections_.push_back(stream);
        workers_.emplace_back([this, conn_id, stream] { handle_connection(*stream, conn_id); });
    }
}

namespace {

void send_error(net::TcpStream& stream, ErrorCode code, const std::string& message) {
    try {
        net::write_frame(stream, wire::encode(ErrorMsg{static_cast<std::uint16_t>(code), message}));
    } catch (const TransportError&) {
        // peer is gone; nothing to report to
    }
}

}  // namespace

void Server::handle_connection(net::TcpStream& stream, std::uint64_t conn_id) {
    std::unique_ptr<RandomSource> rng;
    if (config_.rng_seed)
        rng = std::make_unique<SeededRng>(*config_.rng_seed + conn_id);
    else
        rng = std::make_unique<SystemRng>();

    bool greeted = false;
    try {
        for (;;) {
            std::optional<Frame> frame;
            try {
                frame = net::read_frame(stream);
            } catch (const net::OversizePayload&) {
                send_error(stream, ErrorCode::oversize_payload, "payload exceeds size cap");
                return;
            }
            if (!frame) return;  // clean close
            if (frame->version != wire::kVersion) {
                send_error(stream, ErrorCode::version_mismatch,
                           "protocol version " + std::to_string(frame->version) + " unsupported");
                return;
            }
            if (frame->msg_type < 0x01 || frame->msg_type > 0x05) {
                send_error(stream, ErrorCode::unknown_msg_type,
                           "unknown message type " + std::to_string(frame->msg_type));
                return;
            }
            const auto type = static_cast<MsgType>(frame->msg_type);
            if (!greeted) {
                if (type != MsgType::hello) {
                    send_error(stream, ErrorCode::bad_request, "expected HELLO");
                    return;
                }
                const wire::HelloMsg hello = wire::parse_hello(*frame);
                if (hello.backend != config_.backend || hello.modulus_bits != config_.modulus_bits) {
                    send_error(stream, ErrorCode::unsupported_config,
                               "server runs backend " + std::string(backend_name(config_.backend)) +
                                   " at " + std::to_string(config_.modulus_bits) + " bits");
                    return;
                }
                wire::ManifestMsg manifest;
                manifest.p = static_cast<std::uint32_t>(index_.p());
                manifest.k = static_cast<std::uint32_t>(config_.k);
                manifest.terms = index_.terms();
                manifest.public_elements =
                    backend_for(config_.backend).public_elements(config_.public_key);
                net::write_frame(stream, wire::encode(manifest));
                greeted = true;
                continue;
            }
            switch (type) {
                case MsgType::query: {
                    try {
                        const wire::QueryMsg q = wire::parse_query(*frame);
                        const PostingBlock block = index::get_block(index_, q.block_id, config_.k);
                        protocol::SelectorQuery query{q.block_id, q.ciphertexts};
                        const protocol::EncryptedResponse response =
                            protocol::evaluate_query(params_, config_.public_key, query, block, *rng);
                        net::write_frame(stream, wire::encode(wire::ResponseMsg{response.ciphertexts}));
                    } catch (const Error& e) {
                        // Bad block id, wrong k, out-of-space ciphertexts: report
                        // and keep the session alive.
                        send_error(stream, ErrorCode::bad_request, e.what());
                    }
                    break;
                }
                case MsgType::hello:
                    send_error(stream, ErrorCode::bad_request, "session already greeted");
                    return;
                default:
                    send_error(stream, ErrorCode::bad_request, "unexpected message type");
                    return;
            }
        }
    } catch (const TransportError&) {
        // drop the connection
    }
}

}  // namespace kanon::srv
