// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <routee/wire/frame.hpp>

#include <functional>
#include <memory>
#include <string>

namespace routee::wire {

/// Bidirectional frame pipe. Errors surface as ProtocolError(io_error).
class FrameChannel {
public:
    virtual ~FrameChannel() = default;
    virtual void send(const Bytes& raw_frame) = 0;
    virtual Bytes receive() = 0;
};

class ConnectionHandler {
public:
    virtual ~ConnectionHandler() = default;
    /// Reply frame for `raw`, or nothing.
    virtual std::optional<Bytes> on_frame(ByteView raw) = 0;
    /// Once true, the server closes the connection after sending the pending reply.
    virtual bool closed() const { return false; }
};

using HandlerFactory = std::function<std::unique_ptr<ConnectionHandler>()>;

std::unique_ptr<FrameChannel> tcp_connect(const std::string& host, uint16_t port);

/// Thread-per-connection TCP frame server.
class FrameServer {
public:
    FrameServer(const std::string& bind_address, uint16_t port, HandlerFactory factory);
    ~FrameServer();
    FrameServer(const FrameServer&) = delete;
    FrameServer& operator=(const FrameServer&) = delete;

    /// Bound port (useful when constructed with port 0).
    uint16_t port() const;
    void start();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace routee::wire
