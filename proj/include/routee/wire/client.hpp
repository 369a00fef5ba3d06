// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <routee/wire/service.hpp>
#include <routee/wire/transport.hpp>

#include <deque>

namespace routee::wire {

/// Channel straight into an in-process HubService, one connection per channel.
class LoopbackChannel final : public FrameChannel {
public:
    explicit LoopbackChannel(HubService& service) : service_(service) {}
    void send(const Bytes& raw) override;
    Bytes receive() override;

private:
    HubService& service_;
    HubService::Connection conn_;
    std::deque<Bytes> inbox_;
};

/// Session client: handshakes against the hub's static key, then exchanges sealed requests.
class HubClient {
public:
    HubClient(FrameChannel& channel, crypto::PublicKey hub_key);

    void handshake();
    /// Sends one request and waits for its response. A session failure reported by the hub
    /// comes back as a response with that status and leaves the client disconnected.
    Response call(const Request& req);
    bool connected() const { return session_.has_value(); }

private:
    FrameChannel& channel_;
    crypto::PublicKey hub_key_;
    std::optional<Session> session_;
};

} // namespace routee::wire
