// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <routee/hub/hub.hpp>
#include <routee/wire/frame.hpp>
#include <routee/wire/session.hpp>

#include <functional>
#include <mutex>
#include <optional>

namespace routee::wire {

/// Serialises access to one Hub and speaks the session protocol on its behalf.
class HubService {
public:
    HubService(hub::Hub hub, crypto::KeyPair static_key);

    /// Per-connection state; a connection carries at most one session.
    struct Connection {
        std::optional<Session> session;
        bool closed = false;
    };

    /// Handles one raw frame and returns the reply frame, if any. Session failures close the
    /// connection with an error frame.
    std::optional<Bytes> handle_frame(Connection& conn, ByteView raw);

    /// Applies one decoded request. Errors come back as a non-ok status.
    Response dispatch(const Request& req);

    const crypto::PublicKey& public_key() const { return static_key_.pub; }

    /// Called with the snapshot bytes on take-snapshot requests.
    void set_snapshot_sink(std::function<void(const Bytes&)> sink);

    template <typename F>
    auto with_hub(F f) const
    {
        std::lock_guard lock(mu_);
        return f(hub_);
    }

    uint64_t requests_handled() const;

    /// Observer invoked for every dispatched request, under the service lock.
    void set_audit(std::function<void(const Request&, const Response&)> audit);

private:
    Bytes apply(const Request& req);

    mutable std::mutex mu_;
    hub::Hub hub_;
    crypto::KeyPair static_key_;
    std::function<void(const Bytes&)> snapshot_sink_;
    std::function<void(const Request&, const Response&)> audit_;
    uint64_t handled_ = 0;
};

Bytes error_frame(Status status, const std::string& message);

} // namespace routee::wire
