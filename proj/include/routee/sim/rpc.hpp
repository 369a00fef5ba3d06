// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <routee/light/light_client.hpp>
#include <routee/sim/node.hpp>
#include <routee/wire/transport.hpp>

#include <mutex>

// Plain-framed simchain protocol. Payloads:
//   header-request {from u64, count u16}      -> header-response {count x 80-byte headers}
//   get-block {height u64}                    -> block-response {canonical block}
//   submit-tx {canonical tx}                  -> submit-result {u8 accepted, str reason, txid}
//   tip-request {}                            -> tip-response {height u64, hash}
//   mine {count u16}                          -> tip-response
//   faucet {address, amount u64, fee u64}     -> submit-result
// Failures answer with an error frame carrying an encoded Response.

namespace routee::sim {

struct SubmitResult {
    bool accepted = false;
    std::string reason;
    Hash256 txid{};
};

struct TipInfo {
    Height height = 0;
    Hash256 hash{};
};

/// Serialises access to a SimNode for concurrent connections.
class SimService {
public:
    explicit SimService(SimNode& node) : node_(node) {}

    std::optional<Bytes> handle_frame(ByteView raw);
    /// One handler per connection, all sharing this service.
    wire::HandlerFactory handler_factory();

    template <typename F>
    auto with_node(F f)
    {
        std::lock_guard lock(mu_);
        return f(node_);
    }

private:
    std::mutex mu_;
    SimNode& node_;
};

class SimClient {
public:
    explicit SimClient(wire::FrameChannel& channel) : channel_(channel) {}

    TipInfo tip();
    std::vector<BlockHeader> headers(Height from, uint16_t count);
    Block block(Height height);
    SubmitResult submit(const Transaction& tx);
    TipInfo mine(uint16_t count);
    SubmitResult faucet(const Address& to, Amount amount, Amount fee);

private:
    wire::Frame roundtrip(wire::FrameType type, ByteView payload, wire::FrameType expect);

    wire::FrameChannel& channel_;
};

/// Header source backed by a simchain peer reached over a frame channel.
class RpcSource final : public light::HeaderSource {
public:
    RpcSource(wire::FrameChannel& channel, std::string name) : client_(channel), name_(std::move(name)) {}
    std::string name() const override { return name_; }
    Height tip_height() override { return client_.tip().height; }
    std::vector<BlockHeader> fetch(Height from, uint16_t count) override { return client_.headers(from, count); }

private:
    SimClient client_;
    std::string name_;
};

} // namespace routee::sim
