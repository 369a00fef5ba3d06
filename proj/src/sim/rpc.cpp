// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/sim/rpc.hpp>
#include <routee/wire/messages.hpp>
#include <routee/wire/service.hpp>

namespace routee::sim {
namespace {

using wire::FrameType;
using wire::ProtocolError;
using wire::Status;

Bytes encode_submit(const SubmitResult& s)
{
    ByteWriter w;
    w.u8(s.accepted).str(s.reason).raw(s.txid);
    return std::move(w).take();
}

Bytes encode_tip(const SimNode& node)
{
    ByteWriter w;
    w.u64(node.tip_height()).raw(node.headers().tip_hash());
    return std::move(w).take();
}

class SimHandler final : public wire::ConnectionHandler {
public:
    explicit SimHandler(SimService& service) : service_(service) {}
    std::optional<Bytes> on_frame(ByteView raw) override { return service_.handle_frame(raw); }

private:
    SimService& service_;
};

} // namespace

wire::HandlerFactory SimService::handler_factory()
{
    return [this] { return std::make_unique<SimHandler>(*this); };
}

std::optional<Bytes> SimService::handle_frame(ByteView raw)
{
    try {
        wire::Frame f = wire::decode_frame(raw);
        ByteReader r(f.payload);
        std::lock_guard lock(mu_);
        switch (f.type) {
        case FrameType::header_request: {
            const Height from = r.u64();
            const uint16_t count = r.u16();
            r.expect_end();
            ByteWriter w;
            const auto& chain = node_.headers();
            for (Height h = from; h < from + count && chain.contains_height(h); ++h) w.raw(serialize_header(chain.at(h)));
            return wire::encode_frame(FrameType::header_response, w.data());
        }
        case FrameType::get_block: {
            const Height h = r.u64();
            r.expect_end();
            if (h > node_.tip_height()) throw ProtocolError(Status::not_in_chain, "no block at height " + std::to_string(h));
            return wire::encode_frame(FrameType::block_response, serialize_block(node_.block_at(h)));
        }
        case FrameType::submit_tx: {
            const Transaction tx = parse_tx(r);
            r.expect_end();
            const ValidationResult v = node_.submit_tx(tx);
            return wire::encode_frame(FrameType::submit_result,
                                      encode_submit({v.ok(), v.ok() ? "" : std::string(to_string(v.reason)), tx_id(tx)}));
        }
        case FrameType::tip_request:
            r.expect_end();
            return wire::encode_frame(FrameType::tip_response, encode_tip(node_));
        case FrameType::mine: {
            const uint16_t count = r.u16();
            r.expect_end();
            for (uint16_t i = 0; i < count; ++i) node_.mine_pending();
            return wire::encode_frame(FrameType::tip_response, encode_tip(node_));
        }
        case FrameType::faucet: {
            const Address to = r.array<20>();
            const Amount amount = r.u64();
            const Amount fee = r.u64();
            r.expect_end();
            SubmitResult s;
            try {
                const Transaction tx = node_.pay_from_miner(to, amount, fee);
                const ValidationResult v = node_.submit_tx(tx);
                s = {v.ok(), v.ok() ? "" : std::string(to_string(v.reason)), tx_id(tx)};
            } catch (const std::exception& e) {
                s.reason = e.what();
            }
            return wire::encode_frame(FrameType::submit_result, encode_submit(s));
        }
        default:
            throw ProtocolError(Status::unknown_type, "unsupported simchain frame");
        }
    } catch (const ProtocolError& e) {
        return wire::error_frame(e.status(), e.what());
    } catch (const DecodeError& e) {
        return wire::error_frame(Status::malformed_frame, e.what());
    } catch (const std::exception& e) {
        return wire::error_frame(Status::internal, e.what());
    }
}

wire::Frame SimClient::roundtrip(FrameType type, ByteView payload, FrameType expect)
{
    channel_.send(wire::encode_frame(type, payload));
    wire::Frame f = wire::decode_frame(channel_.receive());
    if (f.type == FrameType::error) {
        wire::Response resp = wire::decode_response(f.payload);
        throw ProtocolError(resp.status, resp.message);
    }
    if (f.type != expect) throw ProtocolError(Status::unknown_type, "unexpected simchain reply");
    return f;
}

static TipInfo decode_tip(ByteView raw)
{
    ByteReader r(raw);
    TipInfo t;
    t.height = r.u64();
    t.hash = r.array<32>();
    r.expect_end();
    return t;
}

static SubmitResult decode_submit(ByteView raw)
{
    ByteReader r(raw);
    SubmitResult s;
    s.accepted = r.u8() != 0;
    s.reason = r.str();
    s.txid = r.array<32>();
    r.expect_end();
    return s;
}

TipInfo SimClient::tip() { return decode_tip(roundtrip(FrameType::tip_request, {}, FrameType::tip_response).payload); }

std::vector<BlockHeader> SimClient::headers(Height from, uint16_t count)
{
    ByteWriter w;
    w.u64(from).u16(count);
    wire::Frame f = roundtrip(FrameType::header_request, w.data(), FrameType::header_response);
    if (f.payload.size() % BlockHeader::kSize != 0 || f.payload.size() / BlockHeader::kSize > count)
        throw ProtocolError(Status::malformed_frame, "bad header-response length");
    std::vector<BlockHeader> out;
    for (size_t off = 0; off < f.payload.size(); off += BlockHeader::kSize)
        out.push_back(parse_header(ByteView(f.payload).subspan(off, BlockHeader::kSize)));
    return out;
}

Block SimClient::block(Height height)
{
    ByteWriter w;
    w.u64(height);
    return parse_block(roundtrip(FrameType::get_block, w.data(), FrameType::block_response).payload);
}

SubmitResult SimClient::submit(const Transaction& tx)
{
    return decode_submit(roundtrip(FrameType::submit_tx, serialize_tx(tx), FrameType::submit_result).payload);
}

TipInfo SimClient::mine(uint16_t count)
{
    ByteWriter w;
    w.u16(count);
    return decode_tip(roundtrip(FrameType::mine, w.data(), FrameType::tip_response).payload);
}

SubmitResult SimClient::faucet(const Address& to, Amount amount, Amount fee)
{
    ByteWriter w;
    w.raw(to).u64(amount).u64(fee);
    return decode_submit(roundtrip(FrameType::faucet, w.data(), FrameType::submit_result).payload);
}

} // namespace routee::sim
