// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/chain/hash.hpp>
#include <routee/wire/service.hpp>
#include <routee/wire/views.hpp>

namespace routee::wire {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

Bytes error_frame(Status status, const std::string& message)
{
    return encode_frame(FrameType::error, encode_response(Response{status, message, {}}));
}

HubService::HubService(hub::Hub hub, crypto::KeyPair static_key)
    : hub_(std::move(hub)), static_key_(std::move(static_key))
{
}

void HubService::set_snapshot_sink(std::function<void(const Bytes&)> sink)
{
    std::lock_guard lock(mu_);
    snapshot_sink_ = std::move(sink);
}

uint64_t HubService::requests_handled() const
{
    std::lock_guard lock(mu_);
    return handled_;
}

void HubService::set_audit(std::function<void(const Request&, const Response&)> audit)
{
    std::lock_guard lock(mu_);
    audit_ = std::move(audit);
}

Bytes HubService::apply(const Request& req)
{
    const ByteView sig = req.signature;
    return std::visit(
        overloaded{
            [&](const AddUser& r) { return encode_address(hub_.add_user(r)); },
            [&](const AddDeposit& r) { return encode_address(hub_.add_deposit(r, sig)); },
            [&](const UpdateBoundary& r) { return encode_u64(hub_.update_boundary_block(r, sig)); },
            [&](const Payment& r) { return encode_payment_result(hub_.multi_hop_payment(r, sig)); },
            [&](const Settle& r) { return encode_u64(hub_.request_settlement(r, sig)); },
            [&](const QueryUser& r) { return encode_user(hub_.query_user(r, sig)); },
            [&](const QueryLatestBlock&) { return encode_latest(hub_.latest_block()); },
            [&](const QueryLedger&) { return encode_ledger(hub_.ledger_view()); },
            [&](const InsertBlock& r) { return encode_effects(hub_.insert_block(r, sig)); },
            [&](const Terminate& r) {
                hub_.terminate(r, sig);
                return Bytes{};
            },
            [&](const BuildSettlement& r) {
                hub_.authorize_host(r, sig);
                const hub::SettlementPlan* p = hub_.try_build_settlement();
                if (!p) p = hub_.outstanding_plan();
                return encode_plan(p ? std::optional(summarize(*p)) : std::nullopt);
            },
            [&](const GetPlan& r) {
                hub_.authorize_host(r, sig);
                const hub::SettlementPlan* p = hub_.outstanding_plan();
                return encode_plan(p ? std::optional(summarize(*p)) : std::nullopt);
            },
            [&](const TakeSnapshot& r) {
                hub_.authorize_host(r, sig);
                Bytes snap = hub_.snapshot();
                if (snapshot_sink_) snapshot_sink_(snap);
                return encode_receipt(SnapshotReceipt{sha256(snap), snap.size()});
            },
        },
        req.body);
}

Response HubService::dispatch(const Request& req)
{
    std::lock_guard lock(mu_);
    ++handled_;
    Response resp;
    try {
        resp = Response{Status::ok, {}, apply(req)};
    } catch (const ProtocolError& e) {
        resp = Response{e.status(), e.what(), {}};
    } catch (const std::exception& e) {
        resp = Response{Status::internal, e.what(), {}};
    }
    if (audit_) audit_(req, resp);
    return resp;
}

std::optional<Bytes> HubService::handle_frame(Connection& conn, ByteView raw)
{
    if (conn.closed) return std::nullopt;
    auto fail = [&](Status s, const std::string& msg) {
        conn.closed = true;
        if (conn.session) conn.session.reset();
        return error_frame(s, msg);
    };
    try {
        Frame frame = decode_frame(raw);
        switch (frame.type) {
        case FrameType::handshake_init: {
            if (conn.session) return fail(Status::handshake_failure, "session already established");
            auto res = hub_accept(static_key_, frame.payload);
            conn.session.emplace(std::move(res.session));
            return encode_frame(FrameType::handshake_ack, res.ack_payload);
        }
        case FrameType::envelope: {
            if (!conn.session) return fail(Status::session_error, "no session");
            const Bytes plain = conn.session->open(Envelope::decode(frame.payload));
            Response resp;
            try {
                resp = dispatch(decode_request(plain));
            } catch (const ProtocolError& e) {
                resp = Response{e.status(), e.what(), {}};
            }
            return encode_frame(FrameType::envelope, conn.session->seal(encode_response(resp)).encode());
        }
        default:
            return fail(Status::unknown_type, "unexpected frame type");
        }
    } catch (const ProtocolError& e) {
        return fail(e.status(), e.what());
    }
}

} // namespace routee::wire
