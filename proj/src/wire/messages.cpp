// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/wire/messages.hpp>

namespace routee::wire {
namespace {

constexpr std::string_view kSigningDomain = "RouTEE/request/v1";

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void write_body(ByteWriter& w, const RequestBody& body)
{
    w.u8(static_cast<uint8_t>(type_of(body)));
    std::visit(Overloaded{
                   [&](const AddUser& m) { w.var_bytes(m.public_key.encode()).raw(m.settle_address); },
                   [&](const AddDeposit& m) { w.raw(m.user).u64(m.nonce); },
                   [&](const UpdateBoundary& m) { w.raw(m.user).u64(m.nonce).u64(m.block_number).raw(m.block_hash); },
                   [&](const Payment& m) {
                       if (m.batch.size() > 0xffff) throw std::length_error("payment batch too large");
                       w.raw(m.sender).u64(m.nonce).u16(static_cast<uint16_t>(m.batch.size()));
                       for (const PaymentEntry& e : m.batch) w.raw(e.receiver).u64(e.amount).u64(e.routing_fee);
                   },
                   [&](const Settle& m) { w.raw(m.user).u64(m.nonce).u64(m.amount).u64(m.fee); },
                   [&](const QueryUser& m) { w.raw(m.user).u64(m.nonce); },
                   [&](const QueryLatestBlock&) {},
                   [&](const QueryLedger&) {},
                   [&](const InsertBlock& m) { w.u64(m.host_nonce).raw(serialize_block(m.block)); },
                   [&](const Terminate& m) { w.u64(m.host_nonce); },
                   [&](const BuildSettlement& m) { w.u64(m.host_nonce); },
                   [&](const GetPlan& m) { w.u64(m.host_nonce); },
                   [&](const TakeSnapshot& m) { w.u64(m.host_nonce); },
               },
               body);
}

RequestBody read_body(ByteReader& r)
{
    const uint8_t tag = r.u8();
    switch (static_cast<MessageType>(tag)) {
    case MessageType::add_user: {
        AddUser m;
        Bytes pk = r.var_bytes();
        m.public_key = crypto::PublicKey::decode(pk);
        m.settle_address = r.array<20>();
        return m;
    }
    case MessageType::add_deposit: {
        AddDeposit m;
        m.user = r.array<20>();
        m.nonce = r.u64();
        return m;
    }
    case MessageType::update_boundary: {
        UpdateBoundary m;
        m.user = r.array<20>();
        m.nonce = r.u64();
        m.block_number = r.u64();
        m.block_hash = r.array<32>();
        return m;
    }
    case MessageType::payment: {
        Payment m;
        m.sender = r.array<20>();
        m.nonce = r.u64();
        uint16_t n = r.u16();
        m.batch.resize(n);
        for (PaymentEntry& e : m.batch) {
            e.receiver = r.array<20>();
            e.amount = r.u64();
            e.routing_fee = r.u64();
        }
        return m;
    }
    case MessageType::settle: {
        Settle m;
        m.user = r.array<20>();
        m.nonce = r.u64();
        m.amount = r.u64();
        m.fee = r.u64();
        return m;
    }
    case MessageType::query_user: {
        QueryUser m;
        m.user = r.array<20>();
        m.nonce = r.u64();
        return m;
    }
    case MessageType::query_latest_block: return QueryLatestBlock{};
    case MessageType::query_ledger: return QueryLedger{};
    case MessageType::insert_block: {
        InsertBlock m;
        m.host_nonce = r.u64();
        m.block = parse_block(r);
        return m;
    }
    case MessageType::terminate: return Terminate{r.u64()};
    case MessageType::build_settlement: return BuildSettlement{r.u64()};
    case MessageType::get_plan: return GetPlan{r.u64()};
    case MessageType::take_snapshot: return TakeSnapshot{r.u64()};
    default: break;
    }
    throw ProtocolError(Status::unknown_type, "unknown message type " + std::to_string(tag));
}

} // namespace

std::string_view to_string(Status s)
{
    switch (s) {
    case Status::ok: return "ok";
    case Status::auth_failure: return "auth-failure";
    case Status::stale_request: return "stale-request";
    case Status::already_registered: return "already-registered";
    case Status::unknown_user: return "unknown-user";
    case Status::not_in_chain: return "not-in-chain";
    case Status::monotonicity_violation: return "monotonicity-violation";
    case Status::insufficient_balance: return "insufficient-balance";
    case Status::receiver_not_ready: return "receiver-not-ready";
    case Status::fee_below_minimum: return "fee-below-minimum";
    case Status::fee_too_low: return "fee-too-low";
    case Status::invalid_amount: return "invalid-amount";
    case Status::host_auth_failure: return "host-auth-failure";
    case Status::not_on_tip: return "not-on-tip";
    case Status::invalid_block: return "invalid-block";
    case Status::terminated: return "terminated";
    case Status::not_yet: return "not-yet";
    case Status::malformed_frame: return "malformed-frame";
    case Status::unknown_type: return "unknown-type";
    case Status::init_failure: return "init-failure";
    case Status::handshake_failure: return "handshake-failure";
    case Status::session_error: return "session-error";
    case Status::io_error: return "io-error";
    case Status::internal: return "internal";
    }
    return "unknown";
}

MessageType type_of(const RequestBody& body)
{
    return std::visit(Overloaded{
                          [](const AddUser&) { return MessageType::add_user; },
                          [](const AddDeposit&) { return MessageType::add_deposit; },
                          [](const UpdateBoundary&) { return MessageType::update_boundary; },
                          [](const Payment&) { return MessageType::payment; },
                          [](const Settle&) { return MessageType::settle; },
                          [](const QueryUser&) { return MessageType::query_user; },
                          [](const QueryLatestBlock&) { return MessageType::query_latest_block; },
                          [](const QueryLedger&) { return MessageType::query_ledger; },
                          [](const InsertBlock&) { return MessageType::insert_block; },
                          [](const Terminate&) { return MessageType::terminate; },
                          [](const BuildSettlement&) { return MessageType::build_settlement; },
                          [](const GetPlan&) { return MessageType::get_plan; },
                          [](const TakeSnapshot&) { return MessageType::take_snapshot; },
                      },
                      body);
}

bool requires_user_signature(const RequestBody& body)
{
    return std::holds_alternative<AddDeposit>(body) || std::holds_alternative<UpdateBoundary>(body) ||
           std::holds_alternative<Payment>(body) || std::holds_alternative<Settle>(body) ||
           std::holds_alternative<QueryUser>(body);
}

bool requires_host_signature(const RequestBody& body)
{
    return std::holds_alternative<InsertBlock>(body) || std::holds_alternative<Terminate>(body) ||
           std::holds_alternative<BuildSettlement>(body) || std::holds_alternative<GetPlan>(body) ||
           std::holds_alternative<TakeSnapshot>(body);
}

Bytes encode_body(const RequestBody& body)
{
    ByteWriter w;
    write_body(w, body);
    return std::move(w).take();
}

Bytes signing_bytes(const RequestBody& body)
{
    ByteWriter w;
    w.str(kSigningDomain);
    write_body(w, body);
    return std::move(w).take();
}

Bytes encode_request(const Request& request)
{
    ByteWriter w;
    write_body(w, request.body);
    w.var_bytes(request.signature);
    return std::move(w).take();
}

Request decode_request(ByteView raw)
{
    try {
        ByteReader r(raw);
        Request req;
        req.body = read_body(r);
        req.signature = r.var_bytes();
        r.expect_end();
        return req;
    } catch (const DecodeError& e) {
        throw ProtocolError(Status::malformed_frame, e.what());
    } catch (const ChainError& e) {
        throw ProtocolError(Status::malformed_frame, e.what());
    }
}

Request make_signed(RequestBody body, const crypto::KeyPair& key)
{
    Request req;
    req.signature = crypto::sign(key, signing_bytes(body));
    req.body = std::move(body);
    return req;
}

Bytes encode_response(const Response& r)
{
    ByteWriter w;
    w.u8(static_cast<uint8_t>(MessageType::response)).u16(static_cast<uint16_t>(r.status)).str(r.message);
    w.u32(static_cast<uint32_t>(r.payload.size())).raw(r.payload);
    return std::move(w).take();
}

const Response& expect_ok(const Response& r)
{
    if (r.status != Status::ok) throw ProtocolError(r.status, r.message);
    return r;
}

Response decode_response(ByteView raw)
{
    try {
        ByteReader r(raw);
        if (r.u8() != static_cast<uint8_t>(MessageType::response)) throw ProtocolError(Status::unknown_type, "not a response");
        Response out;
        out.status = static_cast<Status>(r.u16());
        out.message = r.str();
        uint32_t n = r.u32();
        auto p = r.raw(n);
        out.payload.assign(p.begin(), p.end());
        r.expect_end();
        return out;
    } catch (const DecodeError& e) {
        throw ProtocolError(Status::malformed_frame, e.what());
    }
}

} // namespace routee::wire
