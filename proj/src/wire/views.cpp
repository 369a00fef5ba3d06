// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/wire/views.hpp>

namespace routee::wire {
namespace {

void put_opt(ByteWriter& w, const std::optional<uint64_t>& v)
{
    w.u8(v ? 1 : 0);
    if (v) w.u64(*v);
}

std::optional<uint64_t> get_opt(ByteReader& r)
{
    const uint8_t flag = r.u8();
    if (flag > 1) throw DecodeError("bad presence flag");
    if (!flag) return std::nullopt;
    return r.u64();
}

bool get_bool(ByteReader& r)
{
    const uint8_t b = r.u8();
    if (b > 1) throw DecodeError("bad bool");
    return b == 1;
}

template <typename F>
auto decoding(ByteView raw, F f)
{
    try {
        ByteReader r(raw);
        auto v = f(r);
        r.expect_end();
        return v;
    } catch (const DecodeError& e) {
        throw ProtocolError(Status::malformed_frame, e.what());
    }
}

} // namespace

PlanSummary summarize(const hub::SettlementPlan& plan)
{
    PlanSummary s;
    s.txid = plan.txid;
    s.transaction = plan.transaction;
    s.selected = plan.selected.size();
    s.inputs = plan.tx_inputs;
    s.outputs = plan.tx_outputs;
    s.size = plan.tx_size;
    s.fee = plan.tx_fee;
    s.s_amount = plan.s_amount;
    s.terminal = plan.terminal;
    s.built_at = plan.built_at;
    return s;
}

Bytes encode_address(const Address& a) { return Bytes(a.begin(), a.end()); }
Address decode_address(ByteView raw)
{
    return decoding(raw, [](ByteReader& r) { return r.array<20>(); });
}

Bytes encode_u64(uint64_t v)
{
    ByteWriter w;
    w.u64(v);
    return std::move(w).take();
}
uint64_t decode_u64(ByteView raw)
{
    return decoding(raw, [](ByteReader& r) { return r.u64(); });
}

Bytes encode_user(const hub::UserState& u)
{
    ByteWriter w;
    w.raw(u.user_address).var_bytes(u.public_key.encode()).u64(u.nonce).u64(u.balance);
    put_opt(w, u.max_source_block);
    put_opt(w, u.boundary_block);
    w.raw(u.settle_address);
    return std::move(w).take();
}

hub::UserState decode_user(ByteView raw)
{
    return decoding(raw, [](ByteReader& r) {
        hub::UserState u;
        u.user_address = r.array<20>();
        u.public_key = crypto::PublicKey::decode(r.var_bytes());
        u.nonce = r.u64();
        u.balance = r.u64();
        u.max_source_block = get_opt(r);
        u.boundary_block = get_opt(r);
        u.settle_address = r.array<20>();
        return u;
    });
}

Bytes encode_payment_result(const hub::PaymentResult& p)
{
    ByteWriter w;
    w.u32(static_cast<uint32_t>(p.accepted)).u64(p.debited).u64(p.routing_fees);
    return std::move(w).take();
}

hub::PaymentResult decode_payment_result(ByteView raw)
{
    return decoding(raw, [](ByteReader& r) {
        hub::PaymentResult p;
        p.accepted = r.u32();
        p.debited = r.u64();
        p.routing_fees = r.u64();
        return p;
    });
}

Bytes encode_latest(const hub::LatestBlock& b)
{
    ByteWriter w;
    w.u64(b.height).raw(b.hash);
    return std::move(w).take();
}

hub::LatestBlock decode_latest(ByteView raw)
{
    return decoding(raw, [](ByteReader& r) {
        hub::LatestBlock b;
        b.height = r.u64();
        b.hash = r.array<32>();
        return b;
    });
}

Bytes encode_ledger(const hub::LedgerView& v)
{
    const auto& l = v.ledger;
    ByteWriter w;
    w.u64(l.rf_pending).u64(l.rf_confirmed).u64(l.rf_withdrawn).u64(l.rf_spent_on_fees).u64(l.rf_inflight);
    w.u64(l.fee_reserve).u64(l.min_routing_fee).var_bytes(l.host_public_key.encode()).raw(l.host_settle_address);
    w.u64(l.host_nonce).u64(l.total_deposited).u64(l.total_routing_fees).u64(l.total_settled);
    w.u64(l.total_host_paid).u64(l.total_tx_fees);
    w.u64(v.fee_avg).u64(v.total_balances).u64(v.queued_total);
    w.u64(v.users).u64(v.pending_deposits).u64(v.owned_deposits).u64(v.queue_length).u64(v.confirmed_plans);
    w.u8(v.plan_outstanding).u8(v.terminated).u64(v.tip_height);
    return std::move(w).take();
}

hub::LedgerView decode_ledger(ByteView raw)
{
    return decoding(raw, [](ByteReader& r) {
        hub::LedgerView v;
        auto& l = v.ledger;
        l.rf_pending = r.u64();
        l.rf_confirmed = r.u64();
        l.rf_withdrawn = r.u64();
        l.rf_spent_on_fees = r.u64();
        l.rf_inflight = r.u64();
        l.fee_reserve = r.u64();
        l.min_routing_fee = r.u64();
        l.host_public_key = crypto::PublicKey::decode(r.var_bytes());
        l.host_settle_address = r.array<20>();
        l.host_nonce = r.u64();
        l.total_deposited = r.u64();
        l.total_routing_fees = r.u64();
        l.total_settled = r.u64();
        l.total_host_paid = r.u64();
        l.total_tx_fees = r.u64();
        v.fee_avg = r.u64();
        v.total_balances = r.u64();
        v.queued_total = r.u64();
        v.users = r.u64();
        v.pending_deposits = r.u64();
        v.owned_deposits = r.u64();
        v.queue_length = r.u64();
        v.confirmed_plans = r.u64();
        v.plan_outstanding = get_bool(r);
        v.terminated = get_bool(r);
        v.tip_height = r.u64();
        return v;
    });
}

Bytes encode_effects(const hub::InsertEffects& e)
{
    ByteWriter w;
    w.u64(e.height).u64(e.fee_avg).u32(static_cast<uint32_t>(e.credited.size()));
    for (const auto& c : e.credited)
        w.raw(c.beneficiary).raw(c.outpoint.txid).u32(c.outpoint.vout).u64(c.d_amount).u64(c.b_increase).u64(c.fare);
    w.u32(static_cast<uint32_t>(e.expired)).u8(e.settlement_confirmed).u64(e.rf_confirmed_gain).u8(e.plan_built);
    return std::move(w).take();
}

hub::InsertEffects decode_effects(ByteView raw)
{
    return decoding(raw, [](ByteReader& r) {
        hub::InsertEffects e;
        e.height = r.u64();
        e.fee_avg = r.u64();
        const uint32_t n = r.u32();
        if (n > r.remaining() / 76) throw DecodeError("credited count exceeds payload");
        for (uint32_t i = 0; i < n; ++i) {
            hub::CreditedDeposit c;
            c.beneficiary = r.array<20>();
            c.outpoint.txid = r.array<32>();
            c.outpoint.vout = r.u32();
            c.d_amount = r.u64();
            c.b_increase = r.u64();
            c.fare = r.u64();
            e.credited.push_back(c);
        }
        e.expired = r.u32();
        e.settlement_confirmed = get_bool(r);
        e.rf_confirmed_gain = r.u64();
        e.plan_built = get_bool(r);
        return e;
    });
}

Bytes encode_plan(const std::optional<PlanSummary>& p)
{
    ByteWriter w;
    w.u8(p ? 1 : 0);
    if (p) {
        const Bytes tx = serialize_tx(p->transaction);
        w.raw(p->txid).u32(static_cast<uint32_t>(tx.size())).raw(tx);
        w.u64(p->selected).u64(p->inputs).u64(p->outputs).u64(p->size).u64(p->fee).u64(p->s_amount);
        w.u8(p->terminal).u64(p->built_at);
    }
    return std::move(w).take();
}

std::optional<PlanSummary> decode_plan(ByteView raw)
{
    return decoding(raw, [](ByteReader& r) -> std::optional<PlanSummary> {
        if (!get_bool(r)) return std::nullopt;
        PlanSummary p;
        p.txid = r.array<32>();
        const uint32_t len = r.u32();
        p.transaction = parse_tx(r.raw(len));
        p.selected = r.u64();
        p.inputs = r.u64();
        p.outputs = r.u64();
        p.size = r.u64();
        p.fee = r.u64();
        p.s_amount = r.u64();
        p.terminal = get_bool(r);
        p.built_at = r.u64();
        return p;
    });
}

Bytes encode_receipt(const SnapshotReceipt& s)
{
    ByteWriter w;
    w.raw(s.digest).u64(s.size);
    return std::move(w).take();
}

SnapshotReceipt decode_receipt(ByteView raw)
{
    return decoding(raw, [](ByteReader& r) {
        SnapshotReceipt s;
        s.digest = r.array<32>();
        s.size = r.u64();
        return s;
    });
}

} // namespace routee::wire
