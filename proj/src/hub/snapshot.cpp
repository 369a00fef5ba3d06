// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/hub/hub.hpp>

namespace routee::hub {
namespace {

constexpr std::array<uint8_t, 4> kMagic{'R', 'T', 'E', 'E'};
constexpr uint32_t kVersion = 1;

void put_opt(ByteWriter& w, const std::optional<uint64_t>& v)
{
    w.u8(v ? 1 : 0).u64(v.value_or(0));
}

std::optional<uint64_t> get_opt(ByteReader& r)
{
    const uint8_t flag = r.u8();
    const uint64_t v = r.u64();
    if (flag > 1) throw DecodeError("bad optional flag");
    return flag ? std::optional<uint64_t>(v) : std::nullopt;
}

void put_blob(ByteWriter& w, ByteView b)
{
    w.u32(static_cast<uint32_t>(b.size())).raw(b);
}

Bytes get_blob(ByteReader& r)
{
    auto v = r.raw(r.u32());
    return Bytes(v.begin(), v.end());
}

void put(ByteWriter& w, const OutPoint& o) { w.raw(o.txid).u32(o.vout); }
OutPoint get_outpoint(ByteReader& r)
{
    OutPoint o;
    o.txid = r.array<32>();
    o.vout = r.u32();
    return o;
}

void put(ByteWriter& w, const OwnedDeposit& d)
{
    put(w, d.outpoint);
    w.u64(d.value).u64(d.fare).u64(d.source_height).raw(d.manager_address);
}

OwnedDeposit get_owned(ByteReader& r)
{
    OwnedDeposit d;
    d.outpoint = get_outpoint(r);
    d.value = r.u64();
    d.fare = r.u64();
    d.source_height = r.u64();
    d.manager_address = r.array<20>();
    return d;
}

void put(ByteWriter& w, const SettleRequest& q)
{
    w.raw(q.user).raw(q.settle_address).u64(q.amount).u64(q.fee).u64(q.enqueue_seq);
}

SettleRequest get_request(ByteReader& r)
{
    SettleRequest q;
    q.user = r.array<20>();
    q.settle_address = r.array<20>();
    q.amount = r.u64();
    q.fee = r.u64();
    q.enqueue_seq = r.u64();
    return q;
}

void put(ByteWriter& w, const SettlementPlan& p)
{
    put_blob(w, serialize_tx(p.transaction));
    w.raw(p.txid);
    w.u32(static_cast<uint32_t>(p.selected.size()));
    for (const auto& q : p.selected) put(w, q);
    w.u32(static_cast<uint32_t>(p.inputs.size()));
    for (const auto& d : p.inputs) put(w, d);
    w.u64(p.s_amount).u64(p.b_total).u64(p.tx_inputs).u64(p.tx_outputs).u64(p.tx_size).u64(p.tx_fee);
    w.u64(p.rf_confirmed_on_confirm).u64(p.rf_deficit_from_confirm);
    put(w, p.leftover_outpoint);
    w.u64(p.leftover_value).raw(p.leftover_address).u8(p.terminal ? 1 : 0).u64(p.host_payout).u64(p.built_at);
    w.u8(static_cast<uint8_t>(p.status));
}

SettlementPlan get_plan(ByteReader& r)
{
    SettlementPlan p;
    p.transaction = parse_tx(get_blob(r));
    p.txid = r.array<32>();
    p.selected.resize(r.u32());
    for (auto& q : p.selected) q = get_request(r);
    p.inputs.resize(r.u32());
    for (auto& d : p.inputs) d = get_owned(r);
    p.s_amount = r.u64();
    p.b_total = r.u64();
    p.tx_inputs = r.u64();
    p.tx_outputs = r.u64();
    p.tx_size = r.u64();
    p.tx_fee = r.u64();
    p.rf_confirmed_on_confirm = r.u64();
    p.rf_deficit_from_confirm = r.u64();
    p.leftover_outpoint = get_outpoint(r);
    p.leftover_value = r.u64();
    p.leftover_address = r.array<20>();
    p.terminal = r.u8() != 0;
    p.host_payout = r.u64();
    p.built_at = r.u64();
    p.status = static_cast<PlanStatus>(r.u8());
    return p;
}

} // namespace

Bytes Hub::snapshot() const
{
    const HubState& s = state_;
    ByteWriter w;
    w.raw(kMagic).u32(kVersion);

    const HubConfig& c = s.config;
    w.var_bytes(c.host_public_key.encode()).raw(c.host_settle_address).u64(c.min_routing_fee);
    w.u32(c.params.retarget_interval).u32(c.params.target_spacing).raw(uint_to_hash(c.params.pow_limit));
    w.u64(c.params.block_subsidy).u64(c.fee_window).u64(c.deposit_expiry_blocks).raw(c.key_seed);

    w.u64(s.chain.start_height()).u32(static_cast<uint32_t>(s.chain.size()));
    for (const BlockHeader& h : s.chain.headers()) w.raw(serialize_header(h));

    w.u64(s.fees.capacity()).u32(static_cast<uint32_t>(s.fees.samples().size()));
    for (uint64_t x : s.fees.samples()) w.u64(x);

    w.u32(static_cast<uint32_t>(s.users.size()));
    for (const auto& [addr, u] : s.users) {
        w.raw(addr).var_bytes(u.public_key.encode()).u64(u.nonce).u64(u.balance);
        put_opt(w, u.max_source_block);
        put_opt(w, u.boundary_block);
        w.raw(u.settle_address);
    }

    w.u32(static_cast<uint32_t>(s.pending.size()));
    for (const auto& [addr, p] : s.pending) w.raw(addr).raw(p.beneficiary).u64(p.registered_height).u64(p.expiry_height);

    w.u32(static_cast<uint32_t>(s.owned.size()));
    for (const auto& d : s.owned) put(w, d);

    w.u32(static_cast<uint32_t>(s.manager_keys.size()));
    for (const auto& [addr, k] : s.manager_keys) w.raw(addr).var_bytes(k.encode());

    w.u32(static_cast<uint32_t>(s.queue.size()));
    for (const auto& q : s.queue) put(w, q);

    const HubLedger& L = s.ledger;
    w.u64(L.rf_pending).u64(L.rf_confirmed).u64(L.rf_withdrawn).u64(L.rf_spent_on_fees).u64(L.rf_inflight);
    w.u64(L.fee_reserve).u64(L.min_routing_fee).var_bytes(L.host_public_key.encode()).raw(L.host_settle_address);
    w.u64(L.host_nonce).u64(L.total_deposited).u64(L.total_routing_fees).u64(L.total_settled).u64(L.total_host_paid);
    w.u64(L.total_tx_fees);

    w.u8(s.plan ? 1 : 0);
    if (s.plan) put(w, *s.plan);
    w.u32(static_cast<uint32_t>(s.confirmed_plans.size()));
    for (const auto& p : s.confirmed_plans) put(w, p);

    w.u64(s.next_request_seq).u64(s.next_manager_index).u8(s.terminated ? 1 : 0);
    return std::move(w).take();
}

Hub Hub::restore(ByteView raw)
{
    try {
        ByteReader r(raw);
        if (r.array<4>() != kMagic) throw DecodeError("not a hub snapshot");
        if (r.u32() != kVersion) throw DecodeError("unsupported snapshot version");

        Hub hub;
        HubState& s = hub.state_;
        HubConfig& c = s.config;
        c.host_public_key = crypto::PublicKey::decode(r.var_bytes());
        c.host_settle_address = r.array<20>();
        c.min_routing_fee = r.u64();
        c.params.retarget_interval = r.u32();
        c.params.target_spacing = r.u32();
        c.params.pow_limit = hash_to_uint(r.array<32>());
        c.params.block_subsidy = r.u64();
        c.fee_window = r.u64();
        c.deposit_expiry_blocks = r.u64();
        c.key_seed = r.array<32>();

        const Height start = r.u64();
        const uint32_t n_headers = r.u32();
        if (n_headers == 0) throw DecodeError("snapshot without headers");
        s.chain = HeaderChain(c.params, parse_header(r.raw(BlockHeader::kSize)), start);
        for (uint32_t i = 1; i < n_headers; ++i) s.chain.append(parse_header(r.raw(BlockHeader::kSize)));

        s.fees = FeeEstimator(r.u64());
        for (uint32_t i = 0, n = r.u32(); i < n; ++i) s.fees.add_sample(r.u64());

        for (uint32_t i = 0, n = r.u32(); i < n; ++i) {
            UserState u;
            u.user_address = r.array<20>();
            u.public_key = crypto::PublicKey::decode(r.var_bytes());
            u.nonce = r.u64();
            u.balance = r.u64();
            u.max_source_block = get_opt(r);
            u.boundary_block = get_opt(r);
            u.settle_address = r.array<20>();
            s.users.emplace(u.user_address, std::move(u));
        }
        for (uint32_t i = 0, n = r.u32(); i < n; ++i) {
            PendingDeposit p;
            p.manager_address = r.array<20>();
            p.beneficiary = r.array<20>();
            p.registered_height = r.u64();
            p.expiry_height = r.u64();
            s.pending.emplace(p.manager_address, p);
        }
        for (uint32_t i = 0, n = r.u32(); i < n; ++i) s.owned.push_back(get_owned(r));
        for (uint32_t i = 0, n = r.u32(); i < n; ++i) {
            Address a = r.array<20>();
            s.manager_keys.emplace(a, crypto::KeyPair::decode(r.var_bytes()));
        }
        for (uint32_t i = 0, n = r.u32(); i < n; ++i) s.queue.push_back(get_request(r));

        HubLedger& L = s.ledger;
        L.rf_pending = r.u64();
        L.rf_confirmed = r.u64();
        L.rf_withdrawn = r.u64();
        L.rf_spent_on_fees = r.u64();
        L.rf_inflight = r.u64();
        L.fee_reserve = r.u64();
        L.min_routing_fee = r.u64();
        L.host_public_key = crypto::PublicKey::decode(r.var_bytes());
        L.host_settle_address = r.array<20>();
        L.host_nonce = r.u64();
        L.total_deposited = r.u64();
        L.total_routing_fees = r.u64();
        L.total_settled = r.u64();
        L.total_host_paid = r.u64();
        L.total_tx_fees = r.u64();

        if (r.u8()) s.plan = get_plan(r);
        for (uint32_t i = 0, n = r.u32(); i < n; ++i) s.confirmed_plans.push_back(get_plan(r));
        s.next_request_seq = r.u64();
        s.next_manager_index = r.u64();
        s.terminated = r.u8() != 0;
        r.expect_end();
        return hub;
    } catch (const DecodeError& e) {
        throw ProtocolError(Status::malformed_frame, std::string("snapshot: ") + e.what());
    } catch (const ChainError& e) {
        throw ProtocolError(Status::malformed_frame, std::string("snapshot: ") + e.what());
    }
}

} // namespace routee::hub
