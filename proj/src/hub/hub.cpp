// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/chain/hash.hpp>
#include <routee/chain/merkle.hpp>
#include <routee/hub/hub.hpp>

#include <algorithm>

namespace routee::hub {
namespace {

Amount checked_mul(Amount a, Amount b)
{
    Amount out;
    if (__builtin_mul_overflow(a, b, &out)) throw ProtocolError(Status::internal, "amount overflow");
    return out;
}

Amount checked_add(Amount a, Amount b)
{
    Amount out;
    if (__builtin_add_overflow(a, b, &out)) throw ProtocolError(Status::internal, "amount overflow");
    return out;
}

bool queue_order(const SettleRequest& a, const SettleRequest& b)
{
    if (a.fee != b.fee) return a.fee > b.fee;
    return a.enqueue_seq < b.enqueue_seq;
}

} // namespace

std::string_view to_string(ChannelType c)
{
    switch (c) {
    case ChannelType::none: return "none";
    case ChannelType::send_only: return "send-only";
    case ChannelType::receive_only: return "receive-only";
    case ChannelType::bidirectional: return "bidirectional";
    }
    return "unknown";
}

ChannelType UserState::channel() const
{
    const bool can_send = max_source_block.has_value();
    const bool can_receive = boundary_block.has_value();
    if (can_send && can_receive) return ChannelType::bidirectional;
    if (can_send) return ChannelType::send_only;
    if (can_receive) return ChannelType::receive_only;
    return ChannelType::none;
}

std::optional<size_t> greedy_settlement_count(std::span<const Amount> fees_desc, Amount fares, Amount reserve,
                                              uint64_t n_inputs, Amount fee_avg)
{
    // prefix[n] = fares + reserve + sum of the n largest fees
    std::vector<unsigned __int128> prefix(fees_desc.size() + 1);
    prefix[0] = static_cast<unsigned __int128>(fares) + reserve;
    for (size_t i = 0; i < fees_desc.size(); ++i) prefix[i + 1] = prefix[i] + fees_desc[i];
    for (size_t n = fees_desc.size(); n >= 1; --n) {
        const unsigned __int128 tx_fee = static_cast<unsigned __int128>(formula_size(n_inputs, n + 1)) * fee_avg;
        if (prefix[n] >= tx_fee) return n;
    }
    return std::nullopt;
}

Amount rf_confirmed_amount(Amount rf_pending, Amount s_amount, Amount b_total)
{
    if (b_total == 0) return 0;
    const unsigned __int128 num = static_cast<unsigned __int128>(rf_pending) * s_amount;
    return static_cast<Amount>(num / b_total);
}

Amount balance_increase(Amount d_amount, Amount fee_avg)
{
    const unsigned __int128 fare = static_cast<unsigned __int128>(kInputBytes) * fee_avg;
    return fare >= d_amount ? 0 : d_amount - static_cast<Amount>(fare);
}

// ---- initialisation ----------------------------------------------------------

Hub Hub::init(HubConfig config, const BlockHeader& start_header, Height start_height,
              std::span<const BlockHeader> headers, std::span<const Block> fee_blocks)
{
    Hub hub;
    HubState& s = hub.state_;
    try {
        s.chain = HeaderChain(config.params, start_header, start_height);
    } catch (const ChainError& e) {
        throw ProtocolError(Status::init_failure, "height " + std::to_string(start_height) + ": " + e.what());
    }
    for (const BlockHeader& h : headers) {
        const Height height = s.chain.tip_height() + 1;
        if (std::string reason = s.chain.check_next(h); !reason.empty())
            throw ProtocolError(Status::init_failure, "height " + std::to_string(height) + ": " + reason);
        s.chain.append(h);
    }

    s.fees = FeeEstimator(config.fee_window);
    for (const Block& b : fee_blocks) {
        auto height = s.chain.find(header_hash(b.header));
        if (!height) throw ProtocolError(Status::init_failure, "fee window block not in header chain");
        if (b.txs.empty() || merkle_root(b.txids()) != b.header.merkle_root)
            throw ProtocolError(Status::init_failure,
                                "height " + std::to_string(*height) + ": fee window block merkle-mismatch");
        s.fees.add_block(b);
    }

    s.ledger.min_routing_fee = config.min_routing_fee;
    s.ledger.host_public_key = config.host_public_key;
    s.ledger.host_settle_address = config.host_settle_address;
    s.config = std::move(config);
    return hub;
}

// ---- authentication ----------------------------------------------------------

UserState& Hub::authenticate(const Address& user, const wire::RequestBody& body, uint64_t nonce, ByteView signature)
{
    auto it = state_.users.find(user);
    if (it == state_.users.end()) throw ProtocolError(Status::unknown_user);
    UserState& u = it->second;
    if (!crypto::verify(u.public_key, wire::signing_bytes(body), signature)) throw ProtocolError(Status::auth_failure);
    if (nonce != u.nonce) throw ProtocolError(Status::stale_request);
    // Authentic requests consume the nonce even when a later check rejects them.
    ++u.nonce;
    return u;
}

void Hub::authenticate_host(const wire::RequestBody& body, uint64_t nonce, ByteView signature)
{
    if (!crypto::verify(state_.ledger.host_public_key, wire::signing_bytes(body), signature))
        throw ProtocolError(Status::host_auth_failure);
    if (nonce != state_.ledger.host_nonce) throw ProtocolError(Status::stale_request);
    ++state_.ledger.host_nonce;
}

void Hub::authorize_host(const wire::RequestBody& body, ByteView signature)
{
    uint64_t nonce = std::visit(
        [](const auto& m) -> uint64_t {
            if constexpr (requires { m.host_nonce; }) {
                return m.host_nonce;
            } else {
                throw ProtocolError(Status::host_auth_failure, "not a host command");
            }
        },
        body);
    authenticate_host(body, nonce, signature);
}

void Hub::require_active() const
{
    if (state_.terminated) throw ProtocolError(Status::terminated);
}

// ---- user operations ---------------------------------------------------------

Address Hub::add_user(const wire::AddUser& req)
{
    require_active();
    const Address addr = req.public_key.address();
    if (state_.users.count(addr)) throw ProtocolError(Status::already_registered);
    UserState u;
    u.user_address = addr;
    u.public_key = req.public_key;
    u.settle_address = req.settle_address;
    state_.users.emplace(addr, std::move(u));
    return addr;
}

Address Hub::new_manager_address()
{
    ByteWriter w;
    w.raw(state_.config.key_seed).u64(state_.next_manager_index++);
    crypto::KeyPair key = crypto::KeyPair::from_seed(sha256(w.data()));
    Address addr = key.pub.address();
    state_.manager_keys.insert_or_assign(addr, std::move(key));
    return addr;
}

Address Hub::add_deposit(const wire::AddDeposit& req, ByteView signature)
{
    authenticate(req.user, req, req.nonce, signature);
    require_active();
    const Address manager = new_manager_address();
    const Height now = state_.chain.tip_height();
    state_.pending.emplace(manager, PendingDeposit{manager, req.user, now, now + state_.config.deposit_expiry_blocks});
    return manager;
}

Height Hub::update_boundary_block(const wire::UpdateBoundary& req, ByteView signature)
{
    UserState& u = authenticate(req.user, req, req.nonce, signature);
    if (!state_.chain.contains_height(req.block_number) || state_.chain.hash_at(req.block_number) != req.block_hash)
        throw ProtocolError(Status::not_in_chain);
    if (u.boundary_block && req.block_number <= *u.boundary_block) throw ProtocolError(Status::monotonicity_violation);
    u.boundary_block = req.block_number;
    return req.block_number;
}

PaymentResult Hub::multi_hop_payment(const wire::Payment& req, ByteView signature)
{
    UserState& sender = authenticate(req.sender, req, req.nonce, signature);
    require_active();
    if (req.batch.empty()) throw ProtocolError(Status::invalid_amount, "empty payment batch");

    unsigned __int128 total = 0;
    Amount fees = 0;
    for (const wire::PaymentEntry& e : req.batch) {
        if (e.routing_fee < state_.ledger.min_routing_fee) throw ProtocolError(Status::fee_below_minimum);
        total += static_cast<unsigned __int128>(e.amount) + e.routing_fee;
        fees = checked_add(fees, e.routing_fee);
    }
    if (total > sender.balance) throw ProtocolError(Status::insufficient_balance);
    for (const wire::PaymentEntry& e : req.batch) {
        auto it = state_.users.find(e.receiver);
        if (it == state_.users.end()) throw ProtocolError(Status::unknown_user, "unknown receiver");
        const UserState& r = it->second;
        if (!r.boundary_block) throw ProtocolError(Status::receiver_not_ready, "receiver has no boundary block");
        if (sender.max_source_block && *sender.max_source_block > *r.boundary_block)
            throw ProtocolError(Status::receiver_not_ready, "sender's source block is beyond receiver's boundary");
    }

    const Amount debit = static_cast<Amount>(total);
    const std::optional<Height> source = sender.max_source_block;
    sender.balance -= debit;
    for (const wire::PaymentEntry& e : req.batch) {
        UserState& r = state_.users.at(e.receiver);
        r.balance = checked_add(r.balance, e.amount);
        if (source) r.max_source_block = r.max_source_block ? std::max(*r.max_source_block, *source) : *source;
    }
    state_.ledger.rf_pending = checked_add(state_.ledger.rf_pending, fees);
    state_.ledger.total_routing_fees = checked_add(state_.ledger.total_routing_fees, fees);
    return PaymentResult{req.batch.size(), debit, fees};
}

uint64_t Hub::request_settlement(const wire::Settle& req, ByteView signature)
{
    UserState& u = authenticate(req.user, req, req.nonce, signature);
    require_active();
    if (req.amount < 1) throw ProtocolError(Status::invalid_amount);
    const unsigned __int128 min_fee = static_cast<unsigned __int128>(kOutputBytes) * fee_avg();
    if (req.fee < min_fee) throw ProtocolError(Status::fee_too_low);
    const unsigned __int128 debit = static_cast<unsigned __int128>(req.amount) + req.fee;
    if (debit > u.balance) throw ProtocolError(Status::insufficient_balance);
    u.balance -= static_cast<Amount>(debit);

    SettleRequest r{u.user_address, u.settle_address, req.amount, req.fee, 0};
    const uint64_t seq = state_.next_request_seq;
    enqueue(r);
    try_build_settlement();
    return seq;
}

void Hub::enqueue(SettleRequest request)
{
    request.enqueue_seq = state_.next_request_seq++;
    auto pos = std::upper_bound(state_.queue.begin(), state_.queue.end(), request, queue_order);
    state_.queue.insert(pos, request);
}

// ---- settlement --------------------------------------------------------------

std::optional<size_t> Hub::select_count() const
{
    std::vector<Amount> fees;
    fees.reserve(state_.queue.size());
    for (const SettleRequest& r : state_.queue) fees.push_back(r.fee);
    Amount fares = 0;
    for (const OwnedDeposit& d : state_.owned) fares = checked_add(fares, d.fare);
    return greedy_settlement_count(fees, fares, state_.ledger.fee_reserve, state_.owned.size(), fee_avg());
}

const SettlementPlan* Hub::try_build_settlement()
{
    if (state_.plan || state_.owned.empty()) return nullptr;
    if (state_.terminated) {
        // Final plans take the whole queue and pay everything left to the host.
        Amount held = 0, amounts = 0;
        for (const OwnedDeposit& d : state_.owned) held = checked_add(held, d.value);
        for (const SettleRequest& r : state_.queue) amounts = checked_add(amounts, r.amount);
        const unsigned __int128 tx_fee =
            static_cast<unsigned __int128>(formula_size(state_.owned.size(), state_.queue.size() + 1)) * fee_avg();
        if (state_.queue.empty() && static_cast<unsigned __int128>(held) <= tx_fee) return nullptr;
        if (static_cast<unsigned __int128>(amounts) + tx_fee > held) {
            // Fees could not cover the final transaction (late deposits); the rest comes out of the
            // largest payouts, keeping each request's amount + fee unchanged.
            unsigned __int128 deficit = static_cast<unsigned __int128>(amounts) + tx_fee - held;
            if (deficit > amounts) return nullptr;
            std::vector<SettleRequest*> by_amount;
            for (SettleRequest& r : state_.queue) by_amount.push_back(&r);
            std::stable_sort(by_amount.begin(), by_amount.end(),
                             [](const SettleRequest* a, const SettleRequest* b) { return a->amount > b->amount; });
            for (SettleRequest* r : by_amount) {
                const Amount take = static_cast<Amount>(std::min<unsigned __int128>(deficit, r->amount));
                r->amount -= take;
                r->fee += take;
                deficit -= take;
                if (deficit == 0) break;
            }
        }
        build_plan(state_.queue.size());
        return &*state_.plan;
    }
    if (state_.queue.empty()) return nullptr;
    auto n = select_count();
    if (!n) return nullptr;
    build_plan(*n);
    return &*state_.plan;
}

void Hub::build_plan(size_t n)
{
    HubState& s = state_;
    HubLedger& L = s.ledger;
    SettlementPlan plan;
    plan.terminal = s.terminated;
    plan.built_at = s.chain.tip_height();
    plan.inputs = std::move(s.owned);
    s.owned.clear();
    plan.selected.assign(s.queue.begin(), s.queue.begin() + static_cast<std::ptrdiff_t>(n));

    Amount held = 0, fares = 0, amounts = 0, req_fees = 0, b_total = 0;
    for (const OwnedDeposit& d : plan.inputs) {
        held = checked_add(held, d.value);
        fares = checked_add(fares, d.fare);
    }
    for (const SettleRequest& r : plan.selected) {
        amounts = checked_add(amounts, r.amount);
        req_fees = checked_add(req_fees, r.fee);
    }
    for (const auto& [_, u] : s.users) b_total = checked_add(b_total, u.balance);
    for (const SettleRequest& r : s.queue) b_total = checked_add(b_total, checked_add(r.amount, r.fee));

    plan.tx_inputs = plan.inputs.size();
    plan.tx_outputs = n + 1;
    plan.tx_size = formula_size(plan.tx_inputs, plan.tx_outputs);
    plan.tx_fee = checked_mul(plan.tx_size, fee_avg());
    plan.s_amount = checked_add(amounts, req_fees);
    plan.b_total = b_total;
    plan.rf_confirmed_on_confirm = rf_confirmed_amount(L.rf_pending, plan.s_amount, b_total);

    const Amount collected = checked_add(checked_add(fares, req_fees), L.fee_reserve);
    const Amount remainder = held - amounts - plan.tx_fee;   // feasibility checked by the caller

    Transaction& tx = plan.transaction;
    for (const OwnedDeposit& d : plan.inputs) tx.inputs.push_back(TxIn{d.outpoint, d.value, {}});
    for (const SettleRequest& r : plan.selected) tx.outputs.push_back(TxOut{r.amount, r.settle_address});
    if (plan.terminal) {
        plan.host_payout = remainder;
        tx.outputs.push_back(TxOut{remainder, L.host_settle_address});
        if (collected >= plan.tx_fee) {
            L.fee_reserve = collected - plan.tx_fee;
        } else {
            const Amount deficit = plan.tx_fee - collected;
            const Amount from_available = std::min(deficit, L.rf_available());
            L.fee_reserve = 0;
            L.rf_spent_on_fees += from_available;
            plan.rf_deficit_from_confirm = deficit - from_available;
        }
    } else {
        plan.leftover_address = new_manager_address();
        plan.leftover_value = remainder;
        tx.outputs.push_back(TxOut{remainder, plan.leftover_address});
        L.fee_reserve = collected - plan.tx_fee;
    }

    std::vector<const crypto::KeyPair*> keys;
    keys.reserve(plan.inputs.size());
    for (const OwnedDeposit& d : plan.inputs) keys.push_back(&s.manager_keys.at(d.manager_address));
    sign_inputs(tx, keys);
    plan.txid = tx_id(tx);
    plan.leftover_outpoint = OutPoint{plan.txid, static_cast<uint32_t>(n)};

    L.rf_pending -= plan.rf_confirmed_on_confirm;
    L.rf_inflight = plan.rf_confirmed_on_confirm - plan.rf_deficit_from_confirm;
    s.queue.erase(s.queue.begin(), s.queue.begin() + static_cast<std::ptrdiff_t>(n));
    s.plan = std::move(plan);
}

void Hub::confirm_plan(Height height, InsertEffects& effects)
{
    HubState& s = state_;
    HubLedger& L = s.ledger;
    SettlementPlan plan = std::move(*s.plan);
    s.plan.reset();

    L.rf_confirmed += plan.rf_confirmed_on_confirm;
    L.rf_spent_on_fees += plan.rf_deficit_from_confirm;
    L.rf_inflight = 0;
    Amount amounts = 0;
    for (const SettleRequest& r : plan.selected) amounts += r.amount;
    L.total_settled += amounts;
    L.total_tx_fees += plan.tx_fee;

    for (const OwnedDeposit& d : plan.inputs) s.manager_keys.erase(d.manager_address);
    if (plan.terminal) {
        L.rf_withdrawn += L.rf_available();
        L.fee_reserve = 0;
        L.total_host_paid += plan.host_payout;
    } else {
        s.owned.insert(s.owned.begin(),
                       OwnedDeposit{plan.leftover_outpoint, plan.leftover_value, 0, height, plan.leftover_address});
    }
    plan.status = PlanStatus::confirmed;
    effects.settlement_confirmed = true;
    effects.rf_confirmed_gain = plan.rf_confirmed_on_confirm;
    s.confirmed_plans.push_back(std::move(plan));
}

// ---- host operations ---------------------------------------------------------

InsertEffects Hub::insert_block(const wire::InsertBlock& req, ByteView signature)
{
    authenticate_host(req, req.host_nonce, signature);
    HubState& s = state_;
    const Block& block = req.block;
    if (block.header.prev_hash != s.chain.tip_hash()) throw ProtocolError(Status::not_on_tip);
    if (std::string reason = s.chain.check_next(block.header); !reason.empty())
        throw ProtocolError(Status::invalid_block, reason);
    if (block.txs.empty()) throw ProtocolError(Status::invalid_block, "no transactions");
    const std::vector<Hash256> ids = block.txids();
    if (merkle_root(ids) != block.header.merkle_root) throw ProtocolError(Status::invalid_block, "merkle-mismatch");

    s.chain.append(block.header);
    InsertEffects fx;
    fx.height = s.chain.tip_height();
    s.fees.add_block(block);
    fx.fee_avg = fee_avg();

    bool plan_seen = false;
    for (size_t t = 0; t < block.txs.size(); ++t) {
        const Transaction& tx = block.txs[t];
        if (s.plan && ids[t] == s.plan->txid) plan_seen = true;
        for (uint32_t i = 0; i < tx.outputs.size(); ++i) {
            auto pit = s.pending.find(tx.outputs[i].address);
            if (pit == s.pending.end()) continue;
            const PendingDeposit pending = pit->second;
            s.pending.erase(pit);

            const Amount d_amount = tx.outputs[i].value;
            const Amount b_increase = balance_increase(d_amount, fx.fee_avg);
            const Amount fare = d_amount - b_increase;
            UserState& u = s.users.at(pending.beneficiary);
            u.balance = checked_add(u.balance, b_increase);
            u.max_source_block = u.max_source_block ? std::max(*u.max_source_block, fx.height) : fx.height;
            s.owned.push_back(OwnedDeposit{{ids[t], i}, d_amount, fare, fx.height, pending.manager_address});
            s.ledger.total_deposited = checked_add(s.ledger.total_deposited, d_amount);
            fx.credited.push_back(CreditedDeposit{pending.beneficiary, {ids[t], i}, d_amount, b_increase, fare});
        }
    }

    for (auto it = s.pending.begin(); it != s.pending.end();) {
        if (fx.height > it->second.expiry_height) {
            s.manager_keys.erase(it->first);
            it = s.pending.erase(it);
            ++fx.expired;
        } else {
            ++it;
        }
    }

    if (s.terminated) {
        // Late deposits after termination are settled straight back out.
        for (const CreditedDeposit& c : fx.credited) {
            UserState& u = s.users.at(c.beneficiary);
            if (u.balance == 0) continue;
            const Amount fee = std::min(checked_mul(kOutputBytes, fx.fee_avg), u.balance);
            enqueue(SettleRequest{u.user_address, u.settle_address, u.balance - fee, fee, 0});
            u.balance = 0;
        }
    }

    if (plan_seen) confirm_plan(fx.height, fx);
    fx.plan_built = try_build_settlement() != nullptr;
    return fx;
}

void Hub::terminate(const wire::Terminate& req, ByteView signature)
{
    authenticate_host(req, req.host_nonce, signature);
    if (state_.terminated) return;
    state_.terminated = true;
    const Amount min_fee = checked_mul(kOutputBytes, fee_avg());
    for (auto& [addr, u] : state_.users) {
        if (u.balance == 0) continue;
        const Amount fee = std::min(min_fee, u.balance);
        enqueue(SettleRequest{addr, u.settle_address, u.balance - fee, fee, 0});
        u.balance = 0;
    }
    try_build_settlement();
}

// ---- queries -----------------------------------------------------------------

UserState Hub::query_user(const wire::QueryUser& req, ByteView signature) const
{
    auto it = state_.users.find(req.user);
    if (it == state_.users.end()) throw ProtocolError(Status::unknown_user);
    if (!crypto::verify(it->second.public_key, wire::signing_bytes(req), signature))
        throw ProtocolError(Status::auth_failure);
    // Reads do not mutate, so any already-issued nonce is accepted; clients learn the current one here.
    if (req.nonce > it->second.nonce) throw ProtocolError(Status::stale_request);
    return it->second;
}

const UserState* Hub::find_user(const Address& a) const
{
    auto it = state_.users.find(a);
    return it == state_.users.end() ? nullptr : &it->second;
}

const crypto::KeyPair* Hub::manager_key(const Address& a) const
{
    auto it = state_.manager_keys.find(a);
    return it == state_.manager_keys.end() ? nullptr : &it->second;
}

LatestBlock Hub::latest_block() const { return LatestBlock{state_.chain.tip_height(), state_.chain.tip_hash()}; }

LedgerView Hub::ledger_view() const
{
    LedgerView v;
    v.ledger = state_.ledger;
    v.fee_avg = fee_avg();
    for (const auto& [_, u] : state_.users) v.total_balances += u.balance;
    for (const SettleRequest& r : state_.queue) v.queued_total += r.amount + r.fee;
    v.users = state_.users.size();
    v.pending_deposits = state_.pending.size();
    v.owned_deposits = state_.owned.size();
    v.queue_length = state_.queue.size();
    v.confirmed_plans = state_.confirmed_plans.size();
    v.plan_outstanding = state_.plan.has_value();
    v.terminated = state_.terminated;
    v.tip_height = state_.chain.tip_height();
    return v;
}

LedgerIdentity Hub::ledger_identity() const
{
    using u128 = unsigned __int128;
    const HubState& s = state_;
    const HubLedger& L = s.ledger;
    LedgerIdentity id;
    u128 fares = 0;
    for (const OwnedDeposit& d : s.owned) {
        id.held += d.value;
        fares += d.fare;
    }
    u128 in_flight_out = 0;
    if (s.plan) {
        id.held += s.plan->terminal ? s.plan->host_payout : s.plan->leftover_value;
        for (const SettleRequest& r : s.plan->selected) in_flight_out += r.amount;
        in_flight_out += s.plan->tx_fee;
    }
    for (const auto& [_, u] : s.users) id.liabilities += u.balance;
    for (const SettleRequest& r : s.queue) id.liabilities += u128(r.amount) + r.fee;
    id.liabilities += u128(L.rf_pending) + L.rf_available() + L.rf_inflight + L.fee_reserve + fares;

    id.deposited = L.total_deposited;
    id.accounted = id.held + L.total_settled + L.total_host_paid + L.total_tx_fees + in_flight_out;
    return id;
}

} // namespace routee::hub
