// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/scenario/testbed.hpp>

namespace routee::scenario {
namespace {

crypto::KeyPair user_key(crypto::CryptoMode mode, uint64_t seed, uint64_t index)
{
    if (mode == crypto::CryptoMode::fast_test) return crypto::KeyPair::from_seed(sim::derive_seed(seed, "user-key", index));
    return crypto::KeyPair::generate(crypto::scheme_for(mode));
}

template <typename Field>
void set_nonce(wire::RequestBody& body, Field value)
{
    std::visit(
        [&](auto& m) {
            if constexpr (requires { m.nonce; }) m.nonce = value;
            if constexpr (requires { m.host_nonce; }) m.host_nonce = value;
        },
        body);
}

} // namespace

Testbed::Testbed(uint64_t seed, TestbedOptions options)
    : seed_(seed), options_(options), node_(options.params, seed),
      host_key_(crypto::KeyPair::from_seed(sim::derive_seed(seed, "host-key"))),
      hub_static_(crypto::KeyPair::from_seed(sim::derive_seed(seed, "hub-static")))
{
    host_settle_ = crypto::KeyPair::from_seed(sim::derive_seed(seed, "host-settle")).pub.address();

    // Warm-up traffic: one 1-in/2-out wallet payment per block at the configured fee rate.
    node_.mine_empty(2);
    for (size_t i = 0; i < options_.warmup_blocks; ++i) {
        const Address sink = crypto::KeyPair::from_seed(sim::derive_seed(seed, "warmup", i)).pub.address();
        node_.submit_tx(node_.pay_from_miner(sink, 10'000 + i, wallet_fee(1, 2)));
        node_.mine_pending();
    }

    hub::HubConfig cfg;
    cfg.host_public_key = host_key_.pub;
    cfg.host_settle_address = host_settle_;
    cfg.min_routing_fee = options_.min_routing_fee;
    cfg.params = options_.params;
    cfg.key_seed = sim::derive_seed(seed, "hub-manager-keys");
    const auto& chain = node_.headers();
    std::vector<BlockHeader> headers(chain.headers().begin() + 1, chain.headers().end());
    std::vector<Block> fee_blocks(node_.blocks().begin() + 1, node_.blocks().end());
    service_ = std::make_unique<wire::HubService>(hub::Hub::init(cfg, chain.at(0), 0, headers, fee_blocks), hub_static_);
}

Principal Testbed::make_principal(const std::string& name)
{
    Principal p;
    p.name = name;
    p.key = user_key(options_.mode, seed_, next_key_);
    p.address = p.key.pub.address();
    p.settle_address = crypto::KeyPair::from_seed(sim::derive_seed(seed_, "settle", next_key_)).pub.address();
    ++next_key_;
    return p;
}

const Principal& Testbed::register_user(const std::string& name)
{
    Principal p = make_principal(name);
    wire::expect_ok(service_->dispatch(wire::Request{wire::AddUser{p.key.pub, p.settle_address}, {}}));
    principals_.push_back(std::move(p));
    return principals_.back();
}

const Principal& Testbed::principal(const std::string& name) const
{
    for (const Principal& p : principals_)
        if (p.name == name) return p;
    throw std::out_of_range("unknown principal " + name);
}

wire::Request Testbed::sign(const Principal& p, wire::RequestBody body) const
{
    const uint64_t nonce = service_->with_hub([&](const hub::Hub& h) {
        const hub::UserState* u = h.find_user(p.address);
        return u ? u->nonce : 0;
    });
    set_nonce(body, nonce);
    return wire::make_signed(std::move(body), p.key);
}

wire::Request Testbed::sign_host(wire::RequestBody body) const
{
    set_nonce(body, service_->with_hub([](const hub::Hub& h) { return h.state().ledger.host_nonce; }));
    return wire::make_signed(std::move(body), host_key_);
}

wire::Response Testbed::call(const Principal& p, wire::RequestBody body) { return service_->dispatch(sign(p, std::move(body))); }

wire::Response Testbed::host(wire::RequestBody body) { return service_->dispatch(sign_host(std::move(body))); }

Address Testbed::request_deposit(const Principal& p)
{
    return wire::decode_address(wire::expect_ok(call(p, wire::AddDeposit{p.address, 0})).payload);
}

Transaction Testbed::fund(const Address& to, Amount amount)
{
    Transaction tx = node_.pay_from_miner(to, amount, wallet_fee(1, 2));
    ValidationResult v = node_.submit_tx(tx);
    if (!v.ok()) throw ChainError("funding transaction rejected: " + std::string(to_string(v.reason)));
    return tx;
}

hub::InsertEffects Testbed::deposit(const Principal& p, Amount amount)
{
    fund(request_deposit(p), amount);
    return mine_and_feed();
}

const Block& Testbed::mine_only() { return node_.mine_pending(); }

hub::InsertEffects Testbed::mine_and_feed() { return feed(mine_only()); }

hub::InsertEffects Testbed::feed(const Block& block)
{
    return wire::decode_effects(wire::expect_ok(host(wire::InsertBlock{0, block})).payload);
}

void Testbed::feed_to_tip()
{
    Height h = service_->with_hub([](const hub::Hub& hub) { return hub.latest_block().height; });
    while (h < node_.tip_height()) feed(node_.block_at(++h));
}

wire::Response Testbed::set_boundary(const Principal& p, Height depth)
{
    const Height h = node_.tip_height() - depth;
    return call(p, wire::UpdateBoundary{p.address, 0, h, node_.headers().hash_at(h)});
}

wire::Response Testbed::pay(const Principal& from, const Principal& to, Amount amount, Amount fee)
{
    return call(from, wire::Payment{from.address, 0, {wire::PaymentEntry{to.address, amount, fee}}});
}

wire::Response Testbed::settle(const Principal& p, Amount amount, Amount fee)
{
    return call(p, wire::Settle{p.address, 0, amount, fee});
}

std::optional<wire::PlanSummary> Testbed::outstanding_plan() const
{
    return service_->with_hub([](const hub::Hub& h) -> std::optional<wire::PlanSummary> {
        if (const hub::SettlementPlan* p = h.outstanding_plan()) return wire::summarize(*p);
        return std::nullopt;
    });
}

ValidationResult Testbed::broadcast_plan()
{
    auto plan = outstanding_plan();
    if (!plan) return ValidationResult::reject(RejectReason::missing_utxo, "no outstanding plan");
    return node_.submit_tx(plan->transaction);
}

hub::UserState Testbed::user(const Principal& p) const
{
    return service_->with_hub([&](const hub::Hub& h) {
        const hub::UserState* u = h.find_user(p.address);
        if (!u) throw std::out_of_range("user not registered: " + p.name);
        return *u;
    });
}

hub::LedgerView Testbed::ledger() const
{
    return service_->with_hub([](const hub::Hub& h) { return h.ledger_view(); });
}

hub::LedgerIdentity Testbed::identity() const
{
    return service_->with_hub([](const hub::Hub& h) { return h.ledger_identity(); });
}

Amount Testbed::fee_avg() const
{
    return service_->with_hub([](const hub::Hub& h) { return h.fee_avg(); });
}

} // namespace routee::scenario
