// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "oracles.hpp"

#include <routee/chain/merkle.hpp>
#include <routee/scenario/testbed.hpp>
#include <routee/sim/forge.hpp>
#include <routee/sim/node.hpp>
#include <routee/wire/views.hpp>

#include <doctest.h>

using namespace routee;
using scenario::Principal;
using scenario::Testbed;
using wire::Status;

namespace {

hub::HubState state_of(Testbed& tb)
{
    return tb.service().with_hub([](const hub::Hub& h) { return h.state(); });
}

scenario::TestbedOptions with_rate(Amount fee_rate, Amount min_fee = 10)
{
    scenario::TestbedOptions o;
    o.fee_rate = fee_rate;
    o.min_routing_fee = min_fee;
    return o;
}

} // namespace

TEST_CASE("fee formulas")
{
    CHECK(hub::balance_increase(100'000, 10) == 98'520);
    CHECK(hub::balance_increase(1'480, 10) == 0);
    CHECK(hub::balance_increase(1'000, 10) == 0);
    CHECK(hub::rf_confirmed_amount(1'000, 500, 2'000) == 250);
    CHECK(hub::rf_confirmed_amount(999, 7, 7) == 999);
    CHECK(hub::rf_confirmed_amount(5, 1, 0) == 0);
    // no overflow in the product
    CHECK(hub::rf_confirmed_amount(UINT64_MAX, UINT64_MAX, UINT64_MAX) == UINT64_MAX);
}

TEST_CASE("fee estimator")
{
    hub::FeeEstimator est(3);
    CHECK(est.fee_avg() == 1);
    sim::SimNode node(ChainParams::trivial(), 2);
    node.mine_empty(2);
    REQUIRE(node.submit_tx(node.pay_from_miner(Address{7}, 5000, 2260)).ok());
    const Block& b = node.mine_pending();
    CHECK(hub::FeeEstimator::block_sample(b) == 10);   // 2260 / formula_size(1, 2)
    CHECK_FALSE(hub::FeeEstimator::block_sample(node.block_at(1)).has_value());
    REQUIRE(node.submit_tx(node.pay_from_miner(Address{7}, 5000, 2259)).ok());
    CHECK(hub::FeeEstimator::block_sample(node.mine_pending()) == 9);
    est.add_sample(10);
    est.add_sample(11);
    CHECK(est.fee_avg() == 10);
    est.add_sample(0);
    est.add_sample(0);
    est.add_sample(0);   // window of three zeros still floors at one
    CHECK(est.fee_avg() == 1);
}

TEST_CASE("init verifies headers and primes the fee window")
{
    sim::SimNode node(ChainParams::trivial(), 12);
    node.mine_empty(1);
    for (int i = 0; i < 2016; ++i) {
        node.submit_tx(node.pay_from_miner(Address{9}, 1000, 2260));
        node.mine_pending();
    }
    hub::HubConfig cfg;
    cfg.params = ChainParams::trivial();
    cfg.host_public_key = crypto::KeyPair::from_seed(Hash256{1}).pub;
    const auto& hs = node.headers().headers();
    const std::vector<BlockHeader> rest(hs.begin() + 1, hs.end());
    const std::vector<Block> fee_blocks(node.blocks().begin() + 1, node.blocks().end());
    hub::Hub h = hub::Hub::init(cfg, hs[0], 0, rest, fee_blocks);
    CHECK(h.latest_block().height == 2017);
    CHECK(h.latest_block().hash == node.headers().tip_hash());
    CHECK(h.fee_avg() == 10);
    CHECK(h.state().fees.samples().size() == 2016);

    std::vector<BlockHeader> broken = rest;
    broken[40].prev_hash[0] ^= 1;
    try {
        hub::Hub::init(cfg, hs[0], 0, broken, {});
        FAIL("init accepted a broken link");
    } catch (const wire::ProtocolError& e) {
        CHECK(e.status() == Status::init_failure);
        CHECK(std::string(e.what()).find("41") != std::string::npos);
    }
}

TEST_CASE("registration")
{
    Testbed tb(1);
    const Principal& a = tb.register_user("a");
    const Principal& b = tb.register_user("b");
    CHECK(a.address != b.address);
    CHECK(tb.user(a).balance == 0);
    CHECK(tb.user(a).channel() == hub::ChannelType::none);
    const auto again = tb.service().dispatch(wire::Request{wire::AddUser{a.key.pub, a.settle_address}, {}});
    CHECK(again.status == Status::already_registered);
}

TEST_CASE("deposit requests")
{
    Testbed tb(2);
    const Principal& a = tb.register_user("a");
    const wire::Request req = tb.sign(a, wire::AddDeposit{a.address, 0});
    const auto first = tb.service().dispatch(req);
    REQUIRE(first.status == Status::ok);
    CHECK(first.payload.size() == 20);
    CHECK(state_of(tb).pending.size() == 1);
    CHECK(tb.service().dispatch(req).status == Status::stale_request);
    CHECK(tb.request_deposit(a) != wire::decode_address(first.payload));
    CHECK(state_of(tb).pending.size() == 2);
}

TEST_CASE("boundary updates")
{
    Testbed tb(3);
    const Principal& a = tb.register_user("a");
    tb.node().mine_empty(4);
    tb.feed_to_tip();
    REQUIRE(tb.set_boundary(a).status == Status::ok);
    CHECK(tb.user(a).channel() == hub::ChannelType::receive_only);
    const Height tip = tb.node().tip_height();
    CHECK(tb.set_boundary(a, 1).status == Status::monotonicity_violation);
    CHECK(tb.user(a).boundary_block == tip);

    sim::ForgeSpec spec;
    spec.fork_height = tip - 1;
    const auto forged = sim::forge_chain(tb.node(), spec);
    const auto r = tb.call(a, wire::UpdateBoundary{a.address, 0, tip, header_hash(forged.front().header)});
    CHECK(r.status == Status::not_in_chain);
    CHECK(tb.call(a, wire::UpdateBoundary{a.address, 0, tip + 5, Hash256{}}).status == Status::not_in_chain);
}

TEST_CASE("deposit crediting opens a send-only channel")
{
    Testbed tb(4);
    const Principal& a = tb.register_user("a");
    REQUIRE(tb.fee_avg() == 10);
    const auto fx = tb.deposit(a, 100'000);
    REQUIRE(fx.credited.size() == 1);
    CHECK(fx.credited[0].b_increase == 98'520);
    CHECK(fx.credited[0].fare == 1'480);
    CHECK(tb.user(a).balance == 98'520);
    CHECK(tb.user(a).max_source_block == tb.node().tip_height());
    CHECK(tb.user(a).channel() == hub::ChannelType::send_only);
    REQUIRE(tb.set_boundary(a).status == Status::ok);
    CHECK(tb.user(a).channel() == hub::ChannelType::bidirectional);

    // dust deposits credit nothing but still join the owned set
    const auto dust = tb.deposit(a, 900);
    REQUIRE(dust.credited.size() == 1);
    CHECK(dust.credited[0].b_increase == 0);
    CHECK(dust.credited[0].fare == 900);
    CHECK(state_of(tb).owned.size() == 2);
}

TEST_CASE("payment gating follows the receiver's boundary")
{
    Testbed tb(5);
    const Principal& alice = tb.register_user("alice");
    const Principal& bob = tb.register_user("bob");
    tb.mine_and_feed();
    REQUIRE(tb.set_boundary(bob).status == Status::ok);
    const Height bob_boundary = *tb.user(bob).boundary_block;
    tb.mine_and_feed();
    tb.deposit(alice, 1'570);   // credits exactly 90
    const Height source = *tb.user(alice).max_source_block;
    REQUIRE(tb.user(alice).balance == 90);
    REQUIRE(source > bob_boundary);

    CHECK(tb.pay(alice, bob, 30, 10).status == Status::receiver_not_ready);
    CHECK(tb.user(alice).balance == 90);

    tb.mine_and_feed();
    REQUIRE(tb.set_boundary(bob).status == Status::ok);
    const Amount rf_before = tb.ledger().ledger.rf_pending;
    REQUIRE(tb.pay(alice, bob, 30, 10).status == Status::ok);
    CHECK(tb.user(alice).balance == 50);
    CHECK(tb.user(bob).balance == 30);
    CHECK(tb.user(bob).max_source_block == source);
    CHECK(tb.ledger().ledger.rf_pending == rf_before + 10);
    CHECK(tb.pay(alice, bob, 30, 9).status == Status::fee_below_minimum);
    CHECK(tb.pay(alice, bob, 41, 10).status == Status::insufficient_balance);
}

TEST_CASE("a payment batch is atomic")
{
    Testbed tb(6);
    const Principal& a = tb.register_user("a");
    const Principal& b = tb.register_user("b");
    tb.deposit(a, 101'480);
    REQUIRE(tb.set_boundary(b).status == Status::ok);
    std::vector<wire::PaymentEntry> batch(30, wire::PaymentEntry{b.address, 3'000, 10});
    batch[17].amount = 50'000;   // total now exceeds the balance
    const auto before = state_of(tb);
    CHECK(tb.call(a, wire::Payment{a.address, 0, batch}).status == Status::insufficient_balance);
    const auto after = state_of(tb);
    CHECK(after.users.at(a.address).balance == before.users.at(a.address).balance);
    CHECK(after.users.at(b.address).balance == 0);
    CHECK(after.ledger.rf_pending == before.ledger.rf_pending);
    // the rejected request still consumed a nonce
    CHECK(after.users.at(a.address).nonce == before.users.at(a.address).nonce + 1);

    batch[17].amount = 3'000;
    const auto ok = tb.call(a, wire::Payment{a.address, 0, batch});
    REQUIRE(ok.status == Status::ok);
    const auto r = wire::decode_payment_result(ok.payload);
    CHECK(r.accepted == 30);
    CHECK(r.debited == 30 * 3'010);
    CHECK(tb.user(b).balance == 90'000);
}

TEST_CASE("settlement request fee floor and queue order")
{
    Testbed tb(7);
    const Principal& a = tb.register_user("a");
    tb.deposit(a, 1'000'000);
    CHECK(tb.settle(a, 10'000, 339).status == Status::fee_too_low);
    CHECK(tb.settle(a, 0, 400).status == Status::invalid_amount);
    CHECK(tb.settle(a, 2'000'000, 400).status == Status::insufficient_balance);
    REQUIRE(tb.settle(a, 10'000, 340).status == Status::ok);   // 34 * fee_avg exactly; not yet feasible
    CHECK_FALSE(tb.outstanding_plan());
    // a generous fee makes the greedy selection feasible and takes both
    REQUIRE(tb.settle(a, 10'000, 5'000).status == Status::ok);
    REQUIRE(tb.outstanding_plan());
    CHECK(tb.outstanding_plan()->selected == 2);

    // with a plan outstanding everything queues, ordered by fee
    for (Amount f : {1000u, 500u, 700u}) REQUIRE(tb.settle(a, 1'000, f).status == Status::ok);
    const auto q = state_of(tb).queue;
    REQUIRE(q.size() == 3);
    CHECK(q[0].fee == 1000);
    CHECK(q[1].fee == 700);
    CHECK(q[2].fee == 500);
}

TEST_CASE("settlement feasibility arithmetic")
{
    // one deposit with fare 1480 at fee_avg 10; tx_fee = formula_size(1, 2) * 10 = 2260
    Testbed t1(8);
    const Principal& a = t1.register_user("a");
    t1.deposit(a, 200'000);
    REQUIRE(t1.settle(a, 50'000, 680).status == Status::ok);   // collected 2160 < 2260
    CHECK_FALSE(t1.outstanding_plan());

    Testbed t2(8);
    const Principal& b = t2.register_user("a");
    t2.deposit(b, 200'000);
    REQUIRE(t2.settle(b, 50'000, 800).status == Status::ok);   // collected 2280
    const auto plan = t2.outstanding_plan();
    REQUIRE(plan);
    CHECK(plan->fee == 2'260);
    CHECK(plan->inputs == 1);
    CHECK(plan->outputs == 2);
    CHECK(t2.ledger().ledger.fee_reserve == 20);
    CHECK(*tx_fee(plan->transaction) == 2'260);
}

TEST_CASE("confirmation moves pending fees pro rata and chains the leftover")
{
    Testbed tb(9, with_rate(10, 1));
    const Principal& a = tb.register_user("a");
    const Principal& b = tb.register_user("b");
    tb.deposit(a, 500'000);
    tb.deposit(b, 500'000);
    REQUIRE(tb.set_boundary(a).status == Status::ok);
    REQUIRE(tb.set_boundary(b).status == Status::ok);
    for (int i = 0; i < 10; ++i) REQUIRE(tb.pay(a, b, 100, 100).status == Status::ok);
    REQUIRE(tb.settle(a, 100'000, 5'000).status == Status::ok);
    const auto st = state_of(tb);
    REQUIRE(st.plan);
    const auto& p = *st.plan;
    CHECK(p.rf_confirmed_on_confirm == hub::rf_confirmed_amount(1'000, p.s_amount, p.b_total));
    CHECK(p.rf_confirmed_on_confirm <= 1'000);
    CHECK(p.s_amount == 105'000);
    // spend-all: both deposits are inputs
    CHECK(p.inputs.size() == 2);
    CHECK(st.owned.empty());
    Amount in = 0, out = 0;
    for (const auto& i : p.transaction.inputs) in += i.value;
    for (const auto& o : p.transaction.outputs) out += o.value;
    CHECK(in - out == p.tx_fee);
    CHECK(p.tx_fee == formula_size(2, 2) * tb.fee_avg());

    REQUIRE(tb.broadcast_plan().ok());
    const auto fx = tb.mine_and_feed();
    CHECK(fx.settlement_confirmed);
    CHECK(fx.rf_confirmed_gain == p.rf_confirmed_on_confirm);
    const auto after = state_of(tb);
    CHECK(after.ledger.rf_confirmed == p.rf_confirmed_on_confirm);
    REQUIRE(after.owned.size() == 1);
    CHECK(after.owned[0].outpoint == p.leftover_outpoint);
    CHECK(tb.onchain(a.settle_address) == 100'000);

    // the next plan spends the leftover; without plan k on chain it would not validate
    REQUIRE(tb.settle(b, 50'000, 5'000).status == Status::ok);
    const auto next = state_of(tb).plan;
    REQUIRE(next);
    CHECK(next->transaction.inputs[0].prevout == p.leftover_outpoint);
    CHECK(check_transaction(next->transaction, tb.node().utxo()).ok());
    UtxoSet without = tb.node().utxo();
    without.spend(p.leftover_outpoint);
    CHECK(check_transaction(next->transaction, without).reason == RejectReason::missing_utxo);
}

TEST_CASE("insert_block rejects blocks off the tip and unauthenticated hosts")
{
    Testbed tb(10);
    const Block& b = tb.mine_only();
    Block stale = b;
    stale.header.prev_hash[0] ^= 1;
    CHECK(tb.host(wire::InsertBlock{0, stale}).status == Status::not_on_tip);

    const auto intruder = crypto::KeyPair::from_seed(Hash256{0x42});
    wire::InsertBlock ib{0, b};
    ib.host_nonce = tb.ledger().ledger.host_nonce;
    CHECK(tb.service().dispatch(wire::make_signed(ib, intruder)).status == Status::host_auth_failure);
    CHECK(tb.host(wire::InsertBlock{0, b}).status == Status::ok);
    CHECK(tb.host(wire::InsertBlock{0, b}).status == Status::not_on_tip);
}

TEST_CASE("termination settles every balance")
{
    SUBCASE("empty hub")
    {
        Testbed tb(11);
        REQUIRE(tb.host(wire::Terminate{}).status == Status::ok);
        CHECK_FALSE(tb.outstanding_plan());
        CHECK(tb.ledger().terminated);
        const Principal p = tb.make_principal("late");
        CHECK(tb.service().dispatch(wire::Request{wire::AddUser{p.key.pub, p.settle_address}, {}}).status ==
              Status::terminated);
    }
    SUBCASE("two users and all pending fees")
    {
        Testbed tb(12, with_rate(10, 1));
        const Principal& a = tb.register_user("a");
        const Principal& b = tb.register_user("b");
        tb.deposit(a, 300'000);
        tb.deposit(b, 300'000);
        REQUIRE(tb.set_boundary(b).status == Status::ok);
        REQUIRE(tb.pay(a, b, 1'000, 999).status == Status::ok);
        REQUIRE(tb.ledger().ledger.rf_pending == 999);
        REQUIRE(tb.host(wire::Terminate{}).status == Status::ok);
        auto plan = tb.outstanding_plan();
        REQUIRE(plan);
        CHECK(plan->terminal);
        CHECK(plan->selected == 2);
        CHECK(plan->outputs == 3);
        REQUIRE(tb.broadcast_plan().ok());
        const auto fx = tb.mine_and_feed();
        CHECK(fx.rf_confirmed_gain == 999);
        const auto st = state_of(tb);
        CHECK(st.users.at(a.address).balance == 0);
        CHECK(st.users.at(b.address).balance == 0);
        CHECK(st.ledger.rf_pending == 0);
        CHECK(st.ledger.rf_confirmed == 999);
        CHECK(tb.onchain(a.settle_address) > 0);
        CHECK(tb.onchain(b.settle_address) > 0);
        CHECK(tb.identity().holds());
    }
    SUBCASE("a deposit landing after termination is paid back net of the final fee")
    {
        Testbed tb(13);
        const Principal& a = tb.register_user("a");
        tb.deposit(a, 300'000);
        tb.fund(tb.request_deposit(a), 5'000);
        REQUIRE(tb.host(wire::Terminate{}).status == Status::ok);
        REQUIRE(tb.broadcast_plan().ok());
        // fare 1,480 + request fee 340 fall 440 short of the 1-in/2-out fee of 2,260
        const Amount first = 300'000 - 1'480 - 340 - 440;
        auto fx = tb.mine_and_feed();
        CHECK(fx.settlement_confirmed);
        REQUIRE(fx.credited.size() == 1);
        CHECK(tb.onchain(a.settle_address) == first);
        // 5,000 - 1,480 - 340 = 3,180 queued, again 440 short
        auto plan = tb.outstanding_plan();
        REQUIRE(plan);
        CHECK(plan->terminal);
        CHECK(plan->fee == 2'260);
        REQUIRE(tb.broadcast_plan().ok());
        tb.mine_and_feed();
        CHECK(tb.onchain(a.settle_address) == first + 3'180 - 440);
        CHECK_FALSE(tb.outstanding_plan());
        CHECK(tb.ledger().queue_length == 0);
        CHECK(tb.ledger().owned_deposits == 0);
        CHECK(tb.identity().holds());
    }
}

TEST_CASE("queries")
{
    Testbed tb(13);
    const auto latest = tb.service().with_hub([](const hub::Hub& h) { return h.latest_block(); });
    CHECK(latest.height == tb.node().tip_height());
    const Principal& a = tb.register_user("a");
    const Principal& b = tb.register_user("b");
    tb.deposit(a, 50'000);
    REQUIRE(tb.set_boundary(b).status == Status::ok);
    REQUIRE(tb.pay(a, b, 123, 10).status == Status::ok);
    const auto u = wire::decode_user(tb.call(b, wire::QueryUser{b.address, 0}).payload);
    CHECK(u.balance == 123);
    // a future nonce is refused, an old one is fine
    CHECK(tb.service().dispatch(wire::make_signed(wire::QueryUser{b.address, u.nonce + 1}, b.key)).status ==
          Status::stale_request);
    CHECK(tb.service().dispatch(wire::make_signed(wire::QueryUser{b.address, 0}, b.key)).status == Status::ok);
    const auto other = crypto::KeyPair::from_seed(Hash256{5});
    CHECK(tb.service().dispatch(wire::make_signed(wire::QueryUser{b.address, 0}, other)).status == Status::auth_failure);

    const auto v = tb.ledger();
    CHECK(v.users == 2);
    CHECK(v.total_balances == 123 + 50'000 - 1'480 - 133);
    CHECK(tb.identity().holds());
    CHECK(tb.service().with_hub([](const hub::Hub& h) { return oracle::conservation(h.state()).holds(); }));
}

TEST_CASE("snapshot round trip")
{
    Testbed tb(14);
    const Principal& a = tb.register_user("a");
    const Principal& b = tb.register_user("b");
    tb.deposit(a, 400'000);
    REQUIRE(tb.set_boundary(b).status == Status::ok);
    REQUIRE(tb.pay(a, b, 5'000, 10).status == Status::ok);
    REQUIRE(tb.settle(a, 40'000, 3'000).status == Status::ok);
    const Bytes snap = tb.service().with_hub([](const hub::Hub& h) { return h.snapshot(); });
    CHECK(std::string(snap.begin(), snap.begin() + 4) == "RTEE");
    const hub::Hub restored = hub::Hub::restore(snap);
    CHECK(restored.snapshot() == snap);
    CHECK(restored.state().users == state_of(tb).users);
    CHECK(restored.state().plan == state_of(tb).plan);

    Bytes bad = snap;
    bad[4] ^= 0xff;
    CHECK_THROWS(hub::Hub::restore(bad));
    CHECK_THROWS(hub::Hub::restore(ByteView(snap.data(), snap.size() - 3)));
}
