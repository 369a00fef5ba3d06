// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/light/light_client.hpp>
#include <routee/scenario/scenarios.hpp>
#include <routee/scenario/testbed.hpp>
#include <routee/sim/forge.hpp>

namespace routee::scenario {
namespace {

constexpr Amount kFakeDeposit = 1'000'000;
constexpr Height kHonestExtension = 8;

int64_t signed_delta(Amount after, Amount before) { return static_cast<int64_t>(after) - static_cast<int64_t>(before); }

} // namespace

ScenarioReport scenario_fake_deposit(uint64_t seed, bool naive_builder)
{
    ScenarioReport rep;
    rep.id = naive_builder ? "fake-deposit-naive" : "fake-deposit";
    rep.seed = seed;

    Testbed tb(seed);
    std::mt19937_64 rng(seed);
    const char* honest_names[] = {"alice", "bob", "carol"};
    std::vector<const Principal*> honest;
    std::vector<OutPoint> honest_deposits;
    Amount honest_total = 0;
    for (const char* name : honest_names) {
        const Principal& p = tb.register_user(name);
        const Amount amount = 200'000 + rng() % 50'000;
        auto fx = tb.deposit(p, amount);
        if (fx.credited.size() != 1) throw std::runtime_error("honest deposit not credited");
        honest_deposits.push_back(fx.credited[0].outpoint);
        honest_total += amount;
        honest.push_back(&p);
    }
    for (const Principal* p : honest) wire::expect_ok(tb.set_boundary(*p));
    rep.steps.push_back("3 honest deposits credited, boundaries at tip");

    std::map<std::string, Amount> hub_before;
    for (const Principal* p : honest) hub_before[p->name] = tb.user(*p).balance;

    // The host registers a puppet account and forges a block paying a deposit to it.
    const Principal& mallory = tb.register_user("mallory");
    const Address fake_manager = tb.request_deposit(mallory);
    const Height fork_height = tb.node().tip_height();
    sim::ForgeSpec spec;
    spec.fork_height = fork_height;
    spec.injected_txs.push_back(sim::make_fake_deposit(fake_manager, kFakeDeposit, seed));
    spec.coinbase_address = tb.host_settle_address();
    const std::vector<Block> forged = sim::forge_chain(tb.node(), spec);
    auto forged_fx = tb.feed(forged.front());
    if (forged_fx.credited.size() != 1) throw std::runtime_error("forged deposit not credited");
    const Amount mallory_balance = tb.user(mallory).balance;
    rep.steps.push_back("forged block with fake deposit accepted by hub; puppet balance " + std::to_string(mallory_balance));
    rep.metrics["forged_block_accepted_by_hub"] = true;
    rep.metrics["puppet_hub_balance"] = mallory_balance;

    // Forged block checked by the main chain's own validator.
    const ValidationResult forged_check =
        validate_block(tb.node().headers(), tb.node().utxo(), forged.front());
    rep.metrics["forged_block_on_main_chain"] = std::string(to_string(forged_check.reason));

    // Honest miners keep extending the main chain. Light clients see both chains.
    tb.node().mine_empty(kHonestExtension);
    std::vector<BlockHeader> forged_headers(tb.node().headers().headers().begin(),
                                            tb.node().headers().headers().begin() + static_cast<std::ptrdiff_t>(fork_height) + 1);
    for (const Block& b : forged) forged_headers.push_back(b.header);
    light::VectorSource forged_peer(forged_headers, "forged-host");
    light::NodeSource honest_peer(tb.node(), "honest-node");
    std::vector<light::HeaderSource*> peers{&forged_peer, &honest_peer};
    light::ClientConfig lc;
    const HeaderChain genesis = sim::truncated_chain(tb.node(), 0);
    const light::HeaderStore store = light::sync_headers(peers, genesis, lc);
    const bool main_selected = store.selected_peer() == "honest-node";
    const light::Boundary boundary = light::choose_boundary(store.selected(), lc.k_user);
    rep.metrics["light_client_selected"] = store.selected_peer();
    rep.metrics["light_client_boundary"] = boundary.height;

    // Receivers try to adopt their verified boundary; the hub only knows the forged chain.
    bool boundary_past_fork = false;
    for (const Principal* p : honest) {
        tb.call(*p, wire::UpdateBoundary{p->address, 0, boundary.height, boundary.hash});
        const auto b = tb.user(*p).boundary_block;
        if (b && *b > fork_height) boundary_past_fork = true;
    }
    rep.metrics["boundary_past_fork"] = boundary_past_fork;
    const wire::Response pay = tb.pay(mallory, *honest[0], 50'000, 10);
    rep.metrics["puppet_payment_status"] = std::string(wire::to_string(pay.status));
    rep.steps.push_back("light clients select " + store.selected_peer() + "; puppet payment to honest user: " +
                        std::string(wire::to_string(pay.status)));

    Amount honest_onchain_before = 0;
    for (const OutPoint& op : honest_deposits) {
        const Coin* c = tb.node().utxo().find(op);
        honest_onchain_before += c ? c->value : 0;
    }

    const Amount attack_amount = std::min<Amount>(mallory_balance / 2, honest_total / 2);
    const Amount before_gain = tb.onchain(mallory.settle_address);
    Transaction settlement;
    Amount change_to_hub = 0;
    Amount chain_fee = 0;
    if (naive_builder) {
        const Bytes snap = tb.service().with_hub([](const hub::Hub& h) { return h.snapshot(); });
        const hub::Hub restored = hub::Hub::restore(snap);
        const NaiveSettlement naive = naive_oldest_first(restored, mallory.settle_address, attack_amount);
        settlement = naive.transaction;
        change_to_hub = naive.change;
        chain_fee = naive.tx_fee;
        rep.steps.push_back("naive oldest-first settlement built from restored snapshot, " +
                            std::to_string(naive.inputs.size()) + " inputs");
    } else {
        const Amount fee = 2'000;
        wire::expect_ok(tb.settle(mallory, attack_amount, fee));
        auto plan = tb.outstanding_plan();
        if (!plan) throw std::runtime_error("spend-all plan not built");
        settlement = plan->transaction;
        chain_fee = plan->fee;
        rep.steps.push_back("spend-all settlement built over " + std::to_string(plan->inputs) + " deposits");
    }

    const ValidationResult submitted = tb.node().submit_tx(settlement);
    rep.metrics["settlement_submit"] = submitted.ok() ? "accepted" : std::string(to_string(submitted.reason));
    if (submitted.ok()) tb.node().mine_pending();
    rep.steps.push_back(std::string("settlement on main chain: ") + (submitted.ok() ? "accepted" : to_string(submitted.reason).data()));

    // Observable outcome on the main chain.
    Amount honest_inputs_spent = 0;
    size_t honest_unspent = 0;
    for (const OutPoint& op : honest_deposits) {
        if (tb.node().utxo().contains(op)) {
            ++honest_unspent;
            continue;
        }
        for (const TxIn& in : settlement.inputs)
            if (in.prevout == op) honest_inputs_spent += in.value;
    }
    const Amount attacker_gain = tb.onchain(mallory.settle_address) - before_gain;
    Amount honest_onchain_after = 0;
    for (const OutPoint& op : honest_deposits) {
        const Coin* c = tb.node().utxo().find(op);
        honest_onchain_after += c ? c->value : 0;
    }
    // Honest value that left the hub: spent honest deposits net of change returned and the miner fee.
    const Amount honest_value_taken =
        submitted.ok() ? honest_inputs_spent - std::min(honest_inputs_spent, change_to_hub + chain_fee) : 0;

    rep.metrics["honest_deposits"] = honest_deposits.size();
    rep.metrics["honest_deposits_unspent"] = honest_unspent;
    rep.metrics["honest_deposits_spent"] = honest_value_taken;
    rep.metrics["stolen"] = attacker_gain;
    rep.metrics["settlement_inputs"] = settlement.inputs.size();
    rep.deltas["honest.onchain_deposits"] = signed_delta(honest_onchain_after, honest_onchain_before);
    rep.deltas["mallory.onchain"] = static_cast<int64_t>(attacker_gain);
    for (const Principal* p : honest) rep.deltas[p->name + ".hub_balance"] = signed_delta(tb.user(*p).balance, hub_before[p->name]);

    const bool defended = !submitted.ok() && submitted.reason == RejectReason::missing_utxo &&
                          honest_unspent == honest_deposits.size() && attacker_gain == 0 && main_selected &&
                          !boundary_past_fork && pay.status == wire::Status::receiver_not_ready;
    const bool vulnerable = submitted.ok() && attacker_gain > 0;
    rep.verdict = defended ? Verdict::defended : vulnerable ? Verdict::vulnerable : Verdict::error;
    return rep;
}

} // namespace routee::scenario
