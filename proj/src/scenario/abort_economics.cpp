// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/scenario/scenarios.hpp>
#include <routee/scenario/testbed.hpp>

namespace routee::scenario {
namespace {

enum class Strategy { honest, shutdown, stop_feeding, withhold };

constexpr size_t kUsers = 6;
constexpr size_t kRounds = 6;
constexpr size_t kDeviateRound = 2;   // first round the host deviates in
constexpr size_t kPaymentsPerRound = 12;

std::string_view name_of(Strategy s)
{
    switch (s) {
    case Strategy::honest: return "honest";
    case Strategy::shutdown: return "shutdown";
    case Strategy::stop_feeding: return "stop-feeding";
    case Strategy::withhold: return "withhold";
    }
    return "?";
}

struct Outcome {
    Amount payoff = 0;          // routing fees paid out to the host
    Amount host_onchain = 0;    // value at the host's settle address on the main chain
    Amount rf_pending_left = 0;
    std::vector<Amount> rf_confirmed_by_round;
    size_t plans_confirmed = 0;
};

Outcome run_strategy(uint64_t seed, Strategy strategy, bool zero_fees)
{
    TestbedOptions opts;
    opts.min_routing_fee = zero_fees ? 0 : 10;
    Testbed tb(seed, opts);
    std::mt19937_64 rng(seed ^ 0xabcdefULL);

    std::vector<const Principal*> users;
    for (size_t i = 0; i < kUsers; ++i) users.push_back(&tb.register_user("user" + std::to_string(i)));
    for (const Principal* p : users) tb.fund(tb.request_deposit(*p), 300'000 + rng() % 100'000);
    tb.mine_and_feed();
    for (const Principal* p : users) wire::expect_ok(tb.set_boundary(*p));

    Outcome out;
    bool alive = true;
    for (size_t round = 0; round < kRounds && alive; ++round) {
        for (size_t k = 0; k < kPaymentsPerRound; ++k) {
            const size_t from = rng() % kUsers;
            const size_t to = (from + 1 + rng() % (kUsers - 1)) % kUsers;
            const Amount fee = zero_fees ? 0 : 10 + rng() % 40;
            tb.pay(*users[from], *users[to], 1'000 + rng() % 5'000, fee);
        }
        tb.settle(*users[round % kUsers], 20'000, 3'000);

        const bool deviating = round >= kDeviateRound;
        switch (deviating ? strategy : Strategy::honest) {
        case Strategy::honest:
            tb.broadcast_plan();
            tb.mine_and_feed();
            break;
        case Strategy::shutdown:
            alive = false;
            break;
        case Strategy::stop_feeding:
            tb.broadcast_plan();
            tb.mine_only();
            break;
        case Strategy::withhold:
            tb.mine_and_feed();   // plan k never reaches the chain
            break;
        }
        if (alive) out.rf_confirmed_by_round.push_back(tb.ledger().ledger.rf_confirmed);
    }

    if (strategy == Strategy::honest) {
        wire::expect_ok(tb.host(wire::Terminate{}));
        for (int i = 0; i < 32 && (tb.outstanding_plan() || tb.ledger().owned_deposits > 0); ++i) {
            tb.broadcast_plan();
            tb.mine_and_feed();
        }
    } else if (strategy == Strategy::withhold) {
        wire::expect_ok(tb.host(wire::Terminate{}));
        for (int i = 0; i < 4; ++i) tb.mine_and_feed();
    }

    const hub::LedgerView v = tb.ledger();
    out.payoff = v.ledger.rf_withdrawn;
    out.host_onchain = tb.onchain(tb.host_settle_address());
    out.rf_pending_left = v.ledger.rf_pending;
    out.plans_confirmed = v.confirmed_plans;
    return out;
}

} // namespace

ScenarioReport scenario_abort_economics(uint64_t seed)
{
    ScenarioReport rep;
    rep.id = "abort-economics";
    rep.seed = seed;

    const Strategy all[] = {Strategy::honest, Strategy::shutdown, Strategy::stop_feeding, Strategy::withhold};
    std::map<Strategy, Outcome> runs;
    for (Strategy s : all) {
        runs[s] = run_strategy(seed, s, false);
        const Outcome& o = runs[s];
        rep.metrics["payoff"][std::string(name_of(s))] = o.payoff;
        rep.metrics["host_onchain"][std::string(name_of(s))] = o.host_onchain;
        rep.metrics["rf_confirmed_by_round"][std::string(name_of(s))] = o.rf_confirmed_by_round;
        rep.deltas["host." + std::string(name_of(s))] = static_cast<int64_t>(o.payoff);
        rep.steps.push_back(std::string(name_of(s)) + ": payoff " + std::to_string(o.payoff) + ", plans confirmed " +
                            std::to_string(o.plans_confirmed));
    }

    const Amount honest = runs[Strategy::honest].payoff;
    bool honest_strictly_best = true;
    for (Strategy s : all)
        if (s != Strategy::honest && runs[s].payoff >= honest) honest_strictly_best = false;

    // Withholding plan k freezes rf_confirmed from round k on; the honest run keeps growing.
    const auto& held = runs[Strategy::withhold].rf_confirmed_by_round;
    const auto& hon = runs[Strategy::honest].rf_confirmed_by_round;
    bool frozen = held.size() == kRounds;
    for (size_t r = kDeviateRound; frozen && r < held.size(); ++r) frozen = held[r] == held[kDeviateRound - 1];
    const bool honest_grows = hon.size() == kRounds && hon.back() > hon[kDeviateRound - 1];
    rep.metrics["withhold_freezes_rf_confirmed"] = frozen;
    rep.metrics["honest_rf_confirmed_grows"] = honest_grows;
    rep.metrics["honest_strictly_best"] = honest_strictly_best;

    // Edge: with no routing fees every strategy earns nothing.
    bool edge_tie = true;
    for (Strategy s : all) {
        const Outcome o = run_strategy(seed, s, true);
        rep.metrics["zero_fee_payoff"][std::string(name_of(s))] = o.payoff;
        if (o.payoff != 0) edge_tie = false;
    }
    rep.metrics["zero_fee_boundary_case"] = edge_tie;
    rep.steps.push_back(std::string("zero-fee edge: ") + (edge_tie ? "all strategies tie at zero (boundary case)" : "payoffs differ"));

    rep.verdict = honest_strictly_best && frozen && honest_grows && edge_tie ? Verdict::defended : Verdict::vulnerable;
    return rep;
}

} // namespace routee::scenario
