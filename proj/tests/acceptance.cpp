// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

// Runs every acceptance criterion and prints one PASS/FAIL line each.

#include "cli_harness.hpp"
#include "oracles.hpp"
#include "workloads.hpp"

#include <routee/chain/target.hpp>
#include <routee/scenario/scenarios.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace routee;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

bool run(int id, const char* title, double limit_s, const std::function<Outcome()>& body)
{
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(Clock::now() - t0).count();
    if (s >= limit_s) {
        o.pass = false;
        o.detail += " [over time limit " + std::to_string(int(limit_s)) + " s]";
    }
    char head[160];
    std::snprintf(head, sizeof head, "criterion %2d %s  %-28s %8.2f s  ", id, o.pass ? "PASS" : "FAIL", title, s);
    std::cout << head << o.detail << std::endl;
    return o.pass;
}

Outcome fee_formulas()
{
    const uint64_t size = formula_size(2000, 2001);
    const Amount inc = hub::balance_increase(100'000, 10);
    const Amount rf = hub::rf_confirmed_amount(1'000, 500, 2'000);
    std::ostringstream d;
    d << "size=" << size << " b_increase=" << inc << " rf_confirmed=" << rf;
    return {size == 364'044 && inc == 98'520 && rf == 250, d.str()};
}

Outcome walkthrough()
{
    const auto w = harness::payment_walkthrough(4);
    std::ostringstream d;
    d << "alice=" << w.alice.value("balance", -1) << " bob=" << w.bob.value("balance", -1)
      << " bob.max_source=" << (w.bob.is_object() ? w.bob["max_source_block"].dump() : "?")
      << " rf_pending=" << (w.ledger.is_object() ? w.ledger["rf_pending"].dump() : "?");
    for (const auto& p : w.problems) d << "; " << p;
    return {w.problems.empty(), d.str()};
}

Outcome fake_deposit()
{
    const auto a = scenario::run_scenario("fake-deposit", 5);
    const auto b = scenario::run_scenario("fake-deposit-naive", 5);
    const bool det = scenario::run_scenario("fake-deposit", 5).to_json() == a.to_json() &&
                     scenario::run_scenario("fake-deposit-naive", 5).to_json() == b.to_json();
    const auto stolen = b.metrics.value("stolen", int64_t(-1));
    const auto spent = b.metrics.value("honest_deposits_spent", int64_t(-2));
    std::ostringstream d;
    d << "spend-all=" << scenario::to_string(a.verdict) << " naive=" << scenario::to_string(b.verdict) << " stolen=" << stolen
      << " honest_spent=" << spent << " deterministic=" << det;
    return {a.verdict == scenario::Verdict::defended && b.verdict == scenario::Verdict::vulnerable && stolen == spent && stolen > 0 && det,
            d.str()};
}

Outcome conservation()
{
    const auto r = workload::conservation(2024, 50, 10'000);
    const bool steps = r.identity_failures == 0 && r.verdict_mismatches == 0 && r.balance_mismatches == 0 &&
                       r.monotonicity_failures == 0 && r.spend_all_failures == 0;
    const bool final = r.terminated && r.final_identity && r.final_balance_sum == 0 && r.final_queue == 0 &&
                       r.final_rf_pending == 0 && r.final_rf_confirmed == r.fees_collected;
    std::ostringstream d;
    d << "ops=" << r.operations << " accepted=" << r.accepted << " identity_failures=" << r.identity_failures
      << " final_balances=" << r.final_balance_sum << " rf_pending=" << r.final_rf_pending << " rf_confirmed=" << r.final_rf_confirmed
      << " fees=" << r.fees_collected;
    if (!r.first_failure.empty()) d << "; " << r.first_failure;
    return {r.operations == 10'000 && steps && final, d.str()};
}

Outcome greedy()
{
    const auto r = workload::greedy_vs_bruteforce(500, 500, 12);
    std::ostringstream d;
    d << "trials=" << r.trials << " mismatches=" << r.mismatches;
    if (!r.first_failure.empty()) d << "; " << r.first_failure;
    return {r.trials == 500 && r.mismatches == 0, d.str()};
}

Outcome retarget_windows()
{
    std::mt19937_64 rng(606);
    const ChainParams all[] = {ChainParams::mainnet_like(), ChainParams::simchain(), ChainParams::trivial()};
    size_t mismatches = 0;
    for (int i = 0; i < 200; ++i) {
        const ChainParams& p = all[rng() % 3];
        const uint32_t limit_bits = encode_compact(p.pow_limit);
        const uint32_t size = 3 + rng() % ((limit_bits >> 24) - 2);
        uint32_t prev = (size << 24) | (0x010000 + rng() % 0x7f0000);
        if (*decode_compact(prev) > p.pow_limit) prev = limit_bits;
        const uint32_t first = 1'500'000'000 + rng() % 1'000'000;
        const uint32_t last = first - 1000 + static_cast<uint32_t>(rng() % (6 * p.target_timespan()));
        if (retarget(prev, first, last, p) != oracle::retarget(prev, first, last, p.target_timespan(), p.pow_limit)) ++mismatches;
    }
    return {mismatches == 0, "windows=200 mismatches=" + std::to_string(mismatches)};
}

Outcome throughput()
{
    const auto r = workload::payment_throughput(7, 60'000);
    const double ratio = r.batch30_pps / r.batch1_pps;
    char d[160];
    std::snprintf(d, sizeof d, "batch1=%.0f pps batch30=%.0f pps ratio=%.1f", r.batch1_pps, r.batch30_pps, ratio);
    return {r.batch1_pps >= 5000 && ratio >= 5.0, d};
}

Outcome headers()
{
    const auto r = workload::header_verification(8, 2016, 10'000);
    char d[200];
    std::snprintf(d, sizeof d, "verify %zu headers %.3f s; fuzz=%zu invalid=%zu invalid_accepted=%zu valid_rejected=%zu", r.headers,
                  r.verify_seconds, r.fuzz_cases, r.invalid_cases, r.invalid_accepted, r.valid_rejected);
    return {r.headers == 2016 && r.verify_seconds < 2.0 && r.fuzz_cases == 10'000 && r.invalid_accepted == 0, d};
}

Outcome large_settlement()
{
    const auto r = workload::large_settlement(9, 2000);
    char d[200];
    std::snprintf(d, sizeof d, "inputs=%zu outputs=%zu build=%.2f s on_chain=%s %s", r.inputs, r.outputs, r.build_seconds,
                  r.accepted_on_chain ? "accepted" : "rejected", r.reason.c_str());
    return {r.inputs == 2000 && r.outputs == 2001 && r.build_seconds < 30.0 && r.accepted_on_chain, d};
}

Outcome relays()
{
    const auto r = workload::relay_schedules(10, 1000);
    std::ostringstream d;
    d << "schedules=" << r.schedules << " ops=" << r.operations << " applied=" << r.applied << " double_applied=" << r.double_applied
      << " leaks=" << r.leaked_markers << " state_mismatches=" << r.state_mismatches << " identity_failures=" << r.identity_failures;
    return {r.schedules == 1000 && r.double_applied == 0 && r.leaked_markers == 0 && r.state_mismatches == 0 && r.identity_failures == 0,
            d.str()};
}

} // namespace

int main()
{
    bool ok = true;
    ok &= run(1, "fee formulas", 1, fee_formulas);
    ok &= run(2, "payment walkthrough", 5, walkthrough);
    ok &= run(3, "fake deposit defense", 30, fake_deposit);
    ok &= run(4, "conservation and fees", 120, conservation);
    ok &= run(5, "greedy vs brute force", 60, greedy);
    ok &= run(6, "retarget oracle", 10, retarget_windows);
    ok &= run(7, "payment throughput", 120, throughput);
    ok &= run(8, "header verification", 60, headers);
    ok &= run(9, "large settlement", 600, large_settlement);
    ok &= run(10, "session robustness", 120, relays);
    std::cout << (ok ? "all criteria passed" : "some criteria failed") << std::endl;
    return ok ? 0 : 1;
}
