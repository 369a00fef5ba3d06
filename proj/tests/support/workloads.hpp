// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

// Randomised workloads shared by the unit tests and the acceptance binary.

#pragma once

#include <routee/chain/header.hpp>
#include <routee/hub/hub.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace routee::workload {

struct ConservationRun {
    size_t operations = 0;
    size_t accepted = 0;
    size_t identity_failures = 0;     // library identity or oracle recomputation broken after a step
    size_t verdict_mismatches = 0;    // payment status differs from the acceptance oracle
    size_t balance_mismatches = 0;    // hub balance differs from the shadow ledger
    size_t monotonicity_failures = 0;
    size_t spend_all_failures = 0;    // plan inputs differ from the owned set at build time
    size_t plans_confirmed = 0;
    Amount fees_collected = 0;
    // after termination
    bool terminated = false;
    Amount final_balance_sum = 0;
    Amount final_queue = 0;
    Amount final_rf_pending = 0;
    Amount final_rf_confirmed = 0;
    bool final_identity = false;
    std::string first_failure;
};

/// Random payments, settlements, deposits, boundary moves and blocks across `users` users,
/// checked after every step; then full termination.
ConservationRun conservation(uint64_t seed, size_t users, size_t operations);

struct GreedyTrials {
    size_t trials = 0;
    size_t mismatches = 0;
    std::string first_failure;
};

/// greedy_settlement_count against subset enumeration over random queues of at most `max_queue` fees.
GreedyTrials greedy_vs_bruteforce(uint64_t seed, size_t trials, size_t max_queue = 12);

/// The same comparison through a live hub: queue up requests behind an outstanding plan,
/// confirm it, and compare the next plan's size with the oracle.
GreedyTrials hub_greedy_vs_bruteforce(uint64_t seed, size_t trials, size_t max_queue = 12);

struct Throughput {
    double batch1_pps = 0;
    double batch30_pps = 0;
    size_t payments = 0;
};

/// Payments per second applied by the single-writer service, pre-signed, fast-test crypto.
Throughput payment_throughput(uint64_t seed, size_t payments);

struct HeaderBench {
    size_t headers = 0;
    double verify_seconds = 0;
    size_t fuzz_cases = 0;
    size_t invalid_cases = 0;       // corruptions the oracle rules invalid
    size_t invalid_accepted = 0;    // of those, accepted by HeaderChain
    size_t valid_rejected = 0;      // oracle-valid corruptions the chain rejected
};

/// Headers of a simchain-params chain; mined once per process.
const std::vector<BlockHeader>& sample_headers(size_t count);

HeaderBench header_verification(uint64_t seed, size_t headers, size_t fuzz_cases);

struct LargeSettlement {
    size_t inputs = 0;
    size_t outputs = 0;
    double build_seconds = 0;
    bool accepted_on_chain = false;
    std::string reason;
};

/// A plan spending `deposits` deposits into `deposits` user outputs plus the leftover.
LargeSettlement large_settlement(uint64_t seed, size_t deposits);

struct RelayRuns {
    size_t schedules = 0;
    size_t operations = 0;
    size_t applied = 0;
    size_t double_applied = 0;
    size_t state_mismatches = 0;
    size_t leaked_markers = 0;
    size_t identity_failures = 0;
};

RelayRuns relay_schedules(uint64_t seed, size_t schedules);

} // namespace routee::workload
