// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <routee/hub/hub.hpp>
#include <routee/sim/relay.hpp>

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace routee::scenario {

enum class Verdict { defended, vulnerable, error };
std::string_view to_string(Verdict v);

struct ScenarioReport {
    std::string id;
    uint64_t seed = 0;
    std::vector<std::string> steps;
    Verdict verdict = Verdict::error;
    /// Per-principal value changes, keyed "<principal>.<ledger>".
    std::map<std::string, int64_t> deltas;
    nlohmann::json metrics = nlohmann::json::object();
    std::string error;

    nlohmann::json to_json() const;
};

/// "fake-deposit", "fake-deposit-naive", "abort-economics", "message-abuse".
std::vector<std::string> scenario_ids();
/// Runs one scenario; unexpected exceptions become verdict error.
ScenarioReport run_scenario(std::string_view id, uint64_t seed);

/// Host forges a block with a fake deposit. With `naive_builder` the settlement is built by the
/// oldest-first oracle from a restored snapshot instead of the hub's spend-all plan.
ScenarioReport scenario_fake_deposit(uint64_t seed, bool naive_builder = false);
ScenarioReport scenario_abort_economics(uint64_t seed);
ScenarioReport scenario_message_abuse(uint64_t seed);

// ---- naive settlement oracle ------------------------------------------------

struct NaiveSettlement {
    Transaction transaction;
    std::vector<hub::OwnedDeposit> inputs;
    Amount change = 0;
    Address change_address{};
    Amount tx_fee = 0;
};

/// Least set of oldest deposits covering `amount` plus the transaction fee, change back to the
/// first input's manager address. Signs with the manager keys held in `hub`. This is the
/// vulnerable baseline; the hub itself never builds transactions this way.
NaiveSettlement naive_oldest_first(const hub::Hub& hub, const Address& pay_to, Amount amount);

// ---- relay trials -----------------------------------------------------------

struct RelayTrialResult {
    size_t operations = 0;
    size_t applied = 0;           // operations the hub accepted at least once
    size_t double_applied = 0;    // operations accepted more than once
    size_t state_mismatches = 0;  // users whose balance differs from the replay of accepted operations
    size_t leaked_markers = 0;    // plaintext markers seen on the relay path
    size_t frames_observed = 0;
    bool identity_holds = false;
};

/// Pre-built hub with funded, boundary-set users, restored fresh for every trial.
class RelayFixture {
public:
    explicit RelayFixture(uint64_t seed, size_t users = 3);

    /// Each user pipelines `ops_per_user` signed payments through a relay applying `schedule`
    /// in both directions, then reconnects once and resends everything.
    RelayTrialResult run(const sim::RelaySchedule& schedule, size_t ops_per_user = 4) const;

    const Bytes& snapshot() const { return snapshot_; }

private:
    struct User {
        crypto::KeyPair key;
        Address address{};
    };

    Bytes snapshot_;
    crypto::KeyPair hub_static_;
    std::vector<User> users_;
    uint64_t seed_;
};

} // namespace routee::scenario
