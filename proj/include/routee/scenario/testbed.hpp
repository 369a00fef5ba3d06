// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <routee/sim/node.hpp>
#include <routee/wire/service.hpp>
#include <routee/wire/views.hpp>

#include <deque>
#include <memory>
#include <string>

namespace routee::scenario {

struct TestbedOptions {
    ChainParams params = ChainParams::trivial();
    /// Blocks of fee-paying wallet traffic mined before the hub starts (primes fee_avg).
    size_t warmup_blocks = 6;
    Amount fee_rate = 10;
    Amount min_routing_fee = 10;
    crypto::CryptoMode mode = crypto::CryptoMode::fast_test;
};

struct Principal {
    std::string name;
    crypto::KeyPair key;
    Address address{};
    Address settle_address{};
};

/// One simchain node plus one hub service with a scripted host. Deterministic per seed.
class Testbed {
public:
    explicit Testbed(uint64_t seed, TestbedOptions options = {});

    uint64_t seed() const { return seed_; }
    const TestbedOptions& options() const { return options_; }
    sim::SimNode& node() { return node_; }
    wire::HubService& service() { return *service_; }
    const crypto::KeyPair& host_key() const { return host_key_; }
    const crypto::KeyPair& hub_static_key() const { return hub_static_; }
    Address host_settle_address() const { return host_settle_; }

    /// Creates keys for `name` and registers the user with the hub.
    const Principal& register_user(const std::string& name);
    /// Keys only, not registered.
    Principal make_principal(const std::string& name);
    const Principal& principal(const std::string& name) const;

    /// Signs `body` for `p`, filling in the current nonce.
    wire::Request sign(const Principal& p, wire::RequestBody body) const;
    /// Signs a host command, filling in the current host nonce.
    wire::Request sign_host(wire::RequestBody body) const;
    wire::Response call(const Principal& p, wire::RequestBody body);
    wire::Response host(wire::RequestBody body);

    Address request_deposit(const Principal& p);
    /// Pays `amount` from the miner wallet to `to` and submits it to the mempool.
    Transaction fund(const Address& to, Amount amount);
    /// Deposit request, funding transaction, one block, insertion.
    hub::InsertEffects deposit(const Principal& p, Amount amount);

    /// Mines the mempool into one block and inserts it into the hub.
    hub::InsertEffects mine_and_feed();
    const Block& mine_only();
    hub::InsertEffects feed(const Block& block);
    /// Inserts every main-chain block the hub has not seen yet.
    void feed_to_tip();

    /// Boundary at node tip - depth, checked against the hub.
    wire::Response set_boundary(const Principal& p, Height depth = 0);
    wire::Response pay(const Principal& from, const Principal& to, Amount amount, Amount fee);
    wire::Response settle(const Principal& p, Amount amount, Amount fee);

    std::optional<wire::PlanSummary> outstanding_plan() const;
    /// Submits the outstanding plan's transaction to the node mempool.
    ValidationResult broadcast_plan();

    hub::UserState user(const Principal& p) const;
    hub::LedgerView ledger() const;
    hub::LedgerIdentity identity() const;
    Amount fee_avg() const;
    Amount onchain(const Address& a) const { return node_.utxo().balance_of(a); }
    Amount wallet_fee(uint64_t inputs, uint64_t outputs) const { return formula_size(inputs, outputs) * options_.fee_rate; }

private:
    uint64_t seed_;
    TestbedOptions options_;
    sim::SimNode node_;
    crypto::KeyPair host_key_;
    crypto::KeyPair hub_static_;
    Address host_settle_{};
    std::unique_ptr<wire::HubService> service_;
    std::deque<Principal> principals_;
    uint64_t next_key_ = 0;
};

} // namespace routee::scenario
