// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <routee/chain/block.hpp>
#include <routee/chain/header.hpp>
#include <routee/hub/fee_estimator.hpp>
#include <routee/wire/messages.hpp>

#include <map>
#include <optional>
#include <span>
#include <vector>

namespace routee::hub {

using wire::ProtocolError;
using wire::Status;

/// Fee-accounting size of one P2PKH input and output.
inline constexpr uint64_t kInputBytes = 148;
inline constexpr uint64_t kOutputBytes = 34;

enum class ChannelType { none, send_only, receive_only, bidirectional };
std::string_view to_string(ChannelType c);

struct UserState {
    Address user_address{};
    crypto::PublicKey public_key;
    uint64_t nonce = 0;
    Amount balance = 0;
    std::optional<Height> max_source_block;
    std::optional<Height> boundary_block;
    Address settle_address{};

    ChannelType channel() const;
    bool operator==(const UserState&) const = default;
};

struct PendingDeposit {
    Address manager_address{};
    Address beneficiary{};
    Height registered_height = 0;
    Height expiry_height = 0;
    bool operator==(const PendingDeposit&) const = default;
};

struct OwnedDeposit {
    OutPoint outpoint;
    Amount value = 0;
    Amount fare = 0;   // settlement fare collected in advance at credit time
    Height source_height = 0;
    Address manager_address{};
    bool operator==(const OwnedDeposit&) const = default;
};

struct SettleRequest {
    Address user{};
    Address settle_address{};
    Amount amount = 0;
    Amount fee = 0;
    uint64_t enqueue_seq = 0;
    bool operator==(const SettleRequest&) const = default;
};

enum class PlanStatus : uint8_t { outstanding = 0, confirmed = 1 };

struct SettlementPlan {
    Transaction transaction;
    Hash256 txid{};
    std::vector<SettleRequest> selected;
    std::vector<OwnedDeposit> inputs;
    Amount s_amount = 0;
    Amount b_total = 0;
    uint64_t tx_inputs = 0;
    uint64_t tx_outputs = 0;
    uint64_t tx_size = 0;
    Amount tx_fee = 0;
    Amount rf_confirmed_on_confirm = 0;
    /// Part of a terminal plan's fee shortfall that is paid out of the fees it confirms.
    Amount rf_deficit_from_confirm = 0;
    OutPoint leftover_outpoint;
    Amount leftover_value = 0;
    Address leftover_address{};
    /// Terminal plans pay the host instead of creating a leftover deposit.
    bool terminal = false;
    Amount host_payout = 0;
    Height built_at = 0;
    PlanStatus status = PlanStatus::outstanding;

    bool operator==(const SettlementPlan&) const = default;
};

struct HubLedger {
    Amount rf_pending = 0;
    Amount rf_confirmed = 0;        // cumulative confirmed routing fees
    Amount rf_withdrawn = 0;        // confirmed fees paid out to the host
    Amount rf_spent_on_fees = 0;    // confirmed fees that covered terminal settlement shortfalls
    Amount rf_inflight = 0;         // fees that the outstanding plan confirms on inclusion
    Amount fee_reserve = 0;
    Amount min_routing_fee = 0;
    crypto::PublicKey host_public_key;
    Address host_settle_address{};
    uint64_t host_nonce = 0;

    Amount total_deposited = 0;
    Amount total_routing_fees = 0;
    Amount total_settled = 0;       // user amounts paid by confirmed plans
    Amount total_host_paid = 0;
    Amount total_tx_fees = 0;

    /// Confirmed fees still owed to the host.
    Amount rf_available() const { return rf_confirmed - rf_withdrawn - rf_spent_on_fees; }
    bool operator==(const HubLedger&) const = default;
};

struct HubConfig {
    crypto::PublicKey host_public_key;
    Address host_settle_address{};
    Amount min_routing_fee = 0;
    ChainParams params = ChainParams::mainnet_like();
    size_t fee_window = 2016;
    Height deposit_expiry_blocks = 100;
    /// Seed for manager keys generated inside the hub.
    Hash256 key_seed{};
};

struct PaymentResult {
    size_t accepted = 0;
    Amount debited = 0;
    Amount routing_fees = 0;
};

struct CreditedDeposit {
    Address beneficiary{};
    OutPoint outpoint;
    Amount d_amount = 0;
    Amount b_increase = 0;
    Amount fare = 0;
};

struct InsertEffects {
    Height height = 0;
    Amount fee_avg = 0;
    std::vector<CreditedDeposit> credited;
    size_t expired = 0;
    bool settlement_confirmed = false;
    Amount rf_confirmed_gain = 0;
    bool plan_built = false;
};

struct LatestBlock {
    Height height = 0;
    Hash256 hash{};
};

/// Both sides of the conservation identity, in satoshis.
struct LedgerIdentity {
    unsigned __int128 held = 0;          // owned deposits + outstanding leftover or host payout
    unsigned __int128 liabilities = 0;   // balances + queue + fees + reserve + fares
    unsigned __int128 deposited = 0;     // every deposit ever credited
    unsigned __int128 accounted = 0;     // held + paid out + on-chain fees paid
    bool holds() const { return held == liabilities && deposited == accounted; }
};

struct LedgerView {
    HubLedger ledger;
    Amount fee_avg = 0;
    Amount total_balances = 0;
    Amount queued_total = 0;
    size_t users = 0;
    size_t pending_deposits = 0;
    size_t owned_deposits = 0;
    size_t queue_length = 0;
    size_t confirmed_plans = 0;
    bool plan_outstanding = false;
    bool terminated = false;
    Height tip_height = 0;
};

/// Complete hub ("enclave") state. Everything a snapshot has to carry.
struct HubState {
    HubConfig config;
    HeaderChain chain;
    FeeEstimator fees;
    std::map<Address, UserState> users;
    std::map<Address, PendingDeposit> pending;
    std::vector<OwnedDeposit> owned;
    std::map<Address, crypto::KeyPair> manager_keys;
    std::vector<SettleRequest> queue;   // fee descending, then enqueue_seq ascending
    HubLedger ledger;
    std::optional<SettlementPlan> plan;
    std::vector<SettlementPlan> confirmed_plans;
    uint64_t next_request_seq = 0;
    uint64_t next_manager_index = 0;
    bool terminated = false;
};

/// The hub state machine. Every mutating operation runs to completion before the next one
/// starts; callers serialise access (see wire::HubService).
class Hub {
public:
    /// Verifies `headers` on top of the trusted start header and primes the fee estimator from
    /// `fee_blocks`, which must belong to that chain. Throws ProtocolError(init_failure) naming
    /// the offending height.
    static Hub init(HubConfig config, const BlockHeader& start_header, Height start_height,
                    std::span<const BlockHeader> headers, std::span<const Block> fee_blocks);

    Address add_user(const wire::AddUser& req);
    Address add_deposit(const wire::AddDeposit& req, ByteView signature);
    Height update_boundary_block(const wire::UpdateBoundary& req, ByteView signature);
    PaymentResult multi_hop_payment(const wire::Payment& req, ByteView signature);
    uint64_t request_settlement(const wire::Settle& req, ByteView signature);

    /// Builds the next spend-all settlement if possible; nullptr when not yet feasible.
    const SettlementPlan* try_build_settlement();

    InsertEffects insert_block(const wire::InsertBlock& req, ByteView signature);
    void terminate(const wire::Terminate& req, ByteView signature);
    /// Authenticates a host-only command without other effects (build-settlement, get-plan, snapshot).
    void authorize_host(const wire::RequestBody& body, ByteView signature);

    UserState query_user(const wire::QueryUser& req, ByteView signature) const;
    LatestBlock latest_block() const;
    LedgerView ledger_view() const;
    LedgerIdentity ledger_identity() const;

    const HubState& state() const { return state_; }
    const UserState* find_user(const Address& a) const;
    Amount fee_avg() const { return state_.fees.fee_avg(); }
    const SettlementPlan* outstanding_plan() const { return state_.plan ? &*state_.plan : nullptr; }
    /// Manager key lookup, for inspecting a dumped snapshot outside the hub.
    const crypto::KeyPair* manager_key(const Address& a) const;

    /// Versioned binary dump ("RTEE", version 1). No rollback protection.
    Bytes snapshot() const;
    static Hub restore(ByteView raw);

    bool operator==(const Hub& other) const { return snapshot() == other.snapshot(); }

private:
    Hub() = default;

    UserState& authenticate(const Address& user, const wire::RequestBody& body, uint64_t nonce, ByteView signature);
    void authenticate_host(const wire::RequestBody& body, uint64_t nonce, ByteView signature);
    void require_active() const;
    Address new_manager_address();
    void enqueue(SettleRequest request);
    std::optional<size_t> select_count() const;
    void build_plan(size_t n);
    void confirm_plan(Height height, InsertEffects& effects);

    HubState state_;
};

/// Greedy selection rule: the largest n in [1, queue size] such that
/// fares + reserve + sum of the top-n request fees covers formula_size(inputs, n + 1) * fee_avg.
std::optional<size_t> greedy_settlement_count(std::span<const Amount> fees_desc, Amount fares, Amount reserve,
                                              uint64_t n_inputs, Amount fee_avg);

/// floor(rf_pending * s_amount / b_total) with a 128-bit intermediate; 0 when b_total is 0.
Amount rf_confirmed_amount(Amount rf_pending, Amount s_amount, Amount b_total);

/// Balance credited for a deposit: d_amount - min(d_amount, 148 * fee_avg).
Amount balance_increase(Amount d_amount, Amount fee_avg);

} // namespace routee::hub
