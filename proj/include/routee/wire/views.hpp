// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <routee/hub/hub.hpp>

// Response payload codecs. Same conventions as requests: fixed-width big-endian integers,
// u16-prefixed variable fields, optional values behind a one-byte presence flag.

namespace routee::wire {

struct PlanSummary {
    Hash256 txid{};
    Transaction transaction;
    uint64_t selected = 0;
    uint64_t inputs = 0;
    uint64_t outputs = 0;
    uint64_t size = 0;
    Amount fee = 0;
    Amount s_amount = 0;
    bool terminal = false;
    Height built_at = 0;
    bool operator==(const PlanSummary&) const = default;
};

PlanSummary summarize(const hub::SettlementPlan& plan);

struct SnapshotReceipt {
    Hash256 digest{};
    uint64_t size = 0;
};

Bytes encode_address(const Address& a);
Address decode_address(ByteView raw);

Bytes encode_u64(uint64_t v);
uint64_t decode_u64(ByteView raw);

Bytes encode_user(const hub::UserState& u);
hub::UserState decode_user(ByteView raw);

Bytes encode_payment_result(const hub::PaymentResult& r);
hub::PaymentResult decode_payment_result(ByteView raw);

Bytes encode_latest(const hub::LatestBlock& b);
hub::LatestBlock decode_latest(ByteView raw);

Bytes encode_ledger(const hub::LedgerView& v);
hub::LedgerView decode_ledger(ByteView raw);

Bytes encode_effects(const hub::InsertEffects& e);
hub::InsertEffects decode_effects(ByteView raw);

Bytes encode_plan(const std::optional<PlanSummary>& p);
std::optional<PlanSummary> decode_plan(ByteView raw);

Bytes encode_receipt(const SnapshotReceipt& r);
SnapshotReceipt decode_receipt(ByteView raw);

} // namespace routee::wire
