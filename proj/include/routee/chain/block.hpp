// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <routee/chain/header.hpp>
#include <routee/chain/transaction.hpp>

#include <cstring>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace routee {

struct Block {
    BlockHeader header;
    std::vector<Transaction> txs;

    std::vector<Hash256> txids() const;
    bool operator==(const Block&) const = default;
};

/// Header, 4-byte big-endian transaction count, then the canonical transactions back to back.
Bytes serialize_block(const Block& block);
Block parse_block(ByteReader& reader);
Block parse_block(ByteView raw);

struct Coin {
    Amount value = 0;
    Address address{};
    bool operator==(const Coin&) const = default;
};

struct OutPointHasher {
    size_t operator()(const OutPoint& o) const noexcept
    {
        size_t h;
        std::memcpy(&h, o.txid.data(), sizeof h);
        return h ^ (size_t(o.vout) * 0x9e3779b97f4a7c15ULL);
    }
};

class UtxoSet {
public:
    using Map = std::unordered_map<OutPoint, Coin, OutPointHasher>;

    const Coin* find(const OutPoint& o) const;
    bool contains(const OutPoint& o) const { return find(o) != nullptr; }
    size_t size() const { return coins_.size(); }
    const Map& coins() const { return coins_; }

    void add(const OutPoint& o, const Coin& c);
    void spend(const OutPoint& o);
    /// Removes the spent outpoints and adds the outputs of every transaction in order.
    void apply(const Block& block);

    Amount total_value() const;
    Amount balance_of(const Address& a) const;

    bool operator==(const UtxoSet& other) const { return coins_ == other.coins_; }

private:
    Map coins_;
};

enum class RejectReason {
    none,
    bad_prevblk,
    bad_diffbits,
    high_hash,
    malformed_bits,
    missing_window,
    merkle_mismatch,
    no_coinbase,
    bad_coinbase,
    missing_utxo,
    value_mismatch,
    double_spend,
    bad_signature,
    value_overflow,
};

std::string_view to_string(RejectReason r);

struct ValidationResult {
    RejectReason reason = RejectReason::none;
    std::string detail;

    bool ok() const { return reason == RejectReason::none; }
    static ValidationResult reject(RejectReason r, std::string detail = {}) { return {r, std::move(detail)}; }
};

/// Checks a non-coinbase transaction against `utxo`: outpoints exist, input values match,
/// no outpoint repeats, unlocks verify, outputs do not exceed inputs.
ValidationResult check_transaction(const Transaction& tx, const UtxoSet& utxo, bool check_signatures = true);

/// Full block check against the chain tip and UTXO set. Each failed rule yields a distinct reason.
ValidationResult validate_block(const HeaderChain& chain, const UtxoSet& utxo, const Block& block,
                                bool check_signatures = true);

/// Header-only part of validate_block: linkage, retarget and proof of work.
ValidationResult validate_header(const HeaderChain& chain, const BlockHeader& header);

UtxoSet apply_block(UtxoSet utxo, const Block& block);

} // namespace routee
