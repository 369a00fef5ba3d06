// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <routee/chain/bytes.hpp>
#include <routee/crypto/signature.hpp>

#include <compare>
#include <optional>
#include <vector>

namespace routee {

struct OutPoint {
    Hash256 txid{};
    uint32_t vout = 0;

    static OutPoint null() { return OutPoint{Hash256{}, 0xffffffff}; }
    bool is_null() const { return vout == 0xffffffff && txid == Hash256{}; }

    auto operator<=>(const OutPoint&) const = default;
};

struct TxIn {
    OutPoint prevout;
    Amount value = 0;   // value of the spent output, checked against the UTXO record
    Bytes unlock;

    bool operator==(const TxIn&) const = default;
};

struct TxOut {
    Amount value = 0;
    Address address{};

    bool operator==(const TxOut&) const = default;
};

/// Simplified P2PKH transaction. A coinbase has exactly one input spending the null outpoint.
struct Transaction {
    std::vector<TxIn> inputs;
    std::vector<TxOut> outputs;

    bool is_coinbase() const { return inputs.size() == 1 && inputs[0].prevout.is_null(); }

    bool operator==(const Transaction&) const = default;
};

/// Canonical serialization: LE version 1, BE counts and values, 2-byte length-prefixed unlocks.
Bytes serialize_tx(const Transaction& tx);
Transaction parse_tx(ByteReader& reader);
Transaction parse_tx(ByteView raw);

Hash256 tx_id(const Transaction& tx);

/// Message every input's unlock signs: the double hash of the serialization with all unlocks empty.
Hash256 signature_hash(const Transaction& tx);

/// Fee-accounting size of a P2PKH transaction: 148 bytes per input, 34 per output, 10 overhead.
constexpr uint64_t formula_size(uint64_t n_inputs, uint64_t n_outputs)
{
    return 148 * n_inputs + 34 * n_outputs + 10;
}

inline uint64_t formula_size(const Transaction& tx) { return formula_size(tx.inputs.size(), tx.outputs.size()); }

/// Sum of input values minus sum of output values; nullopt on overflow or when outputs exceed inputs.
std::optional<Amount> tx_fee(const Transaction& tx);
std::optional<Amount> output_total(const Transaction& tx);

Transaction make_coinbase(Height height, std::vector<TxOut> outputs);

/// Unlock blob: encoded public key and signature, each with a 2-byte length.
Bytes make_unlock(const crypto::KeyPair& key, const Hash256& sighash);
bool verify_unlock(ByteView unlock, const Address& lock_address, const Hash256& sighash);

/// Signs every input of `tx` with the matching key from `keys` (same order as inputs).
void sign_inputs(Transaction& tx, std::span<const crypto::KeyPair* const> keys);

} // namespace routee
