// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

// Independent re-implementations used as test oracles. None of these call
// into the code they check beyond plain data accessors.

#pragma once

#include <routee/chain/block.hpp>
#include <routee/hub/hub.hpp>

#include <map>
#include <optional>
#include <vector>

namespace routee::oracle {

/// Retarget recomputed with GMP: compact decode, clamp, multiply, divide, cap, compact encode.
uint32_t retarget(uint32_t prev_bits, uint32_t first_ts, uint32_t last_ts, uint64_t timespan, const uint256& pow_limit);

/// Bitcoin compact decode/encode over GMP. decode returns nullopt for negative or overflowing forms.
std::optional<std::string> decode_compact_hex(uint32_t bits);
uint32_t encode_compact_hex(const std::string& hex);

/// Merkle root by level recursion, hashing with OpenSSL's SHA-256 directly.
Hash256 merkle_root(const std::vector<Hash256>& leaves);

/// sha256d of arbitrary bytes computed with OpenSSL's one-shot API.
Hash256 sha256d(ByteView data);

/// UTXO set rebuilt by walking every block in order over a std::map.
using CoinMap = std::map<std::pair<Hash256, uint32_t>, std::pair<Amount, Address>>;
CoinMap replay(const std::vector<Block>& blocks);
CoinMap to_map(const UtxoSet& utxo);

/// Largest subset size whose fees (plus fares and reserve) cover the settlement fee, by exhausting all subsets.
std::optional<size_t> max_feasible_settlement(const std::vector<Amount>& fees, Amount fares, Amount reserve,
                                              uint64_t n_inputs, Amount fee_avg);

/// Acceptance rule for one payment batch, evaluated over a copy of the user table.
/// Returns the status the hub must answer with (ok when accepted).
wire::Status payment_verdict(const std::map<Address, hub::UserState>& users, const Address& sender,
                             const std::vector<wire::PaymentEntry>& batch, Amount min_routing_fee);

/// Conservation identity recomputed from raw state: what the hub holds on chain against what it owes.
struct Conservation {
    unsigned __int128 held = 0;
    unsigned __int128 owed = 0;
    bool holds() const { return held == owed; }
};
Conservation conservation(const hub::HubState& s);

} // namespace routee::oracle
