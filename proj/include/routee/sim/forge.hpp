// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <routee/sim/node.hpp>

namespace routee::sim {

struct ForgeSpec {
    Height fork_height = 0;                      // forged blocks build on the main block at this height
    std::vector<Transaction> injected_txs;       // placed in the first forged block
    size_t blocks = 1;
    uint64_t max_attempts_per_block = UINT64_MAX;
    Address coinbase_address{};
};

/// Mines an alternative chain on top of `fork_height`. The blocks pass header and Merkle checks
/// but are never applied to `node`; injected transactions are not checked against any UTXO set.
std::vector<Block> forge_chain(const SimNode& node, const ForgeSpec& spec);

/// A transaction paying `to` from a fabricated outpoint that exists on no chain.
Transaction make_fake_deposit(const Address& to, Amount amount, uint64_t seed, Amount fee = 0);

/// Header chain of `node` up to and including `height`.
HeaderChain truncated_chain(const SimNode& node, Height height);

} // namespace routee::sim
