// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <routee/chain/block.hpp>
#include <routee/chain/header.hpp>
#include <routee/crypto/signature.hpp>

#include <random>
#include <vector>

namespace routee::sim {

/// Searches nonces until the header meets its own target. Returns false if `max_attempts` runs out.
bool mine_header(BlockHeader& header, uint64_t max_attempts = UINT64_MAX);

/// Deterministic 32-byte value from a seed and label, for reproducible keys and fake txids.
Hash256 derive_seed(uint64_t seed, std::string_view label, uint64_t index = 0);

/// Simulated UTXO chain with an easy target, a mempool and a controllable clock.
/// Single-threaded; wrap in a mutex to share.
class SimNode {
public:
    explicit SimNode(ChainParams params = ChainParams::simchain(), uint64_t seed = 1, uint32_t genesis_time = 1'600'000'000);

    const ChainParams& params() const { return params_; }
    const HeaderChain& headers() const { return chain_; }
    const std::vector<Block>& blocks() const { return blocks_; }
    const Block& block_at(Height h) const { return blocks_.at(h); }
    const UtxoSet& utxo() const { return utxo_; }
    Height tip_height() const { return chain_.tip_height(); }
    const std::vector<Transaction>& mempool() const { return mempool_; }

    /// Validates against the UTXO set and the mempool; valid transactions enter the mempool.
    ValidationResult submit_tx(const Transaction& tx);

    /// Mines `txs` into the next block. Throws ChainError if any transaction is invalid.
    const Block& mine_block(std::vector<Transaction> txs = {});
    /// Mines everything currently in the mempool.
    const Block& mine_pending();
    void mine_empty(size_t count);

    /// Next block timestamp. Each mined block advances the clock by the target spacing.
    uint32_t clock() const { return clock_; }
    void set_clock(uint32_t t) { clock_ = t; }
    void advance_clock(int64_t seconds) { clock_ = static_cast<uint32_t>(int64_t(clock_) + seconds); }

    const crypto::KeyPair& miner_key() const { return miner_; }
    Address miner_address() const { return miner_.pub.address(); }

    /// Builds and signs a payment from the miner's coins (spent outputs in the mempool are skipped).
    Transaction pay_from_miner(const Address& to, Amount amount, Amount fee);
    /// Generic wallet spend: picks coins of `key`, pays `outputs`, returns change to the key's address.
    Transaction pay_from(const crypto::KeyPair& key, std::vector<TxOut> outputs, Amount fee);

    std::mt19937_64& rng() { return rng_; }

private:
    Block assemble(std::vector<Transaction> txs);

    ChainParams params_;
    HeaderChain chain_;
    std::vector<Block> blocks_;
    UtxoSet utxo_;
    std::vector<Transaction> mempool_;
    crypto::KeyPair miner_;
    uint32_t clock_;
    std::mt19937_64 rng_;
};

/// Replays blocks from an empty set, validating nothing: the independent UTXO oracle.
UtxoSet naive_replay(std::span<const Block> blocks);

} // namespace routee::sim
