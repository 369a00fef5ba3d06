// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/chain/hash.hpp>
#include <routee/chain/merkle.hpp>
#include <routee/sim/node.hpp>

#include <algorithm>
#include <map>
#include <set>

namespace routee::sim {

bool mine_header(BlockHeader& header, uint64_t max_attempts)
{
    auto target = decode_compact(header.bits);
    if (!target) throw ChainError("malformed-bits");
    for (uint64_t attempt = 0; attempt < max_attempts; ++attempt) {
        if (hash_to_uint(header_hash(header)) <= *target) return true;
        if (++header.nonce == 0) ++header.timestamp;
    }
    return false;
}

Hash256 derive_seed(uint64_t seed, std::string_view label, uint64_t index)
{
    ByteWriter w;
    w.u64(seed).str(label).u64(index);
    return sha256(w.data());
}

SimNode::SimNode(ChainParams params, uint64_t seed, uint32_t genesis_time)
    : params_(std::move(params)),
      miner_(crypto::KeyPair::from_seed(derive_seed(seed, "miner"))),
      clock_(genesis_time),
      rng_(seed)
{
    Block genesis;
    genesis.txs.push_back(make_coinbase(0, {TxOut{params_.block_subsidy, miner_address()}}));
    genesis.header.version = 1;
    genesis.header.merkle_root = merkle_root(genesis.txids());
    genesis.header.timestamp = clock_;
    genesis.header.bits = encode_compact(params_.pow_limit);
    mine_header(genesis.header);
    clock_ += params_.target_spacing;
    chain_ = HeaderChain(params_, genesis.header, 0);
    utxo_.apply(genesis);
    blocks_.push_back(std::move(genesis));
}

ValidationResult SimNode::submit_tx(const Transaction& tx)
{
    if (auto r = check_transaction(tx, utxo_); !r.ok()) return r;
    std::set<OutPoint> in_mempool;
    for (const Transaction& m : mempool_)
        for (const TxIn& in : m.inputs) in_mempool.insert(in.prevout);
    for (const TxIn& in : tx.inputs) {
        if (in_mempool.count(in.prevout)) return ValidationResult::reject(RejectReason::double_spend, "conflicts with mempool");
    }
    mempool_.push_back(tx);
    return {};
}

Block SimNode::assemble(std::vector<Transaction> txs)
{
    const Height height = tip_height() + 1;
    Amount fees = 0;
    for (const Transaction& tx : txs) {
        auto fee = tx_fee(tx);
        if (!fee) throw ChainError("value-overflow");
        fees += *fee;
    }
    Block block;
    block.txs.reserve(txs.size() + 1);
    block.txs.push_back(make_coinbase(height, {TxOut{params_.block_subsidy + fees, miner_address()}}));
    for (Transaction& tx : txs) block.txs.push_back(std::move(tx));
    block.header.version = 1;
    block.header.prev_hash = chain_.tip_hash();
    block.header.merkle_root = merkle_root(block.txids());
    block.header.timestamp = clock_;
    block.header.bits = chain_.expected_bits(height);
    mine_header(block.header);
    return block;
}

const Block& SimNode::mine_block(std::vector<Transaction> txs)
{
    Block block = assemble(std::move(txs));
    if (auto r = validate_block(chain_, utxo_, block); !r.ok())
        throw ChainError(std::string("mined block rejected: ") + std::string(to_string(r.reason)) + " " + r.detail);
    chain_.append(block.header);
    utxo_.apply(block);
    // Drop mempool entries that were mined or now conflict.
    std::erase_if(mempool_, [&](const Transaction& m) {
        return std::any_of(m.inputs.begin(), m.inputs.end(), [&](const TxIn& in) { return !utxo_.contains(in.prevout); });
    });
    clock_ += params_.target_spacing;
    blocks_.push_back(std::move(block));
    return blocks_.back();
}

const Block& SimNode::mine_pending()
{
    std::vector<Transaction> txs = std::move(mempool_);
    mempool_.clear();
    return mine_block(std::move(txs));
}

void SimNode::mine_empty(size_t count)
{
    for (size_t i = 0; i < count; ++i) mine_block();
}

Transaction SimNode::pay_from_miner(const Address& to, Amount amount, Amount fee)
{
    return pay_from(miner_, {TxOut{amount, to}}, fee);
}

Transaction SimNode::pay_from(const crypto::KeyPair& key, std::vector<TxOut> outputs, Amount fee)
{
    const Address owner = key.pub.address();
    std::set<OutPoint> reserved;
    for (const Transaction& m : mempool_)
        for (const TxIn& in : m.inputs) reserved.insert(in.prevout);

    std::map<OutPoint, Coin> mine;   // ordered for deterministic coin selection
    for (const auto& [op, coin] : utxo_.coins())
        if (coin.address == owner && !reserved.count(op)) mine.emplace(op, coin);

    Amount need = fee;
    for (const TxOut& o : outputs) need += o.value;
    Transaction tx;
    Amount have = 0;
    for (const auto& [op, coin] : mine) {
        if (have >= need) break;
        tx.inputs.push_back(TxIn{op, coin.value, {}});
        have += coin.value;
    }
    if (have < need) throw ChainError("insufficient funds in simulated wallet");
    tx.outputs = std::move(outputs);
    if (have > need) tx.outputs.push_back(TxOut{have - need, owner});
    std::vector<const crypto::KeyPair*> keys(tx.inputs.size(), &key);
    sign_inputs(tx, keys);
    return tx;
}

UtxoSet naive_replay(std::span<const Block> blocks)
{
    // Plain std::map bookkeeping, deliberately independent of UtxoSet::apply.
    std::map<OutPoint, Coin> coins;
    for (const Block& b : blocks) {
        for (const Transaction& tx : b.txs) {
            if (!tx.is_coinbase())
                for (const TxIn& in : tx.inputs) coins.erase(in.prevout);
            const Hash256 id = sha256d(serialize_tx(tx));
            for (uint32_t i = 0; i < tx.outputs.size(); ++i) coins[{id, i}] = Coin{tx.outputs[i].value, tx.outputs[i].address};
        }
    }
    UtxoSet out;
    for (const auto& [op, c] : coins) out.add(op, c);
    return out;
}

} // namespace routee::sim
