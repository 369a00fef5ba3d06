// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/chain/merkle.hpp>
#include <routee/sim/forge.hpp>

namespace routee::sim {

HeaderChain truncated_chain(const SimNode& node, Height height)
{
    if (height > node.tip_height()) throw std::out_of_range("fork height beyond tip");
    const HeaderChain& main = node.headers();
    HeaderChain chain(main.params(), main.at(main.start_height()), main.start_height());
    for (Height h = main.start_height() + 1; h <= height; ++h) chain.append(main.at(h));
    return chain;
}

std::vector<Block> forge_chain(const SimNode& node, const ForgeSpec& spec)
{
    HeaderChain chain = truncated_chain(node, spec.fork_height);
    std::vector<Block> out;
    uint32_t clock = chain.tip().timestamp + node.params().target_spacing;
    for (size_t i = 0; i < spec.blocks; ++i) {
        const Height height = chain.tip_height() + 1;
        Block b;
        // The height and a fork marker keep forged coinbases distinct from main-chain ones.
        Transaction coinbase = make_coinbase(height, {TxOut{node.params().block_subsidy, spec.coinbase_address}});
        coinbase.inputs[0].unlock.push_back(0xfe);
        b.txs.push_back(std::move(coinbase));
        if (i == 0) b.txs.insert(b.txs.end(), spec.injected_txs.begin(), spec.injected_txs.end());
        b.header.version = 1;
        b.header.prev_hash = chain.tip_hash();
        b.header.merkle_root = merkle_root(b.txids());
        b.header.timestamp = clock;
        b.header.bits = chain.expected_bits(height);
        if (!mine_header(b.header, spec.max_attempts_per_block)) throw ChainError("mining budget exhausted");
        chain.append(b.header);
        clock += node.params().target_spacing;
        out.push_back(std::move(b));
    }
    return out;
}

Transaction make_fake_deposit(const Address& to, Amount amount, uint64_t seed, Amount fee)
{
    Transaction tx;
    TxIn in;
    in.prevout = OutPoint{derive_seed(seed, "fake-outpoint"), 0};
    in.value = amount + fee;
    in.unlock = Bytes{0x00};
    tx.inputs.push_back(std::move(in));
    tx.outputs.push_back(TxOut{amount, to});
    return tx;
}

} // namespace routee::sim
