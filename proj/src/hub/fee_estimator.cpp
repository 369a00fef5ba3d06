// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/hub/fee_estimator.hpp>

namespace routee::hub {

std::optional<uint64_t> FeeEstimator::block_sample(const Block& block)
{
    unsigned __int128 fees = 0;
    unsigned __int128 size = 0;
    for (const Transaction& tx : block.txs) {
        if (tx.is_coinbase()) continue;
        auto fee = tx_fee(tx);
        if (!fee) continue;
        fees += *fee;
        size += formula_size(tx);
    }
    if (size == 0) return std::nullopt;
    return static_cast<uint64_t>(fees / size);
}

void FeeEstimator::add_block(const Block& block)
{
    if (auto s = block_sample(block)) add_sample(*s);
}

void FeeEstimator::add_sample(uint64_t sample)
{
    samples_.push_back(sample);
    sum_ += sample;
    while (samples_.size() > capacity_) {
        sum_ -= samples_.front();
        samples_.pop_front();
    }
}

Amount FeeEstimator::fee_avg() const
{
    if (samples_.empty()) return 1;
    uint64_t mean = static_cast<uint64_t>(sum_ / samples_.size());
    return mean < 1 ? 1 : mean;
}

} // namespace routee::hub
