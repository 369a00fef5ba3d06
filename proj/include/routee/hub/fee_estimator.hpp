// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <routee/chain/block.hpp>

#include <deque>

namespace routee::hub {

/// Rolling average on-chain fee rate (satoshis per formula byte) over recent blocks.
class FeeEstimator {
public:
    explicit FeeEstimator(size_t capacity = 2016) : capacity_(capacity) {}

    /// Per-block sample: floor(total fees / total formula size) over non-coinbase transactions.
    /// nullopt when the block has none.
    static std::optional<uint64_t> block_sample(const Block& block);

    void add_block(const Block& block);
    void add_sample(uint64_t sample);

    /// max(1, floor(mean of samples)); 1 before any sample.
    Amount fee_avg() const;

    size_t capacity() const { return capacity_; }
    const std::deque<uint64_t>& samples() const { return samples_; }

private:
    size_t capacity_;
    std::deque<uint64_t> samples_;
    unsigned __int128 sum_ = 0;
};

} // namespace routee::hub
