// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <routee/chain/bytes.hpp>
#include <routee/chain/target.hpp>

#include <optional>
#include <string>
#include <vector>

namespace routee {

struct BlockHeader {
    int32_t version = 0;
    Hash256 prev_hash{};
    Hash256 merkle_root{};
    uint32_t timestamp = 0;
    uint32_t bits = 0;
    uint32_t nonce = 0;

    static constexpr size_t kSize = 80;

    bool operator==(const BlockHeader&) const = default;
};

std::array<uint8_t, BlockHeader::kSize> serialize_header(const BlockHeader& header);
BlockHeader parse_header(ByteView raw);

Hash256 header_hash(const BlockHeader& header);

/// True iff the header hash, read as a little-endian integer, is at most the target in `bits`.
/// Throws ChainError when `bits` does not decode to a positive target.
bool check_pow(const BlockHeader& header);
/// The proof-of-work comparison: hash read as a little-endian integer, at most the target.
bool meets_target(const Hash256& hash, const uint256& target);

/// Consensus constants that differ between a mainnet-like chain and the desk-scale simulator.
struct ChainParams {
    uint32_t retarget_interval = 2016;
    uint32_t target_spacing = 600;   // seconds
    uint256 pow_limit = *decode_compact(0x1d00ffff);
    Amount block_subsidy = 50'0000'0000;

    uint64_t target_timespan() const { return uint64_t(retarget_interval) * target_spacing; }

    static ChainParams mainnet_like();
    /// Easy 12-leading-zero-bit target with a 144-block, 10-second retarget window.
    static ChainParams simchain();
    /// Regtest-style target where every other hash qualifies.
    static ChainParams trivial();
};

/// New compact target after a retarget window whose first and last headers carry the given timestamps.
/// The timespan is clamped to [timespan/4, timespan*4] and the result capped at the pow limit.
uint32_t retarget(uint32_t prev_bits, uint32_t first_timestamp, uint32_t last_timestamp, const ChainParams& params);

/// Append-only header chain from a trusted start header.
class HeaderChain {
public:
    HeaderChain() = default;
    HeaderChain(ChainParams params, BlockHeader start, Height start_height);

    const ChainParams& params() const { return params_; }
    Height start_height() const { return start_height_; }
    Height tip_height() const { return start_height_ + headers_.size() - 1; }
    const BlockHeader& tip() const { return headers_.back(); }
    const Hash256& tip_hash() const { return hashes_.back(); }
    size_t size() const { return headers_.size(); }
    const uint256& cumulative_work() const { return work_; }
    const std::vector<BlockHeader>& headers() const { return headers_; }

    bool contains_height(Height h) const { return h >= start_height_ && h <= tip_height(); }
    const BlockHeader& at(Height h) const;
    const Hash256& hash_at(Height h) const;
    std::optional<Height> find(const Hash256& hash) const;

    /// Compact target required for the header at `new_height` (must be tip_height() + 1).
    /// Throws ChainError when the retarget window reaches below the start header.
    uint32_t expected_bits(Height new_height) const;

    /// Empty string when `header` validly extends the tip; otherwise a reject reason
    /// ("bad-prevblk", "bad-diffbits", "high-hash", "malformed-bits", "missing-window").
    std::string check_next(const BlockHeader& header) const;

    /// Appends after check_next; throws ChainError with the reject reason on failure.
    void append(const BlockHeader& header);

    /// Storage footprint of the serialized headers.
    size_t storage_bytes() const { return headers_.size() * BlockHeader::kSize; }

private:
    ChainParams params_;
    Height start_height_ = 0;
    std::vector<BlockHeader> headers_;
    std::vector<Hash256> hashes_;
    uint256 work_ = 0;
};

} // namespace routee
