// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/chain/hash.hpp>
#include <routee/chain/header.hpp>

#include <algorithm>

namespace routee {

std::array<uint8_t, BlockHeader::kSize> serialize_header(const BlockHeader& header)
{
    ByteWriter w;
    w.i32_le(header.version)
        .raw(header.prev_hash)
        .raw(header.merkle_root)
        .u32_le(header.timestamp)
        .u32_le(header.bits)
        .u32_le(header.nonce);
    std::array<uint8_t, BlockHeader::kSize> out{};
    std::copy(w.data().begin(), w.data().end(), out.begin());
    return out;
}

BlockHeader parse_header(ByteView raw)
{
    if (raw.size() != BlockHeader::kSize) throw DecodeError("header must be 80 bytes");
    ByteReader r(raw);
    BlockHeader h;
    h.version = r.i32_le();
    h.prev_hash = r.array<32>();
    h.merkle_root = r.array<32>();
    h.timestamp = r.u32_le();
    h.bits = r.u32_le();
    h.nonce = r.u32_le();
    return h;
}

Hash256 header_hash(const BlockHeader& header)
{
    auto raw = serialize_header(header);
    return sha256d(ByteView(raw));
}

bool check_pow(const BlockHeader& header)
{
    auto target = decode_compact(header.bits);
    if (!target) throw ChainError("malformed-bits");
    return meets_target(header_hash(header), *target);
}

bool meets_target(const Hash256& hash, const uint256& target) { return hash_to_uint(hash) <= target; }

ChainParams ChainParams::mainnet_like() { return ChainParams{}; }

ChainParams ChainParams::simchain()
{
    ChainParams p;
    p.retarget_interval = 144;
    p.target_spacing = 10;
    p.pow_limit = *decode_compact(0x1f0fffff);
    return p;
}

ChainParams ChainParams::trivial()
{
    ChainParams p;
    p.retarget_interval = 16;
    p.target_spacing = 10;
    p.pow_limit = *decode_compact(0x207fffff);
    return p;
}

uint32_t retarget(uint32_t prev_bits, uint32_t first_timestamp, uint32_t last_timestamp, const ChainParams& params)
{
    const int64_t timespan = static_cast<int64_t>(params.target_timespan());
    int64_t actual = int64_t(last_timestamp) - int64_t(first_timestamp);
    actual = std::clamp(actual, timespan / 4, timespan * 4);

    auto prev = decode_compact(prev_bits);
    if (!prev) throw ChainError("malformed-bits");
    uint512 next = uint512(*prev) * uint512(actual);
    next /= uint512(timespan);
    if (next > uint512(params.pow_limit)) next = uint512(params.pow_limit);
    return encode_compact(uint256(next));
}

HeaderChain::HeaderChain(ChainParams params, BlockHeader start, Height start_height)
    : params_(std::move(params)), start_height_(start_height)
{
    auto target = decode_compact(start.bits);
    if (!target) throw ChainError("malformed-bits");
    headers_.push_back(start);
    hashes_.push_back(header_hash(start));
    work_ = target_work(*target);
}

const BlockHeader& HeaderChain::at(Height h) const
{
    if (!contains_height(h)) throw std::out_of_range("height outside header chain");
    return headers_[h - start_height_];
}

const Hash256& HeaderChain::hash_at(Height h) const
{
    if (!contains_height(h)) throw std::out_of_range("height outside header chain");
    return hashes_[h - start_height_];
}

std::optional<Height> HeaderChain::find(const Hash256& hash) const
{
    for (size_t i = hashes_.size(); i-- > 0;) {
        if (hashes_[i] == hash) return start_height_ + i;
    }
    return std::nullopt;
}

uint32_t HeaderChain::expected_bits(Height new_height) const
{
    if (new_height != tip_height() + 1) throw ChainError("expected_bits: height does not follow tip");
    if (new_height % params_.retarget_interval != 0) return tip().bits;
    const Height first = new_height - params_.retarget_interval;
    if (first < start_height_) throw ChainError("missing-window");
    return retarget(tip().bits, at(first).timestamp, tip().timestamp, params_);
}

std::string HeaderChain::check_next(const BlockHeader& header) const
{
    if (header.prev_hash != tip_hash()) return "bad-prevblk";
    uint32_t expected;
    try {
        expected = expected_bits(tip_height() + 1);
    } catch (const ChainError& e) {
        return e.what();
    }
    if (header.bits != expected) return "bad-diffbits";
    try {
        if (!check_pow(header)) return "high-hash";
    } catch (const ChainError&) {
        return "malformed-bits";
    }
    return {};
}

void HeaderChain::append(const BlockHeader& header)
{
    if (std::string reason = check_next(header); !reason.empty()) throw ChainError(reason);
    headers_.push_back(header);
    hashes_.push_back(header_hash(header));
    work_ += target_work(*decode_compact(header.bits));
}

} // namespace routee
