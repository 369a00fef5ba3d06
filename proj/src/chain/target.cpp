// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/chain/target.hpp>

namespace routee {

uint256 hash_to_uint(const Hash256& hash)
{
    uint256 v = 0;
    for (int i = 31; i >= 0; --i) {
        v <<= 8;
        v |= hash[static_cast<size_t>(i)];
    }
    return v;
}

Hash256 uint_to_hash(const uint256& value)
{
    Hash256 out{};
    uint256 v = value;
    for (size_t i = 0; i < 32; ++i) {
        out[i] = static_cast<uint8_t>(v & 0xff);
        v >>= 8;
    }
    return out;
}

std::optional<uint256> decode_compact(uint32_t bits)
{
    const uint32_t size = bits >> 24;
    uint32_t word = bits & 0x007fffff;
    const bool negative = word != 0 && (bits & 0x00800000) != 0;
    const bool overflow = word != 0 && (size > 34 || (word > 0xff && size > 33) || (word > 0xffff && size > 32));
    if (negative || overflow) return std::nullopt;

    uint256 value;
    if (size <= 3) {
        word >>= 8 * (3 - size);
        value = word;
    } else {
        value = word;
        value <<= 8 * (size - 3);
    }
    if (value == 0) return std::nullopt;
    return value;
}

uint32_t encode_compact(const uint256& target)
{
    uint32_t size = target == 0 ? 0 : static_cast<uint32_t>((mp::msb(target) + 1 + 7) / 8);
    uint32_t compact;
    if (size <= 3) {
        compact = static_cast<uint32_t>(target) << (8 * (3 - size));
    } else {
        compact = static_cast<uint32_t>(target >> (8 * (size - 3)));
    }
    // The mantissa's sign bit must stay clear.
    if (compact & 0x00800000) {
        compact >>= 8;
        ++size;
    }
    return compact | (size << 24);
}

uint256 target_work(const uint256& target)
{
    // 2^256 does not fit; (~t / (t + 1)) + 1 is the same quotient.
    if (target == ~uint256(0)) return 1;
    return (~target) / (target + 1) + 1;
}

} // namespace routee
