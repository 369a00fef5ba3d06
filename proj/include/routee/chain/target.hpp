// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <routee/chain/bytes.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>

namespace routee {

namespace mp = boost::multiprecision;

using uint256 = mp::number<mp::cpp_int_backend<256, 256, mp::unsigned_magnitude, mp::unchecked, void>>;
using uint512 = mp::number<mp::cpp_int_backend<512, 512, mp::unsigned_magnitude, mp::unchecked, void>>;

/// Raised for structurally invalid chain data, e.g. a compact target that is negative or overflows.
class ChainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Interprets a 32-byte hash as a little-endian 256-bit integer.
uint256 hash_to_uint(const Hash256& hash);
Hash256 uint_to_hash(const uint256& value);

/// Bitcoin compact ("nBits") encoding. Returns nullopt for negative, overflowing or zero targets.
std::optional<uint256> decode_compact(uint32_t bits);
uint32_t encode_compact(const uint256& target);

/// Expected number of hashes to meet `target`: floor(2^256 / (target + 1)).
uint256 target_work(const uint256& target);

} // namespace routee
