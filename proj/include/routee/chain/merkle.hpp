// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <routee/chain/bytes.hpp>

#include <vector>

namespace routee {

/// Bitcoin Merkle root: pairwise double-SHA-256, the last hash duplicated on odd levels.
/// Throws std::invalid_argument on an empty list.
Hash256 merkle_root(std::vector<Hash256> leaves);

} // namespace routee
