// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <routee/chain/bytes.hpp>

namespace routee {

Hash256 sha256(ByteView data);
/// SHA-256 applied twice, Bitcoin's block and transaction hash.
Hash256 sha256d(ByteView data);
/// 20-byte key hash used for P2PKH-style addresses (truncated double SHA-256).
Address hash160(ByteView data);

inline Hash256 sha256(std::string_view s)
{
    return sha256(ByteView(reinterpret_cast<const uint8_t*>(s.data()), s.size()));
}

} // namespace routee
