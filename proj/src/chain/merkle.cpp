// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/chain/hash.hpp>
#include <routee/chain/merkle.hpp>

#include <cstring>
#include <stdexcept>

namespace routee {

Hash256 merkle_root(std::vector<Hash256> hashes)
{
    if (hashes.empty()) throw std::invalid_argument("merkle_root of empty list");
    std::array<uint8_t, 64> pair{};
    while (hashes.size() > 1) {
        if (hashes.size() % 2 != 0) hashes.push_back(hashes.back());
        for (size_t i = 0; i < hashes.size() / 2; ++i) {
            std::memcpy(pair.data(), hashes[2 * i].data(), 32);
            std::memcpy(pair.data() + 32, hashes[2 * i + 1].data(), 32);
            hashes[i] = sha256d(ByteView(pair));
        }
        hashes.resize(hashes.size() / 2);
    }
    return hashes[0];
}

} // namespace routee
