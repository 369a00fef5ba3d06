// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <routee/chain/bytes.hpp>

#include <optional>

namespace routee::crypto {

using AeadKey = std::array<uint8_t, 16>;
using AeadNonce = std::array<uint8_t, 12>;
constexpr size_t kAeadTagSize = 16;

/// AES-128-GCM. Output is ciphertext followed by the 16-byte tag.
Bytes aead_seal(const AeadKey& key, const AeadNonce& nonce, ByteView associated, ByteView plaintext);
/// nullopt when the tag does not verify.
std::optional<Bytes> aead_open(const AeadKey& key, const AeadNonce& nonce, ByteView associated, ByteView sealed);

/// X25519 Diffie-Hellman.
struct DhKeyPair {
    std::array<uint8_t, 32> public_key{};
    std::array<uint8_t, 32> secret_key{};

    static DhKeyPair generate();
};

/// Shared secret; nullopt for degenerate (low-order) peer keys.
std::optional<std::array<uint8_t, 32>> dh_shared(const std::array<uint8_t, 32>& secret,
                                                 const std::array<uint8_t, 32>& peer_public);

} // namespace routee::crypto
