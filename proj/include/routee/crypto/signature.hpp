// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <routee/chain/bytes.hpp>

#include <string>

namespace routee::crypto {

/// Signature schemes. Ed25519 is the fast deterministic scheme used in tests and
/// for on-chain manager keys; RSA-3072 matches the sizing of the production setup.
enum class SigScheme : uint8_t {
    ed25519 = 1,
    rsa3072 = 2,
};

enum class CryptoMode { fast_test, full };

SigScheme scheme_for(CryptoMode mode);
CryptoMode parse_crypto_mode(std::string_view text);
std::string to_string(CryptoMode mode);

struct PublicKey {
    SigScheme scheme = SigScheme::ed25519;
    Bytes key;

    /// Scheme tag followed by the raw key bytes.
    Bytes encode() const;
    static PublicKey decode(ByteView raw);
    /// 20-byte address: hash160 of the encoded key.
    Address address() const;

    bool operator==(const PublicKey&) const = default;
};

struct KeyPair {
    PublicKey pub;
    Bytes secret;

    static KeyPair generate(SigScheme scheme);
    /// Deterministic Ed25519 keypair from a 32-byte seed.
    static KeyPair from_seed(const Hash256& seed);

    Bytes encode() const;
    static KeyPair decode(ByteView raw);
};

Bytes sign(const KeyPair& key, ByteView message);
bool verify(const PublicKey& pub, ByteView message, ByteView signature);

/// Fills `out` with cryptographically secure random bytes.
void random_bytes(std::span<uint8_t> out);

} // namespace routee::crypto
