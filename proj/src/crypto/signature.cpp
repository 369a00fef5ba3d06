// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/chain/hash.hpp>
#include <routee/crypto/signature.hpp>

#include <openssl/evp.h>
#include <openssl/x509.h>
#include <sodium.h>

#include <memory>
#include <stdexcept>

namespace routee::crypto {
namespace {

void ensure_sodium()
{
    static const int ok = sodium_init();
    if (ok < 0) throw std::runtime_error("libsodium initialisation failed");
}

struct PkeyDeleter {
    void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
struct MdCtxDeleter {
    void operator()(EVP_MD_CTX* c) const { EVP_MD_CTX_free(c); }
};
using PkeyPtr = std::unique_ptr<EVP_PKEY, PkeyDeleter>;
using MdCtxPtr = std::unique_ptr<EVP_MD_CTX, MdCtxDeleter>;

KeyPair rsa_generate()
{
    PkeyPtr pkey(EVP_PKEY_Q_keygen(nullptr, nullptr, "RSA", size_t{3072}));
    if (!pkey) throw std::runtime_error("RSA key generation failed");

    KeyPair kp;
    kp.pub.scheme = SigScheme::rsa3072;
    unsigned char* buf = nullptr;
    int n = i2d_PUBKEY(pkey.get(), &buf);
    if (n <= 0) throw std::runtime_error("RSA public key export failed");
    kp.pub.key.assign(buf, buf + n);
    OPENSSL_free(buf);

    buf = nullptr;
    n = i2d_PrivateKey(pkey.get(), &buf);
    if (n <= 0) throw std::runtime_error("RSA private key export failed");
    kp.secret.assign(buf, buf + n);
    OPENSSL_clear_free(buf, static_cast<size_t>(n));
    return kp;
}

Bytes rsa_sign(const KeyPair& key, ByteView message)
{
    const unsigned char* p = key.secret.data();
    PkeyPtr pkey(d2i_AutoPrivateKey(nullptr, &p, static_cast<long>(key.secret.size())));
    if (!pkey) throw std::runtime_error("bad RSA private key");
    MdCtxPtr ctx(EVP_MD_CTX_new());
    size_t len = 0;
    if (EVP_DigestSignInit(ctx.get(), nullptr, EVP_sha256(), nullptr, pkey.get()) != 1 ||
        EVP_DigestSign(ctx.get(), nullptr, &len, message.data(), message.size()) != 1) {
        throw std::runtime_error("RSA sign failed");
    }
    Bytes sig(len);
    if (EVP_DigestSign(ctx.get(), sig.data(), &len, message.data(), message.size()) != 1)
        throw std::runtime_error("RSA sign failed");
    sig.resize(len);
    return sig;
}

bool rsa_verify(const PublicKey& pub, ByteView message, ByteView signature)
{
    const unsigned char* p = pub.key.data();
    PkeyPtr pkey(d2i_PUBKEY(nullptr, &p, static_cast<long>(pub.key.size())));
    if (!pkey) return false;
    MdCtxPtr ctx(EVP_MD_CTX_new());
    if (EVP_DigestVerifyInit(ctx.get(), nullptr, EVP_sha256(), nullptr, pkey.get()) != 1) return false;
    return EVP_DigestVerify(ctx.get(), signature.data(), signature.size(), message.data(), message.size()) == 1;
}

} // namespace

SigScheme scheme_for(CryptoMode mode)
{
    return mode == CryptoMode::full ? SigScheme::rsa3072 : SigScheme::ed25519;
}

CryptoMode parse_crypto_mode(std::string_view text)
{
    if (text == "full") return CryptoMode::full;
    if (text == "fast-test" || text == "fast") return CryptoMode::fast_test;
    throw std::invalid_argument("unknown crypto mode: " + std::string(text));
}

std::string to_string(CryptoMode mode) { return mode == CryptoMode::full ? "full" : "fast-test"; }

Bytes PublicKey::encode() const
{
    Bytes out;
    out.reserve(key.size() + 1);
    out.push_back(static_cast<uint8_t>(scheme));
    out.insert(out.end(), key.begin(), key.end());
    return out;
}

PublicKey PublicKey::decode(ByteView raw)
{
    if (raw.empty()) throw DecodeError("empty public key");
    PublicKey pk;
    switch (raw[0]) {
    case static_cast<uint8_t>(SigScheme::ed25519):
        if (raw.size() != 1 + crypto_sign_PUBLICKEYBYTES) throw DecodeError("bad ed25519 key length");
        pk.scheme = SigScheme::ed25519;
        break;
    case static_cast<uint8_t>(SigScheme::rsa3072):
        pk.scheme = SigScheme::rsa3072;
        break;
    default:
        throw DecodeError("unknown signature scheme");
    }
    pk.key.assign(raw.begin() + 1, raw.end());
    return pk;
}

Address PublicKey::address() const
{
    Bytes enc = encode();
    return hash160(enc);
}

KeyPair KeyPair::generate(SigScheme scheme)
{
    if (scheme == SigScheme::rsa3072) return rsa_generate();
    Hash256 seed{};
    random_bytes(seed);
    return from_seed(seed);
}

KeyPair KeyPair::from_seed(const Hash256& seed)
{
    ensure_sodium();
    KeyPair kp;
    kp.pub.scheme = SigScheme::ed25519;
    kp.pub.key.resize(crypto_sign_PUBLICKEYBYTES);
    kp.secret.resize(crypto_sign_SECRETKEYBYTES);
    crypto_sign_seed_keypair(kp.pub.key.data(), kp.secret.data(), seed.data());
    return kp;
}

Bytes KeyPair::encode() const
{
    ByteWriter w;
    Bytes pk = pub.encode();
    w.var_bytes(pk).var_bytes(secret);
    return std::move(w).take();
}

KeyPair KeyPair::decode(ByteView raw)
{
    ByteReader r(raw);
    KeyPair kp;
    Bytes pk = r.var_bytes();
    kp.pub = PublicKey::decode(pk);
    kp.secret = r.var_bytes();
    r.expect_end();
    return kp;
}

Bytes sign(const KeyPair& key, ByteView message)
{
    if (key.pub.scheme == SigScheme::rsa3072) return rsa_sign(key, message);
    ensure_sodium();
    if (key.secret.size() != crypto_sign_SECRETKEYBYTES) throw std::invalid_argument("bad ed25519 secret key");
    Bytes sig(crypto_sign_BYTES);
    crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), key.secret.data());
    return sig;
}

bool verify(const PublicKey& pub, ByteView message, ByteView signature)
{
    if (pub.scheme == SigScheme::rsa3072) return rsa_verify(pub, message, signature);
    ensure_sodium();
    if (pub.key.size() != crypto_sign_PUBLICKEYBYTES || signature.size() != crypto_sign_BYTES) return false;
    return crypto_sign_verify_detached(signature.data(), message.data(), message.size(), pub.key.data()) == 0;
}

void random_bytes(std::span<uint8_t> out)
{
    ensure_sodium();
    randombytes_buf(out.data(), out.size());
}

} // namespace routee::crypto
