// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/crypto/aead.hpp>
#include <routee/crypto/signature.hpp>

#include <openssl/evp.h>
#include <sodium.h>

#include <memory>
#include <stdexcept>

namespace routee::crypto {
namespace {

struct CipherCtxDeleter {
    void operator()(EVP_CIPHER_CTX* c) const { EVP_CIPHER_CTX_free(c); }
};
using CipherCtxPtr = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;

int len_of(size_t n)
{
    if (n > 0x7fffffff) throw std::length_error("AEAD input too large");
    return static_cast<int>(n);
}

} // namespace

Bytes aead_seal(const AeadKey& key, const AeadNonce& nonce, ByteView associated, ByteView plaintext)
{
    CipherCtxPtr ctx(EVP_CIPHER_CTX_new());
    Bytes out(plaintext.size() + kAeadTagSize);
    int len = 0;
    int total = 0;
    if (EVP_EncryptInit_ex(ctx.get(), EVP_aes_128_gcm(), nullptr, nullptr, nullptr) != 1 ||
        EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN, static_cast<int>(nonce.size()), nullptr) != 1 ||
        EVP_EncryptInit_ex(ctx.get(), nullptr, nullptr, key.data(), nonce.data()) != 1 ||
        EVP_EncryptUpdate(ctx.get(), nullptr, &len, associated.data(), len_of(associated.size())) != 1 ||
        EVP_EncryptUpdate(ctx.get(), out.data(), &len, plaintext.data(), len_of(plaintext.size())) != 1) {
        throw std::runtime_error("AES-GCM encrypt failed");
    }
    total = len;
    if (EVP_EncryptFinal_ex(ctx.get(), out.data() + total, &len) != 1 ||
        EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kAeadTagSize, out.data() + plaintext.size()) != 1) {
        throw std::runtime_error("AES-GCM finalise failed");
    }
    return out;
}

std::optional<Bytes> aead_open(const AeadKey& key, const AeadNonce& nonce, ByteView associated, ByteView sealed)
{
    if (sealed.size() < kAeadTagSize) return std::nullopt;
    const size_t ct_len = sealed.size() - kAeadTagSize;
    CipherCtxPtr ctx(EVP_CIPHER_CTX_new());
    Bytes out(ct_len);
    std::array<uint8_t, kAeadTagSize> tag{};
    std::copy(sealed.begin() + static_cast<std::ptrdiff_t>(ct_len), sealed.end(), tag.begin());
    int len = 0;
    if (EVP_DecryptInit_ex(ctx.get(), EVP_aes_128_gcm(), nullptr, nullptr, nullptr) != 1 ||
        EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN, static_cast<int>(nonce.size()), nullptr) != 1 ||
        EVP_DecryptInit_ex(ctx.get(), nullptr, nullptr, key.data(), nonce.data()) != 1 ||
        EVP_DecryptUpdate(ctx.get(), nullptr, &len, associated.data(), len_of(associated.size())) != 1 ||
        EVP_DecryptUpdate(ctx.get(), out.data(), &len, sealed.data(), len_of(ct_len)) != 1 ||
        EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kAeadTagSize, tag.data()) != 1) {
        return std::nullopt;
    }
    if (EVP_DecryptFinal_ex(ctx.get(), out.data() + len, &len) != 1) return std::nullopt;
    return out;
}

DhKeyPair DhKeyPair::generate()
{
    DhKeyPair kp;
    random_bytes(kp.secret_key);
    crypto_scalarmult_base(kp.public_key.data(), kp.secret_key.data());
    return kp;
}

std::optional<std::array<uint8_t, 32>> dh_shared(const std::array<uint8_t, 32>& secret,
                                                 const std::array<uint8_t, 32>& peer_public)
{
    std::array<uint8_t, 32> out{};
    if (crypto_scalarmult(out.data(), secret.data(), peer_public.data()) != 0) return std::nullopt;
    return out;
}

} // namespace routee::crypto
