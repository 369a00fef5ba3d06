// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/chain/hash.hpp>

#include <openssl/evp.h>

#include <memory>

namespace routee {
namespace {

struct CtxDeleter {
    void operator()(EVP_MD_CTX* c) const { EVP_MD_CTX_free(c); }
};

// Fetching the digest once avoids the implicit per-call provider lookup.
const EVP_MD* sha256_md()
{
    static const EVP_MD* md = EVP_MD_fetch(nullptr, "SHA256", nullptr);
    return md;
}

EVP_MD_CTX* thread_ctx()
{
    thread_local std::unique_ptr<EVP_MD_CTX, CtxDeleter> ctx(EVP_MD_CTX_new());
    return ctx.get();
}

} // namespace

Hash256 sha256(ByteView data)
{
    Hash256 out{};
    EVP_MD_CTX* ctx = thread_ctx();
    unsigned int len = 0;
    if (EVP_DigestInit_ex2(ctx, sha256_md(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx, out.data(), &len) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    return out;
}

Hash256 sha256d(ByteView data)
{
    Hash256 first = sha256(data);
    return sha256(ByteView(first));
}

Address hash160(ByteView data)
{
    Hash256 h = sha256d(data);
    Address out{};
    std::copy_n(h.begin(), out.size(), out.begin());
    return out;
}

} // namespace routee
