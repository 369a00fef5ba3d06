// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/chain/hash.hpp>
#include <routee/wire/session.hpp>

#include <openssl/crypto.h>

namespace routee::wire {
namespace {

constexpr uint32_t kClientToHub = 1;
constexpr uint32_t kHubToClient = 2;

using Key32 = std::array<uint8_t, 32>;

struct Derived {
    SessionId id{};
    crypto::AeadKey key{};
    Bytes transcript;
    std::array<uint8_t, 16> confirm{};
};

Derived derive(const Key32& shared, const Key32& client_eph, const Key32& hub_eph)
{
    Derived d;
    {
        ByteWriter w;
        w.str("RouTEE/session-id").raw(client_eph).raw(hub_eph);
        Hash256 h = sha256(w.data());
        std::copy_n(h.begin(), d.id.size(), d.id.begin());
    }
    {
        ByteWriter w;
        w.str("RouTEE/session-key").raw(shared).raw(client_eph).raw(hub_eph);
        Hash256 h = sha256(w.data());
        std::copy_n(h.begin(), d.key.size(), d.key.begin());
    }
    {
        ByteWriter w;
        w.raw(attestation_measurement()).raw(client_eph).raw(hub_eph).raw(d.id);
        d.transcript = std::move(w).take();
    }
    {
        ByteWriter w;
        w.str("RouTEE/confirm").raw(d.key).raw(d.transcript);
        Hash256 h = sha256(w.data());
        std::copy_n(h.begin(), d.confirm.size(), d.confirm.begin());
    }
    return d;
}

} // namespace

Bytes Envelope::encode() const
{
    ByteWriter w;
    w.raw(session_id).u64(seq).raw(nonce).raw(sealed);
    return std::move(w).take();
}

Envelope Envelope::decode(ByteView raw)
{
    try {
        ByteReader r(raw);
        Envelope e;
        e.session_id = r.array<8>();
        e.seq = r.u64();
        e.nonce = r.array<12>();
        auto rest = r.raw(r.remaining());
        e.sealed.assign(rest.begin(), rest.end());
        if (e.sealed.size() < crypto::kAeadTagSize) throw DecodeError("envelope shorter than tag");
        return e;
    } catch (const DecodeError& e) {
        throw ProtocolError(Status::malformed_frame, e.what());
    }
}

Session::Session(SessionId id, crypto::AeadKey key, bool is_client) : id_(id), key_(key), is_client_(is_client) {}

crypto::AeadNonce Session::nonce_for(bool outbound, uint64_t seq) const
{
    const bool client_to_hub = outbound == is_client_;
    ByteWriter w;
    w.u32(client_to_hub ? kClientToHub : kHubToClient).u64(seq);
    crypto::AeadNonce n{};
    std::copy(w.data().begin(), w.data().end(), n.begin());
    return n;
}

static Bytes associated_data(const SessionId& id, uint64_t seq)
{
    ByteWriter w;
    w.raw(id).u64(seq);
    return std::move(w).take();
}

Envelope Session::seal(ByteView plaintext)
{
    if (aborted_) throw ProtocolError(Status::session_error, "aborted");
    Envelope e;
    e.session_id = id_;
    e.seq = send_seq_++;
    e.nonce = nonce_for(true, e.seq);
    e.sealed = crypto::aead_seal(key_, e.nonce, associated_data(id_, e.seq), plaintext);
    return e;
}

Bytes Session::open(const Envelope& e)
{
    if (aborted_) throw ProtocolError(Status::session_error, "aborted");
    auto plain = crypto::aead_open(key_, e.nonce, associated_data(e.session_id, e.seq), e.sealed);
    if (!plain || e.session_id != id_ || e.nonce != nonce_for(false, e.seq)) {
        aborted_ = true;
        throw ProtocolError(Status::session_error, "auth-tag");
    }
    if (e.seq < recv_seq_) {
        aborted_ = true;
        throw ProtocolError(Status::session_error, "seq-repeat");
    }
    if (e.seq > recv_seq_) {
        aborted_ = true;
        throw ProtocolError(Status::session_error, "seq-gap");
    }
    ++recv_seq_;
    return std::move(*plain);
}

ByteView attestation_measurement()
{
    static const Hash256 m = sha256(std::string_view("RouTEE/attestation-stub/measurement/v1"));
    return ByteView(m);
}

ClientHandshake::ClientHandshake(crypto::PublicKey hub_static)
    : hub_static_(std::move(hub_static)), ephemeral_(crypto::DhKeyPair::generate())
{
}

Bytes ClientHandshake::init_payload() const { return Bytes(ephemeral_.public_key.begin(), ephemeral_.public_key.end()); }

Session ClientHandshake::finish(ByteView ack_payload) const
{
    try {
        ByteReader r(ack_payload);
        const Key32 hub_eph = r.array<32>();
        const SessionId id = r.array<8>();
        const Bytes signature = r.var_bytes();
        const auto confirm = r.array<16>();
        r.expect_end();

        auto shared = crypto::dh_shared(ephemeral_.secret_key, hub_eph);
        if (!shared) throw ProtocolError(Status::handshake_failure, "degenerate key");
        Derived d = derive(*shared, ephemeral_.public_key, hub_eph);
        if (d.id != id) throw ProtocolError(Status::handshake_failure, "session id mismatch");
        if (!crypto::verify(hub_static_, d.transcript, signature))
            throw ProtocolError(Status::handshake_failure, "bad hub signature");
        if (CRYPTO_memcmp(d.confirm.data(), confirm.data(), confirm.size()) != 0)
            throw ProtocolError(Status::handshake_failure, "key confirmation mismatch");
        return Session(d.id, d.key, true);
    } catch (const DecodeError& e) {
        throw ProtocolError(Status::handshake_failure, e.what());
    }
}

HubHandshakeResult hub_accept(const crypto::KeyPair& hub_static, ByteView init_payload)
{
    if (init_payload.size() != 32) throw ProtocolError(Status::handshake_failure, "bad handshake-init");
    Key32 client_eph{};
    std::copy(init_payload.begin(), init_payload.end(), client_eph.begin());
    crypto::DhKeyPair eph = crypto::DhKeyPair::generate();
    auto shared = crypto::dh_shared(eph.secret_key, client_eph);
    if (!shared) throw ProtocolError(Status::handshake_failure, "degenerate key");
    Derived d = derive(*shared, client_eph, eph.public_key);

    ByteWriter w;
    w.raw(eph.public_key).raw(d.id).var_bytes(crypto::sign(hub_static, d.transcript)).raw(d.confirm);
    return HubHandshakeResult{Session(d.id, d.key, false), std::move(w).take()};
}

} // namespace routee::wire
