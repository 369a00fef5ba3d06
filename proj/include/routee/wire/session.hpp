// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <routee/crypto/aead.hpp>
#include <routee/crypto/signature.hpp>
#include <routee/wire/messages.hpp>

namespace routee::wire {

using SessionId = std::array<uint8_t, 8>;

enum class PeerRole : uint8_t { user = 1, host = 2 };

struct Envelope {
    SessionId session_id{};
    uint64_t seq = 0;
    crypto::AeadNonce nonce{};
    Bytes sealed;   // ciphertext followed by the GCM tag

    Bytes encode() const;
    static Envelope decode(ByteView raw);
    bool operator==(const Envelope&) const = default;
};

/// One end of an established session. Each direction's sequence numbers start at 0 and must
/// arrive strictly in order; any gap, repeat or authentication failure aborts the session.
class Session {
public:
    Session(SessionId id, crypto::AeadKey key, bool is_client);

    Envelope seal(ByteView plaintext);
    /// Throws ProtocolError(session_error) with "auth-tag", "seq-gap", "seq-repeat" or "aborted".
    Bytes open(const Envelope& envelope);

    const SessionId& id() const { return id_; }
    const crypto::AeadKey& key() const { return key_; }
    uint64_t send_seq() const { return send_seq_; }
    uint64_t recv_seq() const { return recv_seq_; }
    bool aborted() const { return aborted_; }

private:
    crypto::AeadNonce nonce_for(bool outbound, uint64_t seq) const;

    SessionId id_;
    crypto::AeadKey key_;
    bool is_client_;
    uint64_t send_seq_ = 0;
    uint64_t recv_seq_ = 0;
    bool aborted_ = false;
};

/// Fixed measurement blob the hub signs during the handshake. Stands in for a remote-attestation
/// quote; a real quote would be verified where the client checks this signature.
ByteView attestation_measurement();

/// Client half of the key exchange: ephemeral X25519 against the hub's published static key.
class ClientHandshake {
public:
    explicit ClientHandshake(crypto::PublicKey hub_static);

    /// Payload of the handshake-init frame.
    Bytes init_payload() const;
    /// Verifies the hub's ack (signature over the transcript and key confirmation).
    /// Throws ProtocolError(handshake_failure).
    Session finish(ByteView ack_payload) const;

private:
    crypto::PublicKey hub_static_;
    crypto::DhKeyPair ephemeral_;
};

struct HubHandshakeResult {
    Session session;
    Bytes ack_payload;
};

/// Hub half: derives the session and proves possession of the static key.
HubHandshakeResult hub_accept(const crypto::KeyPair& hub_static, ByteView init_payload);

} // namespace routee::wire
