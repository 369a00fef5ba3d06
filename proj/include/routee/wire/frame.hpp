// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <routee/chain/bytes.hpp>

namespace routee::wire {

enum class FrameType : uint8_t {
    handshake_init = 1,
    handshake_ack = 2,
    envelope = 3,
    // Unencrypted simchain protocol (public chain data).
    header_request = 16,
    header_response = 17,
    get_block = 18,
    block_response = 19,
    submit_tx = 20,
    submit_result = 21,
    tip_request = 22,
    tip_response = 23,
    error = 24,
    mine = 25,
    faucet = 26,
};

struct Frame {
    FrameType type{};
    Bytes payload;
    bool operator==(const Frame&) const = default;
};

inline constexpr size_t kMaxFrameSize = 64u << 20;

/// 4-byte big-endian length of what follows, 1-byte type, payload.
Bytes encode_frame(FrameType type, ByteView payload);
/// Decodes exactly one frame. Throws ProtocolError(malformed_frame).
Frame decode_frame(ByteView raw);

} // namespace routee::wire
