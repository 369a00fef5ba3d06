// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/wire/frame.hpp>
#include <routee/wire/messages.hpp>

namespace routee::wire {

Bytes encode_frame(FrameType type, ByteView payload)
{
    if (payload.size() + 1 > kMaxFrameSize) throw ProtocolError(Status::malformed_frame, "frame too large");
    ByteWriter w;
    w.u32(static_cast<uint32_t>(payload.size() + 1)).u8(static_cast<uint8_t>(type)).raw(payload);
    return std::move(w).take();
}

Frame decode_frame(ByteView raw)
{
    if (raw.size() < 5) throw ProtocolError(Status::malformed_frame, "truncated frame");
    ByteReader r(raw);
    const uint32_t len = r.u32();
    if (len == 0 || len > kMaxFrameSize || len != r.remaining())
        throw ProtocolError(Status::malformed_frame, "frame length mismatch");
    Frame f;
    f.type = static_cast<FrameType>(r.u8());
    auto p = r.raw(len - 1);
    f.payload.assign(p.begin(), p.end());
    return f;
}

} // namespace routee::wire
