// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/chain/bytes.hpp>

namespace routee {

std::string to_hex(ByteView data)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (uint8_t b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

static int hex_value(char c)
{
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

Bytes from_hex(std::string_view hex)
{
    if (hex.size() % 2 != 0) throw DecodeError("odd-length hex string");
    Bytes out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_value(hex[i]);
        int lo = hex_value(hex[i + 1]);
        if (hi < 0 || lo < 0) throw DecodeError("invalid hex digit");
        out.push_back(static_cast<uint8_t>((hi << 4) | lo));
    }
    return out;
}

ByteWriter& ByteWriter::u8(uint8_t v)
{
    buf_.push_back(v);
    return *this;
}

ByteWriter& ByteWriter::u16(uint16_t v)
{
    buf_.push_back(static_cast<uint8_t>(v >> 8));
    buf_.push_back(static_cast<uint8_t>(v));
    return *this;
}

ByteWriter& ByteWriter::u32(uint32_t v)
{
    for (int shift = 24; shift >= 0; shift -= 8) buf_.push_back(static_cast<uint8_t>(v >> shift));
    return *this;
}

ByteWriter& ByteWriter::u64(uint64_t v)
{
    for (int shift = 56; shift >= 0; shift -= 8) buf_.push_back(static_cast<uint8_t>(v >> shift));
    return *this;
}

ByteWriter& ByteWriter::u32_le(uint32_t v)
{
    for (int shift = 0; shift < 32; shift += 8) buf_.push_back(static_cast<uint8_t>(v >> shift));
    return *this;
}

ByteWriter& ByteWriter::raw(ByteView data)
{
    buf_.insert(buf_.end(), data.begin(), data.end());
    return *this;
}

ByteWriter& ByteWriter::var_bytes(ByteView data)
{
    if (data.size() > 0xffff) throw std::length_error("byte string longer than 65535");
    u16(static_cast<uint16_t>(data.size()));
    return raw(data);
}

ByteView ByteReader::raw(size_t n)
{
    if (remaining() < n) throw DecodeError("truncated input");
    ByteView out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
}

uint8_t ByteReader::u8() { return raw(1)[0]; }

uint16_t ByteReader::u16()
{
    auto b = raw(2);
    return static_cast<uint16_t>((b[0] << 8) | b[1]);
}

uint32_t ByteReader::u32()
{
    auto b = raw(4);
    uint32_t v = 0;
    for (uint8_t x : b) v = (v << 8) | x;
    return v;
}

uint64_t ByteReader::u64()
{
    auto b = raw(8);
    uint64_t v = 0;
    for (uint8_t x : b) v = (v << 8) | x;
    return v;
}

uint32_t ByteReader::u32_le()
{
    auto b = raw(4);
    return uint32_t(b[0]) | (uint32_t(b[1]) << 8) | (uint32_t(b[2]) << 16) | (uint32_t(b[3]) << 24);
}

Bytes ByteReader::var_bytes()
{
    uint16_t n = u16();
    auto v = raw(n);
    return Bytes(v.begin(), v.end());
}

std::string ByteReader::str()
{
    Bytes b = var_bytes();
    return std::string(b.begin(), b.end());
}

} // namespace routee
