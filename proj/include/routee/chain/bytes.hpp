// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace routee {

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;

using Hash256 = std::array<uint8_t, 32>;
using Address = std::array<uint8_t, 20>;

using Amount = uint64_t;   // satoshis
using Height = uint64_t;

/// Thrown by ByteReader on truncated or trailing input.
class DecodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string to_hex(ByteView data);
Bytes from_hex(std::string_view hex);

template <size_t N>
std::array<uint8_t, N> array_from_hex(std::string_view hex)
{
    Bytes raw = from_hex(hex);
    if (raw.size() != N) throw DecodeError("hex string has wrong length");
    std::array<uint8_t, N> out{};
    std::copy(raw.begin(), raw.end(), out.begin());
    return out;
}

/// Appends fixed-width integers and raw bytes. Big-endian unless the `_le` variant is used.
class ByteWriter {
public:
    ByteWriter& u8(uint8_t v);
    ByteWriter& u16(uint16_t v);
    ByteWriter& u32(uint32_t v);
    ByteWriter& u64(uint64_t v);
    ByteWriter& u32_le(uint32_t v);
    ByteWriter& i32_le(int32_t v) { return u32_le(static_cast<uint32_t>(v)); }
    ByteWriter& raw(ByteView data);
    template <size_t N>
    ByteWriter& raw(const std::array<uint8_t, N>& a) { return raw(ByteView(a.data(), N)); }
    /// 2-byte length prefix then the bytes.
    ByteWriter& var_bytes(ByteView data);
    ByteWriter& str(std::string_view s)
    {
        return var_bytes(ByteView(reinterpret_cast<const uint8_t*>(s.data()), s.size()));
    }

    const Bytes& data() const& { return buf_; }
    Bytes take() && { return std::move(buf_); }
    size_t size() const { return buf_.size(); }

private:
    Bytes buf_;
};

class ByteReader {
public:
    explicit ByteReader(ByteView data) : data_(data) {}

    uint8_t u8();
    uint16_t u16();
    uint32_t u32();
    uint64_t u64();
    uint32_t u32_le();
    int32_t i32_le() { return static_cast<int32_t>(u32_le()); }
    ByteView raw(size_t n);
    template <size_t N>
    std::array<uint8_t, N> array()
    {
        std::array<uint8_t, N> out{};
        auto v = raw(N);
        std::copy(v.begin(), v.end(), out.begin());
        return out;
    }
    Bytes var_bytes();
    std::string str();

    size_t remaining() const { return data_.size() - pos_; }
    bool empty() const { return remaining() == 0; }
    void expect_end() const
    {
        if (!empty()) throw DecodeError("trailing bytes");
    }

private:
    ByteView data_;
    size_t pos_ = 0;
};

} // namespace routee
