// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "iotid/bytes.hpp"

namespace iotid::ledger {

/// Canonical big-endian binary encoding used for hashing and persistence.
/// Variable-length fields carry a u32 length prefix.
class Encoder {
  public:
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u32(std::uint32_t v);
    void u64(std::uint64_t v);
    void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
    void boolean(bool v) { u8(v ? 1 : 0); }
    void bytes(ByteView v);
    void str(std::string_view v) { bytes(as_bytes(v)); }

    template <std::size_t N>
    void fixed(const std::array<std::uint8_t, N>& v) {
        out_.insert(out_.end(), v.begin(), v.end());
    }

    const Bytes& data() const& noexcept { return out_; }
    Bytes take() && noexcept { return std::move(out_); }

  private:
    Bytes out_;
};

/// Strict decoder: any out-of-range length, non-0/1 boolean or trailing byte
/// raises Error(MalformedInput), so encode(decode(x)) == x for every accepted x.
class Decoder {
  public:
    explicit Decoder(ByteView in) : in_(in) {}

    std::uint8_t u8();
    std::uint32_t u32();
    std::uint64_t u64();
    std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
    bool boolean();
    Bytes bytes();
    std::string str();

    template <std::size_t N>
    std::array<std::uint8_t, N> fixed() {
        need(N);
        std::array<std::uint8_t, N> v{};
        std::copy_n(in_.begin() + pos_, N, v.begin());
        pos_ += N;
        return v;
    }

    /// Upper bound for a count prefix whose elements take at least `min_elem` bytes each.
    std::uint32_t count(std::size_t min_elem);

    bool done() const noexcept { return pos_ == in_.size(); }
    void finish() const;

  private:
    void need(std::size_t n) const;

    ByteView in_;
    std::size_t pos_ = 0;
};

}  // namespace iotid::ledger
