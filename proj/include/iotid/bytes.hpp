// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace iotid {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// 256-bit SHA-256 digest, used for addresses, content ids, tx ids and block links.
using Digest = std::array<std::uint8_t, 32>;

inline ByteView as_bytes(std::string_view s) noexcept {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

inline Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

inline std::string to_string(ByteView b) { return std::string(b.begin(), b.end()); }

/// Lowercase hex.
std::string to_hex(ByteView bytes);

/// Accepts upper or lower case; throws Error(MalformedInput) on odd length or non-hex chars.
Bytes from_hex(std::string_view hex);

template <std::size_t N>
std::array<std::uint8_t, N> fixed_from_hex(std::string_view hex);

Digest sha256(ByteView data);
inline Digest sha256(std::string_view data) { return sha256(as_bytes(data)); }

/// Fills `out` from the operating system's CSPRNG.
void os_random(std::span<std::uint8_t> out);

}  // namespace iotid

#include "iotid/error.hpp"

namespace iotid {

template <std::size_t N>
std::array<std::uint8_t, N> fixed_from_hex(std::string_view hex) {
    Bytes raw = from_hex(hex);
    if (raw.size() != N) {
        throw Error(ErrorCode::MalformedInput,
                    "expected " + std::to_string(N) + " bytes of hex, got " + std::to_string(raw.size()));
    }
    std::array<std::uint8_t, N> out{};
    std::copy(raw.begin(), raw.end(), out.begin());
    return out;
}

}  // namespace iotid
