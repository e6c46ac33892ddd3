// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "iotid/bytes.hpp"
#include "iotid/ledger/types.hpp"

namespace iotid::ledger {

struct VersionedValue {
    Bytes value;
    Version version;

    bool operator==(const VersionedValue&) const = default;
};

using StateMap = std::map<std::string, VersionedValue, std::less<>>;

/// Immutable snapshot of the key/value world state. Copies are cheap (shared
/// ownership of one map); with_writes() produces a new snapshot.
class WorldState {
  public:
    WorldState() : map_(std::make_shared<const StateMap>()) {}
    explicit WorldState(StateMap map) : map_(std::make_shared<const StateMap>(std::move(map))) {}

    std::optional<VersionedValue> get(std::string_view key) const;

    /// All entries whose key starts with `prefix`, in key order.
    std::vector<std::pair<std::string, VersionedValue>> scan_prefix(std::string_view prefix) const;

    std::size_t size() const noexcept { return map_->size(); }
    const StateMap& entries() const noexcept { return *map_; }

    WorldState with_writes(std::span<const WriteEntry> writes, Version version) const;

    /// Deterministic encoding of the whole state, for byte-level comparison.
    Bytes encode() const;

    bool operator==(const WorldState& other) const { return *map_ == *other.map_; }

  private:
    std::shared_ptr<const StateMap> map_;
};

// Key namespace.
std::string did_key(std::string_view did_text);
std::string device_key(std::string_view did_text);
std::string asset_key(std::string_view data_id_hex);
std::string nonce_key(const Address& invoker, const Digest& nonce);

inline constexpr std::string_view kDidPrefix = "did/";
inline constexpr std::string_view kDevicePrefix = "device/";
inline constexpr std::string_view kAssetPrefix = "asset/";
inline constexpr std::string_view kNoncePrefix = "nonce/";

}  // namespace iotid::ledger
