// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#include "iotid/ledger/world_state.hpp"

#include "iotid/ledger/codec.hpp"

namespace iotid::ledger {

std::optional<VersionedValue> WorldState::get(std::string_view key) const {
    const auto it = map_->find(key);
    if (it == map_->end()) return std::nullopt;
    return it->second;
}

std::vector<std::pair<std::string, VersionedValue>> WorldState::scan_prefix(std::string_view prefix) const {
    std::vector<std::pair<std::string, VersionedValue>> out;
    for (auto it = map_->lower_bound(prefix); it != map_->end() && it->first.starts_with(prefix); ++it) {
        out.emplace_back(it->first, it->second);
    }
    return out;
}

WorldState WorldState::with_writes(std::span<const WriteEntry> writes, Version version) const {
    if (writes.empty()) return *this;
    StateMap next = *map_;
    for (const auto& w : writes) {
        if (w.value) {
            next.insert_or_assign(w.key, VersionedValue{*w.value, version});
        } else {
            next.erase(w.key);
        }
    }
    return WorldState(std::move(next));
}

Bytes WorldState::encode() const {
    Encoder enc;
    enc.u64(map_->size());
    for (const auto& [k, v] : *map_) {
        enc.str(k);
        enc.bytes(v.value);
        enc.u64(v.version.block);
        enc.u64(v.version.tx);
    }
    return std::move(enc).take();
}

std::string did_key(std::string_view did_text) { return std::string(kDidPrefix) + std::string(did_text); }
std::string device_key(std::string_view did_text) { return std::string(kDevicePrefix) + std::string(did_text); }
std::string asset_key(std::string_view data_id_hex) { return std::string(kAssetPrefix) + std::string(data_id_hex); }

std::string nonce_key(const Address& invoker, const Digest& nonce) {
    return std::string(kNoncePrefix) + invoker.str() + "/" + to_hex(nonce);
}

}  // namespace iotid::ledger
