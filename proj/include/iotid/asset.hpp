// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "iotid/content_store.hpp"
#include "iotid/did.hpp"
#include "iotid/ledger/contract.hpp"
#include "iotid/ledger/world_state.hpp"

namespace iotid::asset {

inline constexpr std::string_view kContractName = "asset";
inline constexpr std::string_view kUploadAsset = "uploadAsset";

/// Telemetry asset metadata, stored under `asset/<dataId hex>`. The payload
/// lives in the content store under the same hash.
struct AssetRecord {
    Did owner;
    std::string asset_name;
    std::int64_t added_at = 0;
    ContentHash data_id;

    /// {"addedAt":..,"assetName":..,"dataId":..,"owner":..} with sorted keys.
    std::string to_json() const;
    static AssetRecord from_json(std::string_view text);

    bool operator==(const AssetRecord&) const = default;
};

/// Asset chaincode.
///
///   uploadAsset(ownerDid, assetName, dataIdHex)
///       The invoker must be the device itself (its address derives from the
///       key in the DID document) and the device must be registered, else
///       NotAuthenticated. The payload must already be in the content store
///       (NotFound if not). Dedup is global on dataId: an existing record
///       fails with DuplicateAsset whose subject is that dataId.
class AssetContract final : public ledger::Contract {
  public:
    std::string_view name() const override { return kContractName; }
    Bytes invoke(ledger::TxContext& ctx, std::string_view function) const override;
};

/// All asset records, sorted by (addedAt, dataId). No session required.
std::vector<AssetRecord> query_all_assets(const ledger::WorldState& state);

/// Records owned by `owner`, same order as query_all_assets.
std::vector<AssetRecord> query_owned_assets(const ledger::WorldState& state, const Did& owner);

}  // namespace iotid::asset
