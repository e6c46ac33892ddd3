// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#include "iotid/asset.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>

#include "iotid/error.hpp"
#include "iotid/idm.hpp"

namespace iotid::asset {
namespace {

using nlohmann::json;

Bytes upload_asset(ledger::TxContext& ctx) {
    ledger::expect_args(ctx, 3);
    const auto args = ctx.args();
    const Did owner = parse_did(args[0]);
    const std::string& name = args[1];
    if (name.empty()) throw Error(ErrorCode::InvalidArgument, "asset name is empty");
    ContentHash data_id;
    try {
        data_id = ContentHash::parse(args[2]);
    } catch (const Error& e) {
        throw Error(ErrorCode::InvalidArgument, e.what());
    }

    // The uploader must be the registered device itself.
    const auto rec_raw = ctx.get_state(ledger::did_key(owner.str()));
    if (!rec_raw) throw Error(ErrorCode::NotAuthenticated, owner.str() + " has no identity");
    if (!ctx.get_state(ledger::device_key(owner.str()))) {
        throw Error(ErrorCode::NotAuthenticated, owner.str() + " is not a registered device");
    }
    const idm::DidRecord rec = idm::DidRecord::from_json(to_string(*rec_raw));
    const DidDocument doc = parse_did_document(to_string(ctx.store().get(rec.doc_hash)));
    if (derive_address(doc.public_key) != ctx.invoker()) {
        throw Error(ErrorCode::NotAuthenticated, ctx.invoker().str() + " cannot upload as " + owner.str());
    }

    if (!ctx.store().has(data_id)) throw Error(ErrorCode::NotFound, "no payload stored for " + data_id.hex());

    const std::string key = ledger::asset_key(data_id.hex());
    if (ctx.get_state(key)) {
        throw Error(ErrorCode::DuplicateAsset, "asset " + data_id.hex() + " already exists", data_id.hex());
    }
    const AssetRecord out{owner, name, ctx.timestamp(), data_id};
    const std::string text = out.to_json();
    ctx.put_state(key, to_bytes(text));
    return to_bytes(text);
}

}  // namespace

std::string AssetRecord::to_json() const {
    return json{{"addedAt", added_at}, {"assetName", asset_name}, {"dataId", data_id.hex()}, {"owner", owner.str()}}
        .dump();
}

AssetRecord AssetRecord::from_json(std::string_view text) {
    try {
        const json j = json::parse(text);
        return AssetRecord{parse_did(j.at("owner").get<std::string>()), j.at("assetName").get<std::string>(),
                           j.at("addedAt").get<std::int64_t>(), ContentHash::parse(j.at("dataId").get<std::string>())};
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedInput, std::string("asset record: ") + e.what());
    }
}

Bytes AssetContract::invoke(ledger::TxContext& ctx, std::string_view function) const {
    if (function == kUploadAsset) return upload_asset(ctx);
    throw Error(ErrorCode::UnknownFunction, "asset has no function '" + std::string(function) + "'");
}

std::vector<AssetRecord> query_all_assets(const ledger::WorldState& state) {
    std::vector<AssetRecord> out;
    for (const auto& [key, v] : state.scan_prefix(ledger::kAssetPrefix)) out.push_back(AssetRecord::from_json(to_string(v.value)));
    std::sort(out.begin(), out.end(), [](const AssetRecord& a, const AssetRecord& b) {
        return a.added_at != b.added_at ? a.added_at < b.added_at : a.data_id < b.data_id;
    });
    return out;
}

std::vector<AssetRecord> query_owned_assets(const ledger::WorldState& state, const Did& owner) {
    std::vector<AssetRecord> all = query_all_assets(state);
    std::erase_if(all, [&](const AssetRecord& r) { return r.owner != owner; });
    return all;
}

}  // namespace iotid::asset
