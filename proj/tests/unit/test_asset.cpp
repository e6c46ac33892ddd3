// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <set>

#include "iotid/asset.hpp"
#include "iotid/error.hpp"
#include "test_support.hpp"

namespace iotid::asset {
namespace {

using testing::Device;
using testing::expect_error;
using testing::oracle_hex;
using testing::oracle_sha256;
using testing::TestNet;

TEST(Asset, FreshUploadCommitsMetadataAndPayload) {
    TestNet net;
    const Device d = net.enroll(1);
    net.clock().set(2000);
    const std::string payload = R"({"d":{"temperature":21.5}})";
    const AssetRecord rec = net.gw().upload_asset(*d.key, d.token, "1.txt", as_bytes(payload));
    EXPECT_EQ(rec.owner, d.did);
    EXPECT_EQ(rec.asset_name, "1.txt");
    EXPECT_EQ(rec.added_at, 2000);
    EXPECT_EQ(rec.data_id.hex(), oracle_hex(oracle_sha256(payload)));
    EXPECT_EQ(to_string(net.gw().store().get(rec.data_id)), payload);
    EXPECT_EQ(net.gw().query_all_assets(), std::vector<AssetRecord>{rec});
    EXPECT_EQ(AssetRecord::from_json(rec.to_json()), rec);
}

TEST(Asset, DuplicateAcrossDevicesReportsOriginal) {
    TestNet net;
    const Device a = net.enroll(1);
    const Device b = net.enroll(2);
    const AssetRecord first = net.gw().upload_asset(*a.key, a.token, "1.txt", as_bytes("same bytes"));
    const Bytes before = net.gw().ledger().snapshot().encode();
    const Error e = expect_error(ErrorCode::DuplicateAsset,
                                 [&] { net.gw().upload_asset(*b.key, b.token, "other.txt", as_bytes("same bytes")); });
    EXPECT_EQ(e.subject(), first.data_id.hex());
    expect_error(ErrorCode::DuplicateAsset,
                 [&] { net.gw().upload_asset(*a.key, a.token, "1.txt", as_bytes("same bytes")); });
    EXPECT_EQ(net.gw().ledger().snapshot().encode(), before);
    EXPECT_EQ(net.gw().query_all_assets().size(), 1u);
}

TEST(Asset, OneByteDifferenceIsANewAsset) {
    TestNet net;
    const Device a = net.enroll(1);
    const auto r1 = net.gw().upload_asset(*a.key, a.token, "1.txt", as_bytes("reading 42"));
    const auto r2 = net.gw().upload_asset(*a.key, a.token, "2.txt", as_bytes("reading 43"));
    EXPECT_NE(r1.data_id, r2.data_id);
    EXPECT_EQ(net.gw().query_all_assets().size(), 2u);
}

TEST(Asset, RequiresSessionAndPayload) {
    TestNet net;
    const Device a = net.enroll(1);
    const Device b = net.enroll(2);
    expect_error(ErrorCode::NotAuthenticated, [&] { net.gw().upload_asset(*a.key, Digest{}, "x", as_bytes("p")); });
    // Session of one device cannot be used with another device's key.
    expect_error(ErrorCode::NotAuthenticated, [&] { net.gw().upload_asset(*b.key, a.token, "x", as_bytes("p")); });
    expect_error(ErrorCode::EmptyPayload, [&] { net.gw().upload_asset(*a.key, a.token, "x", Bytes{}); });
    net.clock().advance(idm::kDefaultSessionTtl);
    expect_error(ErrorCode::NotAuthenticated, [&] { net.gw().upload_asset(*a.key, a.token, "x", as_bytes("p")); });
    EXPECT_TRUE(net.gw().query_all_assets().empty());
}

TEST(Asset, ContractRejectsUnregisteredInvokerAndMissingPayload) {
    TestNet net;
    const Device a = net.enroll(1);
    const Device stranger = net.make_device(9);
    const ContentHash h = net.gw().store().put(as_bytes("stored"));
    expect_error(ErrorCode::NotAuthenticated, [&] {
        net.gw().invoke(*stranger.key, kContractName, kUploadAsset, {format_did(a.did), "x", h.hex()});
    });
    const ContentHash missing = ContentHash::of(as_bytes("not stored"));
    expect_error(ErrorCode::NotFound, [&] {
        net.gw().invoke(*a.key, kContractName, kUploadAsset, {format_did(a.did), "x", missing.hex()});
    });
    EXPECT_NO_THROW(net.gw().invoke(*a.key, kContractName, kUploadAsset, {format_did(a.did), "x", h.hex()}));
}

TEST(Asset, QueriesAreOrderedAndPartitionByOwner) {
    TestNet net;
    std::vector<Device> devs;
    for (std::uint64_t i = 0; i < 3; ++i) devs.push_back(net.enroll(i));
    for (int t = 0; t < 12; ++t) {
        net.clock().set(3000 - t * 10);  // descending timestamps
        const Device& d = devs[static_cast<std::size_t>(t) % devs.size()];
        net.gw().upload_asset(*d.key, d.token, std::to_string(t) + ".txt", as_bytes("payload " + std::to_string(t)));
    }
    const auto all = net.gw().query_all_assets();
    ASSERT_EQ(all.size(), 12u);
    for (std::size_t i = 1; i < all.size(); ++i) {
        EXPECT_LE(std::tie(all[i - 1].added_at, all[i - 1].data_id), std::tie(all[i].added_at, all[i].data_id));
    }
    EXPECT_EQ(net.gw().query_all_assets(), all);

    net.clock().set(3000);
    std::set<std::string> seen;
    std::size_t total = 0;
    for (const Device& d : devs) {
        const auto mine = net.gw().query_owned_assets(d.token);
        EXPECT_EQ(mine.size(), 4u);
        for (const auto& r : mine) {
            EXPECT_EQ(r.owner, d.did);
            EXPECT_TRUE(seen.insert(r.data_id.hex()).second);
        }
        total += mine.size();
    }
    EXPECT_EQ(total, all.size());
    expect_error(ErrorCode::NotAuthenticated, [&] { net.gw().query_owned_assets(Digest{}); });
}

TEST(Asset, SamePayloadInOneBlockKeepsFirst) {
    TestNet net;
    const Device a = net.enroll(1);
    const Device b = net.enroll(2);
    net.gw().submit(net.gw().prepare_upload(*a.key, a.token, "a.txt", as_bytes("racing")));
    net.gw().submit(net.gw().prepare_upload(*b.key, b.token, "b.txt", as_bytes("racing")));
    const auto receipts = net.gw().drain(true);
    ASSERT_EQ(receipts.size(), 2u);
    EXPECT_EQ(receipts[0].flag, ledger::TxFlag::Valid);
    EXPECT_EQ(receipts[1].flag, ledger::TxFlag::MvccConflict);
    EXPECT_EQ(receipts[0].block, receipts[1].block);
    const auto all = net.gw().query_all_assets();
    ASSERT_EQ(all.size(), 1u);
    EXPECT_EQ(all[0].owner, a.did);
}

TEST(Asset, MalformedArgumentsRejected) {
    TestNet net;
    const Device a = net.enroll(1);
    expect_error(ErrorCode::InvalidArgument,
                 [&] { net.gw().invoke(*a.key, kContractName, kUploadAsset, {format_did(a.did), "x"}); });
    expect_error(ErrorCode::InvalidArgument,
                 [&] { net.gw().invoke(*a.key, kContractName, kUploadAsset, {format_did(a.did), "x", "abc"}); });
    expect_error(ErrorCode::UnknownFunction, [&] { net.gw().invoke(*a.key, kContractName, "deleteAsset", {}); });
}

}  // namespace
}  // namespace iotid::asset
