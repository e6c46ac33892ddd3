// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <thread>

#include "iotid/content_store.hpp"
#include "iotid/error.hpp"
#include "test_support.hpp"

namespace iotid {
namespace {

using testing::expect_error;
using testing::oracle_hex;
using testing::oracle_sha256;
using testing::TempDir;

TEST(ContentStore, PutIsIdempotentAndContentAddressed) {
    TempDir dir;
    ContentStore store(dir / "s");
    const ContentHash a = store.put(as_bytes("hello"));
    EXPECT_EQ(store.put(as_bytes("hello")), a);
    EXPECT_NE(store.put(as_bytes("hellp")), a);
    EXPECT_EQ(store.size(), 2u);
}

TEST(ContentStore, HashMatchesOracle) {
    TempDir dir;
    ContentStore store(dir / "s");
    const std::string fixture = R"({"d":{"Time":"1970-01-01T00:00:30Z","manufacturer_id":"ABCDEF00001","temperature":42.5}})";
    const ContentHash h = store.put(as_bytes(fixture));
    EXPECT_EQ(h.hex(), oracle_hex(oracle_sha256(fixture)));
    EXPECT_EQ(h.hex().size(), 64u);
    EXPECT_TRUE(std::filesystem::exists(dir / ("s/" + h.hex())));
}

TEST(ContentStore, GetRoundTripsAndVerifies) {
    TempDir dir;
    ContentStore store(dir / "s");
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        Bytes b(static_cast<std::size_t>(rng.uniform_int(1, 500)));
        rng.fill(b);
        const ContentHash h = store.put(b);
        EXPECT_EQ(store.get(h), b);
        EXPECT_EQ(ContentHash::of(store.get(h)), h);
    }
}

TEST(ContentStore, EmptyInputRejected) {
    TempDir dir;
    ContentStore store(dir / "s");
    expect_error(ErrorCode::EmptyInput, [&] { store.put(Bytes{}); });
}

TEST(ContentStore, UnknownHashIsNotFound) {
    TempDir dir;
    ContentStore store(dir / "s");
    const ContentHash h = ContentHash::of(as_bytes("never stored"));
    expect_error(ErrorCode::NotFound, [&] { store.get(h); });
    EXPECT_FALSE(store.has(h));
}

TEST(ContentStore, CorruptionDetectedAndRepairable) {
    TempDir dir;
    ContentStore store(dir / "s");
    const std::string payload = "payload bytes";
    const ContentHash h = store.put(as_bytes(payload));
    const auto path = store.path_for(h);

    std::string damaged = payload;
    damaged[3] ^= 0x20;
    testing::spit(path, damaged);
    expect_error(ErrorCode::IntegrityFailure, [&] { store.get(h); });
    EXPECT_FALSE(store.has(h));

    testing::spit(path, payload);  // restore
    EXPECT_TRUE(store.has(h));
    EXPECT_EQ(to_string(store.get(h)), payload);

    testing::spit(path, damaged);
    EXPECT_EQ(store.put(as_bytes(payload)), h);  // re-put repairs the blob
    EXPECT_TRUE(store.has(h));

    std::filesystem::remove(path);
    expect_error(ErrorCode::IntegrityFailure, [&] { store.get(h); });
}

TEST(ContentStore, IndexRebuiltOnReopen) {
    TempDir dir;
    ContentHash h;
    {
        ContentStore store(dir / "s");
        h = store.put(as_bytes("persisted"));
        store.put(as_bytes("second"));
    }
    ContentStore reopened(dir / "s");
    EXPECT_EQ(reopened.size(), 2u);
    EXPECT_EQ(to_string(reopened.get(h)), "persisted");
}

TEST(ContentStore, ConcurrentIdenticalPuts) {
    TempDir dir;
    ContentStore store(dir / "s");
    std::vector<std::thread> threads;
    std::vector<ContentHash> results(8);
    for (int t = 0; t < 8; ++t) {
        threads.emplace_back([&, t] {
            for (int i = 0; i < 50; ++i) results[static_cast<std::size_t>(t)] = store.put(as_bytes("same" + std::to_string(i % 5)));
        });
    }
    for (auto& th : threads) th.join();
    EXPECT_EQ(store.size(), 5u);
    for (const auto& r : results) EXPECT_EQ(r, results[0]);
}

TEST(ContentHash, ParseRejectsBadText) {
    EXPECT_THROW(ContentHash::parse("abc"), Error);
    EXPECT_THROW(ContentHash::parse(std::string(64, 'g')), Error);
    EXPECT_EQ(ContentHash::parse(std::string(64, 'a')).hex(), std::string(64, 'a'));
}

}  // namespace
}  // namespace iotid
