// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>
#include <sys/stat.h>

#include "iotid/commands.hpp"
#include "iotid/error.hpp"
#include "test_support.hpp"

namespace iotid::gateway {
namespace {

namespace fs = std::filesystem;
using testing::expect_error;
using testing::oracle_hex;
using testing::oracle_sha256;
using testing::TempDir;

unsigned mode_of(const fs::path& p) {
    struct stat st{};
    ::stat(p.c_str(), &st);
    return st.st_mode & 0777;
}

class CommandsTest : public ::testing::Test {
  protected:
    CommandsTest() : clock_(1000) {
        ctx_.ledger_dir = dir_ / "ledger";
        ctx_.keystore_dir = dir_ / "keys";
        ctx_.clock = &clock_;
        ctx_.random = seeded_random_source(5);
    }

    json init() { return cmd_network_init(ctx_, std::nullopt, std::nullopt, 3, false); }

    json keygen(const std::string& name, int index) { return cmd_device_keygen(ctx_, name, keygen_seed(3, name, index)); }

    /// keygen + register + login.
    void enroll(const std::string& name, int index) {
        keygen(name, index);
        cmd_device_register(ctx_, name, "ABCDEF00001");
        cmd_device_login(ctx_, name);
    }

    fs::path write_file(const std::string& name, std::string_view content) {
        const fs::path p = dir_ / name;
        testing::spit(p, content);
        return p;
    }

    /// Every private seed in the keystore, as hex.
    std::vector<std::string> keystore_seeds() const {
        std::vector<std::string> out;
        for (const auto& e : fs::directory_iterator(ctx_.keystore_dir)) {
            out.push_back(json::parse(testing::slurp(e.path())).at("seed").get<std::string>());
        }
        return out;
    }

    TempDir dir_;
    SimClock clock_;
    CommandContext ctx_;
};

TEST_F(CommandsTest, NetworkInitCreatesGenesisAndPrivateKeys) {
    const json out = init();
    EXPECT_EQ(out["height"], 1);
    EXPECT_EQ(out["threshold"], 2);
    EXPECT_EQ(out["peers"].size(), 3u);
    EXPECT_EQ(out["registrars"].size(), 1u);
    EXPECT_EQ(out["registrarKey"], kRegistrarKey);
    EXPECT_EQ(mode_of(ctx_.keystore_dir / "registrar.json"), 0600u);
    std::size_t key_files = 0;
    for (const auto& e : fs::directory_iterator(ctx_.ledger_dir / "peers")) {
        EXPECT_EQ(mode_of(e.path()), 0600u);
        ++key_files;
    }
    EXPECT_EQ(key_files, 3u);
    EXPECT_EQ(cmd_chain_verify(ctx_)["ok"], true);
    EXPECT_EQ(cmd_chain_verify(ctx_)["height"], 1);
}

TEST_F(CommandsTest, ReinitRequiresForce) {
    init();
    const std::string chain = testing::slurp(ctx_.ledger_dir / "chain.dat");
    expect_error(ErrorCode::AlreadyExists, [&] { init(); });
    EXPECT_EQ(testing::slurp(ctx_.ledger_dir / "chain.dat"), chain);
    EXPECT_EQ(cmd_network_init(ctx_, std::nullopt, std::nullopt, 4, true)["height"], 1);
    EXPECT_NE(testing::slurp(ctx_.ledger_dir / "chain.dat"), chain);
}

TEST_F(CommandsTest, CustomGenesisIsValidated) {
    init();
    json genesis = json::parse(testing::slurp(ctx_.ledger_dir / "genesis.json"));
    CommandContext other = ctx_;
    other.ledger_dir = dir_ / "ledger2";
    other.keystore_dir = dir_ / "keys2";

    genesis["endorsementThreshold"] = 4;
    const fs::path bad = write_file("bad.json", genesis.dump());
    expect_error(ErrorCode::InvalidConfig,
                 [&] { cmd_network_init(other, bad, ctx_.ledger_dir / "peers", 0, false); });
    EXPECT_FALSE(fs::exists(other.ledger_dir / "chain.dat"));

    genesis["endorsementThreshold"] = 3;
    const fs::path good = write_file("good.json", genesis.dump());
    expect_error(ErrorCode::InvalidConfig, [&] { cmd_network_init(other, good, dir_ / "nopeers", 0, false); });
    const json out = cmd_network_init(other, good, ctx_.ledger_dir / "peers", 0, false);
    EXPECT_EQ(out["threshold"], 3);
    EXPECT_FALSE(out.contains("registrarKey"));
}

TEST_F(CommandsTest, CommandsNeedAnInitializedLedger) {
    keygen("a", 1);
    expect_error(ErrorCode::NotFound, [&] { cmd_device_register(ctx_, "a", "M"); });
    expect_error(ErrorCode::NotFound, [&] { cmd_chain_verify(ctx_); });
}

TEST_F(CommandsTest, KeygenIsDeterministicAndValidatesNames) {
    EXPECT_EQ(keygen_seed(3, "a", std::nullopt), keygen_seed(3, "a", std::nullopt));
    EXPECT_NE(keygen_seed(3, "a", std::nullopt), keygen_seed(3, "b", std::nullopt));
    EXPECT_NE(keygen_seed(3, "a", std::nullopt), keygen_seed(4, "a", std::nullopt));
    EXPECT_EQ(keygen_seed(3, "x", 2), sim::device_key_seed(3, 2));

    const json out = keygen("dev1", 1);
    EXPECT_EQ(out["did"], sim::device_did(3, 1).str());
    EXPECT_FALSE(out.contains("seed"));
    EXPECT_EQ(mode_of(ctx_.keystore_dir / "dev1.json"), 0600u);
    expect_error(ErrorCode::AlreadyExists, [&] { keygen("dev1", 1); });
    for (const char* bad : {"../up", ".hidden", "", "a b", "x/y"}) {
        expect_error(ErrorCode::InvalidArgument, [&] { keygen(bad, 1); });
    }
    const json random_key = cmd_device_keygen(ctx_, "rnd", std::nullopt);
    EXPECT_NE(random_key["publicKey"], out["publicKey"]);
}

TEST_F(CommandsTest, RegisterLoginUploadList) {
    init();
    keygen("dev1", 1);
    const json reg = cmd_device_register(ctx_, "dev1", "ABCDEF00001");
    EXPECT_EQ(reg["did"], sim::device_did(3, 1).str());
    ASSERT_EQ(reg["transactions"].size(), 2u);
    EXPECT_EQ(reg["transactions"][0]["function"], "createIdentity");
    EXPECT_EQ(reg["transactions"][1]["function"], "registerDevice");
    for (const auto& t : reg["transactions"]) EXPECT_EQ(t["flag"], "VALID");
    expect_error(ErrorCode::DeviceAlreadyRegistered, [&] { cmd_device_register(ctx_, "dev1", "ABCDEF00001"); });

    expect_error(ErrorCode::NotAuthenticated,
                 [&] { cmd_asset_upload(ctx_, "dev1", write_file("p0", "zero"), std::nullopt); });
    const json login = cmd_device_login(ctx_, "dev1");
    EXPECT_EQ(login["expiresAt"], 1000 + idm::kDefaultSessionTtl);

    const std::string payload = R"({"d":{"temperature":1}})";
    const json up = cmd_asset_upload(ctx_, "dev1", write_file("1.txt", payload), std::nullopt);
    EXPECT_EQ(up["dataId"], oracle_hex(oracle_sha256(payload)));
    EXPECT_EQ(up["assetName"], "1.txt");
    EXPECT_EQ(cmd_asset_upload(ctx_, "dev1", write_file("2.txt", "other"), std::string("custom"))["assetName"], "custom");

    expect_error(ErrorCode::Io, [&] { cmd_asset_upload(ctx_, "dev1", dir_ / "missing.txt", std::nullopt); });
    expect_error(ErrorCode::NotFound, [&] { cmd_asset_upload(ctx_, "nobody", write_file("3.txt", "x"), std::nullopt); });

    EXPECT_EQ(cmd_asset_list(ctx_, std::nullopt)["count"], 2);
    EXPECT_EQ(cmd_asset_list(ctx_, std::string("dev1"))["count"], 2);

    clock_.advance(idm::kDefaultSessionTtl);
    expect_error(ErrorCode::NotAuthenticated,
                 [&] { cmd_asset_upload(ctx_, "dev1", write_file("4.txt", "late"), std::nullopt); });
    expect_error(ErrorCode::NotAuthenticated, [&] { cmd_asset_list(ctx_, std::string("dev1")); });
    EXPECT_EQ(cmd_asset_list(ctx_, std::nullopt)["count"], 2);
    EXPECT_EQ(cmd_chain_verify(ctx_)["ok"], true);
}

TEST_F(CommandsTest, DuplicateUploadReportsOriginalDataId) {
    init();
    enroll("a", 1);
    enroll("b", 2);
    const fs::path f = write_file("same.txt", "identical reading");
    const json first = cmd_asset_upload(ctx_, "a", f, std::nullopt);
    const Error e = expect_error(ErrorCode::DuplicateAsset, [&] { cmd_asset_upload(ctx_, "b", f, std::nullopt); });
    EXPECT_EQ(e.subject(), first["dataId"].get<std::string>());
    EXPECT_EQ(cmd_asset_list(ctx_, std::string("b"))["count"], 0);
}

TEST_F(CommandsTest, TransferAndResolve) {
    init();
    enroll("dev", 1);
    keygen("newowner", 7);
    const json before = cmd_did_resolve(ctx_, sim::device_did(3, 1).str());
    const json t = cmd_device_transfer(ctx_, "dev", "newowner");
    EXPECT_EQ(t["transaction"]["flag"], "VALID");
    const json after = cmd_did_resolve(ctx_, sim::device_did(3, 1).str());
    EXPECT_EQ(after["owner"], t["newOwner"]);
    EXPECT_NE(after["owner"], before["owner"]);
    EXPECT_EQ(after["publicKey"], before["publicKey"]);
    expect_error(ErrorCode::NotOwner, [&] { cmd_device_transfer(ctx_, "dev", "registrar"); });
    const json back = cmd_device_transfer(ctx_, "dev", before["owner"].get<std::string>(), "newowner");
    EXPECT_EQ(back["newOwner"], before["owner"]);
    expect_error(ErrorCode::UnknownDid, [&] { cmd_did_resolve(ctx_, "did:iotid:ghost"); });
    expect_error(ErrorCode::MalformedDid, [&] { cmd_did_resolve(ctx_, "not-a-did"); });
}

TEST_F(CommandsTest, OutputsNeverContainPrivateSeeds) {
    std::string all_output = init().dump();
    all_output += keygen("a", 1).dump();
    all_output += cmd_device_register(ctx_, "a", "M").dump();
    all_output += cmd_device_login(ctx_, "a").dump();
    all_output += cmd_asset_upload(ctx_, "a", write_file("x", "payload"), std::nullopt).dump();
    all_output += cmd_asset_list(ctx_, std::nullopt).dump();
    all_output += cmd_bench(ctx_, 5, 3).dump();
    const auto seeds = keystore_seeds();
    ASSERT_GE(seeds.size(), 2u);
    for (const auto& s : seeds) EXPECT_EQ(all_output.find(s), std::string::npos);
    for (const auto& e : fs::directory_iterator(ctx_.ledger_dir / "peers")) {
        EXPECT_EQ(all_output.find(testing::slurp(e.path()).substr(0, 64)), std::string::npos);
    }
}

TEST_F(CommandsTest, BenchReportsMetricsForItsTransactions) {
    init();
    const json out = cmd_bench(ctx_, 25, 3);
    EXPECT_EQ(out["committedTxCount"], 25);
    EXPECT_EQ(out["bench"]["submitted"], 25);
    EXPECT_GT(out["throughputTxPerSec"].get<double>(), 0.0);
    EXPECT_GE(out["latencyMs"]["p95"].get<double>(), out["latencyMs"]["min"].get<double>());
    EXPECT_GE(out["latencyMs"]["mean"].get<double>(), 0.0);
    EXPECT_GE(out["height"].get<std::uint64_t>(), 4u);  // genesis + registration + 3 blocks of uploads
    EXPECT_EQ(cmd_chain_verify(ctx_)["ok"], true);
}

TEST(Scenario, SingleDeviceRun) {
    TempDir dir;
    ScenarioOptions opt;
    opt.flow.device_count = 1;
    opt.work_dir = dir / "run";
    const json r = run_scenario(opt);
    EXPECT_EQ(r["ok"], true) << r.dump(2);
    EXPECT_EQ(r["deviceCount"], 1);
    EXPECT_EQ(r["sensorFiles"], 10);
    EXPECT_EQ(r["uploaded"], 10);
    EXPECT_EQ(r["duplicatesRejected"], 1);
    EXPECT_EQ(r["allAssets"], 10);
    EXPECT_EQ(r["chainValid"], true);
    EXPECT_FALSE(r.contains("timing"));
    EXPECT_EQ(r["devices"][0]["duplicateDataId"], r["devices"][0]["originalDataId"]);

    expect_error(ErrorCode::AlreadyExists, [&] { run_scenario(opt); });
    opt.force = true;
    EXPECT_EQ(run_scenario(opt), r);
}

TEST(Scenario, TamperBeforeVerifyIsReported) {
    TempDir dir;
    ScenarioOptions opt;
    opt.flow.device_count = 2;
    opt.duration_seconds = 60;
    opt.work_dir = dir / "run";
    opt.before_verify = [](const fs::path& ledger_dir) {
        std::string chain = testing::slurp(ledger_dir / "chain.dat");
        chain[chain.size() / 2] ^= 0x40;
        testing::spit(ledger_dir / "chain.dat", chain);
    };
    const json r = run_scenario(opt);
    EXPECT_EQ(r["ok"], false);
    EXPECT_EQ(r["chainValid"], false);
    EXPECT_EQ(r["invariants"]["chainValid"], false);
    EXPECT_TRUE(r.contains("chainFirstBadBlock"));
}

TEST(Scenario, TimingIsOptIn) {
    TempDir dir;
    ScenarioOptions opt;
    opt.flow.device_count = 1;
    opt.duration_seconds = 30;
    opt.work_dir = dir / "run";
    opt.timing = true;
    const json r = run_scenario(opt);
    ASSERT_TRUE(r.contains("timing"));
    EXPECT_TRUE(r["timing"].contains("throughputTxPerSec"));
}

}  // namespace
}  // namespace iotid::gateway
