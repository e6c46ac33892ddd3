// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

// iotid: command-line gateway to an embedded permissioned ledger.
// Exit codes: 0 success, 1 domain error, 2 usage or I/O error.

#include <CLI11.hpp>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "iotid/commands.hpp"
#include "iotid/error.hpp"

namespace {

using iotid::Error;
using iotid::ErrorCode;
using namespace iotid::gateway;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::Io:
        case ErrorCode::InvalidArgument:
        case ErrorCode::InvalidConfig:
        case ErrorCode::MalformedInput:
            return kExitUsage;
        default:
            return kExitDomain;
    }
}

void print_table(const json& rows) {
    std::printf("%-48s %-16s %-12s %s\n", "owner", "assetName", "addedAt", "dataId");
    for (const auto& r : rows) {
        std::printf("%-48s %-16s %-12lld %s\n", r["owner"].get<std::string>().c_str(),
                    r["assetName"].get<std::string>().c_str(), static_cast<long long>(r["addedAt"].get<std::int64_t>()),
                    r["dataId"].get<std::string>().c_str());
    }
}

void print_human(const json& out) {
    if (out.contains("rows")) {
        print_table(out["rows"]);
        std::printf("%zu row(s)\n", out["rows"].size());
        return;
    }
    for (const auto& [key, value] : out.items()) {
        if (value.is_string()) {
            std::printf("%s: %s\n", key.c_str(), value.get<std::string>().c_str());
        } else {
            std::printf("%s: %s\n", key.c_str(), value.dump().c_str());
        }
    }
}

std::filesystem::path env_or(const char* var, const std::string& fallback) {
    const char* v = std::getenv(var);
    return v != nullptr && *v != '\0' ? std::filesystem::path(v) : std::filesystem::path(fallback);
}

std::uint64_t entropy_seed() {
    std::array<std::uint8_t, 8> b{};
    iotid::os_random(b);
    std::uint64_t v = 0;
    for (auto x : b) v = (v << 8) | x;
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"iotid - decentralized identity and telemetry ledger for IoT devices"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::string ledger_dir_flag;
    std::string keystore_dir_flag;
    std::uint64_t seed = 0;
    bool machine = false;
    std::optional<std::int64_t> now;
    app.add_option("--ledger-dir", ledger_dir_flag, "Ledger directory (env IOTID_LEDGER_DIR, default ./ledger)");
    app.add_option("--keystore-dir", keystore_dir_flag, "Keystore directory (env IOTID_KEYSTORE_DIR, default ./keystore)");
    auto* seed_opt = app.add_option("--seed", seed, "Seed for deterministic keys and simulation");
    app.add_flag("--machine", machine, "Print one JSON object instead of human-readable text");
    app.add_option("--now", now, "Override the engine clock (epoch seconds)");

    // network init
    auto* network = app.add_subcommand("network", "Ledger lifecycle")->require_subcommand(1);
    auto* net_init = network->add_subcommand("init", "Create a ledger and commit its genesis block");
    std::optional<std::string> genesis_path;
    std::optional<std::string> peer_keys;
    bool force = false;
    net_init->add_option("--genesis", genesis_path, "Genesis config JSON; default is a generated 3-peer network");
    net_init->add_option("--peer-keys", peer_keys, "Directory of <peerId>.key files for --genesis");
    net_init->add_flag("--force", force, "Replace an existing ledger");

    // device
    auto* device = app.add_subcommand("device", "Device keys, registration and login")->require_subcommand(1);
    std::string name;
    auto* keygen = device->add_subcommand("keygen", "Create a device key in the keystore");
    std::optional<std::string> key_seed_hex;
    std::optional<int> device_index;
    keygen->add_option("name", name, "Keystore name")->required();
    keygen->add_option("--key-seed", key_seed_hex, "32-byte key seed as hex");
    keygen->add_option("--index", device_index, "Derive the key of simulated device <index> under --seed");

    auto* reg = device->add_subcommand("register", "Create the device identity and register it");
    std::string manufacturer;
    std::string registrar = kRegistrarKey;
    reg->add_option("name", name, "Keystore name")->required();
    reg->add_option("--manufacturer", manufacturer, "Manufacturer id")->required();
    reg->add_option("--registrar", registrar, "Keystore name of the registrar key");

    auto* login = device->add_subcommand("login", "Challenge-response login; caches the session token");
    login->add_option("name", name, "Keystore name")->required();

    auto* transfer = device->add_subcommand("transfer", "Transfer ownership of a device identity");
    std::string new_owner;
    std::string owner_key = kRegistrarKey;
    transfer->add_option("name", name, "Keystore name of the device")->required();
    transfer->add_option("--to", new_owner, "New owner address or keystore name")->required();
    transfer->add_option("--owner", owner_key, "Keystore name of the current owner");

    // did
    auto* did_cmd = app.add_subcommand("did", "Identity queries")->require_subcommand(1);
    auto* resolve = did_cmd->add_subcommand("resolve", "Print the DID document");
    std::string did_text;
    resolve->add_option("did", did_text, "DID")->required();

    // asset
    auto* asset = app.add_subcommand("asset", "Telemetry assets")->require_subcommand(1);
    auto* upload = asset->add_subcommand("upload", "Upload a file as an asset of a logged-in device");
    std::string file;
    std::optional<std::string> asset_name;
    upload->add_option("name", name, "Keystore name of the device")->required();
    upload->add_option("file", file, "Payload file")->required();
    upload->add_option("--asset-name", asset_name, "Asset name (default: file name)");

    auto* list = asset->add_subcommand("list", "List assets");
    bool list_all = false;
    std::optional<std::string> mine;
    auto* all_flag = list->add_flag("--all", list_all, "Every asset on the ledger");
    auto* mine_opt = list->add_option("--mine", mine, "Assets owned by this logged-in device");
    all_flag->excludes(mine_opt);

    // sim run / scenario share the flow flags
    iotid::sim::FlowConfig flow;
    std::int64_t duration = 300;
    auto add_flow_flags = [&](CLI::App* cmd) {
        cmd->add_option("--devices", flow.device_count, "Number of devices")->capture_default_str();
        cmd->add_option("--interval", flow.interval_seconds, "Seconds between readings")->capture_default_str();
        cmd->add_option("--min", flow.value_min, "Lowest temperature")->capture_default_str();
        cmd->add_option("--max", flow.value_max, "Highest temperature")->capture_default_str();
        cmd->add_option("--manufacturer", flow.manufacturer_id, "Manufacturer id")->capture_default_str();
        cmd->add_option("--duration", duration, "Simulated seconds")->capture_default_str();
    };
    auto* sim = app.add_subcommand("sim", "IoT network simulator")->require_subcommand(1);
    auto* sim_run = sim->add_subcommand("run", "Write simulated sensor files");
    std::string out_dir = "nodered";
    add_flow_flags(sim_run);
    sim_run->add_option("--out", out_dir, "Output directory")->capture_default_str();

    auto* scenario = app.add_subcommand("scenario", "End-to-end run on a fresh ledger in simulated time");
    std::string work_dir = "scenario";
    bool timing = false;
    add_flow_flags(scenario);
    scenario->add_option("--work-dir", work_dir, "Directory for ledger, keystore and sensor files")->capture_default_str();
    scenario->add_flag("--force", force, "Replace a previous scenario in --work-dir");
    scenario->add_flag("--timing", timing, "Include wall-clock throughput and latency");

    // chain verify / bench
    auto* chain = app.add_subcommand("chain", "Chain integrity")->require_subcommand(1);
    auto* verify = chain->add_subcommand("verify", "Verify hash links and block contents");
    auto* bench = app.add_subcommand("bench", "Submit synthetic uploads and report metrics");
    std::size_t tx_count = 200;
    bench->add_option("count", tx_count, "Transactions to submit")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    const bool seeded = seed_opt->count() > 0;
    std::unique_ptr<iotid::Clock> clock;
    if (now) {
        clock = std::make_unique<iotid::SimClock>(*now);
    } else {
        clock = std::make_unique<iotid::WallClock>();
    }
    CommandContext ctx{ledger_dir_flag.empty() ? env_or("IOTID_LEDGER_DIR", "ledger") : std::filesystem::path(ledger_dir_flag),
                       keystore_dir_flag.empty() ? env_or("IOTID_KEYSTORE_DIR", "keystore")
                                                 : std::filesystem::path(keystore_dir_flag),
                       clock.get(), os_random_source()};

    try {
        json out;
        int rc = kExitOk;
        if (*net_init) {
            out = cmd_network_init(ctx, genesis_path, peer_keys, seeded ? seed : entropy_seed(), force);
        } else if (*keygen) {
            std::optional<iotid::KeySeed> ks;
            if (key_seed_hex) {
                ks = iotid::fixed_from_hex<32>(*key_seed_hex);
            } else if (seeded) {
                ks = keygen_seed(seed, name, device_index);
            } else if (device_index) {
                throw Error(ErrorCode::InvalidArgument, "--index needs --seed");
            }
            out = cmd_device_keygen(ctx, name, ks);
        } else if (*reg) {
            out = cmd_device_register(ctx, name, manufacturer, registrar);
        } else if (*login) {
            out = cmd_device_login(ctx, name);
        } else if (*transfer) {
            out = cmd_device_transfer(ctx, name, new_owner, owner_key);
        } else if (*resolve) {
            out = cmd_did_resolve(ctx, did_text);
        } else if (*upload) {
            out = cmd_asset_upload(ctx, name, file, asset_name);
        } else if (*list) {
            if (!list_all && !mine) throw Error(ErrorCode::InvalidArgument, "asset list needs --all or --mine NAME");
            out = cmd_asset_list(ctx, mine);
        } else if (*sim_run) {
            flow.seed = seed;
            flow.output_dir = out_dir;
            out = cmd_sim_run(flow, duration);
        } else if (*scenario) {
            flow.seed = seed;
            ScenarioOptions opt;
            opt.flow = flow;
            opt.duration_seconds = duration;
            opt.work_dir = work_dir;
            opt.force = force;
            opt.timing = timing;
            out = run_scenario(opt);
            if (!out["ok"].get<bool>()) rc = kExitDomain;
        } else if (*verify) {
            out = cmd_chain_verify(ctx);
            if (!out["ok"].get<bool>()) rc = kExitDomain;
        } else if (*bench) {
            out = cmd_bench(ctx, tx_count, seed);
        }
        if (machine) {
            std::cout << out.dump() << "\n";
        } else {
            print_human(out);
        }
        return rc;
    } catch (const Error& e) {
        if (machine) {
            json err{{"error", std::string(iotid::to_string(e.code()))}, {"message", e.what()}};
            if (!e.subject().empty()) err["subject"] = e.subject();
            if (e.code() == ErrorCode::DuplicateAsset) err["dataId"] = e.subject();
            std::cout << err.dump() << "\n";
        } else if (e.code() == ErrorCode::DuplicateAsset) {
            std::cerr << "duplicate asset; existing dataId: " << e.subject() << "\n";
        } else {
            std::cerr << "error: " << e.what() << "\n";
        }
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        if (machine) {
            std::cout << json{{"error", "Internal"}, {"message", e.what()}}.dump() << "\n";
        } else {
            std::cerr << "error: " << e.what() << "\n";
        }
        return kExitUsage;
    }
}
