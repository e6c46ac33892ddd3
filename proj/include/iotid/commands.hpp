// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "iotid/iot_sim.hpp"
#include "iotid/network.hpp"

namespace iotid::gateway {

using nlohmann::json;

/// Shared state of one command invocation. Every command returns its result
/// as a JSON object; the CLI renders it either verbatim (machine mode) or as
/// human-readable text. No result ever carries private key material.
struct CommandContext {
    std::filesystem::path ledger_dir = "ledger";
    std::filesystem::path keystore_dir = "keystore";
    const Clock* clock = nullptr;  // engine clock; must be set
    idm::RandomSource random;      // nonces and login challenges; must be set
};

/// OS-entropy random source.
idm::RandomSource os_random_source();

/// Deterministic random source drawing from a seeded engine.
idm::RandomSource seeded_random_source(std::uint64_t seed);

inline constexpr const char* kRegistrarKey = "registrar";

// -- network ---------------------------------------------------------------

/// Without `genesis_path`, generates a 3-peer majority network from `seed`
/// and stores the registrar key as "registrar" in the keystore. With it,
/// peer seeds are read from `peer_keys_dir`.
json cmd_network_init(const CommandContext& ctx, const std::optional<std::filesystem::path>& genesis_path,
                      const std::optional<std::filesystem::path>& peer_keys_dir, std::uint64_t seed, bool force);

json cmd_chain_verify(const CommandContext& ctx);

// -- devices ---------------------------------------------------------------

/// Key seed for `device keygen`: the simulator's derivation when `index` is
/// given, otherwise a seed bound to (seed, name).
KeySeed keygen_seed(std::uint64_t seed, const std::string& name, std::optional<int> index);

/// Without `seed`, the key comes from OS entropy.
json cmd_device_keygen(const CommandContext& ctx, const std::string& name, const std::optional<KeySeed>& seed);

json op_device_register(Network& net, Keystore& keys, const std::string& name, const std::string& manufacturer_id,
                        const std::string& registrar);
json cmd_device_register(const CommandContext& ctx, const std::string& name, const std::string& manufacturer_id,
                         const std::string& registrar = kRegistrarKey);

/// Logs in and caches the session token in the keystore entry.
json op_device_login(Network& net, Keystore& keys, const std::string& name);
json cmd_device_login(const CommandContext& ctx, const std::string& name);

json cmd_device_transfer(const CommandContext& ctx, const std::string& name, const std::string& new_owner,
                         const std::string& owner_key = kRegistrarKey);

json cmd_did_resolve(const CommandContext& ctx, const std::string& did);

// -- assets ----------------------------------------------------------------

/// Uploads with the cached session of `name`. A duplicate raises
/// Error(DuplicateAsset) whose subject is the existing dataId.
json op_asset_upload(Network& net, Keystore& keys, const std::string& name, const std::string& asset_name,
                     ByteView payload);
json cmd_asset_upload(const CommandContext& ctx, const std::string& name, const std::filesystem::path& file,
                      const std::optional<std::string>& asset_name);

/// `mine` names the keystore entry whose cached session selects owned assets;
/// without it every asset is listed.
json op_asset_list(Network& net, Keystore& keys, const std::optional<std::string>& mine);
json cmd_asset_list(const CommandContext& ctx, const std::optional<std::string>& mine);

json asset_record_json(const asset::AssetRecord& r);

// -- simulation, scenario, bench -------------------------------------------

json cmd_sim_run(const sim::FlowConfig& config, std::int64_t duration_seconds);

struct ScenarioOptions {
    sim::FlowConfig flow;  // output_dir is ignored; files go to <work_dir>/nodered
    std::int64_t duration_seconds = 300;
    std::filesystem::path work_dir = "scenario";
    bool force = false;
    /// Adds wall-clock throughput and latency to the report, which then is
    /// no longer reproducible.
    bool timing = false;
    /// Called with the ledger directory right before the chain check.
    std::function<void(const std::filesystem::path&)> before_verify;
};

/// End-to-end run in `<work_dir>/{ledger,keystore,nodered}` on simulated
/// time. The report's "ok" is false when any invariant failed.
json run_scenario(const ScenarioOptions& options);

json metrics_json(const ledger::Metrics& m);

/// Registers a fresh bench device, then submits `tx_count` uploads of
/// distinct synthetic payloads and reports metrics over just those.
json op_bench(Network& net, Keystore& keys, std::size_t tx_count, std::uint64_t seed);
json cmd_bench(const CommandContext& ctx, std::size_t tx_count, std::uint64_t seed);

}  // namespace iotid::gateway
