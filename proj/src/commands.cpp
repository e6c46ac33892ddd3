// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#include "iotid/commands.hpp"

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <set>

#include "iotid/error.hpp"
#include "iotid/rng.hpp"

namespace iotid::gateway {

namespace fs = std::filesystem;

namespace {

std::unique_ptr<Network> open_network(const CommandContext& ctx) {
    if (ctx.clock == nullptr || !ctx.random) throw Error(ErrorCode::InvalidArgument, "command context is incomplete");
    return Network::open(ctx.ledger_dir, *ctx.clock, ctx.random);
}

json receipt_json(const TxReceipt& r) {
    return {{"block", r.block},
            {"flag", std::string(ledger::to_string(r.flag))},
            {"function", r.function},
            {"txId", to_hex(r.tx_id)}};
}

json key_json(const KeyEntry& e) {
    return {{"address", e.address.str()}, {"did", e.did.str()}, {"name", e.name}, {"publicKey", to_hex(e.public_key)}};
}

Digest cached_session(const KeyEntry& e, const Clock& clock) {
    if (!e.session_token) throw Error(ErrorCode::NotAuthenticated, "'" + e.name + "' has not logged in");
    if (clock.now() >= e.session_expires_at) throw Error(ErrorCode::NotAuthenticated, "session of '" + e.name + "' expired");
    return *e.session_token;
}

}  // namespace

idm::RandomSource os_random_source() {
    return [](std::span<std::uint8_t> out) { os_random(out); };
}

idm::RandomSource seeded_random_source(std::uint64_t seed) {
    struct State {
        explicit State(std::uint64_t s) : rng(s) {}
        std::mutex mu;
        Rng rng;
    };
    auto state = std::make_shared<State>(seed);
    return [state](std::span<std::uint8_t> out) {
        std::lock_guard lock(state->mu);
        state->rng.fill(out);
    };
}

// ---------------------------------------------------------------------------

json cmd_network_init(const CommandContext& ctx, const std::optional<fs::path>& genesis_path,
                      const std::optional<fs::path>& peer_keys_dir, std::uint64_t seed, bool force) {
    ledger::GenesisConfig genesis;
    std::vector<std::pair<std::string, KeySeed>> peer_seeds;
    std::optional<KeySeed> registrar_seed;
    if (genesis_path) {
        genesis = ledger::GenesisConfig::parse(read_text_file(*genesis_path));
        peer_seeds = load_peer_seeds(peer_keys_dir.value_or(ctx.ledger_dir / "peers"), genesis);
    } else {
        GeneratedNetwork net = generate_network(seed);
        genesis = std::move(net.genesis);
        peer_seeds = std::move(net.peer_seeds);
        registrar_seed = net.registrar_seed;
    }
    Network::init(ctx.ledger_dir, genesis, peer_seeds, force);

    json out{{"height", 1}, {"threshold", genesis.policy.threshold}};
    out["peers"] = json::array();
    for (const auto& p : genesis.policy.peers) out["peers"].push_back(p.id);
    out["registrars"] = json::array();
    for (const auto& r : genesis.registrars) out["registrars"].push_back(r.str());
    if (registrar_seed) {
        Keystore keys(ctx.keystore_dir);
        if (keys.contains(kRegistrarKey)) {
            if (keys.load(kRegistrarKey).seed != *registrar_seed) {
                if (!force) throw Error(ErrorCode::AlreadyExists, "keystore already holds a different registrar key");
                keys.save(KeyEntry::from_seed(kRegistrarKey, *registrar_seed));
            }
        } else {
            keys.create(kRegistrarKey, *registrar_seed);
        }
        out["registrarKey"] = kRegistrarKey;
    }
    return out;
}

json cmd_chain_verify(const CommandContext& ctx) {
    const fs::path chain = ctx.ledger_dir / ledger::Ledger::kChainFile;
    if (!fs::exists(chain)) throw Error(ErrorCode::NotFound, "no ledger in " + ctx.ledger_dir.string());
    DirLock lock(ctx.ledger_dir / "LOCK");
    const ledger::ChainReport report = ledger::verify_chain_file(chain);
    json out{{"height", ledger::read_chain_records(chain).size()}, {"ok", report.ok}};
    if (!report.ok) {
        out["firstBadBlock"] = report.first_bad_block ? json(*report.first_bad_block) : json(nullptr);
        out["reason"] = report.reason;
    }
    return out;
}

// ---------------------------------------------------------------------------

KeySeed keygen_seed(std::uint64_t seed, const std::string& name, std::optional<int> index) {
    if (index) return sim::device_key_seed(seed, *index);
    return sha256("iotid/keygen|" + std::to_string(seed) + "|" + name);
}

json cmd_device_keygen(const CommandContext& ctx, const std::string& name, const std::optional<KeySeed>& seed) {
    Keystore keys(ctx.keystore_dir);
    return key_json(keys.create(name, seed ? *seed : random_seed()));
}

json op_device_register(Network& net, Keystore& keys, const std::string& name, const std::string& manufacturer_id,
                        const std::string& registrar) {
    const KeyEntry device = keys.load(name);
    const KeyEntry reg = keys.load(registrar);
    const KeyPair device_key = device.keypair();
    const KeyPair registrar_key = reg.keypair();
    Gateway& gw = net.gateway();

    json txs = json::array();
    if (!idm::find_did_record(gw.ledger().snapshot(), device.did)) {
        txs.push_back(receipt_json(gw.create_identity(registrar_key, device_key, device.did.method_id, reg.address)));
    }
    txs.push_back(receipt_json(gw.register_device(registrar_key, device.did, manufacturer_id)));
    return {{"did", device.did.str()}, {"manufacturerId", manufacturer_id}, {"name", name},
            {"owner", reg.address.str()}, {"transactions", txs}};
}

json cmd_device_register(const CommandContext& ctx, const std::string& name, const std::string& manufacturer_id,
                         const std::string& registrar) {
    auto net = open_network(ctx);
    Keystore keys(ctx.keystore_dir);
    return op_device_register(*net, keys, name, manufacturer_id, registrar);
}

json op_device_login(Network& net, Keystore& keys, const std::string& name) {
    KeyEntry e = keys.load(name);
    const idm::Session s = net.gateway().login(e.keypair(), e.did);
    net.save_sessions();
    e.session_token = s.token;
    e.session_expires_at = s.expires_at;
    keys.save(e);
    return {{"did", s.did.str()}, {"expiresAt", s.expires_at}, {"name", name}, {"token", to_hex(s.token)}};
}

json cmd_device_login(const CommandContext& ctx, const std::string& name) {
    auto net = open_network(ctx);
    Keystore keys(ctx.keystore_dir);
    return op_device_login(*net, keys, name);
}

json cmd_device_transfer(const CommandContext& ctx, const std::string& name, const std::string& new_owner,
                         const std::string& owner_key) {
    auto net = open_network(ctx);
    Keystore keys(ctx.keystore_dir);
    const KeyEntry device = keys.load(name);
    const KeyEntry owner = keys.load(owner_key);
    Address to;
    try {
        to = Address::parse(new_owner);
    } catch (const Error&) {
        to = keys.load(new_owner).address;  // a keystore name
    }
    const TxReceipt r = net->gateway().transfer_ownership(owner.keypair(), device.did, to);
    return {{"did", device.did.str()}, {"newOwner", to.str()}, {"transaction", receipt_json(r)}};
}

json cmd_did_resolve(const CommandContext& ctx, const std::string& did) {
    auto net = open_network(ctx);
    return json::parse(canonical_serialize(net->gateway().resolve(parse_did(did))));
}

// ---------------------------------------------------------------------------

json asset_record_json(const asset::AssetRecord& r) {
    return {{"addedAt", r.added_at}, {"assetName", r.asset_name}, {"dataId", r.data_id.hex()}, {"owner", r.owner.str()}};
}

json op_asset_upload(Network& net, Keystore& keys, const std::string& name, const std::string& asset_name,
                     ByteView payload) {
    const KeyEntry e = keys.load(name);
    Gateway& gw = net.gateway();
    const asset::AssetRecord r = gw.upload_asset(e.keypair(), cached_session(e, gw.clock()), asset_name, payload);
    return asset_record_json(r);
}

json cmd_asset_upload(const CommandContext& ctx, const std::string& name, const fs::path& file,
                      const std::optional<std::string>& asset_name) {
    const std::string payload = read_text_file(file);
    auto net = open_network(ctx);
    Keystore keys(ctx.keystore_dir);
    return op_asset_upload(*net, keys, name, asset_name.value_or(file.filename().string()), as_bytes(payload));
}

json op_asset_list(Network& net, Keystore& keys, const std::optional<std::string>& mine) {
    Gateway& gw = net.gateway();
    std::vector<asset::AssetRecord> rows;
    if (mine) {
        rows = gw.query_owned_assets(cached_session(keys.load(*mine), gw.clock()));
    } else {
        rows = gw.query_all_assets();
    }
    json out{{"count", rows.size()}, {"rows", json::array()}};
    for (const auto& r : rows) out["rows"].push_back(asset_record_json(r));
    return out;
}

json cmd_asset_list(const CommandContext& ctx, const std::optional<std::string>& mine) {
    auto net = open_network(ctx);
    Keystore keys(ctx.keystore_dir);
    return op_asset_list(*net, keys, mine);
}

// ---------------------------------------------------------------------------

json cmd_sim_run(const sim::FlowConfig& config, std::int64_t duration_seconds) {
    const sim::SimNetwork network = sim::build_network(config);
    const auto readings = network.run(duration_seconds);
    sim::write_asset_files(readings, config.output_dir);
    std::map<int, std::size_t> per_device;
    for (const auto& f : network.flows()) per_device[f.index] = 0;
    for (const auto& r : readings) ++per_device[r.device_index];
    json devices = json::array();
    for (const auto& f : network.flows()) {
        devices.push_back({{"device", f.index}, {"did", f.did.str()}, {"files", per_device[f.index]}});
    }
    return {{"devices", devices}, {"durationSeconds", duration_seconds}, {"files", readings.size()}};
}

json metrics_json(const ledger::Metrics& m) {
    return {{"committedTxCount", m.committed_tx_count},
            {"latencyMs", {{"mean", m.latency.mean_ms}, {"min", m.latency.min_ms}, {"p95", m.latency.p95_ms}}},
            {"throughputTxPerSec", m.throughput_tx_per_sec}};
}

json run_scenario(const ScenarioOptions& opt) {
    opt.flow.validate();
    const fs::path ledger_dir = opt.work_dir / "ledger";
    const fs::path keystore_dir = opt.work_dir / "keystore";
    const fs::path sim_dir = opt.work_dir / "nodered";
    if (fs::exists(ledger_dir / ledger::Ledger::kChainFile) || fs::exists(sim_dir) || fs::exists(keystore_dir)) {
        if (!opt.force) throw Error(ErrorCode::AlreadyExists, opt.work_dir.string() + " holds a previous scenario");
        for (const auto& d : {ledger_dir, keystore_dir, sim_dir}) fs::remove_all(d);
    }
    const auto wall_start = std::chrono::steady_clock::now();
    const std::uint64_t seed = opt.flow.seed;
    SimClock clock(0);
    CommandContext ctx{ledger_dir, keystore_dir, &clock, seeded_random_source(stream_seed(seed, 0x5eed))};

    // Network and devices.
    cmd_network_init(ctx, std::nullopt, std::nullopt, seed, false);
    auto net = Network::open(ledger_dir, clock, ctx.random);
    Keystore keys(keystore_dir);
    const int n = opt.flow.device_count;
    std::vector<std::string> names;
    for (int i = 1; i <= n; ++i) {
        names.push_back("device" + std::to_string(i));
        keys.create(names.back(), sim::device_key_seed(seed, i));
    }
    std::size_t registered = 0;
    std::size_t logged_in = 0;
    for (const auto& name : names) {
        op_device_register(*net, keys, name, opt.flow.manufacturer_id, kRegistrarKey);
        ++registered;
    }
    for (const auto& name : names) {
        op_device_login(*net, keys, name);
        ++logged_in;
    }

    // Simulated sensor traffic.
    sim::FlowConfig flow = opt.flow;
    flow.output_dir = sim_dir;
    const sim::SimNetwork sim_net = sim::build_network(flow);
    const auto readings = sim_net.run(opt.duration_seconds);
    const auto files = sim::write_asset_files(readings, sim_dir);

    // Upload every file at its simulated emission time.
    std::set<std::string> distinct;
    std::map<std::string, std::size_t> accepted_by_device;
    std::map<std::string, std::string> first_data_id;  // device -> dataId of its first file
    std::size_t uploaded = 0;
    std::size_t collisions = 0;
    for (std::size_t i = 0; i < readings.size(); ++i) {
        const auto& r = readings[i];
        const std::string& name = names[static_cast<std::size_t>(r.device_index - 1)];
        const Bytes& payload = files[i].second;
        const std::string data_id = ContentHash::of(payload).hex();
        distinct.insert(data_id);
        if (r.counter == 1) first_data_id[name] = data_id;
        clock.set(r.time);
        try {
            op_asset_upload(*net, keys, name, sim::reading_relative_path(r).generic_string(), payload);
            ++uploaded;
            ++accepted_by_device[name];
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DuplicateAsset) throw;
            ++collisions;  // identical payload already uploaded by another device
        }
    }

    // One duplicate per device: resend its first file.
    clock.set(opt.duration_seconds + 1);
    std::size_t duplicates_rejected = 0;
    bool duplicates_report_original = true;
    json devices = json::array();
    for (int i = 1; i <= n; ++i) {
        const std::string& name = names[static_cast<std::size_t>(i - 1)];
        json d{{"did", keys.load(name).did.str()}, {"name", name}, {"uploaded", accepted_by_device[name]}};
        const fs::path first = sim_dir / ("device" + std::to_string(i)) / "1.txt";
        if (fs::exists(first)) {
            const std::string payload = read_text_file(first);
            try {
                op_asset_upload(*net, keys, name, "device" + std::to_string(i) + "/1.txt", as_bytes(payload));
                d["duplicateRejected"] = false;
            } catch (const Error& e) {
                if (e.code() != ErrorCode::DuplicateAsset) throw;
                ++duplicates_rejected;
                d["duplicateRejected"] = true;
                d["duplicateDataId"] = e.subject();
                d["originalDataId"] = first_data_id[name];
                if (e.subject() != first_data_id[name]) duplicates_report_original = false;
            }
        }
        devices.push_back(std::move(d));
    }

    // Queries.
    const std::size_t all_rows = op_asset_list(*net, keys, std::nullopt)["count"].get<std::size_t>();
    bool ownership_partition = true;
    std::size_t owned_total = 0;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const std::size_t owned = op_asset_list(*net, keys, names[i])["count"].get<std::size_t>();
        devices[i]["owned"] = owned;
        owned_total += owned;
        if (owned != accepted_by_device[names[i]]) ownership_partition = false;
    }
    if (owned_total != all_rows) ownership_partition = false;

    const ledger::Metrics metrics = net->gateway().ledger().metrics();
    const std::uint64_t height = net->gateway().ledger().height();
    net.reset();  // release the directory lock

    if (opt.before_verify) opt.before_verify(ledger_dir);
    const ledger::ChainReport chain = ledger::verify_chain_file(ledger_dir / ledger::Ledger::kChainFile);

    const std::size_t expected_files = static_cast<std::size_t>(n) *
                                       static_cast<std::size_t>(opt.duration_seconds / opt.flow.interval_seconds);
    json invariants{{"allAssetsMatchUploads", all_rows == uploaded},
                    {"chainValid", chain.ok},
                    {"duplicatesReportOriginal", duplicates_report_original},
                    {"everyDeviceLoggedIn", logged_in == static_cast<std::size_t>(n)},
                    {"everyDeviceRegistered", registered == static_cast<std::size_t>(n)},
                    {"everyDuplicateRejected", duplicates_rejected == static_cast<std::size_t>(n)},
                    {"ownershipPartition", ownership_partition},
                    {"sensorFileCount", files.size() == expected_files},
                    {"uploadsMatchDistinctPayloads", uploaded == distinct.size()}};
    bool ok = true;
    for (const auto& [k, v] : invariants.items()) ok = ok && v.get<bool>();

    std::vector<std::string> data_ids(distinct.begin(), distinct.end());
    json report{{"allAssets", all_rows},
                {"chainHeight", height},
                {"chainValid", chain.ok},
                {"dataIds", data_ids},
                {"deviceCount", n},
                {"devices", devices},
                {"duplicatesRejected", duplicates_rejected},
                {"durationSeconds", opt.duration_seconds},
                {"invariants", invariants},
                {"loggedIn", logged_in},
                {"metrics", {{"committedTxCount", metrics.committed_tx_count}}},
                {"ok", ok},
                {"payloadCollisions", collisions},
                {"registered", registered},
                {"seed", seed},
                {"sensorFiles", files.size()},
                {"uploaded", uploaded}};
    if (!chain.ok) {
        report["chainFirstBadBlock"] = chain.first_bad_block ? json(*chain.first_bad_block) : json(nullptr);
        report["chainReason"] = chain.reason;
    }
    if (opt.timing) {
        report["timing"] = metrics_json(metrics);
        report["timing"]["wallSeconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    }
    return report;
}

// ---------------------------------------------------------------------------

json op_bench(Network& net, Keystore& keys, std::size_t tx_count, std::uint64_t seed) {
    Gateway& gw = net.gateway();
    const KeyEntry reg = keys.load(kRegistrarKey);
    const KeyPair registrar_key = reg.keypair();
    const std::uint64_t height = gw.ledger().height();
    const KeyPair device_key =
        generate_keypair(sha256("iotid/bench|" + std::to_string(seed) + "|" + std::to_string(height)));
    const Did did = make_did(method_id_for_key(device_key.public_key()));
    if (!idm::find_did_record(gw.ledger().snapshot(), did)) {
        gw.create_identity(registrar_key, device_key, did.method_id, reg.address);
    }
    if (!idm::find_device_record(gw.ledger().snapshot(), did)) gw.register_device(registrar_key, did, "BENCH");
    const idm::Session session = gw.login(device_key, did);

    gw.ledger().reset_metrics();
    for (std::size_t i = 0; i < tx_count; ++i) {
        const std::string payload = "bench|" + did.str() + "|" + std::to_string(height) + "|" + std::to_string(i);
        gw.submit(gw.prepare_upload(device_key, session.token, "bench-" + std::to_string(i), as_bytes(payload)));
        gw.drain(false);
    }
    gw.drain(true);

    json out = metrics_json(gw.ledger().metrics());
    out["bench"] = {{"device", did.str()}, {"submitted", tx_count}};
    out["height"] = gw.ledger().height();
    return out;
}

json cmd_bench(const CommandContext& ctx, std::size_t tx_count, std::uint64_t seed) {
    auto net = open_network(ctx);
    Keystore keys(ctx.keystore_dir);
    return op_bench(*net, keys, tx_count, seed);
}

}  // namespace iotid::gateway
