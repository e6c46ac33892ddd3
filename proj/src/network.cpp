// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#include "iotid/network.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <fstream>
#include <nlohmann/json.hpp>
#include <regex>
#include <sstream>

#include "iotid/error.hpp"

namespace iotid::gateway {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kLockFile = "LOCK";
constexpr const char* kStoreDir = "store";
constexpr const char* kPeersDir = "peers";
constexpr const char* kGenesisFile = "genesis.json";
constexpr const char* kSessionsFile = "sessions.json";

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
}

void write_file(const fs::path& path, std::string_view content, bool private_mode) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error(ErrorCode::Io, "short write to " + tmp.string());
    }
    std::error_code ec;
    if (private_mode) {
        fs::permissions(tmp, fs::perms::owner_read | fs::perms::owner_write, fs::perm_options::replace, ec);
        if (ec) throw Error(ErrorCode::Io, "cannot restrict " + tmp.string() + ": " + ec.message());
    }
    fs::rename(tmp, path, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot replace " + path.string() + ": " + ec.message());
}

}  // namespace

// ---------------------------------------------------------------------------

DirLock::DirLock(const fs::path& lock_file) {
    fd_ = ::open(lock_file.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0600);
    if (fd_ < 0) throw Error(ErrorCode::Io, "cannot open lock file " + lock_file.string());
    if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
        ::close(fd_);
        fd_ = -1;
        throw Error(ErrorCode::Io, lock_file.parent_path().string() + " is in use by another process");
    }
}

DirLock::~DirLock() {
    if (fd_ >= 0) {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
}

void write_private_file(const fs::path& path, std::string_view content) { write_file(path, content, true); }

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------

KeyEntry KeyEntry::from_seed(std::string name, const KeySeed& seed) {
    KeyEntry e;
    e.name = std::move(name);
    e.seed = seed;
    e.public_key = generate_keypair(seed).public_key();
    e.address = derive_address(e.public_key);
    e.did = make_did(method_id_for_key(e.public_key));
    return e;
}

Keystore::Keystore(fs::path dir) : dir_(std::move(dir)) {}

fs::path Keystore::path_for(const std::string& name) const {
    static const std::regex valid("[A-Za-z0-9_.-]{1,64}");
    if (!std::regex_match(name, valid) || name.front() == '.') {
        throw Error(ErrorCode::InvalidArgument, "invalid key name '" + name + "'");
    }
    return dir_ / (name + ".json");
}

bool Keystore::contains(const std::string& name) const { return fs::exists(path_for(name)); }

KeyEntry Keystore::create(const std::string& name, const KeySeed& seed) {
    if (contains(name)) throw Error(ErrorCode::AlreadyExists, "key '" + name + "' already exists", name);
    KeyEntry e = KeyEntry::from_seed(name, seed);
    save(e);
    return e;
}

KeyEntry Keystore::load(const std::string& name) const {
    const fs::path path = path_for(name);
    if (!fs::exists(path)) throw Error(ErrorCode::NotFound, "no key named '" + name + "'", name);
    try {
        const json j = json::parse(read_text_file(path));
        KeyEntry e = KeyEntry::from_seed(name, fixed_from_hex<32>(j.at("seed").get<std::string>()));
        if (j.contains("session")) {
            e.session_token = fixed_from_hex<32>(j["session"].at("token").get<std::string>());
            e.session_expires_at = j["session"].at("expiresAt").get<std::int64_t>();
        }
        return e;
    } catch (const json::exception& ex) {
        throw Error(ErrorCode::MalformedInput, "key file " + path.string() + ": " + ex.what());
    }
}

void Keystore::save(const KeyEntry& e) {
    ensure_dir(dir_);
    json j{{"address", e.address.str()},
           {"did", e.did.str()},
           {"name", e.name},
           {"publicKey", to_hex(e.public_key)},
           {"seed", to_hex(e.seed)}};
    if (e.session_token) j["session"] = {{"expiresAt", e.session_expires_at}, {"token", to_hex(*e.session_token)}};
    write_file(path_for(e.name), j.dump(2) + "\n", true);
}

std::vector<std::string> Keystore::names() const {
    std::vector<std::string> out;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir_, ec)) {
        if (entry.path().extension() == ".json") out.push_back(entry.path().stem().string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------

std::vector<std::pair<std::string, KeySeed>> load_peer_seeds(const fs::path& dir,
                                                             const ledger::GenesisConfig& genesis) {
    std::vector<std::pair<std::string, KeySeed>> out;
    for (const auto& peer : genesis.policy.peers) {
        const fs::path file = dir / (peer.id + ".key");
        if (!fs::exists(file)) throw Error(ErrorCode::InvalidConfig, "missing key file " + file.string());
        std::string text = read_text_file(file);
        while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
        out.emplace_back(peer.id, fixed_from_hex<32>(text));
    }
    return out;
}

void Network::init(const fs::path& dir, const ledger::GenesisConfig& genesis,
                   const std::vector<std::pair<std::string, KeySeed>>& peer_seeds, bool force) {
    genesis.validate();
    make_peers(genesis, peer_seeds);  // every roster peer must have matching key material
    ensure_dir(dir);
    DirLock lock(dir / kLockFile);
    if (fs::exists(dir / ledger::Ledger::kChainFile)) {
        if (!force) throw Error(ErrorCode::AlreadyExists, "a ledger already exists in " + dir.string());
        for (const char* name : {ledger::Ledger::kChainFile, kStoreDir, kPeersDir, kGenesisFile, kSessionsFile}) {
            fs::remove_all(dir / name);
        }
    }
    ensure_dir(dir / kPeersDir);
    for (const auto& [id, seed] : peer_seeds) write_private_file(dir / kPeersDir / (id + ".key"), to_hex(seed) + "\n");
    write_file(dir / kGenesisFile, json::parse(genesis.canonical()).dump(2) + "\n", false);
    ledger::Ledger::create(dir, genesis);
}

std::unique_ptr<Network> Network::open(const fs::path& dir, const Clock& clock, idm::RandomSource random) {
    if (!fs::exists(dir / ledger::Ledger::kChainFile)) {
        throw Error(ErrorCode::NotFound, "no ledger in " + dir.string() + " (run 'network init')");
    }
    auto lock = std::make_unique<DirLock>(dir / kLockFile);
    auto ledger = ledger::Ledger::open(dir);
    auto peers = make_peers(ledger->config(), load_peer_seeds(dir / kPeersDir, ledger->config()));
    auto store = std::make_unique<ContentStore>(dir / kStoreDir);
    auto gw = std::make_unique<Gateway>(std::move(ledger), std::move(peers), std::move(store), clock, std::move(random));
    if (fs::exists(dir / kSessionsFile)) gw->logins().import_sessions(read_text_file(dir / kSessionsFile));
    return std::unique_ptr<Network>(new Network(dir, std::move(lock), std::move(gw)));
}

void Network::save_sessions() { write_private_file(dir_ / kSessionsFile, gateway_->logins().export_sessions() + "\n"); }

}  // namespace iotid::gateway
