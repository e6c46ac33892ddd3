// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iotid/gateway.hpp"

namespace iotid::gateway {

/// Exclusive advisory lock (flock) on a file, held for the object's lifetime.
/// Throws Error(Io) when another process holds it.
class DirLock {
  public:
    explicit DirLock(const std::filesystem::path& lock_file);
    ~DirLock();
    DirLock(const DirLock&) = delete;
    DirLock& operator=(const DirLock&) = delete;

  private:
    int fd_ = -1;
};

/// One keystore entry: the key seed plus everything derivable from it and
/// the last session token obtained by logging in.
struct KeyEntry {
    std::string name;
    KeySeed seed{};
    PublicKey public_key{};
    Address address;
    Did did;
    std::optional<Digest> session_token;
    std::int64_t session_expires_at = 0;

    static KeyEntry from_seed(std::string name, const KeySeed& seed);
    KeyPair keypair() const { return generate_keypair(seed); }
};

/// Directory of `<name>.json` key files, each readable by the owner only.
class Keystore {
  public:
    explicit Keystore(std::filesystem::path dir);

    const std::filesystem::path& dir() const noexcept { return dir_; }
    bool contains(const std::string& name) const;
    /// Throws Error(AlreadyExists) on a name collision, Error(InvalidArgument) on a bad name.
    KeyEntry create(const std::string& name, const KeySeed& seed);
    /// Throws Error(NotFound).
    KeyEntry load(const std::string& name) const;
    void save(const KeyEntry& entry);
    std::vector<std::string> names() const;

  private:
    std::filesystem::path path_for(const std::string& name) const;
    std::filesystem::path dir_;
};

/// A ledger directory: `chain.dat`, `store/` (content store), `peers/<id>.key`,
/// `genesis.json`, `sessions.json` and the `LOCK` file.
class Network {
  public:
    /// Creates the directory, writes peer keys and commits genesis. Refuses
    /// (Error(AlreadyExists)) if a chain exists unless `force`, which first
    /// removes the previous chain, store, peer keys and sessions.
    static void init(const std::filesystem::path& dir, const ledger::GenesisConfig& genesis,
                     const std::vector<std::pair<std::string, KeySeed>>& peer_seeds, bool force);

    /// Locks the directory, replays the chain and restores persisted sessions.
    static std::unique_ptr<Network> open(const std::filesystem::path& dir, const Clock& clock,
                                         idm::RandomSource random);

    Gateway& gateway() noexcept { return *gateway_; }
    const std::filesystem::path& dir() const noexcept { return dir_; }
    std::filesystem::path chain_file() const { return dir_ / ledger::Ledger::kChainFile; }

    /// Writes the live session table to `sessions.json`.
    void save_sessions();

  private:
    Network(std::filesystem::path dir, std::unique_ptr<DirLock> lock, std::unique_ptr<Gateway> gateway)
        : dir_(std::move(dir)), lock_(std::move(lock)), gateway_(std::move(gateway)) {}

    std::filesystem::path dir_;
    std::unique_ptr<DirLock> lock_;
    std::unique_ptr<Gateway> gateway_;
};

/// Reads `<dir>/<id>.key` files (hex seeds) for every roster peer.
std::vector<std::pair<std::string, KeySeed>> load_peer_seeds(const std::filesystem::path& dir,
                                                             const ledger::GenesisConfig& genesis);

/// Writes `content` to `path` with owner-only permissions. Throws Error(Io).
void write_private_file(const std::filesystem::path& path, std::string_view content);

/// Whole-file read. Throws Error(Io).
std::string read_text_file(const std::filesystem::path& path);

}  // namespace iotid::gateway
