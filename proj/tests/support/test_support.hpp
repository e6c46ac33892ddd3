// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <openssl/sha.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>

#include "iotid/commands.hpp"
#include "iotid/gateway.hpp"
#include "iotid/rng.hpp"

namespace iotid::testing {

namespace fs = std::filesystem;

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
  public:
    TempDir() {
        std::string tmpl = (fs::temp_directory_path() / "iotid-test-XXXXXX").string();
        if (::mkdtemp(tmpl.data()) == nullptr) std::abort();
        path_ = tmpl;
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const noexcept { return path_; }
    fs::path operator/(const std::string& rel) const { return path_ / rel; }

  private:
    fs::path path_;
};

/// Hash oracle independent of the library's hashing backend.
inline Digest oracle_sha256(ByteView data) {
    Digest out{};
    ::SHA256(data.data(), data.size(), out.data());
    return out;
}

inline Digest oracle_sha256(std::string_view s) {
    return oracle_sha256(ByteView(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

inline std::string oracle_hex(const Digest& d) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (auto b : d) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

inline KeySeed seed_from(std::uint64_t root, std::uint64_t index) {
    KeySeed s{};
    Rng(stream_seed(root, index)).fill(s);
    return s;
}

inline std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void spit(const fs::path& p, std::string_view content) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

/// Relative path -> bytes for every regular file under `root`.
inline std::map<std::string, std::string> read_tree(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = slurp(e.path());
    }
    return out;
}

struct Device {
    std::unique_ptr<KeyPair> key;
    Did did;
    Address address;
    Digest token{};
};

/// In-memory ledger, 3 peers (threshold 2), one registrar, simulated clock,
/// seeded randomness and a content store in a temp dir.
class TestNet {
  public:
    explicit TestNet(std::uint64_t seed = 1, std::size_t peers = 3, std::size_t threshold = 0)
        : seed_(seed), clock_(1000) {
        gateway::GeneratedNetwork net = gateway::generate_network(seed, peers, threshold);
        registrar_ = std::make_unique<KeyPair>(generate_keypair(net.registrar_seed));
        genesis_ = net.genesis;
        gw_ = std::make_unique<gateway::Gateway>(ledger::Ledger::in_memory(net.genesis),
                                                 gateway::make_peers(net.genesis, net.peer_seeds),
                                                 std::make_unique<ContentStore>(dir_ / "store"), clock_,
                                                 gateway::seeded_random_source(stream_seed(seed, 99)));
    }

    gateway::Gateway& gw() { return *gw_; }
    SimClock& clock() { return clock_; }
    const KeyPair& registrar() const { return *registrar_; }
    Address registrar_address() const { return derive_address(registrar_->public_key()); }
    const ledger::GenesisConfig& genesis() const { return genesis_; }
    const fs::path& dir() const { return dir_.path(); }

    /// Key for device `i` (no ledger activity).
    Device make_device(std::uint64_t i) const {
        Device d;
        d.key = std::make_unique<KeyPair>(generate_keypair(seed_from(seed_ + 7, i)));
        d.did = make_did(method_id_for_key(d.key->public_key()));
        d.address = derive_address(d.key->public_key());
        return d;
    }

    /// Created, registered (owner = registrar) and logged in.
    Device enroll(std::uint64_t i, std::string_view manufacturer = "ABCDEF00001") {
        Device d = make_device(i);
        gw_->create_identity(*registrar_, *d.key, d.did.method_id, registrar_address());
        gw_->register_device(*registrar_, d.did, manufacturer);
        d.token = gw_->login(*d.key, d.did).token;
        return d;
    }

  private:
    std::uint64_t seed_;
    TempDir dir_;
    SimClock clock_;
    std::unique_ptr<KeyPair> registrar_;
    ledger::GenesisConfig genesis_;
    std::unique_ptr<gateway::Gateway> gw_;
};

/// Expects `fn` to throw iotid::Error with `code`; returns the error.
template <typename F>
Error expect_error(ErrorCode code, F&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        if (e.code() != code) {
            throw std::runtime_error("expected " + std::string(to_string(code)) + ", got " +
                                     std::string(to_string(e.code())) + ": " + e.what());
        }
        return e;
    }
    throw std::runtime_error("expected " + std::string(to_string(code)) + ", nothing thrown");
}

}  // namespace iotid::testing
