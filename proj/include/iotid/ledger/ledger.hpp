// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <vector>

#include "iotid/ledger/pipeline.hpp"
#include "iotid/ledger/types.hpp"
#include "iotid/ledger/world_state.hpp"

namespace iotid::ledger {

struct LatencyStats {
    double min_ms = 0;
    double mean_ms = 0;
    double p95_ms = 0;
};

struct Metrics {
    std::uint64_t committed_tx_count = 0;
    double throughput_tx_per_sec = 0;
    LatencyStats latency;
};

struct TxLocation {
    std::uint64_t block = 0;
    std::uint64_t index = 0;
    TxFlag flag = TxFlag::Unset;
};

/// Committed chain plus the world state derived from it.
///
/// When backed by a directory, blocks are appended to `<dir>/chain.dat` as
/// [u32 big-endian length][block encoding] records; opening replays every
/// VALID write from genesis. Queries take a shared lock and only ever see
/// fully committed blocks; commit takes the exclusive lock.
class Ledger {
  public:
    using TimePoint = std::chrono::steady_clock::time_point;

    static constexpr const char* kChainFile = "chain.dat";

    /// Writes and commits the genesis block. Throws Error(AlreadyExists) if a chain file exists.
    static std::unique_ptr<Ledger> create(const std::filesystem::path& dir, const GenesisConfig& config);
    /// Throws Error(NotFound) or Error(CorruptLedger).
    static std::unique_ptr<Ledger> open(const std::filesystem::path& dir);
    static std::unique_ptr<Ledger> in_memory(const GenesisConfig& config);

    const GenesisConfig& config() const noexcept { return config_; }

    WorldState snapshot() const;
    std::uint64_t height() const;
    ChainTip tip() const;
    Block block(std::uint64_t number) const;
    std::vector<Block> blocks() const;

    /// validate_block against the current state and the genesis policy.
    std::vector<TxFlag> validate(const Block& block) const;

    /// Appends a validated block. Throws Error(NonSequentialBlock) if the
    /// number or prev-hash does not extend the tip, Error(InvalidArgument) if
    /// flags are missing or the hashes do not match the contents.
    void commit_block(Block block);

    std::optional<VersionedValue> query_state(std::string_view key) const;
    std::vector<std::pair<std::string, VersionedValue>> query_prefix(std::string_view prefix) const;

    std::optional<TxLocation> find_tx(const Digest& tx_id) const;

    ChainReport verify_chain() const;

    /// Marks the submission instant of a transaction for latency accounting.
    void record_submission(const Digest& tx_id, TimePoint when);
    Metrics metrics() const;
    void reset_metrics();

  private:
    explicit Ledger(GenesisConfig config) : config_(std::move(config)) {}

    void apply_locked(Block block);

    GenesisConfig config_;
    std::optional<std::filesystem::path> file_;

    mutable std::shared_mutex mu_;
    std::vector<Block> blocks_;
    WorldState state_;
    std::map<Digest, TxLocation> tx_index_;
    std::uint64_t committed_valid_ = 0;

    struct Timing {
        std::map<Digest, TimePoint> submitted;
        std::vector<double> latencies_ms;
        std::optional<TimePoint> first_submit;
        std::optional<TimePoint> last_commit;
    };
    Timing timing_;
};

/// Encoded block records of a chain file, without decoding them.
std::vector<Bytes> read_chain_records(const std::filesystem::path& chain_file);

/// Decodes and verifies a chain file. Undecodable or truncated records are
/// reported as bad at their own position.
ChainReport verify_chain_file(const std::filesystem::path& chain_file);

}  // namespace iotid::ledger
