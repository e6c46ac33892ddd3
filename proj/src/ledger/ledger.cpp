// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#include "iotid/ledger/ledger.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <mutex>
#include <numeric>

#include "iotid/error.hpp"

namespace iotid::ledger {
namespace fs = std::filesystem;

namespace {

void append_record(const fs::path& file, const Bytes& encoded) {
    std::ofstream out(file, std::ios::binary | std::ios::app);
    if (!out) throw Error(ErrorCode::Io, "cannot open " + file.string() + " for append");
    const auto n = static_cast<std::uint32_t>(encoded.size());
    const char len[4] = {static_cast<char>(n >> 24), static_cast<char>(n >> 16), static_cast<char>(n >> 8),
                         static_cast<char>(n)};
    out.write(len, 4);
    out.write(reinterpret_cast<const char*>(encoded.data()), static_cast<std::streamsize>(encoded.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::Io, "write to " + file.string() + " failed");
}

struct RecordScan {
    std::vector<Bytes> records;
    /// Set when the file ends inside a record header or body.
    std::optional<std::string> truncated;
};

RecordScan scan_records(const fs::path& chain_file) {
    std::ifstream in(chain_file, std::ios::binary);
    if (!in) throw Error(ErrorCode::NotFound, "no chain file at " + chain_file.string());
    const Bytes raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    RecordScan scan;
    std::size_t pos = 0;
    while (pos < raw.size()) {
        if (raw.size() - pos < 4) {
            scan.truncated = "truncated record header";
            break;
        }
        const std::uint32_t n = (std::uint32_t{raw[pos]} << 24) | (std::uint32_t{raw[pos + 1]} << 16) |
                                (std::uint32_t{raw[pos + 2]} << 8) | std::uint32_t{raw[pos + 3]};
        pos += 4;
        if (raw.size() - pos < n) {
            scan.truncated = "truncated record";
            break;
        }
        const auto first = raw.begin() + static_cast<std::ptrdiff_t>(pos);
        scan.records.emplace_back(first, first + n);
        pos += n;
    }
    return scan;
}

}  // namespace

std::vector<Bytes> read_chain_records(const fs::path& chain_file) {
    RecordScan scan = scan_records(chain_file);
    if (scan.truncated) {
        throw Error(ErrorCode::CorruptLedger, *scan.truncated + " at block " + std::to_string(scan.records.size()));
    }
    return std::move(scan.records);
}

ChainReport verify_chain_file(const fs::path& chain_file) {
    RecordScan scan;
    try {
        scan = scan_records(chain_file);
    } catch (const Error& e) {
        return ChainReport{false, 0, e.what()};
    }
    std::vector<Block> blocks;
    blocks.reserve(scan.records.size());
    std::optional<ChainReport> decode_failure;
    for (std::size_t i = 0; i < scan.records.size(); ++i) {
        try {
            blocks.push_back(Block::decode(scan.records[i]));
        } catch (const Error& e) {
            decode_failure = ChainReport{false, i, std::string("undecodable block: ") + e.what()};
            break;
        }
    }
    if (!decode_failure && scan.truncated) decode_failure = ChainReport{false, blocks.size(), *scan.truncated};
    // The earliest problem wins: a decodable prefix may already be broken.
    if (!blocks.empty()) {
        ChainReport prefix = verify_chain(blocks);
        if (!prefix.ok) return prefix;
    }
    if (decode_failure) return *decode_failure;
    return verify_chain(blocks);
}

// ---------------------------------------------------------------------------

std::unique_ptr<Ledger> Ledger::create(const fs::path& dir, const GenesisConfig& config) {
    config.validate();
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create ledger directory " + dir.string() + ": " + ec.message());
    const fs::path file = dir / kChainFile;
    if (fs::exists(file)) throw Error(ErrorCode::AlreadyExists, "a ledger already exists at " + dir.string());

    std::unique_ptr<Ledger> ledger(new Ledger(config));
    ledger->file_ = file;
    Block genesis = make_genesis_block(config);
    append_record(file, genesis.encode());
    ledger->apply_locked(std::move(genesis));
    return ledger;
}

std::unique_ptr<Ledger> Ledger::in_memory(const GenesisConfig& config) {
    std::unique_ptr<Ledger> ledger(new Ledger(config));
    ledger->apply_locked(make_genesis_block(config));
    return ledger;
}

std::unique_ptr<Ledger> Ledger::open(const fs::path& dir) {
    const fs::path file = dir / kChainFile;
    std::vector<Bytes> records;
    try {
        records = read_chain_records(file);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::NotFound) throw;
        throw Error(ErrorCode::CorruptLedger, e.what());
    }
    std::vector<Block> blocks;
    blocks.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        try {
            blocks.push_back(Block::decode(records[i]));
        } catch (const Error& e) {
            throw Error(ErrorCode::CorruptLedger, "block " + std::to_string(i) + ": " + e.what());
        }
    }
    const ChainReport report = ledger::verify_chain(blocks);
    if (!report.ok) {
        throw Error(ErrorCode::CorruptLedger,
                    "block " + std::to_string(report.first_bad_block.value_or(0)) + ": " + report.reason);
    }
    GenesisConfig config = GenesisConfig::parse(iotid::to_string(blocks.front().genesis_config));
    std::unique_ptr<Ledger> ledger(new Ledger(std::move(config)));
    ledger->file_ = file;
    for (auto& b : blocks) ledger->apply_locked(std::move(b));
    ledger->timing_ = {};
    ledger->committed_valid_ = 0;
    return ledger;
}

void Ledger::apply_locked(Block block) {
    state_ = apply_block(state_, block);
    const auto now = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < block.transactions.size(); ++i) {
        const Transaction& tx = block.transactions[i];
        const TxFlag flag = block.flags[i];
        tx_index_.insert_or_assign(tx.tx_id, TxLocation{block.header.number, i, flag});
        auto it = timing_.submitted.find(tx.tx_id);
        if (flag == TxFlag::Valid) {
            if (it != timing_.submitted.end()) {
                timing_.latencies_ms.push_back(std::chrono::duration<double, std::milli>(now - it->second).count());
            }
            ++committed_valid_;
            timing_.last_commit = now;
            if (!timing_.first_submit) {
                timing_.first_submit = it != timing_.submitted.end() ? it->second : now;
            }
        }
        if (it != timing_.submitted.end()) timing_.submitted.erase(it);
    }
    blocks_.push_back(std::move(block));
}

// ---------------------------------------------------------------------------

WorldState Ledger::snapshot() const {
    std::shared_lock lock(mu_);
    return state_;
}

std::uint64_t Ledger::height() const {
    std::shared_lock lock(mu_);
    return blocks_.size();
}

ChainTip Ledger::tip() const {
    std::shared_lock lock(mu_);
    return ChainTip{blocks_.size(), blocks_.back().header.hash()};
}

Block Ledger::block(std::uint64_t number) const {
    std::shared_lock lock(mu_);
    if (number >= blocks_.size()) throw Error(ErrorCode::NotFound, "no block " + std::to_string(number));
    return blocks_[number];
}

std::vector<Block> Ledger::blocks() const {
    std::shared_lock lock(mu_);
    return blocks_;
}

std::vector<TxFlag> Ledger::validate(const Block& block) const {
    return validate_block(block, snapshot(), config_.policy);
}

void Ledger::commit_block(Block block) {
    std::unique_lock lock(mu_);
    if (block.header.number != blocks_.size()) {
        throw Error(ErrorCode::NonSequentialBlock, "expected block " + std::to_string(blocks_.size()) + ", got " +
                                                       std::to_string(block.header.number));
    }
    if (block.header.prev_hash != blocks_.back().header.hash()) {
        throw Error(ErrorCode::NonSequentialBlock, "block " + std::to_string(block.header.number) +
                                                       " does not link to the current tip");
    }
    if (!block.genesis_config.empty()) throw Error(ErrorCode::InvalidArgument, "genesis data outside block 0");
    if (block.flags.size() != block.transactions.size() ||
        std::any_of(block.flags.begin(), block.flags.end(), [](TxFlag f) { return f == TxFlag::Unset; })) {
        throw Error(ErrorCode::InvalidArgument, "block is not validated");
    }
    if (block.header.data_hash != block.compute_data_hash() ||
        block.header.metadata_hash != block.compute_metadata_hash()) {
        throw Error(ErrorCode::InvalidArgument, "block hashes do not match its contents");
    }
    if (file_) append_record(*file_, block.encode());
    apply_locked(std::move(block));
}

std::optional<VersionedValue> Ledger::query_state(std::string_view key) const {
    std::shared_lock lock(mu_);
    return state_.get(key);
}

std::vector<std::pair<std::string, VersionedValue>> Ledger::query_prefix(std::string_view prefix) const {
    std::shared_lock lock(mu_);
    return state_.scan_prefix(prefix);
}

std::optional<TxLocation> Ledger::find_tx(const Digest& tx_id) const {
    std::shared_lock lock(mu_);
    const auto it = tx_index_.find(tx_id);
    if (it == tx_index_.end()) return std::nullopt;
    return it->second;
}

ChainReport Ledger::verify_chain() const {
    std::shared_lock lock(mu_);
    return ledger::verify_chain(blocks_);
}

// ---------------------------------------------------------------------------

void Ledger::record_submission(const Digest& tx_id, TimePoint when) {
    std::unique_lock lock(mu_);
    timing_.submitted.insert_or_assign(tx_id, when);
    if (!timing_.first_submit || when < *timing_.first_submit) timing_.first_submit = when;
}

Metrics Ledger::metrics() const {
    std::shared_lock lock(mu_);
    Metrics m;
    m.committed_tx_count = committed_valid_;
    if (committed_valid_ > 0 && timing_.first_submit && timing_.last_commit) {
        const double span_s =
            std::max(std::chrono::duration<double>(*timing_.last_commit - *timing_.first_submit).count(), 1e-9);
        m.throughput_tx_per_sec = static_cast<double>(committed_valid_) / span_s;
    }
    if (!timing_.latencies_ms.empty()) {
        std::vector<double> sorted = timing_.latencies_ms;
        std::sort(sorted.begin(), sorted.end());
        m.latency.min_ms = sorted.front();
        const double mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
        m.latency.mean_ms = std::clamp(mean, sorted.front(), sorted.back());
        const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(sorted.size())));
        m.latency.p95_ms = sorted[std::max<std::size_t>(rank, 1) - 1];
    }
    return m;
}

void Ledger::reset_metrics() {
    std::unique_lock lock(mu_);
    timing_ = {};
    committed_valid_ = 0;
}

}  // namespace iotid::ledger
