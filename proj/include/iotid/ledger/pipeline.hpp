// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "iotid/content_store.hpp"
#include "iotid/ledger/contract.hpp"
#include "iotid/ledger/types.hpp"
#include "iotid/ledger/world_state.hpp"

namespace iotid::ledger {

// ---------------------------------------------------------------------------
// Execute

struct ExecutionResult {
    ReadWriteSet rwset;
    Bytes response;
};

/// Simulates `proposal` against `snapshot` without committing anything.
///
/// Rejects a forged or mismatched proposal signature before dispatch
/// (BadProposalSignature), then UnknownContract / UnknownFunction, then
/// NonceReused if `nonce/<invoker>/<nonce>` already exists. Any contract
/// error propagates as Error and no read/write set is produced. On success
/// the nonce key is part of the write set.
ExecutionResult execute_proposal(const WorldState& snapshot, const TxProposal& proposal,
                                 const ContractRegistry& contracts, const GenesisConfig& config,
                                 ContentStore& store);

/// An in-process endorsing peer holding its signing key.
class EndorsingPeer {
  public:
    EndorsingPeer(std::string id, KeyPair key) : id_(std::move(id)), key_(std::move(key)) {}

    const std::string& id() const noexcept { return id_; }
    PublicKey public_key() const { return key_.public_key(); }

    /// Re-executes the proposal and signs the txId if the read/write set
    /// matches `rwset`. Throws Error(RwsetMismatch) otherwise.
    Endorsement endorse(const WorldState& snapshot, const TxProposal& proposal, const ReadWriteSet& rwset,
                        const ContractRegistry& contracts, const GenesisConfig& config,
                        ContentStore& store) const;

  private:
    std::string id_;
    KeyPair key_;
};

/// Looks up `peer_id` in `peers` and endorses with it. Throws Error(UnknownPeer).
Endorsement endorse(std::span<const EndorsingPeer> peers, std::string_view peer_id, const WorldState& snapshot,
                    const TxProposal& proposal, const ReadWriteSet& rwset, const ContractRegistry& contracts,
                    const GenesisConfig& config, ContentStore& store);

Transaction assemble_transaction(TxProposal proposal, ReadWriteSet rwset, std::vector<Endorsement> endorsements);

// ---------------------------------------------------------------------------
// Order

struct ChainTip {
    std::uint64_t next_number = 0;
    Digest prev_hash{};
};

/// Cuts the next block from the front of `pending`: up to max_block_txs
/// transactions, in arrival order. Flags are left unset.
/// Throws Error(EmptyBatch) when nothing is pending.
Block order_batch(std::deque<Transaction>& pending, const CutPolicy& policy, const ChainTip& tip);

Block make_genesis_block(const GenesisConfig& config);

/// Solo ordering service: a single FIFO queue cut by size or by age of the
/// oldest pending transaction.
class SoloOrderer {
  public:
    using TimePoint = std::chrono::steady_clock::time_point;

    explicit SoloOrderer(CutPolicy policy) : policy_(policy) {}

    void enqueue(Transaction tx, TimePoint now);

    /// True when a full block is pending or the oldest pending tx has waited
    /// for at least the batch timeout.
    bool ready(TimePoint now) const;

    /// Cuts a block if ready(now) or `force` and anything is pending.
    std::optional<Block> cut(TimePoint now, const ChainTip& tip, bool force = false);

    std::size_t pending() const noexcept { return queue_.size(); }
    const CutPolicy& policy() const noexcept { return policy_; }

  private:
    CutPolicy policy_;
    std::deque<Transaction> queue_;
    std::optional<TimePoint> oldest_;
};

// ---------------------------------------------------------------------------
// Validate and commit

/// Per-transaction flags, evaluated in order. A tx is POLICY_FAILURE when its
/// txId does not match its contents, its proposal is not authentic, or fewer
/// than `threshold` distinct roster peers endorsed it; otherwise
/// MVCC_CONFLICT if any read version differs from the working state
/// (which includes writes of earlier VALID txs in the block); otherwise VALID.
std::vector<TxFlag> validate_block(const Block& block, const WorldState& state, const EndorsementPolicy& policy);

/// Stores the flags and the matching metadata hash in the block.
void set_flags(Block& block, std::vector<TxFlag> flags);

/// Applies the writes of VALID transactions at (block number, tx index).
WorldState apply_block(const WorldState& state, const Block& block);

// ---------------------------------------------------------------------------
// Integrity

struct ChainReport {
    bool ok = true;
    std::optional<std::uint64_t> first_bad_block;
    std::string reason;
};

/// Checks block numbering, genesis zero prev-hash, every prev-hash link and
/// every data, metadata and txId hash.
ChainReport verify_chain(std::span<const Block> blocks);

}  // namespace iotid::ledger
