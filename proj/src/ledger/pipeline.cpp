// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#include "iotid/ledger/pipeline.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "iotid/error.hpp"

namespace iotid::ledger {

ExecutionResult execute_proposal(const WorldState& snapshot, const TxProposal& proposal,
                                 const ContractRegistry& contracts, const GenesisConfig& config,
                                 ContentStore& store) {
    if (!proposal.authentic()) {
        throw Error(ErrorCode::BadProposalSignature, "proposal signature does not verify for " + proposal.invoker.str());
    }
    const Contract* contract = contracts.find(proposal.contract);
    if (contract == nullptr) throw Error(ErrorCode::UnknownContract, "no contract named '" + proposal.contract + "'");

    TxContext ctx(snapshot, proposal, config, store);
    const std::string nk = nonce_key(proposal.invoker, proposal.nonce);
    if (ctx.get_state(nk)) throw Error(ErrorCode::NonceReused, "nonce already used by " + proposal.invoker.str());

    Bytes response = contract->invoke(ctx, proposal.function);
    ctx.put_state(nk, to_bytes(std::to_string(proposal.timestamp)));
    return ExecutionResult{ctx.rwset(), std::move(response)};
}

Endorsement EndorsingPeer::endorse(const WorldState& snapshot, const TxProposal& proposal, const ReadWriteSet& rwset,
                                   const ContractRegistry& contracts, const GenesisConfig& config,
                                   ContentStore& store) const {
    const ExecutionResult mine = execute_proposal(snapshot, proposal, contracts, config, store);
    if (mine.rwset.hash() != rwset.hash()) {
        throw Error(ErrorCode::RwsetMismatch, "peer " + id_ + " computed a different read/write set");
    }
    const Digest tx_id = compute_tx_id(proposal, rwset);
    return Endorsement{id_, key_.sign(tx_id)};
}

Endorsement endorse(std::span<const EndorsingPeer> peers, std::string_view peer_id, const WorldState& snapshot,
                    const TxProposal& proposal, const ReadWriteSet& rwset, const ContractRegistry& contracts,
                    const GenesisConfig& config, ContentStore& store) {
    for (const auto& p : peers) {
        if (p.id() == peer_id) return p.endorse(snapshot, proposal, rwset, contracts, config, store);
    }
    throw Error(ErrorCode::UnknownPeer, "no peer named '" + std::string(peer_id) + "'");
}

Transaction assemble_transaction(TxProposal proposal, ReadWriteSet rwset, std::vector<Endorsement> endorsements) {
    Transaction tx;
    tx.tx_id = compute_tx_id(proposal, rwset);
    tx.proposal = std::move(proposal);
    tx.rwset = std::move(rwset);
    tx.endorsements = std::move(endorsements);
    return tx;
}

// ---------------------------------------------------------------------------

Block order_batch(std::deque<Transaction>& pending, const CutPolicy& policy, const ChainTip& tip) {
    if (pending.empty()) throw Error(ErrorCode::EmptyBatch, "no pending transactions to order");
    const std::size_t n = std::min(pending.size(), std::max<std::size_t>(policy.max_block_txs, 1));
    Block b;
    b.header.number = tip.next_number;
    b.header.prev_hash = tip.prev_hash;
    b.transactions.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        b.transactions.push_back(std::move(pending.front()));
        pending.pop_front();
    }
    b.header.data_hash = b.compute_data_hash();
    return b;
}

Block make_genesis_block(const GenesisConfig& config) {
    config.validate();
    Block b;
    b.header.number = 0;
    b.genesis_config = to_bytes(config.canonical());
    b.header.data_hash = b.compute_data_hash();
    b.header.metadata_hash = b.compute_metadata_hash();
    return b;
}

void SoloOrderer::enqueue(Transaction tx, TimePoint now) {
    if (queue_.empty()) oldest_ = now;
    queue_.push_back(std::move(tx));
}

bool SoloOrderer::ready(TimePoint now) const {
    if (queue_.empty()) return false;
    if (queue_.size() >= policy_.max_block_txs) return true;
    return oldest_ && now - *oldest_ >= policy_.batch_timeout;
}

std::optional<Block> SoloOrderer::cut(TimePoint now, const ChainTip& tip, bool force) {
    if (queue_.empty() || !(force || ready(now))) return std::nullopt;
    Block b = order_batch(queue_, policy_, tip);
    // Remaining transactions start a fresh batch window.
    oldest_ = queue_.empty() ? std::nullopt : std::optional<TimePoint>(now);
    return b;
}

// ---------------------------------------------------------------------------

namespace {

std::size_t count_valid_endorsements(const Transaction& tx, const EndorsementPolicy& policy) {
    std::set<std::string> endorsed;
    for (const auto& e : tx.endorsements) {
        const PeerInfo* peer = policy.find(e.peer_id);
        if (peer == nullptr || endorsed.contains(e.peer_id)) continue;
        if (verify_signature(peer->public_key, tx.tx_id, e.signature)) endorsed.insert(e.peer_id);
    }
    return endorsed.size();
}

}  // namespace

std::vector<TxFlag> validate_block(const Block& block, const WorldState& state, const EndorsementPolicy& policy) {
    std::vector<TxFlag> flags;
    flags.reserve(block.transactions.size());
    // Versions written by earlier VALID txs of this block; nullopt = deleted.
    std::map<std::string, std::optional<Version>, std::less<>> overlay;

    for (std::size_t i = 0; i < block.transactions.size(); ++i) {
        const Transaction& tx = block.transactions[i];
        if (compute_tx_id(tx.proposal, tx.rwset) != tx.tx_id || !tx.proposal.authentic() ||
            count_valid_endorsements(tx, policy) < policy.threshold) {
            flags.push_back(TxFlag::PolicyFailure);
            continue;
        }
        bool stale = false;
        for (const auto& r : tx.rwset.reads) {
            std::optional<Version> current;
            if (auto it = overlay.find(r.key); it != overlay.end()) {
                current = it->second;
            } else if (auto v = state.get(r.key)) {
                current = v->version;
            }
            if (current != r.version) {
                stale = true;
                break;
            }
        }
        if (stale) {
            flags.push_back(TxFlag::MvccConflict);
            continue;
        }
        flags.push_back(TxFlag::Valid);
        const Version v{block.header.number, i};
        for (const auto& w : tx.rwset.writes) {
            overlay.insert_or_assign(w.key, w.value ? std::optional<Version>(v) : std::nullopt);
        }
    }
    return flags;
}

void set_flags(Block& block, std::vector<TxFlag> flags) {
    if (flags.size() != block.transactions.size()) {
        throw Error(ErrorCode::InvalidArgument, "flag count does not match transaction count");
    }
    block.flags = std::move(flags);
    block.header.metadata_hash = block.compute_metadata_hash();
}

WorldState apply_block(const WorldState& state, const Block& block) {
    StateMap next = state.entries();
    for (std::size_t i = 0; i < block.transactions.size(); ++i) {
        if (i >= block.flags.size() || block.flags[i] != TxFlag::Valid) continue;
        const Version v{block.header.number, i};
        for (const auto& w : block.transactions[i].rwset.writes) {
            if (w.value) {
                next.insert_or_assign(w.key, VersionedValue{*w.value, v});
            } else {
                next.erase(w.key);
            }
        }
    }
    return WorldState(std::move(next));
}

// ---------------------------------------------------------------------------

namespace {

std::optional<std::string> check_block(const Block& b, std::uint64_t expected_number, const Digest& expected_prev) {
    if (b.header.number != expected_number) return "block number " + std::to_string(b.header.number) + " out of sequence";
    if (b.header.prev_hash != expected_prev) return std::string("prev-hash link broken");
    if (b.header.data_hash != b.compute_data_hash()) return std::string("data hash mismatch");
    if (b.header.metadata_hash != b.compute_metadata_hash()) return std::string("metadata hash mismatch");
    if (expected_number == 0) {
        if (b.genesis_config.empty() || !b.transactions.empty()) return std::string("malformed genesis block");
    } else if (!b.genesis_config.empty()) {
        return std::string("genesis configuration outside block 0");
    }
    if (b.flags.size() != b.transactions.size()) return std::string("flag count mismatch");
    for (std::size_t i = 0; i < b.transactions.size(); ++i) {
        if (b.flags[i] == TxFlag::Unset) return "unset flag at tx " + std::to_string(i);
        const Transaction& tx = b.transactions[i];
        if (compute_tx_id(tx.proposal, tx.rwset) != tx.tx_id) return "txId mismatch at tx " + std::to_string(i);
    }
    return std::nullopt;
}

}  // namespace

ChainReport verify_chain(std::span<const Block> blocks) {
    if (blocks.empty()) return ChainReport{false, 0, "chain is empty"};
    Digest prev{};
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (auto why = check_block(blocks[i], i, prev)) return ChainReport{false, i, *why};
        prev = blocks[i].header.hash();
    }
    return ChainReport{};
}

}  // namespace iotid::ledger
