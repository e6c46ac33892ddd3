// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "iotid/bytes.hpp"
#include "iotid/did.hpp"
#include "iotid/ledger/codec.hpp"

namespace iotid::ledger {

/// Coordinates of the committing transaction: (block number, index in block).
struct Version {
    std::uint64_t block = 0;
    std::uint64_t tx = 0;

    auto operator<=>(const Version&) const = default;
};

/// A key read during execution. `version` is empty when the key was absent.
struct ReadEntry {
    std::string key;
    std::optional<Version> version;

    bool operator==(const ReadEntry&) const = default;
};

/// A pending write. An empty `value` marks deletion.
struct WriteEntry {
    std::string key;
    std::optional<Bytes> value;

    bool operator==(const WriteEntry&) const = default;
};

/// Reads and writes are each sorted by key with no duplicates.
struct ReadWriteSet {
    std::vector<ReadEntry> reads;
    std::vector<WriteEntry> writes;

    bool empty() const noexcept { return reads.empty() && writes.empty(); }
    Bytes encode() const;
    Digest hash() const { return sha256(encode()); }

    void encode_to(Encoder& enc) const;
    static ReadWriteSet decode_from(Decoder& dec);

    bool operator==(const ReadWriteSet&) const = default;
};

struct TxProposal {
    PublicKey invoker_key{};
    Address invoker;
    std::string contract;
    std::string function;
    std::vector<std::string> args;
    Digest nonce{};
    std::int64_t timestamp = 0;
    Bytes signature;

    /// Canonical encoding of every field except the signature.
    Bytes signing_payload() const;

    /// Fills invoker, invoker_key and signature.
    void sign_with(const Signer& signer);

    /// Invoker address matches the key and the signature verifies.
    bool authentic() const;

    void encode_to(Encoder& enc) const;
    static TxProposal decode_from(Decoder& dec);

    bool operator==(const TxProposal&) const = default;
};

struct Endorsement {
    std::string peer_id;
    Bytes signature;

    bool operator==(const Endorsement&) const = default;
};

/// txId = SHA-256(encode(proposal) || encode(rwset)); endorsements sign the txId.
Digest compute_tx_id(const TxProposal& proposal, const ReadWriteSet& rwset);

struct Transaction {
    Digest tx_id{};
    TxProposal proposal;
    ReadWriteSet rwset;
    std::vector<Endorsement> endorsements;

    void encode_to(Encoder& enc) const;
    static Transaction decode_from(Decoder& dec);

    bool operator==(const Transaction&) const = default;
};

enum class TxFlag : std::uint8_t {
    Unset = 0,
    Valid = 1,
    MvccConflict = 2,
    PolicyFailure = 3,
};

std::string_view to_string(TxFlag flag) noexcept;

/// Hash-linked header. metadata_hash covers the validation flags, which are
/// set after ordering, so tampering with a flag is caught at its own block.
struct BlockHeader {
    std::uint64_t number = 0;
    Digest prev_hash{};
    Digest data_hash{};
    Digest metadata_hash{};

    Bytes encode() const;
    Digest hash() const { return sha256(encode()); }

    bool operator==(const BlockHeader&) const = default;
};

struct Block {
    BlockHeader header;
    std::vector<Transaction> transactions;
    /// Canonical genesis configuration; non-empty only in block 0.
    Bytes genesis_config;
    std::vector<TxFlag> flags;

    Digest compute_data_hash() const;
    Digest compute_metadata_hash() const;

    Bytes encode() const;
    /// Throws Error(MalformedInput) on any malformed or trailing byte.
    static Block decode(ByteView bytes);

    bool operator==(const Block&) const = default;
};

// ---------------------------------------------------------------------------
// Configuration

/// Block cutting: whichever of size or timeout is reached first.
struct CutPolicy {
    std::size_t max_block_txs = 10;
    std::chrono::milliseconds batch_timeout{2000};
};

struct PeerInfo {
    std::string id;
    PublicKey public_key{};
};

/// m-of-n endorsement rule over the genesis peer roster.
struct EndorsementPolicy {
    std::size_t threshold = 0;
    std::vector<PeerInfo> peers;

    const PeerInfo* find(std::string_view peer_id) const;
};

/// Parsed genesis config file. Text form is JSON:
///   {"blockCut":{"batchTimeoutMs":2000,"maxBlockTxs":10},
///    "endorsementThreshold":2,
///    "peers":[{"id":"peer0","publicKey":"<hex>"},...],
///    "registrars":["0x..."]}
/// `endorsementThreshold` may be omitted; it defaults to a majority of the roster.
struct GenesisConfig {
    EndorsementPolicy policy;
    CutPolicy cut;
    std::vector<Address> registrars;

    /// Throws Error(InvalidConfig).
    void validate() const;

    /// Sorted-key JSON, no whitespace. Stored in block 0.
    std::string canonical() const;

    /// Throws Error(InvalidConfig).
    static GenesisConfig parse(std::string_view text);

    bool is_registrar(const Address& a) const;
};

inline std::size_t majority(std::size_t n) { return n / 2 + 1; }

}  // namespace iotid::ledger
