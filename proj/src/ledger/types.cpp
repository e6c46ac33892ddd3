// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#include "iotid/ledger/types.hpp"

#include <nlohmann/json.hpp>
#include <set>

#include "iotid/error.hpp"

namespace iotid::ledger {
namespace {

constexpr std::string_view kProposalTag = "iotid/proposal/v1";
constexpr std::string_view kTxIdTag = "iotid/tx/v1";

}  // namespace

// ---------------------------------------------------------------------------
// ReadWriteSet

void ReadWriteSet::encode_to(Encoder& enc) const {
    enc.u32(static_cast<std::uint32_t>(reads.size()));
    for (const auto& r : reads) {
        enc.str(r.key);
        enc.boolean(r.version.has_value());
        if (r.version) {
            enc.u64(r.version->block);
            enc.u64(r.version->tx);
        }
    }
    enc.u32(static_cast<std::uint32_t>(writes.size()));
    for (const auto& w : writes) {
        enc.str(w.key);
        enc.boolean(w.value.has_value());
        if (w.value) enc.bytes(*w.value);
    }
}

ReadWriteSet ReadWriteSet::decode_from(Decoder& dec) {
    ReadWriteSet rw;
    const std::uint32_t nr = dec.count(5);
    rw.reads.reserve(nr);
    for (std::uint32_t i = 0; i < nr; ++i) {
        ReadEntry r;
        r.key = dec.str();
        if (dec.boolean()) {
            const std::uint64_t b = dec.u64();
            r.version = Version{b, dec.u64()};
        }
        rw.reads.push_back(std::move(r));
    }
    const std::uint32_t nw = dec.count(5);
    rw.writes.reserve(nw);
    for (std::uint32_t i = 0; i < nw; ++i) {
        WriteEntry w;
        w.key = dec.str();
        if (dec.boolean()) w.value = dec.bytes();
        rw.writes.push_back(std::move(w));
    }
    return rw;
}

Bytes ReadWriteSet::encode() const {
    Encoder enc;
    encode_to(enc);
    return std::move(enc).take();
}

// ---------------------------------------------------------------------------
// TxProposal

namespace {

void encode_proposal_body(Encoder& enc, const TxProposal& p) {
    enc.fixed(p.invoker_key);
    enc.fixed(p.invoker.bytes);
    enc.str(p.contract);
    enc.str(p.function);
    enc.u32(static_cast<std::uint32_t>(p.args.size()));
    for (const auto& a : p.args) enc.str(a);
    enc.fixed(p.nonce);
    enc.i64(p.timestamp);
}

}  // namespace

Bytes TxProposal::signing_payload() const {
    Encoder enc;
    enc.str(kProposalTag);
    encode_proposal_body(enc, *this);
    return std::move(enc).take();
}

void TxProposal::sign_with(const Signer& signer) {
    invoker_key = signer.public_key();
    invoker = derive_address(invoker_key);
    signature = signer.sign(signing_payload());
}

bool TxProposal::authentic() const {
    return derive_address(invoker_key) == invoker && verify_signature(invoker_key, signing_payload(), signature);
}

void TxProposal::encode_to(Encoder& enc) const {
    encode_proposal_body(enc, *this);
    enc.bytes(signature);
}

TxProposal TxProposal::decode_from(Decoder& dec) {
    TxProposal p;
    p.invoker_key = dec.fixed<32>();
    p.invoker.bytes = dec.fixed<20>();
    p.contract = dec.str();
    p.function = dec.str();
    const std::uint32_t n = dec.count(4);
    p.args.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) p.args.push_back(dec.str());
    p.nonce = dec.fixed<32>();
    p.timestamp = dec.i64();
    p.signature = dec.bytes();
    return p;
}

// ---------------------------------------------------------------------------
// Transaction

Digest compute_tx_id(const TxProposal& proposal, const ReadWriteSet& rwset) {
    Encoder enc;
    enc.str(kTxIdTag);
    proposal.encode_to(enc);
    rwset.encode_to(enc);
    return sha256(enc.data());
}

void Transaction::encode_to(Encoder& enc) const {
    enc.fixed(tx_id);
    proposal.encode_to(enc);
    rwset.encode_to(enc);
    enc.u32(static_cast<std::uint32_t>(endorsements.size()));
    for (const auto& e : endorsements) {
        enc.str(e.peer_id);
        enc.bytes(e.signature);
    }
}

Transaction Transaction::decode_from(Decoder& dec) {
    Transaction tx;
    tx.tx_id = dec.fixed<32>();
    tx.proposal = TxProposal::decode_from(dec);
    tx.rwset = ReadWriteSet::decode_from(dec);
    const std::uint32_t n = dec.count(8);
    tx.endorsements.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        Endorsement e;
        e.peer_id = dec.str();
        e.signature = dec.bytes();
        tx.endorsements.push_back(std::move(e));
    }
    return tx;
}

std::string_view to_string(TxFlag flag) noexcept {
    switch (flag) {
        case TxFlag::Unset: return "UNSET";
        case TxFlag::Valid: return "VALID";
        case TxFlag::MvccConflict: return "MVCC_CONFLICT";
        case TxFlag::PolicyFailure: return "POLICY_FAILURE";
    }
    return "UNKNOWN";
}

// ---------------------------------------------------------------------------
// Block

Bytes BlockHeader::encode() const {
    Encoder enc;
    enc.u64(number);
    enc.fixed(prev_hash);
    enc.fixed(data_hash);
    enc.fixed(metadata_hash);
    return std::move(enc).take();
}

namespace {

void encode_data(Encoder& enc, const Block& b) {
    enc.u32(static_cast<std::uint32_t>(b.transactions.size()));
    for (const auto& tx : b.transactions) tx.encode_to(enc);
    enc.bytes(b.genesis_config);
}

void encode_flags(Encoder& enc, const std::vector<TxFlag>& flags) {
    enc.u32(static_cast<std::uint32_t>(flags.size()));
    for (TxFlag f : flags) enc.u8(static_cast<std::uint8_t>(f));
}

}  // namespace

Digest Block::compute_data_hash() const {
    Encoder enc;
    encode_data(enc, *this);
    return sha256(enc.data());
}

Digest Block::compute_metadata_hash() const {
    Encoder enc;
    encode_flags(enc, flags);
    return sha256(enc.data());
}

Bytes Block::encode() const {
    Encoder enc;
    enc.u64(header.number);
    enc.fixed(header.prev_hash);
    enc.fixed(header.data_hash);
    enc.fixed(header.metadata_hash);
    encode_data(enc, *this);
    encode_flags(enc, flags);
    return std::move(enc).take();
}

Block Block::decode(ByteView bytes) {
    Decoder dec(bytes);
    Block b;
    b.header.number = dec.u64();
    b.header.prev_hash = dec.fixed<32>();
    b.header.data_hash = dec.fixed<32>();
    b.header.metadata_hash = dec.fixed<32>();
    const std::uint32_t n = dec.count(32);
    b.transactions.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) b.transactions.push_back(Transaction::decode_from(dec));
    b.genesis_config = dec.bytes();
    const std::uint32_t nf = dec.count(1);
    b.flags.reserve(nf);
    for (std::uint32_t i = 0; i < nf; ++i) {
        const std::uint8_t f = dec.u8();
        if (f > static_cast<std::uint8_t>(TxFlag::PolicyFailure)) {
            throw Error(ErrorCode::MalformedInput, "unknown validation flag");
        }
        b.flags.push_back(static_cast<TxFlag>(f));
    }
    dec.finish();
    return b;
}

// ---------------------------------------------------------------------------
// Genesis configuration

const PeerInfo* EndorsementPolicy::find(std::string_view peer_id) const {
    for (const auto& p : peers) {
        if (p.id == peer_id) return &p;
    }
    return nullptr;
}

bool GenesisConfig::is_registrar(const Address& a) const {
    for (const auto& r : registrars) {
        if (r == a) return true;
    }
    return false;
}

void GenesisConfig::validate() const {
    if (policy.peers.empty()) throw Error(ErrorCode::InvalidConfig, "peer roster is empty");
    std::set<std::string> ids;
    for (const auto& p : policy.peers) {
        if (p.id.empty()) throw Error(ErrorCode::InvalidConfig, "peer id is empty");
        if (!ids.insert(p.id).second) throw Error(ErrorCode::InvalidConfig, "duplicate peer id " + p.id);
    }
    if (policy.threshold < 1 || policy.threshold > policy.peers.size()) {
        throw Error(ErrorCode::InvalidConfig, "endorsement threshold " + std::to_string(policy.threshold) +
                                                  " outside 1.." + std::to_string(policy.peers.size()));
    }
    if (cut.max_block_txs < 1) throw Error(ErrorCode::InvalidConfig, "maxBlockTxs must be at least 1");
    if (cut.batch_timeout.count() < 0) throw Error(ErrorCode::InvalidConfig, "batchTimeoutMs must be >= 0");
}

std::string GenesisConfig::canonical() const {
    using nlohmann::json;
    json peers = json::array();
    for (const auto& p : policy.peers) peers.push_back({{"id", p.id}, {"publicKey", to_hex(p.public_key)}});
    json regs = json::array();
    for (const auto& r : registrars) regs.push_back(r.str());
    json j = {
        {"blockCut", {{"batchTimeoutMs", cut.batch_timeout.count()}, {"maxBlockTxs", cut.max_block_txs}}},
        {"endorsementThreshold", policy.threshold},
        {"peers", std::move(peers)},
        {"registrars", std::move(regs)},
    };
    return j.dump();
}

GenesisConfig GenesisConfig::parse(std::string_view text) {
    using nlohmann::json;
    GenesisConfig cfg;
    try {
        const json j = json::parse(text);
        for (const auto& p : j.at("peers")) {
            cfg.policy.peers.push_back({p.at("id").get<std::string>(),
                                        fixed_from_hex<32>(p.at("publicKey").get<std::string>())});
        }
        if (j.contains("endorsementThreshold")) {
            const auto t = j.at("endorsementThreshold").get<std::int64_t>();
            if (t < 0) throw Error(ErrorCode::InvalidConfig, "negative endorsement threshold");
            cfg.policy.threshold = static_cast<std::size_t>(t);
        } else {
            cfg.policy.threshold = majority(cfg.policy.peers.size());
        }
        if (j.contains("blockCut")) {
            const json& bc = j.at("blockCut");
            if (bc.contains("maxBlockTxs")) {
                const auto m = bc.at("maxBlockTxs").get<std::int64_t>();
                if (m < 1) throw Error(ErrorCode::InvalidConfig, "maxBlockTxs must be at least 1");
                cfg.cut.max_block_txs = static_cast<std::size_t>(m);
            }
            if (bc.contains("batchTimeoutMs")) {
                cfg.cut.batch_timeout = std::chrono::milliseconds(bc.at("batchTimeoutMs").get<std::int64_t>());
            }
        }
        if (j.contains("registrars")) {
            for (const auto& r : j.at("registrars")) cfg.registrars.push_back(Address::parse(r.get<std::string>()));
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("malformed genesis config: ") + e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidConfig) throw;
        throw Error(ErrorCode::InvalidConfig, std::string("malformed genesis config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

}  // namespace iotid::ledger
