// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#include "iotid/gateway.hpp"

#include "iotid/error.hpp"

namespace iotid::gateway {

GeneratedNetwork generate_network(std::uint64_t seed, std::size_t peers, std::size_t threshold) {
    GeneratedNetwork net;
    for (std::size_t i = 0; i < peers; ++i) {
        const std::string id = "peer" + std::to_string(i);
        const KeySeed ks = sha256("iotid/peer|" + std::to_string(seed) + "|" + id);
        net.genesis.policy.peers.push_back({id, generate_keypair(ks).public_key()});
        net.peer_seeds.emplace_back(id, ks);
    }
    net.genesis.policy.threshold = threshold == 0 ? ledger::majority(peers) : threshold;
    net.registrar_seed = sha256("iotid/registrar|" + std::to_string(seed));
    net.genesis.registrars.push_back(derive_address(generate_keypair(net.registrar_seed).public_key()));
    net.genesis.validate();
    return net;
}

std::vector<ledger::EndorsingPeer> make_peers(const ledger::GenesisConfig& genesis,
                                              const std::vector<std::pair<std::string, KeySeed>>& seeds) {
    std::vector<ledger::EndorsingPeer> peers;
    for (const auto& info : genesis.policy.peers) {
        const auto it = std::find_if(seeds.begin(), seeds.end(), [&](const auto& s) { return s.first == info.id; });
        if (it == seeds.end()) throw Error(ErrorCode::InvalidConfig, "no key material for peer " + info.id);
        KeyPair kp = generate_keypair(it->second);
        if (kp.public_key() != info.public_key) {
            throw Error(ErrorCode::InvalidConfig, "key material for peer " + info.id + " does not match the roster");
        }
        peers.emplace_back(info.id, std::move(kp));
    }
    return peers;
}

// ---------------------------------------------------------------------------

Gateway::Gateway(std::unique_ptr<ledger::Ledger> ledger, std::vector<ledger::EndorsingPeer> peers,
                 std::unique_ptr<ContentStore> store, const Clock& clock, idm::RandomSource random)
    : ledger_(std::move(ledger)),
      peers_(std::move(peers)),
      store_(std::move(store)),
      clock_(clock),
      random_(random),
      logins_(clock, random),
      orderer_(ledger_->config().cut) {
    contracts_.add(std::make_shared<idm::IdmContract>());
    contracts_.add(std::make_shared<asset::AssetContract>());
}

ledger::TxProposal Gateway::make_proposal(const Signer& invoker, std::string_view contract, std::string_view function,
                                          std::vector<std::string> args) {
    ledger::TxProposal p;
    p.contract = contract;
    p.function = function;
    p.args = std::move(args);
    random_(p.nonce);
    p.timestamp = clock_.now();
    p.sign_with(invoker);
    return p;
}

PreparedTx Gateway::prepare(const ledger::TxProposal& proposal, std::size_t endorsers) {
    const ledger::WorldState snapshot = ledger_->snapshot();
    const auto& config = ledger_->config();
    ledger::ExecutionResult result = ledger::execute_proposal(snapshot, proposal, contracts_, config, *store_);
    const std::size_t n = endorsers == 0 ? peers_.size() : std::min(endorsers, peers_.size());
    std::vector<ledger::Endorsement> endorsements;
    endorsements.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        endorsements.push_back(peers_[i].endorse(snapshot, proposal, result.rwset, contracts_, config, *store_));
    }
    return PreparedTx{ledger::assemble_transaction(proposal, std::move(result.rwset), std::move(endorsements)),
                      std::move(result.response)};
}

void Gateway::submit(PreparedTx prepared) {
    std::lock_guard lock(pipeline_mu_);
    const auto now = std::chrono::steady_clock::now();
    ledger_->record_submission(prepared.tx.tx_id, now);
    responses_.insert_or_assign(prepared.tx.tx_id,
                                std::make_pair(prepared.tx.proposal.function, std::move(prepared.response)));
    orderer_.enqueue(std::move(prepared.tx), now);
}

std::vector<TxReceipt> Gateway::drain(bool force) {
    std::lock_guard lock(pipeline_mu_);
    std::vector<TxReceipt> receipts;
    while (true) {
        std::optional<ledger::Block> block = orderer_.cut(std::chrono::steady_clock::now(), ledger_->tip(), force);
        if (!block) break;
        ledger::set_flags(*block, ledger_->validate(*block));
        for (std::size_t i = 0; i < block->transactions.size(); ++i) {
            TxReceipt r;
            r.tx_id = block->transactions[i].tx_id;
            r.block = block->header.number;
            r.flag = block->flags[i];
            if (auto it = responses_.find(r.tx_id); it != responses_.end()) {
                r.function = std::move(it->second.first);
                r.response = std::move(it->second.second);
                responses_.erase(it);
            }
            receipts.push_back(std::move(r));
        }
        ledger_->commit_block(std::move(*block));
    }
    return receipts;
}

std::size_t Gateway::pending() const {
    std::lock_guard lock(pipeline_mu_);
    return orderer_.pending();
}

TxReceipt Gateway::invoke(const Signer& invoker, std::string_view contract, std::string_view function,
                          std::vector<std::string> args) {
    PreparedTx prepared = prepare(make_proposal(invoker, contract, function, std::move(args)));
    const Digest id = prepared.tx.tx_id;
    submit(std::move(prepared));
    for (TxReceipt& r : drain(true)) {
        if (r.tx_id != id) continue;
        if (r.flag != ledger::TxFlag::Valid) {
            throw Error(ErrorCode::TxNotCommitted,
                        std::string(function) + " was flagged " + std::string(ledger::to_string(r.flag)),
                        std::string(ledger::to_string(r.flag)));
        }
        return r;
    }
    throw Error(ErrorCode::TxNotCommitted, std::string(function) + " was not ordered");
}

// ---------------------------------------------------------------------------

TxReceipt Gateway::create_identity(const Signer& registrar, const Signer& device, std::string_view id,
                                   const Address& owner) {
    const PublicKey pk = device.public_key();
    const std::string method_id = id.empty() ? method_id_for_key(pk) : std::string(id);
    const Did did = make_did(method_id);
    const PossessionProof proof = make_possession_proof(device, did, owner);
    return invoke(registrar, idm::kContractName, idm::kCreateIdentity,
                  idm::create_identity_args(pk, method_id, owner, proof));
}

TxReceipt Gateway::register_device(const Signer& owner, const Did& did, std::string_view manufacturer_id) {
    return invoke(owner, idm::kContractName, idm::kRegisterDevice, {did.str(), std::string(manufacturer_id)});
}

TxReceipt Gateway::transfer_ownership(const Signer& owner, const Did& did, const Address& new_owner) {
    return invoke(owner, idm::kContractName, idm::kTransferOwnership, {did.str(), new_owner.str()});
}

DidDocument Gateway::resolve(const Did& did) const { return idm::resolve_did(ledger_->snapshot(), *store_, did); }

idm::Challenge Gateway::begin_login(const Did& did) { return logins_.begin_login(ledger_->snapshot(), did); }

idm::Session Gateway::complete_login(const Did& did, const Digest& nonce, ByteView signature) {
    return logins_.complete_login(ledger_->snapshot(), *store_, did, nonce, signature);
}

idm::Session Gateway::login(const Signer& device, const Did& did) {
    const idm::Challenge c = begin_login(did);
    const Bytes sig = device.sign(as_bytes(idm::login_message(did, c.nonce)));
    return complete_login(did, c.nonce, sig);
}

// ---------------------------------------------------------------------------

PreparedTx Gateway::prepare_upload(const Signer& device, const Digest& session_token, std::string_view asset_name,
                                   ByteView payload) {
    const idm::Session session = logins_.authenticate(session_token);
    if (payload.empty()) throw Error(ErrorCode::EmptyPayload, "asset payload is empty");
    const ContentHash data_id = store_->put(payload);
    return prepare(make_proposal(device, asset::kContractName, asset::kUploadAsset,
                                 {session.did.str(), std::string(asset_name), data_id.hex()}));
}

asset::AssetRecord Gateway::upload_asset(const Signer& device, const Digest& session_token,
                                         std::string_view asset_name, ByteView payload) {
    PreparedTx prepared = prepare_upload(device, session_token, asset_name, payload);
    const Digest id = prepared.tx.tx_id;
    submit(std::move(prepared));
    for (TxReceipt& r : drain(true)) {
        if (r.tx_id != id) continue;
        if (r.flag != ledger::TxFlag::Valid) {
            throw Error(ErrorCode::TxNotCommitted, "uploadAsset was flagged " + std::string(ledger::to_string(r.flag)),
                        std::string(ledger::to_string(r.flag)));
        }
        return asset::AssetRecord::from_json(to_string(r.response));
    }
    throw Error(ErrorCode::TxNotCommitted, "uploadAsset was not ordered");
}

std::vector<asset::AssetRecord> Gateway::query_all_assets() const {
    return asset::query_all_assets(ledger_->snapshot());
}

std::vector<asset::AssetRecord> Gateway::query_owned_assets(const Digest& session_token) const {
    const idm::Session session = logins_.authenticate(session_token);
    return asset::query_owned_assets(ledger_->snapshot(), session.did);
}

}  // namespace iotid::gateway
