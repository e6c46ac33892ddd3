// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "iotid/asset.hpp"
#include "iotid/clock.hpp"
#include "iotid/content_store.hpp"
#include "iotid/did.hpp"
#include "iotid/idm.hpp"
#include "iotid/ledger/ledger.hpp"
#include "iotid/ledger/pipeline.hpp"

namespace iotid::gateway {

struct TxReceipt {
    Digest tx_id{};
    std::string function;
    std::uint64_t block = 0;
    ledger::TxFlag flag = ledger::TxFlag::Unset;
    Bytes response;
};

/// An executed and endorsed transaction, ready for ordering.
struct PreparedTx {
    ledger::Transaction tx;
    Bytes response;
};

/// Keys and genesis config of a generated network.
struct GeneratedNetwork {
    ledger::GenesisConfig genesis;
    std::vector<std::pair<std::string, KeySeed>> peer_seeds;
    KeySeed registrar_seed{};
};

/// `peers` peers named peer0..peerN-1 and one registrar, all derived from
/// `seed`. threshold 0 selects a majority.
GeneratedNetwork generate_network(std::uint64_t seed, std::size_t peers = 3, std::size_t threshold = 0);

/// Builds the EndorsingPeer set for `genesis`, checking every seed against
/// the roster key. Throws Error(InvalidConfig).
std::vector<ledger::EndorsingPeer> make_peers(const ledger::GenesisConfig& genesis,
                                              const std::vector<std::pair<std::string, KeySeed>>& seeds);

/// In-process gateway: client-side proposal construction, endorsement by
/// every roster peer, solo ordering, validation and commit, plus the
/// off-chain login service. Embeds the ledger; no daemon.
class Gateway {
  public:
    Gateway(std::unique_ptr<ledger::Ledger> ledger, std::vector<ledger::EndorsingPeer> peers,
            std::unique_ptr<ContentStore> store, const Clock& clock, idm::RandomSource random);

    ledger::Ledger& ledger() noexcept { return *ledger_; }
    const ledger::Ledger& ledger() const noexcept { return *ledger_; }
    ContentStore& store() noexcept { return *store_; }
    idm::LoginService& logins() noexcept { return logins_; }
    const Clock& clock() const noexcept { return clock_; }
    const ledger::ContractRegistry& contracts() const noexcept { return contracts_; }
    std::span<const ledger::EndorsingPeer> peers() const noexcept { return peers_; }

    // -- pipeline ------------------------------------------------------------

    ledger::TxProposal make_proposal(const Signer& invoker, std::string_view contract, std::string_view function,
                                     std::vector<std::string> args);

    /// Executes against the current snapshot and collects endorsements from
    /// the first `endorsers` peers (all when 0). Contract errors propagate.
    PreparedTx prepare(const ledger::TxProposal& proposal, std::size_t endorsers = 0);

    /// Queues a prepared transaction for ordering and starts its latency clock.
    void submit(PreparedTx prepared);

    /// Cuts, validates and commits every block the orderer is ready to
    /// produce; with `force`, flushes everything pending.
    std::vector<TxReceipt> drain(bool force);

    std::size_t pending() const;

    /// prepare + submit + drain(force). Throws Error(TxNotCommitted) with the
    /// flag as subject when the transaction was not VALID.
    TxReceipt invoke(const Signer& invoker, std::string_view contract, std::string_view function,
                     std::vector<std::string> args);

    // -- identity ------------------------------------------------------------

    /// Registrar submits createIdentity with a proof signed by the device key.
    /// An empty `id` uses the key-derived method id.
    TxReceipt create_identity(const Signer& registrar, const Signer& device, std::string_view id, const Address& owner);
    TxReceipt register_device(const Signer& owner, const Did& did, std::string_view manufacturer_id);
    TxReceipt transfer_ownership(const Signer& owner, const Did& did, const Address& new_owner);
    DidDocument resolve(const Did& did) const;

    idm::Challenge begin_login(const Did& did);
    idm::Session complete_login(const Did& did, const Digest& nonce, ByteView signature);
    /// Both login steps, answering the challenge with `device`.
    idm::Session login(const Signer& device, const Did& did);

    // -- assets --------------------------------------------------------------

    /// Validates the session, stores the payload and submits uploadAsset
    /// signed by `device`. Throws NotAuthenticated, EmptyPayload or DuplicateAsset.
    asset::AssetRecord upload_asset(const Signer& device, const Digest& session_token, std::string_view asset_name,
                                    ByteView payload);

    /// Builds (but does not submit) an upload transaction; used for batched submission.
    PreparedTx prepare_upload(const Signer& device, const Digest& session_token, std::string_view asset_name,
                              ByteView payload);

    std::vector<asset::AssetRecord> query_all_assets() const;
    std::vector<asset::AssetRecord> query_owned_assets(const Digest& session_token) const;

  private:
    std::unique_ptr<ledger::Ledger> ledger_;
    std::vector<ledger::EndorsingPeer> peers_;
    std::unique_ptr<ContentStore> store_;
    const Clock& clock_;
    idm::RandomSource random_;
    ledger::ContractRegistry contracts_;
    idm::LoginService logins_;

    mutable std::mutex pipeline_mu_;
    ledger::SoloOrderer orderer_;
    std::map<Digest, std::pair<std::string, Bytes>> responses_;
};

}  // namespace iotid::gateway
