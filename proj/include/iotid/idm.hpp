// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "iotid/clock.hpp"
#include "iotid/content_store.hpp"
#include "iotid/did.hpp"
#include "iotid/ledger/contract.hpp"
#include "iotid/ledger/world_state.hpp"

namespace iotid::idm {

inline constexpr std::string_view kContractName = "idm";

inline constexpr std::string_view kCreateIdentity = "createIdentity";
inline constexpr std::string_view kRegisterDevice = "registerDevice";
inline constexpr std::string_view kTransferOwnership = "transferOwnership";

/// On-chain record under `did/<did>`. The document itself lives in the content store.
struct DidRecord {
    Did did;
    ContentHash doc_hash;
    Address owner;
    std::int64_t created_at = 0;

    std::string to_json() const;
    static DidRecord from_json(std::string_view text);

    bool operator==(const DidRecord&) const = default;
};

/// On-chain record under `device/<did>`.
struct DeviceRecord {
    Did did;
    std::string manufacturer_id;
    std::int64_t registered_at = 0;

    std::string to_json() const;
    static DeviceRecord from_json(std::string_view text);

    bool operator==(const DeviceRecord&) const = default;
};

/// Identity-management chaincode.
///
///   createIdentity(publicKeyHex, id, ownerAddress, proofHex)
///       invoker must be a genesis registrar (Unauthorized), then the DID
///       must be fresh (IdentityExists), then the possession proof must
///       verify (InvalidProof). Stores the DID document in the content store
///       and writes `did/<did>`.
///   registerDevice(did, manufacturerId)
///       UnknownDid, NotOwner, DeviceAlreadyRegistered; writes `device/<did>`.
///   transferOwnership(did, newOwnerAddress)
///       UnknownDid, NotOwner; re-stores the document with the new owner.
///
/// Responses are the JSON of the written record.
class IdmContract final : public ledger::Contract {
  public:
    std::string_view name() const override { return kContractName; }
    Bytes invoke(ledger::TxContext& ctx, std::string_view function) const override;
};

std::vector<std::string> create_identity_args(const PublicKey& key, std::string_view id, const Address& owner,
                                              const PossessionProof& proof);

std::optional<DidRecord> find_did_record(const ledger::WorldState& state, const Did& did);
std::optional<DeviceRecord> find_device_record(const ledger::WorldState& state, const Did& did);

/// Fetches and integrity-checks the DID document. Throws Error(UnknownDid)
/// or Error(IntegrityFailure) (including when the document's id or owner
/// disagree with the on-chain record).
DidDocument resolve_did(const ledger::WorldState& state, const ContentStore& store, const Did& did);

// ---------------------------------------------------------------------------
// Challenge-response login (off-chain gateway state)

inline constexpr std::int64_t kDefaultChallengeTtl = 300;
inline constexpr std::int64_t kDefaultSessionTtl = 3600;

struct Challenge {
    Did did;
    Digest nonce{};
    std::int64_t issued_at = 0;
    std::int64_t ttl = kDefaultChallengeTtl;

    std::int64_t expires_at() const noexcept { return issued_at + ttl; }
};

struct Session {
    Digest token{};
    Did did;
    std::int64_t expires_at = 0;

    bool operator==(const Session&) const = default;
};

/// `LOGIN|<did>|<nonce hex>`, the message a device signs to answer a challenge.
std::string login_message(const Did& did, const Digest& nonce);

/// SHA-256 of `SESSION|<did>|<nonce hex>|<issuedAt>`.
Digest session_token(const Did& did, const Digest& nonce, std::int64_t issued_at);

using RandomSource = std::function<void(std::span<std::uint8_t>)>;

/// Issues single-use challenges and tracks sessions. All methods are
/// serialized behind one mutex.
class LoginService {
  public:
    LoginService(const Clock& clock, RandomSource random, std::int64_t challenge_ttl = kDefaultChallengeTtl,
                 std::int64_t session_ttl = kDefaultSessionTtl);

    /// Throws Error(NotRegistered) when no device record exists for `did`.
    Challenge begin_login(const ledger::WorldState& state, const Did& did);

    /// Consumes the challenge on every attempt. Throws Error(NoSuchChallenge),
    /// Error(ExpiredChallenge), Error(NotRegistered) or Error(BadSignature).
    Session complete_login(const ledger::WorldState& state, const ContentStore& store, const Did& did,
                           const Digest& nonce, ByteView signature);

    /// Throws Error(NotAuthenticated) for unknown or expired tokens.
    Session authenticate(const Digest& token) const;

    std::size_t outstanding_challenges() const;

    /// Live sessions as JSON, for persistence between CLI invocations.
    std::string export_sessions() const;
    void import_sessions(std::string_view json);

  private:
    const Clock& clock_;
    RandomSource random_;
    std::int64_t challenge_ttl_;
    std::int64_t session_ttl_;

    mutable std::mutex mu_;
    std::map<Digest, Challenge> challenges_;
    std::map<Digest, Session> sessions_;
};

}  // namespace iotid::idm
