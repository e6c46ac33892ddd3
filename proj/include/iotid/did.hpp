// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "iotid/bytes.hpp"

namespace iotid {

/// Method name used by this registry: did:iotid:<id>.
inline constexpr std::string_view kDidMethod = "iotid";

/// A decentralized identifier `did:<method>:<methodId>`.
///
/// method is 1-32 chars of [a-z0-9]; methodId is 1-128 chars of [A-Za-z0-9].
/// DID URLs (paths, queries, fragments) are not accepted.
struct Did {
    std::string method;
    std::string method_id;

    std::string str() const;

    auto operator<=>(const Did&) const = default;
};

/// Throws Error(MalformedDid).
Did parse_did(std::string_view text);
std::string format_did(const Did& did);

/// Builds a DID with the registry method, validating the id.
Did make_did(std::string_view method_id);

// ---------------------------------------------------------------------------
// Keys and signatures

using PublicKey = std::array<std::uint8_t, 32>;
using KeySeed = std::array<std::uint8_t, 32>;

/// Signing side of the signature scheme.
class Signer {
  public:
    virtual ~Signer() = default;
    virtual PublicKey public_key() const = 0;
    virtual Bytes sign(ByteView message) const = 0;
};

/// Verification side of the signature scheme.
class Verifier {
  public:
    virtual ~Verifier() = default;
    virtual bool verify(const PublicKey& key, ByteView message, ByteView signature) const = 0;
};

/// Ed25519 key pair (deterministic signatures, 32-byte public keys).
/// The secret half has no accessor and is never serialized; callers that need
/// to persist a key persist its seed.
class KeyPair final : public Signer {
  public:
    PublicKey public_key() const override { return public_key_; }
    Bytes sign(ByteView message) const override;

    friend KeyPair generate_keypair(ByteView seed);

  private:
    KeyPair() = default;

    PublicKey public_key_{};
    std::array<std::uint8_t, 64> secret_{};
};

class Ed25519Verifier final : public Verifier {
  public:
    bool verify(const PublicKey& key, ByteView message, ByteView signature) const override;
};

/// Deterministic: the same 32-byte seed always yields the same pair.
/// Throws Error(InvalidArgument) if the seed is not 32 bytes.
KeyPair generate_keypair(ByteView seed);

/// Ed25519 verification; false on any malformed input.
bool verify_signature(const PublicKey& key, ByteView message, ByteView signature);

/// 32 fresh bytes from the OS CSPRNG.
KeySeed random_seed();

// ---------------------------------------------------------------------------
// Addresses

/// 20-byte account identifier: the first 20 bytes of SHA-256(publicKey).
struct Address {
    std::array<std::uint8_t, 20> bytes{};

    /// `0x` followed by 40 lowercase hex chars.
    std::string str() const;

    /// Accepts the canonical form (case-insensitive hex); throws Error(MalformedInput).
    static Address parse(std::string_view text);

    auto operator<=>(const Address&) const = default;
};

Address derive_address(const PublicKey& key);

/// Default method-specific id for a key: hex of the first 16 bytes of SHA-256(key).
std::string method_id_for_key(const PublicKey& key);

// ---------------------------------------------------------------------------
// DID documents

struct ServiceEndpoint {
    std::string name;
    std::string uri;

    bool operator==(const ServiceEndpoint&) const = default;
};

struct DidDocument {
    Did id;
    PublicKey public_key{};
    Address owner;
    std::int64_t created = 0;
    std::vector<ServiceEndpoint> service_endpoints;

    bool operator==(const DidDocument&) const = default;
};

/// Byte-stable UTF-8 JSON: keys sorted, no insignificant whitespace.
std::string canonical_serialize(const DidDocument& doc);

/// Inverse of canonical_serialize. Throws Error(MalformedInput).
DidDocument parse_did_document(std::string_view text);

// ---------------------------------------------------------------------------
// Possession proofs

struct PossessionProof {
    Bytes signature;
};

/// `PROOF|<did>|<owner address>|<publicKey hex>`
std::string possession_message(const Did& did, const Address& owner, const PublicKey& key);

PossessionProof make_possession_proof(const Signer& signer, const Did& did, const Address& owner);

bool verify_possession_proof(const PublicKey& key, const Did& did, const Address& owner,
                             const PossessionProof& proof);

// ---------------------------------------------------------------------------
// Environmental fingerprint

struct EnvReading {
    std::string label;
    double value = 0.0;
};

/// SHA-256 over `<publicKey hex>|<label>=<value>;...` with readings sorted by
/// label (then value). Values are written in shortest round-trip form.
/// Throws Error(EmptyInput) for an empty reading list.
Digest environmental_fingerprint(std::span<const EnvReading> readings, const PublicKey& key);

/// The exact string environmental_fingerprint hashes.
std::string environmental_canonical_string(std::span<const EnvReading> readings, const PublicKey& key);

}  // namespace iotid

template <>
struct std::hash<iotid::Did> {
    std::size_t operator()(const iotid::Did& d) const noexcept { return std::hash<std::string>{}(d.str()); }
};
