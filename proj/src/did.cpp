// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#include "iotid/did.hpp"

#include <sodium.h>

#include <algorithm>
#include <charconv>
#include <nlohmann/json.hpp>

#include "iotid/error.hpp"

namespace iotid {
namespace {

using nlohmann::json;

constexpr std::size_t kMaxMethod = 32;
constexpr std::size_t kMaxMethodId = 128;

bool is_lower_alnum(char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); }
bool is_alnum(char c) { return is_lower_alnum(c) || (c >= 'A' && c <= 'Z'); }

void check_method(std::string_view method) {
    if (method.empty() || method.size() > kMaxMethod || !std::all_of(method.begin(), method.end(), is_lower_alnum)) {
        throw Error(ErrorCode::MalformedDid, "method must be 1-32 chars of [a-z0-9]");
    }
}

void check_method_id(std::string_view id) {
    if (id.empty() || id.size() > kMaxMethodId || !std::all_of(id.begin(), id.end(), is_alnum)) {
        throw Error(ErrorCode::MalformedDid, "method-specific id must be 1-128 chars of [A-Za-z0-9]");
    }
}

}  // namespace

std::string Did::str() const { return "did:" + method + ":" + method_id; }

Did parse_did(std::string_view text) {
    constexpr std::string_view kScheme = "did:";
    if (!text.starts_with(kScheme)) throw Error(ErrorCode::MalformedDid, "missing did: scheme");
    const std::string_view rest = text.substr(kScheme.size());
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) throw Error(ErrorCode::MalformedDid, "missing method-specific id");
    const std::string_view method = rest.substr(0, colon);
    const std::string_view id = rest.substr(colon + 1);
    check_method(method);
    check_method_id(id);
    return Did{std::string(method), std::string(id)};
}

std::string format_did(const Did& did) { return did.str(); }

Did make_did(std::string_view method_id) {
    check_method_id(method_id);
    return Did{std::string(kDidMethod), std::string(method_id)};
}

// ---------------------------------------------------------------------------

Bytes KeyPair::sign(ByteView message) const {
    Bytes sig(crypto_sign_BYTES);
    crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), secret_.data());
    return sig;
}

bool Ed25519Verifier::verify(const PublicKey& key, ByteView message, ByteView signature) const {
    return verify_signature(key, message, signature);
}

KeyPair generate_keypair(ByteView seed) {
    if (seed.size() != crypto_sign_SEEDBYTES) {
        throw Error(ErrorCode::InvalidArgument, "key seed must be 32 bytes, got " + std::to_string(seed.size()));
    }
    if (sodium_init() < 0) throw Error(ErrorCode::InvalidArgument, "libsodium unavailable");
    KeyPair kp;
    crypto_sign_seed_keypair(kp.public_key_.data(), kp.secret_.data(), seed.data());
    return kp;
}

bool verify_signature(const PublicKey& key, ByteView message, ByteView signature) {
    if (signature.size() != crypto_sign_BYTES) return false;
    if (sodium_init() < 0) return false;
    return crypto_sign_verify_detached(signature.data(), message.data(), message.size(), key.data()) == 0;
}

KeySeed random_seed() {
    KeySeed seed{};
    os_random(seed);
    return seed;
}

// ---------------------------------------------------------------------------

std::string Address::str() const { return "0x" + to_hex(bytes); }

Address Address::parse(std::string_view text) {
    const auto lower_hex = [](char c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'); };
    if (text.size() != 42 || !text.starts_with("0x") || !std::all_of(text.begin() + 2, text.end(), lower_hex)) {
        throw Error(ErrorCode::MalformedInput, "address must be 0x followed by 40 hex chars");
    }
    return Address{fixed_from_hex<20>(text.substr(2))};
}

Address derive_address(const PublicKey& key) {
    const Digest h = sha256(ByteView(key));
    Address a;
    std::copy_n(h.begin(), a.bytes.size(), a.bytes.begin());
    return a;
}

std::string method_id_for_key(const PublicKey& key) {
    const Digest h = sha256(ByteView(key));
    return to_hex(ByteView(h).first(16));
}

// ---------------------------------------------------------------------------

std::string canonical_serialize(const DidDocument& doc) {
    json endpoints = json::array();
    for (const auto& ep : doc.service_endpoints) endpoints.push_back({{"name", ep.name}, {"uri", ep.uri}});
    json j = {
        {"created", doc.created},
        {"id", doc.id.str()},
        {"owner", doc.owner.str()},
        {"publicKey", to_hex(doc.public_key)},
        {"serviceEndpoints", std::move(endpoints)},
    };
    try {
        return j.dump();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedInput, std::string("document is not valid UTF-8: ") + e.what());
    }
}

DidDocument parse_did_document(std::string_view text) {
    try {
        const json j = json::parse(text);
        DidDocument doc;
        doc.id = parse_did(j.at("id").get<std::string>());
        doc.public_key = fixed_from_hex<32>(j.at("publicKey").get<std::string>());
        doc.owner = Address::parse(j.at("owner").get<std::string>());
        doc.created = j.at("created").get<std::int64_t>();
        for (const auto& ep : j.at("serviceEndpoints")) {
            doc.service_endpoints.push_back({ep.at("name").get<std::string>(), ep.at("uri").get<std::string>()});
        }
        return doc;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedInput, std::string("bad DID document: ") + e.what());
    } catch (const Error& e) {
        throw Error(ErrorCode::MalformedInput, std::string("bad DID document: ") + e.what());
    }
}

// ---------------------------------------------------------------------------

std::string possession_message(const Did& did, const Address& owner, const PublicKey& key) {
    return "PROOF|" + did.str() + "|" + owner.str() + "|" + to_hex(key);
}

PossessionProof make_possession_proof(const Signer& signer, const Did& did, const Address& owner) {
    return PossessionProof{signer.sign(as_bytes(possession_message(did, owner, signer.public_key())))};
}

bool verify_possession_proof(const PublicKey& key, const Did& did, const Address& owner,
                             const PossessionProof& proof) {
    return verify_signature(key, as_bytes(possession_message(did, owner, key)), proof.signature);
}

// ---------------------------------------------------------------------------

std::string environmental_canonical_string(std::span<const EnvReading> readings, const PublicKey& key) {
    if (readings.empty()) throw Error(ErrorCode::EmptyInput, "environmental fingerprint needs at least one reading");
    std::vector<EnvReading> sorted(readings.begin(), readings.end());
    std::sort(sorted.begin(), sorted.end(), [](const EnvReading& a, const EnvReading& b) {
        return a.label != b.label ? a.label < b.label : a.value < b.value;
    });
    std::string out = to_hex(key) + "|";
    for (const auto& r : sorted) {
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof buf, r.value);
        out += r.label;
        out += '=';
        out.append(buf, res.ptr);
        out += ';';
    }
    return out;
}

Digest environmental_fingerprint(std::span<const EnvReading> readings, const PublicKey& key) {
    return sha256(environmental_canonical_string(readings, key));
}

}  // namespace iotid
