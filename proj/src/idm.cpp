// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#include "iotid/idm.hpp"

#include <nlohmann/json.hpp>

#include "iotid/error.hpp"

namespace iotid::idm {
namespace {

using nlohmann::json;
using ledger::TxContext;

template <typename F>
auto parse_json(std::string_view text, std::string_view what, F&& fn) {
    try {
        return fn(json::parse(text));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedInput, std::string(what) + ": " + e.what());
    }
}

Did did_arg(std::string_view text) { return parse_did(text); }

Address address_arg(std::string_view text) {
    try {
        return Address::parse(text);
    } catch (const Error& e) {
        throw Error(ErrorCode::InvalidArgument, e.what());
    }
}

DidRecord load_did_record(TxContext& ctx, const Did& did) {
    auto raw = ctx.get_state(ledger::did_key(did.str()));
    if (!raw) throw Error(ErrorCode::UnknownDid, did.str() + " has no identity record");
    return DidRecord::from_json(to_string(*raw));
}

void require_owner(const TxContext& ctx, const DidRecord& rec) {
    if (ctx.invoker() != rec.owner) {
        throw Error(ErrorCode::NotOwner, ctx.invoker().str() + " does not own " + rec.did.str());
    }
}

Bytes create_identity(TxContext& ctx) {
    ledger::expect_args(ctx, 4);
    const auto args = ctx.args();
    if (!ctx.config().is_registrar(ctx.invoker())) {
        throw Error(ErrorCode::Unauthorized, ctx.invoker().str() + " is not an authorized registrar");
    }
    const Did did = make_did(args[1]);
    const std::string key = ledger::did_key(did.str());
    if (ctx.get_state(key)) throw Error(ErrorCode::IdentityExists, did.str() + " already exists");

    PublicKey pk;
    PossessionProof proof;
    try {
        pk = fixed_from_hex<32>(args[0]);
        proof.signature = from_hex(args[3]);
    } catch (const Error& e) {
        throw Error(ErrorCode::InvalidArgument, e.what());
    }
    const Address owner = address_arg(args[2]);
    if (!verify_possession_proof(pk, did, owner, proof)) {
        throw Error(ErrorCode::InvalidProof, "possession proof does not verify for " + did.str());
    }

    const DidDocument doc{did, pk, owner, ctx.timestamp(), {}};
    const ContentHash doc_hash = ctx.store().put(as_bytes(canonical_serialize(doc)));
    const DidRecord rec{did, doc_hash, owner, ctx.timestamp()};
    const std::string out = rec.to_json();
    ctx.put_state(key, to_bytes(out));
    return to_bytes(out);
}

Bytes register_device(TxContext& ctx) {
    ledger::expect_args(ctx, 2);
    const auto args = ctx.args();
    const Did did = did_arg(args[0]);
    if (args[1].empty()) throw Error(ErrorCode::InvalidArgument, "manufacturer id is empty");
    const DidRecord rec = load_did_record(ctx, did);
    require_owner(ctx, rec);
    const std::string key = ledger::device_key(did.str());
    if (ctx.get_state(key)) throw Error(ErrorCode::DeviceAlreadyRegistered, did.str() + " is already registered");

    const DeviceRecord dev{did, args[1], ctx.timestamp()};
    const std::string out = dev.to_json();
    ctx.put_state(key, to_bytes(out));
    return to_bytes(out);
}

Bytes transfer_ownership(TxContext& ctx) {
    ledger::expect_args(ctx, 2);
    const auto args = ctx.args();
    const Did did = did_arg(args[0]);
    const Address new_owner = address_arg(args[1]);
    DidRecord rec = load_did_record(ctx, did);
    require_owner(ctx, rec);

    DidDocument doc = parse_did_document(to_string(ctx.store().get(rec.doc_hash)));
    doc.owner = new_owner;
    rec.doc_hash = ctx.store().put(as_bytes(canonical_serialize(doc)));
    rec.owner = new_owner;
    const std::string out = rec.to_json();
    ctx.put_state(ledger::did_key(did.str()), to_bytes(out));
    return to_bytes(out);
}

}  // namespace

// ---------------------------------------------------------------------------

std::string DidRecord::to_json() const {
    return json{{"createdAt", created_at}, {"did", did.str()}, {"docHash", doc_hash.hex()}, {"owner", owner.str()}}
        .dump();
}

DidRecord DidRecord::from_json(std::string_view text) {
    return parse_json(text, "DID record", [](const json& j) {
        return DidRecord{parse_did(j.at("did").get<std::string>()),
                         ContentHash::parse(j.at("docHash").get<std::string>()),
                         Address::parse(j.at("owner").get<std::string>()), j.at("createdAt").get<std::int64_t>()};
    });
}

std::string DeviceRecord::to_json() const {
    return json{{"did", did.str()}, {"manufacturerId", manufacturer_id}, {"registeredAt", registered_at}}.dump();
}

DeviceRecord DeviceRecord::from_json(std::string_view text) {
    return parse_json(text, "device record", [](const json& j) {
        return DeviceRecord{parse_did(j.at("did").get<std::string>()), j.at("manufacturerId").get<std::string>(),
                            j.at("registeredAt").get<std::int64_t>()};
    });
}

Bytes IdmContract::invoke(ledger::TxContext& ctx, std::string_view function) const {
    if (function == kCreateIdentity) return create_identity(ctx);
    if (function == kRegisterDevice) return register_device(ctx);
    if (function == kTransferOwnership) return transfer_ownership(ctx);
    throw Error(ErrorCode::UnknownFunction, "idm has no function '" + std::string(function) + "'");
}

std::vector<std::string> create_identity_args(const PublicKey& key, std::string_view id, const Address& owner,
                                              const PossessionProof& proof) {
    return {to_hex(key), std::string(id), owner.str(), to_hex(proof.signature)};
}

std::optional<DidRecord> find_did_record(const ledger::WorldState& state, const Did& did) {
    auto v = state.get(ledger::did_key(did.str()));
    if (!v) return std::nullopt;
    return DidRecord::from_json(to_string(v->value));
}

std::optional<DeviceRecord> find_device_record(const ledger::WorldState& state, const Did& did) {
    auto v = state.get(ledger::device_key(did.str()));
    if (!v) return std::nullopt;
    return DeviceRecord::from_json(to_string(v->value));
}

DidDocument resolve_did(const ledger::WorldState& state, const ContentStore& store, const Did& did) {
    const auto rec = find_did_record(state, did);
    if (!rec) throw Error(ErrorCode::UnknownDid, did.str() + " has no identity record");
    Bytes raw;
    try {
        raw = store.get(rec->doc_hash);
    } catch (const Error& e) {
        throw Error(ErrorCode::IntegrityFailure, std::string("document unavailable: ") + e.what());
    }
    DidDocument doc = parse_did_document(to_string(raw));
    if (doc.id != did || doc.owner != rec->owner) {
        throw Error(ErrorCode::IntegrityFailure, "document for " + did.str() + " disagrees with its record");
    }
    return doc;
}

// ---------------------------------------------------------------------------

std::string login_message(const Did& did, const Digest& nonce) { return "LOGIN|" + did.str() + "|" + to_hex(nonce); }

Digest session_token(const Did& did, const Digest& nonce, std::int64_t issued_at) {
    return sha256("SESSION|" + did.str() + "|" + to_hex(nonce) + "|" + std::to_string(issued_at));
}

LoginService::LoginService(const Clock& clock, RandomSource random, std::int64_t challenge_ttl,
                           std::int64_t session_ttl)
    : clock_(clock), random_(std::move(random)), challenge_ttl_(challenge_ttl), session_ttl_(session_ttl) {}

Challenge LoginService::begin_login(const ledger::WorldState& state, const Did& did) {
    if (!find_device_record(state, did)) throw Error(ErrorCode::NotRegistered, did.str() + " is not a registered device");
    std::lock_guard lock(mu_);
    Challenge c{did, {}, clock_.now(), challenge_ttl_};
    do {
        random_(c.nonce);
    } while (challenges_.contains(c.nonce));
    challenges_.emplace(c.nonce, c);
    return c;
}

Session LoginService::complete_login(const ledger::WorldState& state, const ContentStore& store, const Did& did,
                                     const Digest& nonce, ByteView signature) {
    Challenge c;
    {
        std::lock_guard lock(mu_);
        const auto it = challenges_.find(nonce);
        if (it == challenges_.end() || it->second.did != did) {
            throw Error(ErrorCode::NoSuchChallenge, "no outstanding challenge for " + did.str());
        }
        c = it->second;
        challenges_.erase(it);
    }
    const std::int64_t now = clock_.now();
    if (now >= c.expires_at()) throw Error(ErrorCode::ExpiredChallenge, "challenge for " + did.str() + " expired");
    if (!find_device_record(state, did)) throw Error(ErrorCode::NotRegistered, did.str() + " is not a registered device");

    const DidDocument doc = resolve_did(state, store, did);
    if (!verify_signature(doc.public_key, as_bytes(login_message(did, nonce)), signature)) {
        throw Error(ErrorCode::BadSignature, "login signature does not verify for " + did.str());
    }
    Session s{session_token(did, nonce, c.issued_at), did, now + session_ttl_};
    std::lock_guard lock(mu_);
    sessions_.insert_or_assign(s.token, s);
    return s;
}

Session LoginService::authenticate(const Digest& token) const {
    std::lock_guard lock(mu_);
    const auto it = sessions_.find(token);
    if (it == sessions_.end()) throw Error(ErrorCode::NotAuthenticated, "unknown session");
    if (clock_.now() >= it->second.expires_at) throw Error(ErrorCode::NotAuthenticated, "session expired");
    return it->second;
}

std::size_t LoginService::outstanding_challenges() const {
    std::lock_guard lock(mu_);
    return challenges_.size();
}

std::string LoginService::export_sessions() const {
    std::lock_guard lock(mu_);
    json arr = json::array();
    const std::int64_t now = clock_.now();
    for (const auto& [token, s] : sessions_) {
        if (now >= s.expires_at) continue;
        arr.push_back({{"did", s.did.str()}, {"expiresAt", s.expires_at}, {"token", to_hex(token)}});
    }
    return arr.dump();
}

void LoginService::import_sessions(std::string_view text) {
    const auto loaded = parse_json(text, "session table", [](const json& j) {
        std::vector<Session> out;
        for (const auto& e : j) {
            out.push_back(Session{fixed_from_hex<32>(e.at("token").get<std::string>()),
                                  parse_did(e.at("did").get<std::string>()), e.at("expiresAt").get<std::int64_t>()});
        }
        return out;
    });
    std::lock_guard lock(mu_);
    for (const auto& s : loaded) sessions_.insert_or_assign(s.token, s);
}

}  // namespace iotid::idm
