// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <regex>

#include "iotid/did.hpp"
#include "iotid/error.hpp"
#include "test_support.hpp"

namespace iotid {
namespace {

using testing::oracle_hex;
using testing::oracle_sha256;
using testing::seed_from;

TEST(Did, ParsesExampleDid) {
    const Did d = parse_did("did:example:1234AbxfgHufgh");
    EXPECT_EQ(d.method, "example");
    EXPECT_EQ(d.method_id, "1234AbxfgHufgh");
    EXPECT_EQ(format_did(d), "did:example:1234AbxfgHufgh");
}

TEST(Did, ParsesSovDid) {
    const Did d = parse_did("did:sov:abc123");
    EXPECT_EQ(d.method, "sov");
    EXPECT_EQ(d.method_id, "abc123");
}

TEST(Did, FormatsByConcatenation) { EXPECT_EQ(format_did(Did{"iotid", "A1"}), "did:iotid:A1"); }

TEST(Did, RejectsMalformedInput) {
    for (const char* bad : {"did::", "did:example:", "did::abc", "example:abc", "DID:example:abc", "did:Example:abc",
                            "did:ex:ab c", "did:ex:ab:c", "did:ex-1:abc", "", "did:example:abc\n"}) {
        try {
            parse_did(bad);
            ADD_FAILURE() << "accepted '" << bad << "'";
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::MalformedDid) << bad;
        }
    }
    EXPECT_THROW(parse_did("did:" + std::string(33, 'a') + ":x"), Error);
    EXPECT_THROW(parse_did("did:a:" + std::string(129, 'x')), Error);
    EXPECT_NO_THROW(parse_did("did:" + std::string(32, 'a') + ":" + std::string(128, 'x')));
}

TEST(Did, RoundTripOverGeneratedCorpus) {
    Rng rng(2024);
    const std::string lower = "abcdefghijklmnopqrstuvwxyz0123456789";
    const std::string alnum = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";
    for (int i = 0; i < 1000; ++i) {
        Did d;
        const auto mlen = rng.uniform_int(1, 32);
        const auto ilen = rng.uniform_int(1, 128);
        for (int k = 0; k < mlen; ++k) d.method += lower[static_cast<std::size_t>(rng.uniform_int(0, 35))];
        for (int k = 0; k < ilen; ++k) d.method_id += alnum[static_cast<std::size_t>(rng.uniform_int(0, 61))];
        const std::string text = format_did(d);
        ASSERT_EQ(parse_did(text), d) << text;
        ASSERT_EQ(format_did(parse_did(text)), text);
    }
}

TEST(KeyPair, DeterministicFromSeed) {
    const KeySeed s = seed_from(1, 1);
    EXPECT_EQ(generate_keypair(s).public_key(), generate_keypair(s).public_key());
    EXPECT_NE(generate_keypair(s).public_key(), generate_keypair(seed_from(1, 2)).public_key());
}

TEST(KeyPair, RejectsWrongSeedLength) {
    const Bytes short_seed(31, 1);
    const Bytes long_seed(33, 1);
    EXPECT_THROW(generate_keypair(short_seed), Error);
    EXPECT_THROW(generate_keypair(long_seed), Error);
}

TEST(KeyPair, SignVerifyRoundTrip) {
    Rng rng(5);
    const KeyPair kp = generate_keypair(seed_from(2, 0));
    const KeyPair other = generate_keypair(seed_from(2, 1));
    Ed25519Verifier verifier;
    for (int i = 0; i < 50; ++i) {
        Bytes msg(static_cast<std::size_t>(rng.uniform_int(0, 200)));
        rng.fill(msg);
        const Bytes sig = kp.sign(msg);
        EXPECT_TRUE(verify_signature(kp.public_key(), msg, sig));
        EXPECT_TRUE(verifier.verify(kp.public_key(), msg, sig));
        EXPECT_FALSE(verify_signature(other.public_key(), msg, sig));
        Bytes flipped = sig;
        flipped[static_cast<std::size_t>(rng.uniform_int(0, 63))] ^= 0x01;
        EXPECT_FALSE(verify_signature(kp.public_key(), msg, flipped));
    }
    EXPECT_FALSE(verify_signature(kp.public_key(), as_bytes("m"), Bytes(10, 0)));
}

TEST(Address, MatchesHashOracle) {
    const std::regex format("0x[0-9a-f]{40}");
    for (std::uint64_t i = 0; i < 100; ++i) {
        const PublicKey pk = generate_keypair(seed_from(3, i)).public_key();
        const Address a = derive_address(pk);
        const Digest h = oracle_sha256(ByteView(pk.data(), pk.size()));
        EXPECT_EQ(a.str(), "0x" + oracle_hex(h).substr(0, 40));
        EXPECT_TRUE(std::regex_match(a.str(), format));
        EXPECT_EQ(derive_address(pk), a);
        EXPECT_EQ(Address::parse(a.str()), a);
        EXPECT_EQ(method_id_for_key(pk), oracle_hex(h).substr(0, 32));
    }
}

TEST(Address, PureOverRepeatedCalls) {
    Rng rng(17);
    for (int i = 0; i < 1000; ++i) {
        PublicKey pk{};
        rng.fill(pk);
        ASSERT_EQ(derive_address(pk), derive_address(pk));
    }
}

TEST(Address, RejectsBadText) {
    for (const char* bad : {"", "0x", "95f0b33ba07b6939c41e2533b3a5bc5314544c1a", "0x95F0B33BA07B6939C41E2533B3A5BC5314544C1A",
                            "0x95f0b33ba07b6939c41e2533b3a5bc5314544c1", "0xzz f0b33ba07b6939c41e2533b3a5bc5314544c1a"}) {
        EXPECT_THROW(Address::parse(bad), Error) << bad;
    }
}

TEST(PossessionProof, VerifiesOnlyForMatchingKeyDidAndOwner) {
    const KeyPair kp = generate_keypair(seed_from(4, 0));
    const KeyPair other = generate_keypair(seed_from(4, 1));
    const Did did = make_did(method_id_for_key(kp.public_key()));
    const Address owner = derive_address(other.public_key());
    const Address owner2 = derive_address(kp.public_key());
    const PossessionProof proof = make_possession_proof(kp, did, owner);

    EXPECT_TRUE(verify_possession_proof(kp.public_key(), did, owner, proof));
    EXPECT_FALSE(verify_possession_proof(other.public_key(), did, owner, proof));
    EXPECT_FALSE(verify_possession_proof(kp.public_key(), did, owner2, proof));
    EXPECT_FALSE(verify_possession_proof(kp.public_key(), make_did("someoneelse"), owner, proof));
    EXPECT_FALSE(verify_possession_proof(kp.public_key(), did, owner, PossessionProof{}));
}

TEST(PossessionProof, MessageFormat) {
    const KeyPair kp = generate_keypair(seed_from(4, 2));
    const Did did = make_did("A1");
    const Address owner = derive_address(kp.public_key());
    EXPECT_EQ(possession_message(did, owner, kp.public_key()),
              "PROOF|did:iotid:A1|" + owner.str() + "|" + to_hex(kp.public_key()));
    const PossessionProof proof = make_possession_proof(kp, did, owner);
    EXPECT_TRUE(verify_signature(kp.public_key(), as_bytes(possession_message(did, owner, kp.public_key())),
                                 proof.signature));
}

TEST(DidDocument, CanonicalSerializationIsStableAndParses) {
    const KeyPair kp = generate_keypair(seed_from(6, 0));
    DidDocument doc{make_did(method_id_for_key(kp.public_key())), kp.public_key(),
                    derive_address(generate_keypair(seed_from(6, 1)).public_key()), 1700000000,
                    {{"telemetry", "https://example.org/t"}, {"hub", "ipfs://x"}}};
    const std::string a = canonical_serialize(doc);
    EXPECT_EQ(a, canonical_serialize(doc));
    EXPECT_EQ(a.find(' '), std::string::npos);
    EXPECT_EQ(a.find('\n'), std::string::npos);
    EXPECT_EQ(parse_did_document(a), doc);
    EXPECT_LT(a.find("\"created\""), a.find("\"id\""));
    EXPECT_LT(a.find("\"id\""), a.find("\"owner\""));
    EXPECT_LT(a.find("\"owner\""), a.find("\"publicKey\""));
    EXPECT_LT(a.find("\"publicKey\""), a.find("\"serviceEndpoints\""));
}

TEST(DidDocument, GoldenFile) {
    const KeyPair kp = generate_keypair(std::array<std::uint8_t, 32>{});  // all-zero seed
    DidDocument doc{make_did("A1"), kp.public_key(), derive_address(kp.public_key()), 1234, {{"hub", "ipfs://x"}}};
    const std::string golden = testing::slurp(std::filesystem::path(IOTID_GOLDEN_DIR) / "did_document.json");
    EXPECT_EQ(canonical_serialize(doc) + "\n", golden);
}

TEST(DidDocument, RejectsMalformedDocuments) {
    EXPECT_THROW(parse_did_document("{}"), Error);
    EXPECT_THROW(parse_did_document("not json"), Error);
    EXPECT_THROW(parse_did_document(R"({"created":1,"id":"did:iotid:A","owner":"0x00","publicKey":"00","serviceEndpoints":[]})"),
                 Error);
}

TEST(EnvironmentalFingerprint, OrderIndependentAndMatchesOracle) {
    const PublicKey pk = generate_keypair(seed_from(8, 0)).public_key();
    std::vector<EnvReading> r{{"temperature", 21.5}, {"humidity", 40.0}, {"precipitation", 0.25}};
    std::vector<EnvReading> shuffled{r[2], r[0], r[1]};
    EXPECT_EQ(environmental_fingerprint(r, pk), environmental_fingerprint(shuffled, pk));

    const std::string canonical = to_hex(pk) + "|humidity=40;precipitation=0.25;temperature=21.5;";
    EXPECT_EQ(environmental_canonical_string(r, pk), canonical);
    EXPECT_EQ(environmental_fingerprint(r, pk), oracle_sha256(canonical));

    auto perturbed = r;
    perturbed[0].value = 21.51;
    EXPECT_NE(environmental_fingerprint(perturbed, pk), environmental_fingerprint(r, pk));

    try {
        environmental_fingerprint({}, pk);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyInput);
    }
}

}  // namespace
}  // namespace iotid
