// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#include "iotid/error.hpp"

#include <array>
#include <utility>

namespace iotid {
namespace {

constexpr std::array<std::pair<ErrorCode, std::string_view>, 32> kNames{{
    {ErrorCode::InvalidArgument, "InvalidArgument"},
    {ErrorCode::MalformedInput, "MalformedInput"},
    {ErrorCode::MalformedDid, "MalformedDid"},
    {ErrorCode::EmptyInput, "EmptyInput"},
    {ErrorCode::NotFound, "NotFound"},
    {ErrorCode::IntegrityFailure, "IntegrityFailure"},
    {ErrorCode::Io, "Io"},
    {ErrorCode::InvalidConfig, "InvalidConfig"},
    {ErrorCode::AlreadyExists, "AlreadyExists"},
    {ErrorCode::BadProposalSignature, "BadProposalSignature"},
    {ErrorCode::UnknownContract, "UnknownContract"},
    {ErrorCode::UnknownFunction, "UnknownFunction"},
    {ErrorCode::NonceReused, "NonceReused"},
    {ErrorCode::UnknownPeer, "UnknownPeer"},
    {ErrorCode::RwsetMismatch, "RwsetMismatch"},
    {ErrorCode::EmptyBatch, "EmptyBatch"},
    {ErrorCode::NonSequentialBlock, "NonSequentialBlock"},
    {ErrorCode::CorruptLedger, "CorruptLedger"},
    {ErrorCode::TxNotCommitted, "TxNotCommitted"},
    {ErrorCode::Unauthorized, "Unauthorized"},
    {ErrorCode::IdentityExists, "IdentityExists"},
    {ErrorCode::InvalidProof, "InvalidProof"},
    {ErrorCode::NotOwner, "NotOwner"},
    {ErrorCode::UnknownDid, "UnknownDid"},
    {ErrorCode::DeviceAlreadyRegistered, "DeviceAlreadyRegistered"},
    {ErrorCode::NotRegistered, "NotRegistered"},
    {ErrorCode::NoSuchChallenge, "NoSuchChallenge"},
    {ErrorCode::ExpiredChallenge, "ExpiredChallenge"},
    {ErrorCode::BadSignature, "BadSignature"},
    {ErrorCode::NotAuthenticated, "NotAuthenticated"},
    {ErrorCode::DuplicateAsset, "DuplicateAsset"},
    {ErrorCode::EmptyPayload, "EmptyPayload"},
}};

}  // namespace

std::string_view to_string(ErrorCode code) noexcept {
    for (const auto& [c, name] : kNames) {
        if (c == code) return name;
    }
    return "Unknown";
}

bool parse_error_code(std::string_view name, ErrorCode& out) noexcept {
    for (const auto& [c, n] : kNames) {
        if (n == name) {
            out = c;
            return true;
        }
    }
    return false;
}

}  // namespace iotid
