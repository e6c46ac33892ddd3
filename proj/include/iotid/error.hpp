// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace iotid {

enum class ErrorCode {
    InvalidArgument,
    MalformedInput,
    MalformedDid,
    EmptyInput,
    NotFound,
    IntegrityFailure,
    Io,
    InvalidConfig,
    AlreadyExists,

    // ledger pipeline
    BadProposalSignature,
    UnknownContract,
    UnknownFunction,
    NonceReused,
    UnknownPeer,
    RwsetMismatch,
    EmptyBatch,
    NonSequentialBlock,
    CorruptLedger,
    TxNotCommitted,

    // identity contract and login
    Unauthorized,
    IdentityExists,
    InvalidProof,
    NotOwner,
    UnknownDid,
    DeviceAlreadyRegistered,
    NotRegistered,
    NoSuchChallenge,
    ExpiredChallenge,
    BadSignature,

    // asset contract
    NotAuthenticated,
    DuplicateAsset,
    EmptyPayload,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Parses the names produced by to_string(). Returns false for unknown names.
bool parse_error_code(std::string_view name, ErrorCode& out) noexcept;

/// Every failure in the library is reported as an Error carrying a code.
/// `subject` holds an optional machine-readable payload, for instance the
/// already-committed dataId of a DuplicateAsset rejection.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message, std::string subject = {})
        : std::runtime_error(std::string(to_string(code)) + ": " + message),
          code_(code),
          subject_(std::move(subject)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& subject() const noexcept { return subject_; }

  private:
    ErrorCode code_;
    std::string subject_;
};

}  // namespace iotid
