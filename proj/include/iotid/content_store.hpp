// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <filesystem>
#include <mutex>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>

#include "iotid/bytes.hpp"

namespace iotid {

/// SHA-256 of a stored blob; text form is 64 lowercase hex chars.
struct ContentHash {
    Digest digest{};

    std::string hex() const { return to_hex(digest); }
    static ContentHash parse(std::string_view hex);
    static ContentHash of(ByteView bytes) { return ContentHash{sha256(bytes)}; }

    auto operator<=>(const ContentHash&) const = default;
};

/// Content-addressed blob store. One file per blob, named by its hash, under
/// the store directory; the index of known hashes is rebuilt on construction.
/// Every read re-hashes the bytes before returning them.
class ContentStore {
  public:
    explicit ContentStore(std::filesystem::path dir);

    ContentStore(const ContentStore&) = delete;
    ContentStore& operator=(const ContentStore&) = delete;

    /// Idempotent. Throws Error(EmptyInput) for an empty blob.
    ContentHash put(ByteView bytes);

    /// Throws Error(NotFound) or Error(IntegrityFailure).
    Bytes get(const ContentHash& hash) const;

    /// True iff get(hash) would succeed.
    bool has(const ContentHash& hash) const;

    /// Number of distinct blobs.
    std::size_t size() const;

    const std::filesystem::path& dir() const noexcept { return dir_; }
    std::filesystem::path path_for(const ContentHash& hash) const { return dir_ / hash.hex(); }

  private:
    std::filesystem::path dir_;
    mutable std::shared_mutex mu_;
    std::set<ContentHash> index_;
};

}  // namespace iotid
