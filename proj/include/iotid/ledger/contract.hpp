// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "iotid/bytes.hpp"
#include "iotid/content_store.hpp"
#include "iotid/ledger/types.hpp"
#include "iotid/ledger/world_state.hpp"

namespace iotid::ledger {

/// Chaincode stub handed to a contract function. Reads come from the
/// snapshot and are recorded with their versions; writes are buffered. Reads
/// never observe the transaction's own buffered writes.
class TxContext {
  public:
    TxContext(const WorldState& snapshot, const TxProposal& proposal, const GenesisConfig& config,
              ContentStore& store)
        : snapshot_(snapshot), proposal_(proposal), config_(config), store_(store) {}

    std::optional<Bytes> get_state(const std::string& key);
    void put_state(const std::string& key, Bytes value);
    void del_state(const std::string& key);

    const TxProposal& proposal() const noexcept { return proposal_; }
    const Address& invoker() const noexcept { return proposal_.invoker; }
    std::int64_t timestamp() const noexcept { return proposal_.timestamp; }
    std::span<const std::string> args() const noexcept { return proposal_.args; }
    const GenesisConfig& config() const noexcept { return config_; }
    ContentStore& store() noexcept { return store_; }

    ReadWriteSet rwset() const;

  private:
    const WorldState& snapshot_;
    const TxProposal& proposal_;
    const GenesisConfig& config_;
    ContentStore& store_;
    std::map<std::string, std::optional<Version>> reads_;
    std::map<std::string, std::optional<Bytes>> writes_;
};

/// A deterministic contract. invoke() throws Error on any rejection; the
/// executor then discards the whole read/write set.
class Contract {
  public:
    virtual ~Contract() = default;
    virtual std::string_view name() const = 0;
    /// Returns the function's response payload.
    virtual Bytes invoke(TxContext& ctx, std::string_view function) const = 0;
};

class ContractRegistry {
  public:
    void add(std::shared_ptr<const Contract> contract);
    /// nullptr when unknown.
    const Contract* find(std::string_view name) const;

  private:
    std::map<std::string, std::shared_ptr<const Contract>, std::less<>> contracts_;
};

/// Throws Error(InvalidArgument) unless exactly `n` args were supplied.
void expect_args(const TxContext& ctx, std::size_t n);

}  // namespace iotid::ledger
