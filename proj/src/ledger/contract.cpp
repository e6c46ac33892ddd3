// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#include "iotid/ledger/contract.hpp"

#include "iotid/error.hpp"

namespace iotid::ledger {

std::optional<Bytes> TxContext::get_state(const std::string& key) {
    std::optional<VersionedValue> v = snapshot_.get(key);
    reads_.try_emplace(key, v ? std::optional<Version>(v->version) : std::nullopt);
    if (!v) return std::nullopt;
    return std::move(v->value);
}

void TxContext::put_state(const std::string& key, Bytes value) { writes_.insert_or_assign(key, std::move(value)); }

void TxContext::del_state(const std::string& key) { writes_.insert_or_assign(key, std::nullopt); }

ReadWriteSet TxContext::rwset() const {
    ReadWriteSet rw;
    rw.reads.reserve(reads_.size());
    for (const auto& [k, v] : reads_) rw.reads.push_back({k, v});
    rw.writes.reserve(writes_.size());
    for (const auto& [k, v] : writes_) rw.writes.push_back({k, v});
    return rw;
}

void ContractRegistry::add(std::shared_ptr<const Contract> contract) {
    std::string name(contract->name());
    contracts_.insert_or_assign(std::move(name), std::move(contract));
}

const Contract* ContractRegistry::find(std::string_view name) const {
    const auto it = contracts_.find(name);
    return it == contracts_.end() ? nullptr : it->second.get();
}

void expect_args(const TxContext& ctx, std::size_t n) {
    if (ctx.args().size() != n) {
        throw Error(ErrorCode::InvalidArgument,
                    "expected " + std::to_string(n) + " arguments, got " + std::to_string(ctx.args().size()));
    }
}

}  // namespace iotid::ledger
