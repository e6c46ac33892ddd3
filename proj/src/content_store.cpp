// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#include "iotid/content_store.hpp"

#include <fstream>
#include <iterator>
#include <system_error>

#include "iotid/error.hpp"

namespace iotid {
namespace fs = std::filesystem;

namespace {

bool is_hash_name(const std::string& name) {
    return name.size() == 64 &&
           name.find_first_not_of("0123456789abcdef") == std::string::npos;
}

Bytes read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + p.string());
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

bool intact(const fs::path& p, const ContentHash& h) {
    try {
        return ContentHash::of(read_file(p)) == h;
    } catch (const Error&) {
        return false;
    }
}

}  // namespace

ContentHash ContentHash::parse(std::string_view hex) { return ContentHash{fixed_from_hex<32>(hex)}; }

ContentStore::ContentStore(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create store directory " + dir_.string() + ": " + ec.message());
    for (const auto& entry : fs::directory_iterator(dir_)) {
        const std::string name = entry.path().filename().string();
        if (entry.is_regular_file() && is_hash_name(name)) index_.insert(ContentHash::parse(name));
    }
}

ContentHash ContentStore::put(ByteView bytes) {
    if (bytes.empty()) throw Error(ErrorCode::EmptyInput, "cannot store empty content");
    const ContentHash h = ContentHash::of(bytes);
    std::unique_lock lock(mu_);
    // A damaged existing blob is rewritten.
    if (index_.contains(h) && intact(path_for(h), h)) return h;
    const fs::path final_path = path_for(h);
    const fs::path tmp = final_path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, final_path, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot publish " + final_path.string() + ": " + ec.message());
    index_.insert(h);
    return h;
}

Bytes ContentStore::get(const ContentHash& hash) const {
    {
        std::shared_lock lock(mu_);
        if (!index_.contains(hash)) throw Error(ErrorCode::NotFound, "no content " + hash.hex());
    }
    Bytes bytes;
    try {
        bytes = read_file(path_for(hash));
    } catch (const Error&) {
        throw Error(ErrorCode::IntegrityFailure, "content " + hash.hex() + " is missing from disk");
    }
    if (ContentHash::of(bytes) != hash) {
        throw Error(ErrorCode::IntegrityFailure, "content " + hash.hex() + " does not match its hash");
    }
    return bytes;
}

bool ContentStore::has(const ContentHash& hash) const {
    try {
        (void)get(hash);
        return true;
    } catch (const Error&) {
        return false;
    }
}

std::size_t ContentStore::size() const {
    std::shared_lock lock(mu_);
    return index_.size();
}

}  // namespace iotid
