// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#include "iotid/ledger/codec.hpp"

#include "iotid/error.hpp"

namespace iotid::ledger {

void Encoder::u32(std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) out_.push_back(static_cast<std::uint8_t>(v >> s));
}

void Encoder::u64(std::uint64_t v) {
    for (int s = 56; s >= 0; s -= 8) out_.push_back(static_cast<std::uint8_t>(v >> s));
}

void Encoder::bytes(ByteView v) {
    if (v.size() > 0xffffffffULL) throw Error(ErrorCode::InvalidArgument, "field too large to encode");
    u32(static_cast<std::uint32_t>(v.size()));
    out_.insert(out_.end(), v.begin(), v.end());
}

void Decoder::need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw Error(ErrorCode::MalformedInput, "truncated encoding");
}

std::uint8_t Decoder::u8() {
    need(1);
    return in_[pos_++];
}

std::uint32_t Decoder::u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | in_[pos_++];
    return v;
}

std::uint64_t Decoder::u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | in_[pos_++];
    return v;
}

bool Decoder::boolean() {
    const std::uint8_t v = u8();
    if (v > 1) throw Error(ErrorCode::MalformedInput, "boolean out of range");
    return v == 1;
}

Bytes Decoder::bytes() {
    const std::uint32_t n = u32();
    need(n);
    Bytes v(in_.begin() + pos_, in_.begin() + pos_ + n);
    pos_ += n;
    return v;
}

std::string Decoder::str() {
    const Bytes b = bytes();
    return std::string(b.begin(), b.end());
}

std::uint32_t Decoder::count(std::size_t min_elem) {
    const std::uint32_t n = u32();
    if (min_elem > 0 && n > (in_.size() - pos_) / min_elem) {
        throw Error(ErrorCode::MalformedInput, "element count exceeds remaining input");
    }
    return n;
}

void Decoder::finish() const {
    if (!done()) throw Error(ErrorCode::MalformedInput, "trailing bytes after encoding");
}

}  // namespace iotid::ledger
