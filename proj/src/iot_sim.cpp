// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#include "iotid/iot_sim.hpp"

#include <cmath>
#include <ctime>
#include <fstream>
#include <nlohmann/json.hpp>

#include "iotid/error.hpp"
#include "iotid/rng.hpp"

namespace iotid::sim {
namespace fs = std::filesystem;

namespace {

// Grid bounds in hundredths, kept inside [value_min, value_max].
std::int64_t centi_lo(double v) { return static_cast<std::int64_t>(std::ceil(v * 100.0 - 1e-9)); }
std::int64_t centi_hi(double v) { return static_cast<std::int64_t>(std::floor(v * 100.0 + 1e-9)); }

}  // namespace

void FlowConfig::validate() const {
    if (device_count < 1) throw Error(ErrorCode::InvalidConfig, "deviceCount must be at least 1");
    if (interval_seconds <= 0) throw Error(ErrorCode::InvalidConfig, "intervalSeconds must be positive");
    if (!std::isfinite(value_min) || !std::isfinite(value_max) || value_min > value_max) {
        throw Error(ErrorCode::InvalidConfig, "value range must satisfy valueMin <= valueMax");
    }
    if (std::abs(value_min) > 1e15 || std::abs(value_max) > 1e15) {
        throw Error(ErrorCode::InvalidConfig, "value range too large");
    }
    if (centi_lo(value_min) > centi_hi(value_max)) {
        throw Error(ErrorCode::InvalidConfig, "value range contains no multiple of 0.01");
    }
    if (manufacturer_id.empty()) throw Error(ErrorCode::InvalidConfig, "manufacturerId is empty");
}

KeySeed device_key_seed(std::uint64_t seed, int index) {
    return sha256("iotid/device-key|" + std::to_string(seed) + "|" + std::to_string(index));
}

Did device_did(std::uint64_t seed, int index) {
    const KeySeed ks = device_key_seed(seed, index);
    return make_did(method_id_for_key(generate_keypair(ks).public_key()));
}

SimNetwork build_network(const FlowConfig& config) {
    config.validate();
    std::vector<DeviceFlow> flows;
    flows.reserve(static_cast<std::size_t>(config.device_count));
    for (int i = 1; i <= config.device_count; ++i) {
        flows.push_back(DeviceFlow{i, device_did(config.seed, i), stream_seed(config.seed, static_cast<std::uint64_t>(i))});
    }
    return SimNetwork(config, std::move(flows));
}

std::vector<SensorReading> SimNetwork::run(std::int64_t duration_seconds) const {
    std::vector<SensorReading> out;
    if (duration_seconds <= 0) return out;
    const std::int64_t lo = centi_lo(config_.value_min);
    const std::int64_t hi = centi_hi(config_.value_max);
    std::vector<Rng> streams;
    streams.reserve(flows_.size());
    for (const auto& f : flows_) streams.emplace_back(f.stream_seed);
    std::vector<std::uint64_t> counters(flows_.size(), 0);

    const std::int64_t ticks = duration_seconds / config_.interval_seconds;
    out.reserve(static_cast<std::size_t>(ticks) * flows_.size());
    for (std::int64_t k = 1; k <= ticks; ++k) {
        const std::int64_t t = k * config_.interval_seconds;
        for (std::size_t d = 0; d < flows_.size(); ++d) {
            SensorReading r;
            r.device_index = flows_[d].index;
            r.device_did = flows_[d].did;
            r.manufacturer_id = config_.manufacturer_id;
            r.time = t;
            r.centi_temperature = streams[d].uniform_int(lo, hi);
            r.counter = ++counters[d];
            out.push_back(std::move(r));
        }
    }
    return out;
}

std::string iso8601_utc(std::int64_t epoch_seconds) {
    const std::time_t t = static_cast<std::time_t>(epoch_seconds);
    std::tm tm{};
    if (gmtime_r(&t, &tm) == nullptr) throw Error(ErrorCode::InvalidArgument, "timestamp out of range");
    char buf[32];
    const std::size_t n = std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return std::string(buf, n);
}

std::string format_centi(std::int64_t centi) {
    std::string out;
    if (centi < 0) {
        out.push_back('-');
        centi = -centi;
    }
    out += std::to_string(centi / 100);
    const std::int64_t frac = centi % 100;
    if (frac != 0) {
        out.push_back('.');
        out.push_back(static_cast<char>('0' + frac / 10));
        if (frac % 10 != 0) out.push_back(static_cast<char>('0' + frac % 10));
    }
    return out;
}

Bytes render_payload(const SensorReading& reading) {
    // Keys in sorted order: "Time" < "manufacturer_id" < "temperature".
    std::string s = R"({"d":{"Time":")";
    s += iso8601_utc(reading.time);
    s += R"(","manufacturer_id":)";
    s += nlohmann::json(reading.manufacturer_id).dump();
    s += R"(,"temperature":)";
    s += format_centi(reading.centi_temperature);
    s += "}}";
    return to_bytes(s);
}

fs::path reading_relative_path(const SensorReading& reading) {
    return fs::path("device" + std::to_string(reading.device_index)) / (std::to_string(reading.counter) + ".txt");
}

std::vector<std::pair<fs::path, Bytes>> write_asset_files(const std::vector<SensorReading>& readings,
                                                          const fs::path& output_dir) {
    std::vector<std::pair<fs::path, Bytes>> out;
    out.reserve(readings.size());
    for (const auto& r : readings) {
        const fs::path path = output_dir / reading_relative_path(r);
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw Error(ErrorCode::Io, "cannot create " + path.parent_path().string() + ": " + ec.message());
        Bytes payload = render_payload(r);
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        f.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
        if (!f) throw Error(ErrorCode::Io, "cannot write " + path.string());
        out.emplace_back(path, std::move(payload));
    }
    return out;
}

}  // namespace iotid::sim
