// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "iotid/bytes.hpp"
#include "iotid/did.hpp"

namespace iotid::sim {

/// Topology and parameters of the simulated sensor network: every device runs
/// its own inject -> random -> function -> file flow.
struct FlowConfig {
    int device_count = 5;
    std::int64_t interval_seconds = 30;
    double value_min = 0.0;
    double value_max = 100.0;
    std::string manufacturer_id = "ABCDEF00001";
    std::uint64_t seed = 0;
    std::filesystem::path output_dir = "nodered";

    /// Throws Error(InvalidConfig).
    void validate() const;
};

struct SensorReading {
    int device_index = 0;  // 1-based
    Did device_did;
    std::string manufacturer_id;
    std::int64_t time = 0;  // simulated epoch seconds
    /// Temperature in hundredths; readings are generated on a 0.01 grid.
    std::int64_t centi_temperature = 0;
    std::uint64_t counter = 0;  // 1-based, per device

    double temperature() const noexcept { return static_cast<double>(centi_temperature) / 100.0; }

    bool operator==(const SensorReading&) const = default;
};

/// Key seed of device `index` under network seed `seed`. The gateway uses the
/// same derivation, so simulated DIDs match the keystore.
KeySeed device_key_seed(std::uint64_t seed, int index);

/// DID of device `index` under network seed `seed`.
Did device_did(std::uint64_t seed, int index);

struct DeviceFlow {
    int index = 0;
    Did did;
    std::uint64_t stream_seed = 0;
};

class SimNetwork {
  public:
    explicit SimNetwork(FlowConfig config, std::vector<DeviceFlow> flows)
        : config_(std::move(config)), flows_(std::move(flows)) {}

    const FlowConfig& config() const noexcept { return config_; }
    const std::vector<DeviceFlow>& flows() const noexcept { return flows_; }

    /// Each device fires at interval, 2*interval, ..., floor(duration/interval)*interval.
    /// Output is ordered by (time, device index). Every call starts from the
    /// network's initial state, so the result depends only on config and duration.
    std::vector<SensorReading> run(std::int64_t duration_seconds) const;

  private:
    FlowConfig config_;
    std::vector<DeviceFlow> flows_;
};

/// One flow per device, each with an RNG stream derived from (seed, index).
SimNetwork build_network(const FlowConfig& config);

/// `YYYY-MM-DDTHH:MM:SSZ`
std::string iso8601_utc(std::int64_t epoch_seconds);

/// Canonical decimal for a value in hundredths, without trailing zeros: 4250 -> "42.5", 700 -> "7".
std::string format_centi(std::int64_t centi);

/// `{"d":{"Time":"<ISO-8601>","manufacturer_id":"<id>","temperature":<number>}}`
Bytes render_payload(const SensorReading& reading);

/// Relative path `device<i>/<c>.txt`.
std::filesystem::path reading_relative_path(const SensorReading& reading);

/// Writes `<outputDir>/device<i>/<c>.txt` for every reading. Throws Error(Io).
std::vector<std::pair<std::filesystem::path, Bytes>> write_asset_files(const std::vector<SensorReading>& readings,
                                                                      const std::filesystem::path& output_dir);

}  // namespace iotid::sim
