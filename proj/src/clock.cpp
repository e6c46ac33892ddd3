// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#include "iotid/clock.hpp"

#include <chrono>

namespace iotid {

std::int64_t WallClock::now() const {
    using namespace std::chrono;
    return duration_cast<seconds>(system_clock::now().time_since_epoch()).count();
}

}  // namespace iotid
