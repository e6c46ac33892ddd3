// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstdint>

namespace iotid {

/// Engine clock in integer epoch seconds. Contract timestamps, challenge and
/// session expiry all read from here, never from the system clock directly.
class Clock {
  public:
    virtual ~Clock() = default;
    virtual std::int64_t now() const = 0;
};

class WallClock final : public Clock {
  public:
    std::int64_t now() const override;
};

class SimClock final : public Clock {
  public:
    explicit SimClock(std::int64_t start = 0) : now_(start) {}

    std::int64_t now() const override { return now_.load(); }
    void set(std::int64_t t) { now_.store(t); }
    void advance(std::int64_t seconds) { now_.fetch_add(seconds); }

  private:
    std::atomic<std::int64_t> now_;
};

}  // namespace iotid
