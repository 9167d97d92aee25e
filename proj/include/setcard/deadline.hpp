#pragma once

#include <chrono>

#include "setcard/error.hpp"

namespace setcard {

/// Wall-clock budget shared by the rewriter and the ILP. A default-constructed
/// deadline never expires.
class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  Deadline() = default;
  explicit Deadline(std::chrono::milliseconds budget)
      : enabled_(true), end_(Clock::now() + budget) {}

  static Deadline after_ms(long ms) { return Deadline(std::chrono::milliseconds(ms)); }

  bool enabled() const { return enabled_; }
  bool expired() const { return enabled_ && Clock::now() >= end_; }
  void check() const {
    if (expired()) throw TimeoutError();
  }

 private:
  bool enabled_ = false;
  Clock::time_point end_{};
};

}  // namespace setcard
