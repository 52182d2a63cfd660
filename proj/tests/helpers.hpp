#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "gsrc/channel.hpp"

namespace gsrc::testing {

inline ChannelDraw forced_draw(bool decoded, double tx_time_s) {
  ChannelDraw d;
  d.los = true;
  d.fading = 1.0;
  d.snr = decoded ? 100.0 : 1.0;
  d.decoded = decoded;
  d.tx_time_s = tx_time_s;
  return d;
}

// Replays a fixed list of draws; lets tests force decode outcomes and
// transmit times independent of any randomness.
class ScriptedChannel final : public ChannelModel {
 public:
  explicit ScriptedChannel(std::vector<ChannelDraw> draws)
      : draws_(std::move(draws)) {}

  ChannelDraw sample(const Vec3&, const Vec3&, Rng&) override {
    if (next_ >= draws_.size()) {
      throw std::runtime_error("ScriptedChannel: script exhausted");
    }
    return draws_[next_++];
  }

  std::size_t consumed() const { return next_; }

 private:
  std::vector<ChannelDraw> draws_;
  std::size_t next_ = 0;
};

class FailChannel final : public ChannelModel {
 public:
  ChannelDraw sample(const Vec3&, const Vec3&, Rng&) override {
    return forced_draw(false, 1e-4);
  }
};

}  // namespace gsrc::testing
