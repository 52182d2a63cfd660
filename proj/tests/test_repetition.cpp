#include "gsrc/repetition.hpp"

#include <doctest.h>

#include <stdexcept>
#include <utility>
#include <vector>

#include "helpers.hpp"

using namespace gsrc;
using namespace gsrc::repetition;
using gsrc::testing::ScriptedChannel;
using gsrc::testing::forced_draw;

namespace {

const double T = 1e-3;
const double R = 5e-5;  // repetition spacing used throughout

struct MockContext final : TransmissionContext {
  Vec3 pos{80, 80, 20};
  double now = 0.0;
  std::vector<double> advances;
  std::vector<std::pair<int, double>> deliveries;

  void advance_to(double t) override {
    REQUIRE(t >= now - 1e-12);
    advances.push_back(t);
    now = t;
  }
  Vec3 current_position() const override { return pos; }
  void deliver_at(const CncRecord& cnc, double t) override {
    deliveries.emplace_back(cnc.tti, t);
  }
};

RepetitionParams params_k(int k_max) {
  RepetitionParams p;
  p.k_max = k_max;
  p.t_rep_s = R;
  return p;
}

CncRecord slot(int tti) { return CncRecord{tti, {1000, 0, 0}, (tti - 1) * T, std::nullopt}; }

RepetitionOutcome run(std::vector<ChannelDraw> draws, int k_max, MockContext& ctx,
                      int tti = 1) {
  ScriptedChannel channel(std::move(draws));
  SimClock clock;
  Rng rng(1);
  return run_proactive(slot(tti), clock, ctx, channel, params_k(k_max), {0, 0, 0}, rng);
}

}  // namespace

TEST_CASE("late feedback never suppresses sends") {
  // Second copy decodes, but its arrival lands after the fourth send, so
  // all four copies go out and the loop never terminates early.
  MockContext ctx;
  const auto out = run({forced_draw(false, 1e-4), forced_draw(true, 2e-4),
                        forced_draw(false, 1e-4), forced_draw(false, 1e-4)},
                       4, ctx);
  CHECK(out.attempts == 4);
  CHECK_FALSE(out.terminated_early);
  REQUIRE(out.earliest_arrival.has_value());
  CHECK(*out.earliest_arrival == doctest::Approx(R + 2e-4));
  REQUIRE(out.draws.size() == 4);
  for (int k = 0; k < 4; ++k) {
    CHECK(out.draws[static_cast<std::size_t>(k)].send_time == doctest::Approx(k * R));
  }
  REQUIRE(ctx.deliveries.size() == 1);
  CHECK(ctx.deliveries[0].second == doctest::Approx(R + 2e-4));
  CHECK(ctx.advances.back() == doctest::Approx(T));
}

TEST_CASE("an arrived copy suppresses the next send") {
  // First copy arrives between the second and third send instants: the
  // second copy still goes out, the third is suppressed.
  MockContext ctx;
  const auto out = run({forced_draw(true, 1.5 * R), forced_draw(false, 1e-4)}, 4, ctx);
  CHECK(out.attempts == 2);
  CHECK(out.terminated_early);
  CHECK(*out.earliest_arrival == doctest::Approx(1.5 * R));
  CHECK(ctx.advances.back() == doctest::Approx(T));
}

TEST_CASE("arrival exactly at a send instant suppresses that send") {
  MockContext ctx;
  const auto out = run({forced_draw(true, R)}, 3, ctx);
  CHECK(out.attempts == 1);
  CHECK(out.terminated_early);
  CHECK(*out.earliest_arrival == doctest::Approx(R));
}

TEST_CASE("a fast first copy leaves a single attempt") {
  MockContext ctx;
  const auto out = run({forced_draw(true, 0.5 * R)}, 4, ctx);
  CHECK(out.attempts == 1);
  CHECK(out.terminated_early);
}

TEST_CASE("no decodes exhaust the budget") {
  MockContext ctx;
  const auto out = run({forced_draw(false, 1e-4), forced_draw(false, 1e-4),
                        forced_draw(false, 1e-4)},
                       3, ctx);
  CHECK(out.attempts == 3);
  CHECK_FALSE(out.terminated_early);
  CHECK_FALSE(out.earliest_arrival.has_value());
  CHECK(ctx.deliveries.empty());
  CHECK(ctx.advances.back() == doctest::Approx(T));
}

TEST_CASE("a later copy can arrive first and tightens the delivery") {
  // Copy 1 is slow (arrives at 5R); copy 2 is fast and lands at 1.5R.
  MockContext ctx;
  const auto out = run({forced_draw(true, 5 * R), forced_draw(true, 0.5 * R)}, 4, ctx);
  CHECK(out.attempts == 2);
  CHECK(out.terminated_early);  // 1.5R is before the third send at 2R
  CHECK(*out.earliest_arrival == doctest::Approx(1.5 * R));
  REQUIRE(ctx.deliveries.size() == 2);
  CHECK(ctx.deliveries[0].second == doctest::Approx(5 * R));
  CHECK(ctx.deliveries[1].second == doctest::Approx(1.5 * R));
}

TEST_CASE("a later slower copy does not re-deliver") {
  MockContext ctx;
  const auto out = run({forced_draw(true, 3 * R), forced_draw(true, 4 * R)}, 2, ctx);
  CHECK(out.attempts == 2);
  CHECK(*out.earliest_arrival == doctest::Approx(3 * R));
  REQUIRE(ctx.deliveries.size() == 1);
}

TEST_CASE("sends happen on later slots at shifted instants") {
  MockContext ctx;
  ctx.now = 4 * T;
  const auto out = run({forced_draw(false, 1e-4), forced_draw(false, 1e-4)}, 2, ctx, 5);
  REQUIRE(out.draws.size() == 2);
  CHECK(out.draws[0].send_time == doctest::Approx(4 * T));
  CHECK(out.draws[1].send_time == doctest::Approx(4 * T + R));
  CHECK(ctx.advances.back() == doctest::Approx(5 * T));
}

TEST_CASE("budget of one is a single-shot") {
  MockContext ctx;
  const auto out = run({forced_draw(true, 3 * R)}, 1, ctx);
  CHECK(out.attempts == 1);
  CHECK_FALSE(out.terminated_early);
  CHECK(*out.earliest_arrival == doctest::Approx(3 * R));
}

TEST_CASE("parameter validation") {
  SimClock clock;
  RepetitionParams p;
  p.k_max = 0;
  CHECK_THROWS_AS(p.validate(clock), std::invalid_argument);
  p = RepetitionParams{};
  p.t_rep_s = 0.0;
  CHECK_THROWS_AS(p.validate(clock), std::invalid_argument);
  p = RepetitionParams{};
  p.k_max = 3;
  p.t_rep_s = 0.5e-3;  // (3-1)*0.5e-3 == one slot: sends would spill over
  CHECK_THROWS_AS(p.validate(clock), std::invalid_argument);
  p.t_rep_s = 0.4999e-3;
  CHECK_NOTHROW(p.validate(clock));
}
