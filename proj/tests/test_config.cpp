#include "gsrc/config.hpp"

#include <sstream>
#include <string>

#include "doctest.h"

using namespace gsrc;

namespace {

ExperimentConfig parse_text(const std::string& text,
                            const std::string& name = "test.cfg") {
  std::istringstream in(text);
  return parse_config(in, name);
}

std::string error_of(const std::string& text) {
  try {
    parse_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  FAIL("expected a ConfigError");
  return {};
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("empty input keeps every default") {
  const ExperimentConfig cfg = parse_text("");
  CHECK(cfg.base_seed == 1);
  CHECK(cfg.episodes == 1000);
  CHECK(cfg.threads == 0);
  CHECK(cfg.schemes.size() == 4);
  CHECK(cfg.out_dir == "out");
  CHECK(cfg.clock.tti_s == 1e-3);
  CHECK(cfg.clock.n_tti == 99);
  CHECK(cfg.clock.n_m == 9);
  CHECK(cfg.ch_fc_hz == 5e9);
  CHECK(cfg.ch_snr_threshold_db == 5.5);
  CHECK(cfg.ch_noise_dbm == -104.0);
  CHECK(cfg.ch_tx_power_dbm == 18.0);
  CHECK(cfg.ch_cnc_bits == 832.0);
  CHECK_FALSE(cfg.ch_ideal);
  CHECK(cfg.rep.k_max == 2);
  CHECK(cfg.rep.t_rep_s == 5e-5);
  CHECK(cfg.q_max == 10);
  CHECK(cfg.velocities.x.size() == 11);
  CHECK(cfg.velocities.z == std::vector<double>{0.0});
  CHECK(cfg.trajectory_kind == TrajectoryKind::random_walk);
  CHECK(cfg.start == Vec3{80.0, 80.0, 20.0});
  CHECK(cfg.trainer.gamma == 0.1);
  CHECK(cfg.trainer.lr == 1e-4);
  CHECK(cfg.trainer.episodes == 2000);
  CHECK(cfg.trainer.hidden == std::vector<int>{64, 64});
  CHECK(cfg.trainer_scheme == Scheme::gsrc);

  const std::string dumped = dump_config(cfg);
  CHECK(dumped == dump_config(ExperimentConfig{}));
}

TEST_CASE("values, comments and lists parse") {
  const ExperimentConfig cfg = parse_text(
      "# experiment setup\n"
      "run.base_seed = 99\n"
      "run.episodes=250   # inline comment\n"
      "  run.schemes = GSRC , tucf \n"
      "\n"
      "clock.n_tti = 50\n"
      "channel.eta_nlos_db = 23\n"
      "channel.ideal = true\n"
      "velocities.x = -2000, 0, 2000\n"
      "velocities.y = -2000,0,2000\n"
      "trainer.hidden = 32,32\n"
      "trajectory.kind = waypoint-demo\n"
      "trajectory.start_z = 35\n"
      "queue.log = true\n");
  CHECK(cfg.base_seed == 99);
  CHECK(cfg.episodes == 250);
  REQUIRE(cfg.schemes.size() == 2);
  CHECK(cfg.schemes[0] == Scheme::gsrc);
  CHECK(cfg.schemes[1] == Scheme::tucf);
  CHECK(cfg.clock.n_tti == 50);
  CHECK(cfg.ch_eta_nlos_db == 23.0);
  CHECK(cfg.ch_ideal);
  CHECK(cfg.velocities.x == std::vector<double>{-2000.0, 0.0, 2000.0});
  CHECK(cfg.trainer.hidden == std::vector<int>{32, 32});
  CHECK(cfg.trajectory_kind == TrajectoryKind::waypoint_demo);
  CHECK(cfg.start.z == 35.0);
  CHECK(cfg.queue_log);

  const ChannelParams ch = cfg.channel_params();
  CHECK(ch.eta_nlos == doctest::Approx(db_to_linear(23.0)).epsilon(1e-15));
  CHECK(ch.eta_los == doctest::Approx(db_to_linear(1.0)).epsilon(1e-15));
}

TEST_CASE("diagnostics name the file, line and key") {
  const std::string unknown = error_of("run.episodes = 5\nfoo.bar = 1\n");
  CHECK(contains(unknown, "test.cfg:2"));
  CHECK(contains(unknown, "foo.bar"));

  const std::string bad_type = error_of("clock.n_tti = ninety\n");
  CHECK(contains(bad_type, "test.cfg:1"));
  CHECK(contains(bad_type, "clock.n_tti"));
  CHECK(contains(bad_type, "ninety"));

  const std::string no_eq = error_of("clock.n_tti\n");
  CHECK(contains(no_eq, "key = value"));

  const std::string bad_scheme = error_of("run.schemes = tucf,warp\n");
  CHECK(contains(bad_scheme, "warp"));

  const std::string bad_bool = error_of("channel.ideal = maybe\n");
  CHECK(contains(bad_bool, "maybe"));
}

TEST_CASE("invariant violations are config errors") {
  // Repetition window spilling over one slot.
  const std::string rep = error_of(
      "repetition.k_max = 3\n"
      "repetition.t_rep_s = 5e-4\n");
  CHECK(contains(rep, "t_rep"));

  CHECK_THROWS_AS(parse_text("clock.n_tti = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_text("run.episodes = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_text("run.threads = -2\n"), ConfigError);
  CHECK_THROWS_AS(parse_text("queue.q_max = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_text("velocities.x = 5,4\n"), ConfigError);
  CHECK_THROWS_AS(parse_text("trainer.rho = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_text("trajectory.radius_m = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_text("channel.bandwidth_hz = -1\n"), ConfigError);
}

TEST_CASE("dump round-trips a customized config") {
  ExperimentConfig cfg;
  apply_override(cfg, "run.base_seed", "123456789012345");
  apply_override(cfg, "run.episodes", "42");
  apply_override(cfg, "clock.tti_s", "2.5e-4");
  apply_override(cfg, "clock.n_tti", "40");
  apply_override(cfg, "channel.a", "9.6099999999999994");
  apply_override(cfg, "channel.snr_threshold_db", "6.25");
  apply_override(cfg, "repetition.k_max", "3");
  apply_override(cfg, "repetition.t_rep_s", "2.5e-5");
  apply_override(cfg, "velocities.z", "-1000,0,1000");
  apply_override(cfg, "trainer.hidden", "16,8");
  apply_override(cfg, "trainer.scheme", "deeppro");
  apply_override(cfg, "run.out_dir", "results/run a");
  cfg.validate();

  const std::string once = dump_config(cfg);
  const ExperimentConfig back = parse_text(once, "dump");
  CHECK(dump_config(back) == once);
  CHECK(back.base_seed == 123456789012345ULL);
  CHECK(back.clock.tti_s == 2.5e-4);
  CHECK(back.ch_a == 9.6099999999999994);
  CHECK(back.out_dir == "results/run a");
  CHECK(back.trainer_scheme == Scheme::deeppro);
}

TEST_CASE("overrides reject unknown keys and bad values") {
  ExperimentConfig cfg;
  apply_override(cfg, " run.episodes ", " 7 ");
  CHECK(cfg.episodes == 7);
  CHECK_THROWS_AS(apply_override(cfg, "run.nope", "1"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "run.episodes", "x"), ConfigError);
  try {
    apply_override(cfg, "run.episodes", "x");
  } catch (const ConfigError& e) {
    CHECK(contains(e.what(), "override"));
    CHECK(contains(e.what(), "run.episodes"));
  }
}

TEST_CASE("missing config files are reported") {
  CHECK_THROWS_AS(load_config("no_such_config_file.cfg"), ConfigError);
}
