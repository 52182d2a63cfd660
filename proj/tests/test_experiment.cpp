#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "gsrc/experiment.hpp"

using namespace gsrc;
namespace fs = std::filesystem;

namespace {

ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.base_seed = 11;
  cfg.episodes = 4;
  cfg.threads = 1;
  cfg.schemes = {Scheme::tucf, Scheme::vaqom};
  cfg.out_dir = "exp_out";
  cfg.trajectory_episodes = 1;
  cfg.clock = SimClock{1e-3, 6, 2};
  cfg.trajectory_seed = 5;
  cfg.trainer.hidden = {8};
  cfg.trainer.episodes = 4;
  cfg.trainer.replay_capacity = 64;
  cfg.trainer.batch_size = 4;
  cfg.trainer.warmup = 4;
  cfg.trainer.target_sync_episodes = 2;
  return cfg;
}

std::string slurp(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

long lines_of(const std::string& s) {
  return std::count(s.begin(), s.end(), '\n');
}

}  // namespace

TEST_CASE("scheme environment replays the episode runner") {
  const ExperimentConfig cfg = tiny_config();
  const TargetTrajectory target = experiment::make_target(cfg);
  const auto ch_env = experiment::make_channel(cfg);
  const auto ch_ref = experiment::make_channel(cfg);
  const ActionSpace actions(cfg.velocities);

  experiment::SchemeEnv env(Scheme::gsrc, target, cfg.engine_config(), *ch_env,
                            99);
  CHECK(env.action_count() == actions.size());
  CHECK(env.horizon_s() == cfg.clock.horizon());
  CHECK(env.done());  // no episode yet
  CHECK_THROWS_AS(env.step(0), std::logic_error);

  const AgentState s0 = env.reset(3);
  CHECK(s0.t == 0.0);
  CHECK(s0.position.x == target.waypoint(0).x);
  CHECK(s0.position.y == target.waypoint(0).y);

  std::vector<double> rewards;
  int a = 7;
  while (!env.done()) {
    const auto st = env.step(a);
    rewards.push_back(st.reward);
    a = (a * 5 + 3) % actions.size();
  }
  CHECK(static_cast<int>(rewards.size()) == cfg.clock.n_tti);
  CHECK_THROWS_AS(env.step(0), std::logic_error);

  EpisodeRunner runner(Scheme::gsrc, target, cfg.engine_config(), *ch_ref,
                       Rng(derive_seed(99, 3)));
  int b = 7;
  for (int i = 0; i < cfg.clock.n_tti; ++i) {
    CHECK(runner.step(actions.velocity(b)) == rewards[i]);
    b = (b * 5 + 3) % actions.size();
  }
}

TEST_CASE("target and channel follow the config") {
  ExperimentConfig cfg = tiny_config();
  const TargetTrajectory t1 = experiment::make_target(cfg);
  const TargetTrajectory t2 = experiment::make_target(cfg);
  CHECK(t1.waypoint_count() == cfg.clock.n_tti + 1);
  for (int i = 0; i < t1.waypoint_count(); ++i) {
    CHECK(t1.waypoint(i).x == t2.waypoint(i).x);
    CHECK(t1.waypoint(i).y == t2.waypoint(i).y);
  }
  cfg.trajectory_seed = 6;
  const TargetTrajectory t3 = experiment::make_target(cfg);
  bool same = true;
  for (int i = 0; i < t1.waypoint_count(); ++i)
    same = same && t1.waypoint(i).x == t3.waypoint(i).x &&
           t1.waypoint(i).y == t3.waypoint(i).y;
  CHECK_FALSE(same);

  Rng rng(1);
  cfg.ch_ideal = true;
  const auto ideal = experiment::make_channel(cfg);
  const ChannelDraw d = ideal->sample({0, 0, 0}, {80, 80, 20}, rng);
  CHECK(d.decoded);
  CHECK(d.tx_time_s == 0.0);
  cfg.ch_ideal = false;
  const auto stoch = experiment::make_channel(cfg);
  const ChannelDraw e = stoch->sample({0, 0, 0}, {80, 80, 20}, rng);
  CHECK(e.snr >= 0.0);
  CHECK(std::isfinite(e.snr));
}

TEST_CASE("train_agent is deterministic and sized to the grid") {
  const ExperimentConfig cfg = tiny_config();
  const dqn::TrainResult a = experiment::train_agent(cfg);
  const dqn::TrainResult b = experiment::train_agent(cfg);
  CHECK(static_cast<int>(a.curve.size()) == cfg.trainer.episodes);
  CHECK(a.net.inputs() == 4);
  CHECK(a.net.outputs() == ActionSpace(cfg.velocities).size());
  const Eigen::VectorXd pa = a.net.parameters();
  const Eigen::VectorXd pb = b.net.parameters();
  REQUIRE(pa.size() == pb.size());
  CHECK((pa - pb).cwiseAbs().maxCoeff() == 0.0);
  for (const auto& p : a.curve) CHECK(std::isfinite(p.cum_reward));
}

TEST_CASE("eval_scheme reports the configured point") {
  const ExperimentConfig cfg = tiny_config();
  BatchResult keep;
  const experiment::EvalRow row =
      experiment::eval_scheme(cfg, Scheme::tucf, nullptr, &keep);
  CHECK(row.scheme == Scheme::tucf);
  CHECK(row.k_max == cfg.rep.k_max);
  CHECK(row.t_rep_s == cfg.rep.t_rep_s);
  CHECK(row.summary.episodes == 4);
  CHECK(static_cast<int>(keep.episode_mse.size()) == 4);
  CHECK(static_cast<int>(keep.episodes.size()) == 1);  // trajectory_episodes
  CHECK(row.summary.mse_mean > 0.0);

  CHECK_THROWS_AS(experiment::eval_scheme(cfg, Scheme::gsrc, nullptr),
                  ConfigError);
}

TEST_CASE("run_sweep re-evaluates each scheme at each point") {
  const ExperimentConfig cfg = tiny_config();
  const auto rows =
      experiment::run_sweep(cfg, experiment::SweepAxis::k_max, {1, 2}, nullptr);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].scheme == Scheme::tucf);
  CHECK(rows[0].k_max == 1);
  CHECK(rows[1].scheme == Scheme::tucf);
  CHECK(rows[1].k_max == 2);
  CHECK(rows[2].scheme == Scheme::vaqom);
  CHECK(rows[3].scheme == Scheme::vaqom);
  // tucf never repeats, so the axis cannot move its numbers
  CHECK(rows[0].summary.mse_mean == rows[1].summary.mse_mean);
  CHECK(rows[0].summary.tx_mean == rows[1].summary.tx_mean);

  const auto single =
      experiment::run_sweep(cfg, experiment::SweepAxis::t_rep,
                            {cfg.rep.t_rep_s}, nullptr);
  const experiment::EvalRow direct =
      experiment::eval_scheme(cfg, Scheme::tucf, nullptr);
  REQUIRE(single.size() == 2);
  CHECK(single[0].summary.mse_mean == direct.summary.mse_mean);
  CHECK(single[0].t_rep_s == direct.t_rep_s);

  CHECK_THROWS_AS(experiment::run_sweep(cfg, experiment::SweepAxis::k_max,
                                        {2.5}, nullptr),
                  ConfigError);
  CHECK_THROWS_AS(
      experiment::run_sweep(cfg, experiment::SweepAxis::t_rep, {}, nullptr),
      ConfigError);
  ExperimentConfig wide = cfg;
  wide.rep.k_max = 3;
  CHECK_THROWS_AS(experiment::run_sweep(wide, experiment::SweepAxis::t_rep,
                                        {6e-4}, nullptr),
                  ConfigError);  // (k_max-1)*t_rep reaches the slot
  CHECK_THROWS_AS(experiment::run_sweep(cfg, experiment::SweepAxis::t_rep,
                                        {-1e-5}, nullptr),
                  ConfigError);
}

TEST_CASE("sweep axis names round-trip") {
  using experiment::SweepAxis;
  CHECK(experiment::sweep_axis_from_name("kmax") == SweepAxis::k_max);
  CHECK(experiment::sweep_axis_from_name("k_max") == SweepAxis::k_max);
  CHECK(experiment::sweep_axis_from_name("trep") == SweepAxis::t_rep);
  CHECK(experiment::sweep_axis_from_name("t_rep") == SweepAxis::t_rep);
  CHECK(experiment::sweep_axis_name(SweepAxis::k_max) == std::string("kmax"));
  CHECK(experiment::sweep_axis_name(SweepAxis::t_rep) == std::string("trep"));
  CHECK_THROWS_AS(experiment::sweep_axis_from_name("speed"), ConfigError);
}

TEST_CASE("csv writers keep nine significant digits and LF rows") {
  const experiment::EvalRow r{Scheme::gsrc, 2, 5e-5,
                              BatchSummary{1000, 104.123456789, 1.5, 1.0,
                                           0.25}};
  std::ostringstream out;
  experiment::write_summary_csv({r}, out);
  CHECK(out.str() ==
        "scheme,k_max,t_rep,episodes,mse_mean,mse_std,tx_mean,decode_rate\n"
        "gsrc,2,5e-05,1000,104.123457,1.5,1,0.25\n");

  std::ostringstream lo;
  experiment::write_learning_csv({{0, -12.5, 1.0}, {1, -3.25, 0.95}}, lo);
  CHECK(lo.str() == "episode,cum_reward,epsilon\n0,-12.5,1\n1,-3.25,0.95\n");

  const ExperimentConfig cfg = tiny_config();
  BatchResult keep;
  (void)experiment::eval_scheme(cfg, Scheme::tucf, nullptr, &keep);
  std::ostringstream tr;
  experiment::write_trajectory_csv(keep.episodes, tr);
  const std::string text = tr.str();
  CHECK(lines_of(text) == 1 + cfg.clock.n_tti * cfg.clock.n_m);
  const std::string first = text.substr(0, text.find('\n'));
  CHECK(first == "episode,tti,sample_j,t_s,px,py,pz,gx,gy,gz,err_m");
  const std::string row = text.substr(text.find('\n') + 1);
  CHECK(std::count(row.begin(), row.end(), ',') >=
        10);  // 11 columns in every data row
  CHECK(row.substr(0, 2) == "0,");
}

TEST_CASE("cmd_eval writes the artifact set deterministically") {
  ExperimentConfig cfg = tiny_config();
  cfg.out_dir = "exp_eval_a";
  cfg.queue_log = true;
  experiment::cmd_eval(cfg, nullptr);
  CHECK(fs::exists("exp_eval_a/summary.csv"));
  CHECK(fs::exists("exp_eval_a/trajectory.csv"));
  CHECK(fs::exists("exp_eval_a/trajectory_vaqom.csv"));
  CHECK(fs::exists("exp_eval_a/queue_log.csv"));

  const std::string summary = slurp("exp_eval_a/summary.csv");
  CHECK(lines_of(summary) == 3);  // header + one row per scheme
  CHECK(summary.rfind("scheme,", 0) == 0);
  const std::string qlog = slurp("exp_eval_a/queue_log.csv");
  CHECK(qlog.rfind("t_s,rank,tti,aoi_s,voi,si\n", 0) == 0);
  CHECK(lines_of(qlog) > 1);

  ExperimentConfig wide = tiny_config();
  wide.out_dir = "exp_eval_b";
  wide.queue_log = true;
  wide.threads = 8;
  experiment::cmd_eval(wide, nullptr);
  CHECK(slurp("exp_eval_b/summary.csv") == summary);
  CHECK(slurp("exp_eval_b/trajectory.csv") == slurp("exp_eval_a/trajectory.csv"));
  CHECK(slurp("exp_eval_b/queue_log.csv") == qlog);

  fs::remove_all("exp_eval_a");
  fs::remove_all("exp_eval_b");
}

TEST_CASE("cmd_train artifacts feed cmd_eval and match in-process training") {
  ExperimentConfig cfg = tiny_config();
  cfg.schemes = {Scheme::gsrc};
  cfg.out_dir = "exp_train";
  const dqn::TrainResult res = experiment::cmd_train(cfg);
  CHECK(fs::exists("exp_train/model.bin"));
  CHECK(fs::exists("exp_train/learning.csv"));
  CHECK(static_cast<int>(res.curve.size()) == cfg.trainer.episodes);
  const std::string learning = slurp("exp_train/learning.csv");
  CHECK(lines_of(learning) == 1 + cfg.trainer.episodes);
  CHECK(learning.rfind("episode,cum_reward,epsilon\n", 0) == 0);

  const dqn::QNetwork net = dqn::load_network("exp_train/model.bin");
  CHECK(net.outputs() == ActionSpace(cfg.velocities).size());

  cfg.out_dir = "exp_eval_model";
  experiment::cmd_eval(cfg, &net);
  cfg.out_dir = "exp_eval_auto";
  experiment::cmd_eval(cfg, nullptr);  // trains in process, same seeds
  CHECK(slurp("exp_eval_auto/summary.csv") ==
        slurp("exp_eval_model/summary.csv"));

  fs::remove_all("exp_train");
  fs::remove_all("exp_eval_model");
  fs::remove_all("exp_eval_auto");
}

TEST_CASE("cmd_sweep writes one row per scheme and value") {
  ExperimentConfig cfg = tiny_config();
  cfg.out_dir = "exp_sweep";
  experiment::cmd_sweep(cfg, experiment::SweepAxis::k_max, {1, 2, 3}, nullptr);
  const std::string sweep = slurp("exp_sweep/sweep.csv");
  CHECK(lines_of(sweep) == 1 + 2 * 3);
  CHECK(sweep.rfind(
            "scheme,k_max,t_rep,episodes,mse_mean,mse_std,tx_mean,decode_rate",
            0) == 0);
  fs::remove_all("exp_sweep");
}
