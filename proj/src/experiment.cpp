#include "gsrc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

namespace gsrc::experiment {
namespace {

namespace fs = std::filesystem;

// Seed streams reserved for training so they cannot collide with the
// per-episode evaluation seeds derive_seed(base_seed, 0..episodes-1).
constexpr std::uint64_t kTrainerStream = 0x7452416e;
constexpr std::uint64_t kTrainEnvStream = 0x7452456e;

std::string g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

Policy make_policy(const ExperimentConfig& cfg, Scheme scheme,
                   const dqn::QNetwork* net) {
  if (!scheme_uses_dqn(scheme)) return {};
  if (net == nullptr)
    throw ConfigError(std::string(scheme_name(scheme)) +
                      " needs a trained model");
  try {
    return dqn::greedy_policy(
        *net, ActionSpace(cfg.velocities),
        dqn::FeatureScale{cfg.trainer.pos_scale_m, cfg.trainer.time_scale_s});
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("model does not fit the action grid: ") +
                      e.what());
  }
}

void write_file(const fs::path& path,
                const std::function<void(std::ostream&)>& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  body(f);
  f.flush();
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

// One instrumented episode of the first semantic-queue scheme, re-running
// evaluation episode 0 with a snapshot row per queue rescoring.
void write_queue_log(const ExperimentConfig& cfg, Scheme scheme,
                     const dqn::QNetwork* net, const fs::path& path) {
  const TargetTrajectory target = make_target(cfg);
  const auto channel = make_channel(cfg);
  const Policy policy = make_policy(cfg, scheme, net);

  write_file(path, [&](std::ostream& out) {
    out << "t_s,rank,tti,aoi_s,voi,si\n";
    EngineConfig ecfg = cfg.engine_config();
    ecfg.queue_hook = [&](double t, const vaqom::SemanticQueue& q) {
      int rank = 0;
      for (const vaqom::QueueEntry& e : q.entries())
        out << g9(t) << ',' << ++rank << ',' << e.cnc.tti << ','
            << g9(e.aoi_s) << ',' << g9(e.voi) << ',' << g9(e.si) << '\n';
    };
    (void)run_episode(scheme, target, ecfg, *channel, policy,
                      Rng(derive_seed(cfg.base_seed, 0)));
  });
}

}  // namespace

SchemeEnv::SchemeEnv(Scheme scheme, const TargetTrajectory& target,
                     EngineConfig cfg, ChannelModel& channel,
                     std::uint64_t seed_base)
    : scheme_(scheme),
      target_(&target),
      cfg_(std::move(cfg)),
      channel_(&channel),
      actions_(cfg_.velocities),
      seed_base_(seed_base) {
  cfg_.validate();
}

AgentState SchemeEnv::reset(int episode) {
  runner_.emplace(scheme_, *target_, cfg_, *channel_,
                  Rng(derive_seed(seed_base_, static_cast<std::uint64_t>(episode))));
  return runner_->agent_state();
}

dqn::ControlEnv::Step SchemeEnv::step(int action) {
  if (!runner_ || runner_->done())
    throw std::logic_error("SchemeEnv::step without a live episode");
  const double reward = runner_->step(actions_.velocity(action));
  return {reward, runner_->agent_state()};
}

bool SchemeEnv::done() const { return !runner_ || runner_->done(); }

TargetTrajectory make_target(const ExperimentConfig& cfg) {
  return make_trajectory(cfg.trajectory_kind, cfg.clock, cfg.velocities,
                         cfg.start, cfg.trajectory_radius_m,
                         cfg.trajectory_seed);
}

std::unique_ptr<ChannelModel> make_channel(const ExperimentConfig& cfg) {
  if (cfg.ch_ideal) return std::make_unique<IdealChannel>();
  return std::make_unique<StochasticChannel>(cfg.channel_params());
}

dqn::TrainResult train_agent(const ExperimentConfig& cfg) {
  cfg.validate();
  const TargetTrajectory target = make_target(cfg);
  const auto channel = make_channel(cfg);
  SchemeEnv env(cfg.trainer_scheme, target, cfg.engine_config(), *channel,
                derive_seed(cfg.base_seed, kTrainEnvStream));
  return dqn::train(env, cfg.trainer,
                    derive_seed(cfg.base_seed, kTrainerStream));
}

EvalRow eval_scheme(const ExperimentConfig& cfg, Scheme scheme,
                    const dqn::QNetwork* net, BatchResult* keep) {
  cfg.validate();
  const TargetTrajectory target = make_target(cfg);
  const auto channel = make_channel(cfg);
  const Policy policy = make_policy(cfg, scheme, net);

  BatchOptions opts;
  opts.episodes = cfg.episodes;
  opts.base_seed = cfg.base_seed;
  opts.threads = cfg.threads;
  opts.keep_first = keep ? cfg.trajectory_episodes : 0;

  BatchResult res =
      run_batch(scheme, target, cfg.engine_config(), *channel, policy, opts);
  EvalRow row{scheme, cfg.rep.k_max, cfg.rep.t_rep_s, res.summary};
  if (keep) *keep = std::move(res);
  return row;
}

SweepAxis sweep_axis_from_name(std::string_view name) {
  if (name == "kmax" || name == "k_max") return SweepAxis::k_max;
  if (name == "trep" || name == "t_rep") return SweepAxis::t_rep;
  throw ConfigError("unknown sweep axis '" + std::string(name) +
                    "' (expected kmax or trep)");
}

const char* sweep_axis_name(SweepAxis axis) {
  return axis == SweepAxis::k_max ? "kmax" : "trep";
}

std::vector<EvalRow> run_sweep(const ExperimentConfig& cfg, SweepAxis axis,
                               const std::vector<double>& values,
                               const dqn::QNetwork* net) {
  cfg.validate();
  if (values.empty()) throw ConfigError("sweep: no axis values given");

  std::vector<ExperimentConfig> points;
  points.reserve(values.size());
  for (double v : values) {
    ExperimentConfig c = cfg;
    if (axis == SweepAxis::k_max) {
      const double r = std::round(v);
      if (std::abs(v - r) > 1e-9 || r < 1.0 || r > 1e6)
        throw ConfigError("sweep: k_max value " + g9(v) +
                          " is not a positive integer");
      c.rep.k_max = static_cast<int>(r);
    } else {
      c.rep.t_rep_s = v;
    }
    try {
      c.validate();
    } catch (const ConfigError& e) {
      throw ConfigError("sweep value " + g9(v) + ": " + e.what());
    }
    points.push_back(std::move(c));
  }

  std::vector<EvalRow> rows;
  rows.reserve(points.size() * cfg.schemes.size());
  for (Scheme s : cfg.schemes)
    for (const ExperimentConfig& c : points)
      rows.push_back(eval_scheme(c, s, net));
  return rows;
}

void write_summary_csv(const std::vector<EvalRow>& rows, std::ostream& out) {
  out << "scheme,k_max,t_rep,episodes,mse_mean,mse_std,tx_mean,decode_rate\n";
  for (const EvalRow& r : rows)
    out << scheme_name(r.scheme) << ',' << r.k_max << ',' << g9(r.t_rep_s)
        << ',' << r.summary.episodes << ',' << g9(r.summary.mse_mean) << ','
        << g9(r.summary.mse_std) << ',' << g9(r.summary.tx_mean) << ','
        << g9(r.summary.decode_rate) << '\n';
}

void write_trajectory_csv(const std::vector<EpisodeResult>& episodes,
                          std::ostream& out) {
  out << "episode,tti,sample_j,t_s,px,py,pz,gx,gy,gz,err_m\n";
  for (std::size_t e = 0; e < episodes.size(); ++e)
    for (const TrackSample& s : episodes[e].samples)
      out << e << ',' << s.tti << ',' << s.j << ',' << g9(s.t) << ','
          << g9(s.p.x) << ',' << g9(s.p.y) << ',' << g9(s.p.z) << ','
          << g9(s.g.x) << ',' << g9(s.g.y) << ',' << g9(s.g.z) << ','
          << g9(s.err) << '\n';
}

void write_learning_csv(const std::vector<dqn::LearningPoint>& curve,
                        std::ostream& out) {
  out << "episode,cum_reward,epsilon\n";
  for (const dqn::LearningPoint& p : curve)
    out << p.episode << ',' << g9(p.cum_reward) << ',' << g9(p.epsilon)
        << '\n';
}

dqn::TrainResult cmd_train(const ExperimentConfig& cfg) {
  dqn::TrainResult res = train_agent(cfg);
  fs::create_directories(cfg.out_dir);
  dqn::save_network(res.net, (fs::path(cfg.out_dir) / "model.bin").string());
  write_file(fs::path(cfg.out_dir) / "learning.csv",
             [&](std::ostream& o) { write_learning_csv(res.curve, o); });
  return res;
}

void cmd_eval(const ExperimentConfig& cfg, const dqn::QNetwork* model) {
  cfg.validate();

  std::optional<dqn::TrainResult> trained;
  const dqn::QNetwork* net = model;
  const bool wants_dqn =
      std::any_of(cfg.schemes.begin(), cfg.schemes.end(), scheme_uses_dqn);
  if (wants_dqn && net == nullptr) {
    trained = train_agent(cfg);
    net = &trained->net;
  }

  fs::create_directories(cfg.out_dir);
  const fs::path out_dir(cfg.out_dir);

  std::vector<EvalRow> rows;
  rows.reserve(cfg.schemes.size());
  for (std::size_t i = 0; i < cfg.schemes.size(); ++i) {
    const Scheme s = cfg.schemes[i];
    const bool want_traj = cfg.trajectory_episodes > 0;
    BatchResult kept;
    rows.push_back(eval_scheme(cfg, s, net, want_traj ? &kept : nullptr));
    if (want_traj) {
      const fs::path traj =
          i == 0 ? out_dir / "trajectory.csv"
                 : out_dir / (std::string("trajectory_") + scheme_name(s) +
                              ".csv");
      write_file(traj, [&](std::ostream& o) {
        write_trajectory_csv(kept.episodes, o);
      });
    }
  }
  write_file(out_dir / "summary.csv",
             [&](std::ostream& o) { write_summary_csv(rows, o); });

  if (cfg.queue_log) {
    const auto it = std::find_if(cfg.schemes.begin(), cfg.schemes.end(),
                                 scheme_uses_semantic_queue);
    if (it != cfg.schemes.end())
      write_queue_log(cfg, *it, net, out_dir / "queue_log.csv");
  }
}

void cmd_sweep(const ExperimentConfig& cfg, SweepAxis axis,
               const std::vector<double>& values,
               const dqn::QNetwork* model) {
  cfg.validate();

  std::optional<dqn::TrainResult> trained;
  const dqn::QNetwork* net = model;
  const bool wants_dqn =
      std::any_of(cfg.schemes.begin(), cfg.schemes.end(), scheme_uses_dqn);
  if (wants_dqn && net == nullptr) {
    trained = train_agent(cfg);
    net = &trained->net;
  }

  const std::vector<EvalRow> rows = run_sweep(cfg, axis, values, net);
  fs::create_directories(cfg.out_dir);
  write_file(fs::path(cfg.out_dir) / "sweep.csv",
             [&](std::ostream& o) { write_summary_csv(rows, o); });
}

}  // namespace gsrc::experiment
