#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "gsrc/config.hpp"

namespace gsrc::experiment {

// Trainer-facing environment running full scheme episodes: actions index the
// velocity grid, rewards are the per-slot negated tracking errors.
class SchemeEnv final : public dqn::ControlEnv {
 public:
  SchemeEnv(Scheme scheme, const TargetTrajectory& target, EngineConfig cfg,
            ChannelModel& channel, std::uint64_t seed_base);

  AgentState reset(int episode) override;
  Step step(int action) override;
  bool done() const override;
  int action_count() const override { return actions_.size(); }
  double horizon_s() const override { return cfg_.clock.horizon(); }

 private:
  Scheme scheme_;
  const TargetTrajectory* target_;
  EngineConfig cfg_;
  ChannelModel* channel_;
  ActionSpace actions_;
  std::uint64_t seed_base_;
  std::optional<EpisodeRunner> runner_;
};

// Target path / channel model described by the config.
TargetTrajectory make_target(const ExperimentConfig& cfg);
std::unique_ptr<ChannelModel> make_channel(const ExperimentConfig& cfg);

// Trains the command agent on the trainer scheme's full pipeline.
dqn::TrainResult train_agent(const ExperimentConfig& cfg);

// One summary row; the repetition columns echo the settings the row was
// produced under.
struct EvalRow {
  Scheme scheme;
  int k_max;
  double t_rep_s;
  BatchSummary summary;
};

// Evaluates one scheme over cfg.episodes. DQN schemes need `net`. When
// `keep` is given, the first cfg.trajectory_episodes episodes land there.
EvalRow eval_scheme(const ExperimentConfig& cfg, Scheme scheme,
                    const dqn::QNetwork* net, BatchResult* keep = nullptr);

enum class SweepAxis { k_max, t_rep };
SweepAxis sweep_axis_from_name(std::string_view name);  // "kmax" / "trep"
const char* sweep_axis_name(SweepAxis axis);

// Re-evaluates every configured scheme at each axis value. Rows group by
// scheme in config order, values in the order given.
std::vector<EvalRow> run_sweep(const ExperimentConfig& cfg, SweepAxis axis,
                               const std::vector<double>& values,
                               const dqn::QNetwork* net);

// CSV writers: 9 significant digits, LF line ends, header row first.
void write_summary_csv(const std::vector<EvalRow>& rows, std::ostream& out);
void write_trajectory_csv(const std::vector<EpisodeResult>& episodes,
                          std::ostream& out);
void write_learning_csv(const std::vector<dqn::LearningPoint>& curve,
                        std::ostream& out);

// Command fronts behind the shared-library API and the CLI. Each validates
// the config, creates the output directory and writes its artifacts.
//
// cmd_train:  model.bin, learning.csv
// cmd_eval:   summary.csv, trajectory.csv (first scheme) and
//             trajectory_<scheme>.csv for the others, queue_log.csv when
//             queue logging is on; trains in process if a DQN scheme is
//             listed and no model was supplied.
// cmd_sweep:  sweep.csv (summary schema)
dqn::TrainResult cmd_train(const ExperimentConfig& cfg);
void cmd_eval(const ExperimentConfig& cfg, const dqn::QNetwork* model);
void cmd_sweep(const ExperimentConfig& cfg, SweepAxis axis,
               const std::vector<double>& values, const dqn::QNetwork* model);

}  // namespace gsrc::experiment
