#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gsrc/agent.hpp"
#include "gsrc/rng.hpp"
#include "gsrc/vec3.hpp"
#include "gsrc/velocity_grid.hpp"

namespace gsrc::dqn {

// Network input: position components over a scene scale, time over the
// episode horizon.
struct FeatureScale {
  double pos_m = 100.0;
  double time_s = 99e-3;

  Eigen::Vector4d features(const Vec3& p, double t) const;
};

// Fully connected ReLU net with a linear output layer, double precision.
class QNetwork {
 public:
  explicit QNetwork(std::vector<int> sizes);  // zero parameters
  static QNetwork glorot(std::vector<int> sizes, Rng& rng);

  const std::vector<int>& sizes() const { return sizes_; }
  int inputs() const { return sizes_.front(); }
  int outputs() const { return sizes_.back(); }

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& x) const;  // columns

  // Flat view: per layer, weights row by row, then biases.
  std::size_t parameter_count() const;
  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::VectorXd& flat);
  bool finite() const;

  const std::vector<Eigen::MatrixXd>& weights() const { return w_; }
  const std::vector<Eigen::VectorXd>& biases() const { return b_; }

 private:
  std::vector<int> sizes_;
  std::vector<Eigen::MatrixXd> w_;  // w_[l] is sizes_[l+1] x sizes_[l]
  std::vector<Eigen::VectorXd> b_;
};

// Greedy action on the net's outputs; ties resolve to the lowest index.
int greedy_action(const QNetwork& net, const Eigen::VectorXd& x);

// Epsilon-greedy. epsilon <= 0 is pure greedy and consumes no randomness;
// otherwise one Bernoulli draw decides, plus one integer draw when exploring.
int select_action(const QNetwork& net, const Eigen::VectorXd& x, double epsilon,
                  Rng& rng);

struct Transition {
  Vec3 p;
  double t = 0.0;
  int action = 0;
  double reward = 0.0;
  Vec3 p_next;
  double t_next = 0.0;
};

// Fixed-capacity ring; sampling is uniform with replacement and requires the
// warm-up fill first.
class ReplayBuffer {
 public:
  ReplayBuffer(int capacity, int warmup);

  void push(const Transition& tr);
  int size() const { return static_cast<int>(buf_.size()); }
  int capacity() const { return capacity_; }
  bool warm() const { return size() >= warmup_; }
  std::vector<Transition> sample(int n, Rng& rng) const;

 private:
  int capacity_;
  int warmup_;
  int head_ = 0;
  std::vector<Transition> buf_;
};

// Half mean squared TD error over a batch against a frozen target net, and
// its gradient in the flat parameter layout.
struct TdStep {
  double loss = 0.0;
  Eigen::VectorXd grad;
};

TdStep td_gradient(const QNetwork& net, const QNetwork& target,
                   const std::vector<Transition>& batch, double gamma,
                   const FeatureScale& scale);

class RmsProp {
 public:
  RmsProp(std::size_t n, double lr, double rho, double eps);

  void step(Eigen::VectorXd& params, const Eigen::VectorXd& grad);
  const Eigen::VectorXd& v() const { return v_; }

 private:
  double lr_, rho_, eps_;
  Eigen::VectorXd v_;
};

struct TrainerConfig {
  std::vector<int> hidden{64, 64};
  double gamma = 0.1;
  double lr = 1e-4;
  double rho = 0.99;
  double rms_eps = 1e-8;
  double eps_start = 1.0;
  double eps_end = 0.05;
  double eps_decay_frac = 0.8;  // of the episode budget
  int replay_capacity = 10000;
  int batch_size = 64;
  int warmup = 500;
  // Minibatch updates per environment step. The step size is the scarce
  // resource here; replaying each transition several times buys parameter
  // travel at wall-clock cost without touching the optimizer settings.
  int updates_per_step = 1;
  int target_sync_episodes = 10;
  int episodes = 2000;
  // Feature units. Position in tens of meters and time in slots keeps the
  // useful variation O(1), so per-slot discrimination does not demand huge
  // first-layer weights the small step size cannot reach.
  double pos_scale_m = 10.0;
  double time_scale_s = 1e-3;
  // Rewards are divided by this inside the trainer only. Greedy behavior is
  // invariant under positive reward scaling, but Q magnitudes (and thus the
  // parameter travel the fixed step size must cover) shrink with it.
  double reward_scale = 10.0;

  void validate() const;
};

double epsilon_at(const TrainerConfig& cfg, int episode);  // 0-based

// Episode environment the trainer drives; the environment owns per-episode
// seeding and the reward definition.
class ControlEnv {
 public:
  virtual ~ControlEnv() = default;

  struct Step {
    double reward;
    AgentState next;
  };

  virtual AgentState reset(int episode) = 0;
  virtual Step step(int action) = 0;
  virtual bool done() const = 0;
  virtual int action_count() const = 0;
  virtual double horizon_s() const = 0;
};

struct LearningPoint {
  int episode;
  double cum_reward;
  double epsilon;
};

struct TrainResult {
  QNetwork net;
  std::vector<LearningPoint> curve;
};

// Deep Q-learning with a frozen target net, replay and RMSprop. Throws if
// the parameters stop being finite.
TrainResult train(ControlEnv& env, const TrainerConfig& cfg, std::uint64_t seed);

// Wraps a trained net as a command policy over the velocity grid.
Policy greedy_policy(QNetwork net, ActionSpace actions, FeatureScale scale);

// Binary model file: magic, version, layer sizes, flat parameters.
void save_network(const QNetwork& net, const std::string& path);
QNetwork load_network(const std::string& path);

}  // namespace gsrc::dqn
