#include "gsrc/dqn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <utility>

namespace gsrc::dqn {

Eigen::Vector4d FeatureScale::features(const Vec3& p, double t) const {
  return {p.x / pos_m, p.y / pos_m, p.z / pos_m, t / time_s};
}

QNetwork::QNetwork(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2)
    throw std::invalid_argument("network needs input and output layers");
  for (int s : sizes_)
    if (s < 1) throw std::invalid_argument("layer sizes must be positive");
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    w_.push_back(Eigen::MatrixXd::Zero(sizes_[l + 1], sizes_[l]));
    b_.push_back(Eigen::VectorXd::Zero(sizes_[l + 1]));
  }
}

QNetwork QNetwork::glorot(std::vector<int> sizes, Rng& rng) {
  QNetwork net(std::move(sizes));
  for (std::size_t l = 0; l < net.w_.size(); ++l) {
    Eigen::MatrixXd& w = net.w_[l];
    const double r = std::sqrt(6.0 / (w.rows() + w.cols()));
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = rng.uniform(-r, r);
  }
  return net;
}

Eigen::VectorXd QNetwork::forward(const Eigen::VectorXd& x) const {
  if (x.size() != inputs()) throw std::invalid_argument("bad input size");
  Eigen::VectorXd h = x;
  for (std::size_t l = 0; l < w_.size(); ++l) {
    h = w_[l] * h + b_[l];
    if (l + 1 < w_.size()) h = h.cwiseMax(0.0);
  }
  return h;
}

Eigen::MatrixXd QNetwork::forward_batch(const Eigen::MatrixXd& x) const {
  if (x.rows() != inputs()) throw std::invalid_argument("bad input size");
  Eigen::MatrixXd h = x;
  for (std::size_t l = 0; l < w_.size(); ++l) {
    h = (w_[l] * h).colwise() + b_[l];
    if (l + 1 < w_.size()) h = h.cwiseMax(0.0);
  }
  return h;
}

std::size_t QNetwork::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < w_.size(); ++l)
    n += static_cast<std::size_t>(w_[l].size()) + b_[l].size();
  return n;
}

Eigen::VectorXd QNetwork::parameters() const {
  Eigen::VectorXd flat(parameter_count());
  Eigen::Index k = 0;
  for (std::size_t l = 0; l < w_.size(); ++l) {
    for (Eigen::Index i = 0; i < w_[l].rows(); ++i)
      for (Eigen::Index j = 0; j < w_[l].cols(); ++j) flat(k++) = w_[l](i, j);
    for (Eigen::Index i = 0; i < b_[l].size(); ++i) flat(k++) = b_[l](i);
  }
  return flat;
}

void QNetwork::set_parameters(const Eigen::VectorXd& flat) {
  if (static_cast<std::size_t>(flat.size()) != parameter_count())
    throw std::invalid_argument("parameter vector size mismatch");
  Eigen::Index k = 0;
  for (std::size_t l = 0; l < w_.size(); ++l) {
    for (Eigen::Index i = 0; i < w_[l].rows(); ++i)
      for (Eigen::Index j = 0; j < w_[l].cols(); ++j) w_[l](i, j) = flat(k++);
    for (Eigen::Index i = 0; i < b_[l].size(); ++i) b_[l](i) = flat(k++);
  }
}

bool QNetwork::finite() const {
  for (std::size_t l = 0; l < w_.size(); ++l)
    if (!w_[l].allFinite() || !b_[l].allFinite()) return false;
  return true;
}

int greedy_action(const QNetwork& net, const Eigen::VectorXd& x) {
  const Eigen::VectorXd q = net.forward(x);
  int best = 0;
  for (Eigen::Index a = 1; a < q.size(); ++a)
    if (q(a) > q(best)) best = static_cast<int>(a);
  return best;
}

int select_action(const QNetwork& net, const Eigen::VectorXd& x, double epsilon,
                  Rng& rng) {
  if (epsilon > 0.0 && rng.bernoulli(epsilon))
    return rng.uniform_int(net.outputs());
  return greedy_action(net, x);
}

ReplayBuffer::ReplayBuffer(int capacity, int warmup)
    : capacity_(capacity), warmup_(warmup) {
  if (capacity < 1) throw std::invalid_argument("replay capacity must be >= 1");
  if (warmup < 1 || warmup > capacity)
    throw std::invalid_argument("replay warm-up must be in [1, capacity]");
  buf_.reserve(capacity);
}

void ReplayBuffer::push(const Transition& tr) {
  if (size() < capacity_) {
    buf_.push_back(tr);
  } else {
    buf_[head_] = tr;
    head_ = (head_ + 1) % capacity_;
  }
}

std::vector<Transition> ReplayBuffer::sample(int n, Rng& rng) const {
  if (!warm()) throw std::logic_error("replay buffer not warmed up");
  if (n < 1) throw std::invalid_argument("sample size must be positive");
  std::vector<Transition> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(buf_[rng.uniform_int(size())]);
  return out;
}

TdStep td_gradient(const QNetwork& net, const QNetwork& target,
                   const std::vector<Transition>& batch, double gamma,
                   const FeatureScale& scale) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  if (net.sizes() != target.sizes())
    throw std::invalid_argument("online and target nets differ in shape");
  const int nb = static_cast<int>(batch.size());
  const int in = net.inputs();
  const int out = net.outputs();

  Eigen::MatrixXd x(in, nb), xn(in, nb);
  for (int j = 0; j < nb; ++j) {
    x.col(j) = scale.features(batch[j].p, batch[j].t);
    xn.col(j) = scale.features(batch[j].p_next, batch[j].t_next);
  }

  // Bootstrap values come from the frozen net and carry no gradient.
  const Eigen::MatrixXd qn = target.forward_batch(xn);
  Eigen::VectorXd y(nb);
  for (int j = 0; j < nb; ++j)
    y(j) = batch[j].reward + gamma * qn.col(j).maxCoeff();

  const auto& w = net.weights();
  const auto& b = net.biases();
  const int layers = static_cast<int>(w.size());
  std::vector<Eigen::MatrixXd> act(layers + 1);
  act[0] = x;
  for (int l = 0; l < layers; ++l) {
    Eigen::MatrixXd z = (w[l] * act[l]).colwise() + b[l];
    act[l + 1] = (l + 1 < layers) ? z.cwiseMax(0.0) : std::move(z);
  }

  TdStep res;
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(out, nb);
  for (int j = 0; j < nb; ++j) {
    const int a = batch[j].action;
    if (a < 0 || a >= out) throw std::invalid_argument("action out of range");
    const double d = act[layers](a, j) - y(j);
    res.loss += d * d;
    g(a, j) = d / nb;
  }
  res.loss /= 2.0 * nb;

  std::vector<Eigen::MatrixXd> dw(layers);
  std::vector<Eigen::VectorXd> db(layers);
  for (int l = layers - 1; l >= 0; --l) {
    dw[l] = g * act[l].transpose();
    db[l] = g.rowwise().sum();
    if (l > 0) {
      const Eigen::MatrixXd mask =
          (act[l].array() > 0.0).cast<double>().matrix();
      g = (w[l].transpose() * g).cwiseProduct(mask);
    }
  }

  res.grad.resize(net.parameter_count());
  Eigen::Index k = 0;
  for (int l = 0; l < layers; ++l) {
    for (Eigen::Index i = 0; i < dw[l].rows(); ++i)
      for (Eigen::Index j = 0; j < dw[l].cols(); ++j) res.grad(k++) = dw[l](i, j);
    for (Eigen::Index i = 0; i < db[l].size(); ++i) res.grad(k++) = db[l](i);
  }
  return res;
}

RmsProp::RmsProp(std::size_t n, double lr, double rho, double eps)
    : lr_(lr), rho_(rho), eps_(eps), v_(Eigen::VectorXd::Zero(n)) {
  if (!(lr > 0.0)) throw std::invalid_argument("learning rate must be positive");
  if (!(rho >= 0.0 && rho < 1.0))
    throw std::invalid_argument("rho must lie in [0, 1)");
  if (!(eps > 0.0)) throw std::invalid_argument("rms eps must be positive");
}

void RmsProp::step(Eigen::VectorXd& params, const Eigen::VectorXd& grad) {
  if (params.size() != v_.size() || grad.size() != v_.size())
    throw std::invalid_argument("optimizer size mismatch");
  v_ = rho_ * v_ + (1.0 - rho_) * grad.cwiseProduct(grad);
  params.array() -= lr_ * grad.array() / (v_.array().sqrt() + eps_);
}

void TrainerConfig::validate() const {
  for (int h : hidden)
    if (h < 1) throw std::invalid_argument("hidden sizes must be positive");
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw std::invalid_argument("gamma must lie in [0, 1]");
  if (!(lr > 0.0)) throw std::invalid_argument("learning rate must be positive");
  if (!(rho >= 0.0 && rho < 1.0))
    throw std::invalid_argument("rho must lie in [0, 1)");
  if (!(rms_eps > 0.0)) throw std::invalid_argument("rms eps must be positive");
  if (!(eps_start >= 0.0 && eps_start <= 1.0) ||
      !(eps_end >= 0.0 && eps_end <= 1.0) || eps_end > eps_start)
    throw std::invalid_argument("epsilon schedule must decay within [0, 1]");
  if (!(eps_decay_frac > 0.0 && eps_decay_frac <= 1.0))
    throw std::invalid_argument("eps_decay_frac must lie in (0, 1]");
  if (replay_capacity < 1 || warmup < 1 || warmup > replay_capacity)
    throw std::invalid_argument("replay sizes are inconsistent");
  if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  if (updates_per_step < 1)
    throw std::invalid_argument("updates per step must be >= 1");
  if (target_sync_episodes < 1)
    throw std::invalid_argument("target sync period must be >= 1");
  if (episodes < 1) throw std::invalid_argument("episodes must be >= 1");
  if (!(pos_scale_m > 0.0))
    throw std::invalid_argument("position scale must be positive");
  if (!(time_scale_s > 0.0))
    throw std::invalid_argument("time scale must be positive");
  if (!(reward_scale > 0.0))
    throw std::invalid_argument("reward scale must be positive");
}

double epsilon_at(const TrainerConfig& cfg, int episode) {
  const int decay = std::max(
      1, static_cast<int>(std::floor(cfg.eps_decay_frac * cfg.episodes)));
  if (episode >= decay) return cfg.eps_end;
  return cfg.eps_start +
         (cfg.eps_end - cfg.eps_start) * (static_cast<double>(episode) / decay);
}

TrainResult train(ControlEnv& env, const TrainerConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const int n_actions = env.action_count();
  if (n_actions < 1) throw std::invalid_argument("environment has no actions");

  std::vector<int> sizes;
  sizes.push_back(4);
  sizes.insert(sizes.end(), cfg.hidden.begin(), cfg.hidden.end());
  sizes.push_back(n_actions);

  Rng init_rng(derive_seed(seed, 1));
  Rng act_rng(derive_seed(seed, 2));
  Rng replay_rng(derive_seed(seed, 3));

  QNetwork net = QNetwork::glorot(sizes, init_rng);
  {
    // Zero output layer: Q starts identically zero, so early TD targets are
    // pure rewards instead of chasing random-init head noise.
    Eigen::VectorXd flat = net.parameters();
    const auto& sz = net.sizes();
    const std::size_t last = static_cast<std::size_t>(sz[sz.size() - 2]) * sz.back() + sz.back();
    flat.tail(static_cast<Eigen::Index>(last)).setZero();
    net.set_parameters(flat);
  }
  QNetwork target = net;
  ReplayBuffer replay(cfg.replay_capacity, cfg.warmup);
  RmsProp opt(net.parameter_count(), cfg.lr, cfg.rho, cfg.rms_eps);
  const FeatureScale scale{cfg.pos_scale_m, cfg.time_scale_s};

  TrainResult out{net, {}};
  out.curve.reserve(cfg.episodes);
  for (int e = 0; e < cfg.episodes; ++e) {
    const double eps = epsilon_at(cfg, e);
    AgentState s = env.reset(e);
    double cum = 0.0;
    while (!env.done()) {
      const Eigen::Vector4d x = scale.features(s.position, s.t);
      const int a = select_action(net, x, eps, act_rng);
      const ControlEnv::Step st = env.step(a);
      replay.push({s.position, s.t, a, st.reward / cfg.reward_scale,
                   st.next.position, st.next.t});
      cum += st.reward;  // the curve reports env units, not trainer units
      s = st.next;
      if (replay.warm()) {
        for (int u = 0; u < cfg.updates_per_step; ++u) {
          const auto batch = replay.sample(cfg.batch_size, replay_rng);
          const TdStep td = td_gradient(net, target, batch, cfg.gamma, scale);
          Eigen::VectorXd p = net.parameters();
          opt.step(p, td.grad);
          net.set_parameters(p);
        }
      }
    }
    if (!net.finite())
      throw std::runtime_error("q-network diverged at episode " +
                               std::to_string(e));
    if ((e + 1) % cfg.target_sync_episodes == 0) target = net;
    out.curve.push_back({e, cum, eps});
  }
  out.net = std::move(net);
  return out;
}

Policy greedy_policy(QNetwork net, ActionSpace actions, FeatureScale scale) {
  if (net.outputs() != actions.size())
    throw std::invalid_argument("network outputs do not match the action grid");
  return [net = std::move(net), actions = std::move(actions),
          scale](const AgentState& s, int) {
    const int a = greedy_action(net, scale.features(s.position, s.t));
    return actions.velocity(a);
  };
}

namespace {

constexpr std::uint32_t kMagic = 0x43525347u;  // "GSRC" little-endian
constexpr std::uint32_t kVersion = 1u;

void put_u32(std::ofstream& f, std::uint32_t v) {
  char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  f.write(buf, 4);
}

void put_f64(std::ofstream& f, double d) {
  const std::uint64_t v = std::bit_cast<std::uint64_t>(d);
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  f.write(buf, 8);
}

std::uint32_t get_u32(std::ifstream& f) {
  unsigned char buf[4];
  if (!f.read(reinterpret_cast<char*>(buf), 4))
    throw std::runtime_error("model file truncated");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf[i]) << (8 * i);
  return v;
}

double get_f64(std::ifstream& f) {
  unsigned char buf[8];
  if (!f.read(reinterpret_cast<char*>(buf), 8))
    throw std::runtime_error("model file truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

}  // namespace

void save_network(const QNetwork& net, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open model file for writing: " + path);
  put_u32(f, kMagic);
  put_u32(f, kVersion);
  put_u32(f, static_cast<std::uint32_t>(net.sizes().size()));
  for (int s : net.sizes()) put_u32(f, static_cast<std::uint32_t>(s));
  const Eigen::VectorXd flat = net.parameters();
  for (Eigen::Index i = 0; i < flat.size(); ++i) put_f64(f, flat(i));
  f.flush();
  if (!f) throw std::runtime_error("failed writing model file: " + path);
}

QNetwork load_network(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open model file: " + path);
  if (get_u32(f) != kMagic)
    throw std::runtime_error("not a model file: " + path);
  if (get_u32(f) != kVersion)
    throw std::runtime_error("unsupported model version in " + path);
  const std::uint32_t n_layers = get_u32(f);
  if (n_layers < 2 || n_layers > 64)
    throw std::runtime_error("implausible layer count in " + path);
  std::vector<int> sizes(n_layers);
  for (auto& s : sizes) {
    const std::uint32_t v = get_u32(f);
    if (v < 1 || v > 1000000)
      throw std::runtime_error("implausible layer size in " + path);
    s = static_cast<int>(v);
  }
  QNetwork net(sizes);
  Eigen::VectorXd flat(net.parameter_count());
  for (Eigen::Index i = 0; i < flat.size(); ++i) flat(i) = get_f64(f);
  char extra;
  if (f.read(&extra, 1))
    throw std::runtime_error("trailing bytes in model file " + path);
  net.set_parameters(flat);
  if (!net.finite())
    throw std::runtime_error("model file holds non-finite parameters: " + path);
  return net;
}

}  // namespace gsrc::dqn
