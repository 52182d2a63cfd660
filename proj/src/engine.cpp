#include "gsrc/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <utility>

#include "gsrc/tucf.hpp"

namespace gsrc {

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::tucf: return "tucf";
    case Scheme::vaqom: return "vaqom";
    case Scheme::deeppro: return "deeppro";
    case Scheme::gsrc: return "gsrc";
  }
  throw std::logic_error("unknown scheme");
}

namespace {

std::string lower_squash(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '-') c = '_';
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

Scheme scheme_from_name(std::string_view name) {
  const std::string n = lower_squash(name);
  if (n == "tucf") return Scheme::tucf;
  if (n == "vaqom" || n == "va_qom") return Scheme::vaqom;
  if (n == "deeppro" || n == "deep_pro") return Scheme::deeppro;
  if (n == "gsrc") return Scheme::gsrc;
  throw std::invalid_argument("unknown scheme '" + std::string(name) +
                              "' (expected tucf, vaqom, deeppro or gsrc)");
}

bool scheme_uses_dqn(Scheme s) {
  return s == Scheme::deeppro || s == Scheme::gsrc;
}

bool scheme_uses_repetition(Scheme s) {
  return s == Scheme::deeppro || s == Scheme::gsrc;
}

bool scheme_uses_semantic_queue(Scheme s) {
  return s == Scheme::vaqom || s == Scheme::gsrc;
}

void EngineConfig::validate() const {
  clock.validate();
  velocities.validate();
  if (rep) rep->validate(clock);
  if (q_max < 1) throw std::invalid_argument("q_max must be at least 1");
}

EpisodeRunner::EpisodeRunner(Scheme scheme, const TargetTrajectory& target,
                             const EngineConfig& cfg, ChannelModel& channel,
                             Rng rng)
    : scheme_(scheme),
      target_(&target),
      cfg_(cfg),
      channel_(&channel),
      rng_(std::move(rng)),
      log_(target.waypoint(0)),
      history_(target.waypoint(0)),
      queue_(cfg.q_max),
      latency_(static_cast<std::size_t>(cfg.clock.n_tti)) {
  cfg_.validate();
  if (target.waypoint_count() != cfg_.clock.n_tti + 1)
    throw std::invalid_argument("trajectory does not span the TTI horizon");
}

AgentState EpisodeRunner::agent_state() const {
  return {log_.end_position(), cfg_.clock.tti_start(next_tti_)};
}

Vec3 EpisodeRunner::current_position() const { return log_.end_position(); }

void EpisodeRunner::deliver_at(const CncRecord& cnc, double arrival_time) {
  // A later copy of the same slot's command may land earlier; keep only the
  // earliest pending arrival per slot.
  for (auto it = pending_.begin(); it != pending_.end(); ++it) {
    if (it->cnc.tti == cnc.tti) {
      if (arrival_time >= it->t) return;
      pending_.erase(it);
      break;
    }
  }
  const auto pos = std::upper_bound(
      pending_.begin(), pending_.end(), arrival_time,
      [](double t, const PendingArrival& p) { return t < p.t; });
  pending_.insert(pos, PendingArrival{cnc, arrival_time});
}

void EpisodeRunner::process_arrival(const CncRecord& cnc, double t) {
  if (scheme_uses_semantic_queue(scheme_)) {
    queue_.insert(cnc);
    queue_.reorder(t, log_.end_position(), history_, cfg_.clock);
    if (cfg_.queue_hook) cfg_.queue_hook(t, queue_);
    vel_ = queue_.head().cnc.velocity;
  } else {
    vel_ = cnc.velocity;
    slot_active_ = true;
    exec_end_ = t + cfg_.clock.tti_s;
  }
}

void EpisodeRunner::advance_to(double t_target) {
  const bool semantic = scheme_uses_semantic_queue(scheme_);
  for (;;) {
    double t_ev = 0.0;
    int kind = 0;  // 1 = execution expiry, 2 = arrival (wins ties)
    if (!semantic && slot_active_ && exec_end_ < t_target) {
      t_ev = exec_end_;
      kind = 1;
    }
    if (!pending_.empty() && pending_.front().t < t_target &&
        (kind == 0 || pending_.front().t <= t_ev)) {
      t_ev = pending_.front().t;
      kind = 2;
    }
    if (kind == 0) break;
    if (t_ev > now_) {
      log_.append(vel_, now_, t_ev);
      now_ = t_ev;
    }
    if (kind == 2) {
      CncRecord c = pending_.front().cnc;
      pending_.erase(pending_.begin());
      c.arrival_time = t_ev;
      process_arrival(c, t_ev);
    } else {
      vel_ = {0.0, 0.0, 0.0};
      slot_active_ = false;
    }
  }
  if (t_target > now_) {
    log_.append(vel_, now_, t_target);
    now_ = t_target;
  }
}

double EpisodeRunner::step(const Vec3& m) {
  if (done() || finished_) throw std::logic_error("episode already finished");
  const int i = next_tti_;
  const double t0 = cfg_.clock.tti_start(i);
  const double t1 = cfg_.clock.tti_start(i + 1);

  // Semantic receivers rescore the queue at every slot start.
  if (scheme_uses_semantic_queue(scheme_) && !queue_.empty()) {
    queue_.reorder(t0, log_.end_position(), history_, cfg_.clock);
    if (cfg_.queue_hook) cfg_.queue_hook(t0, queue_);
    vel_ = queue_.head().cnc.velocity;
  }

  const CncRecord cnc{i, m, t0, std::nullopt};
  if (scheme_uses_repetition(scheme_) && cfg_.rep) {
    const auto out = repetition::run_proactive(cnc, cfg_.clock, *this, *channel_,
                                               *cfg_.rep, cfg_.bs_pos, rng_);
    tx_ += out.attempts;
    for (const auto& a : out.draws)
      if (a.draw.decoded) ++dec_;
    if (out.earliest_arrival) latency_[i - 1] = *out.earliest_arrival - t0;
  } else {
    const ChannelDraw draw = channel_->sample(cfg_.bs_pos, log_.end_position(), rng_);
    ++tx_;
    if (draw.decoded) {
      deliver_at(cnc, t0 + draw.tx_time_s);
      ++dec_;
      latency_[i - 1] = draw.tx_time_s;
    }
    advance_to(t1);
  }

  history_.record(log_.end_position());
  ++next_tti_;
  return -distance(log_.end_position(), target_->waypoint(i));
}

EpisodeResult EpisodeRunner::finish() {
  if (!done()) throw std::logic_error("episode still in progress");
  if (finished_) throw std::logic_error("episode already finished");
  finished_ = true;
  return finish_episode(std::move(log_), *target_, cfg_.clock, tx_, dec_,
                        std::move(latency_));
}

EpisodeResult run_episode(Scheme scheme, const TargetTrajectory& target,
                          const EngineConfig& cfg, ChannelModel& channel,
                          const Policy& policy, Rng rng) {
  const bool dqn = scheme_uses_dqn(scheme);
  if (dqn && !policy)
    throw std::invalid_argument("scheme requires a command policy");
  EpisodeRunner runner(scheme, target, cfg, channel, std::move(rng));
  while (!runner.done()) {
    const AgentState s = runner.agent_state();
    const int i = runner.next_tti();
    const Vec3 m = dqn ? policy(s, i)
                       : tucf::generate(s.position, target.waypoint(i),
                                        cfg.clock.tti_s, cfg.velocities);
    runner.step(m);
  }
  return runner.finish();
}

BatchResult run_batch(Scheme scheme, const TargetTrajectory& target,
                      const EngineConfig& cfg, ChannelModel& channel,
                      const Policy& policy, const BatchOptions& opts) {
  if (opts.episodes < 1)
    throw std::invalid_argument("episode count must be positive");
  cfg.validate();

  const int n = opts.episodes;
  int threads = opts.threads;
  if (threads <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = hw ? static_cast<int>(hw) : 1;
  }
  threads = std::clamp(threads, 1, n);

  const int n_keep = std::clamp(opts.keep_first, 0, n);
  std::vector<double> ep_mse(n), ep_tx(n), ep_dec(n);
  std::vector<std::optional<EpisodeResult>> kept(n_keep);
  std::atomic<int> cursor{0};
  std::mutex err_mu;
  std::exception_ptr err;

  const auto worker = [&] {
    for (;;) {
      const int e = cursor.fetch_add(1);
      if (e >= n) return;
      try {
        Rng rng(derive_seed(opts.base_seed, static_cast<std::uint64_t>(e)));
        EpisodeResult r =
            run_episode(scheme, target, cfg, channel, policy, std::move(rng));
        ep_mse[e] = r.mse;
        ep_tx[e] = static_cast<double>(r.total_transmissions) / cfg.clock.n_tti;
        ep_dec[e] = r.total_transmissions > 0
                        ? static_cast<double>(r.decode_count) / r.total_transmissions
                        : 0.0;
        if (e < n_keep) kept[e] = std::move(r);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
        return;
      }
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (err) std::rethrow_exception(err);

  // Serial, index-ordered aggregation: identical output for any thread count.
  BatchResult out;
  out.summary.episodes = n;
  out.summary.mse_mean = std::accumulate(ep_mse.begin(), ep_mse.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : ep_mse) {
    const double d = v - out.summary.mse_mean;
    ss += d * d;
  }
  out.summary.mse_std = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
  out.summary.tx_mean = std::accumulate(ep_tx.begin(), ep_tx.end(), 0.0) / n;
  out.summary.decode_rate =
      std::accumulate(ep_dec.begin(), ep_dec.end(), 0.0) / n;
  out.episode_mse = std::move(ep_mse);
  out.episodes.reserve(n_keep);
  for (auto& r : kept) out.episodes.push_back(std::move(*r));
  return out;
}

TrajectoryKind trajectory_kind_from_name(std::string_view name) {
  const std::string n = lower_squash(name);
  if (n == "random_walk") return TrajectoryKind::random_walk;
  if (n == "waypoint_demo") return TrajectoryKind::waypoint_demo;
  throw std::invalid_argument("unknown trajectory kind '" + std::string(name) +
                              "' (expected random_walk or waypoint_demo)");
}

const char* trajectory_kind_name(TrajectoryKind k) {
  switch (k) {
    case TrajectoryKind::random_walk: return "random_walk";
    case TrajectoryKind::waypoint_demo: return "waypoint_demo";
  }
  throw std::logic_error("unknown trajectory kind");
}

TargetTrajectory make_trajectory(TrajectoryKind kind, const SimClock& clock,
                                 const VelocitySets& sets, Vec3 start,
                                 double radius_m, std::uint64_t seed) {
  clock.validate();
  sets.validate();
  std::vector<Vec3> wps;
  wps.reserve(static_cast<std::size_t>(clock.n_tti) + 1);
  wps.push_back(start);

  if (kind == TrajectoryKind::waypoint_demo) {
    // Fixed rectangular circuit at the largest grid speed per axis.
    const double sx = *std::max_element(sets.x.begin(), sets.x.end());
    const double sy = *std::max_element(sets.y.begin(), sets.y.end());
    const int quarter = std::max(1, clock.n_tti / 4);
    const Vec3 legs[4] = {{sx, 0.0, 0.0}, {0.0, sy, 0.0}, {-sx, 0.0, 0.0},
                          {0.0, -sy, 0.0}};
    for (int i = 1; i <= clock.n_tti; ++i) {
      const Vec3& v = legs[((i - 1) / quarter) % 4];
      wps.push_back(wps.back() + clock.tti_s * v);
    }
  } else {
    if (!(radius_m > 0.0))
      throw std::invalid_argument("flight disk radius must be positive");
    Rng rng(seed);
    ActionSpace space(sets);
    for (int i = 1; i <= clock.n_tti; ++i) {
      const Vec3 cur = wps.back();
      bool placed = false;
      for (int tries = 0; tries < 10000 && !placed; ++tries) {
        const Vec3 v = space.velocity(rng.uniform_int(space.size()));
        if (v.z != 0.0) continue;  // ground target keeps its altitude
        const Vec3 cand = cur + clock.tti_s * v;
        const double dx = cand.x - start.x;
        const double dy = cand.y - start.y;
        if (dx * dx + dy * dy <= radius_m * radius_m) {
          wps.push_back(cand);
          placed = true;
        }
      }
      if (!placed)
        throw std::runtime_error("random walk failed to stay inside the flight disk");
    }
  }
  return TargetTrajectory(std::move(wps), clock.tti_s);
}

}  // namespace gsrc
