#include "gsrc/config.hpp"

#include <cerrno>
#include <climits>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <string_view>

namespace gsrc {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double to_double(const std::string& s) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw std::invalid_argument("expected a number, got '" + s + "'");
  return v;
}

int to_int(const std::string& s) {
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0')
    throw std::invalid_argument("expected an integer, got '" + s + "'");
  if (errno == ERANGE || v < INT_MIN || v > INT_MAX)
    throw std::invalid_argument("integer out of range: '" + s + "'");
  return static_cast<int>(v);
}

std::uint64_t to_u64(const std::string& s) {
  if (!s.empty() && s[0] == '-')
    throw std::invalid_argument("expected a non-negative integer, got '" + s + "'");
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0' || errno == ERANGE)
    throw std::invalid_argument("expected a non-negative integer, got '" + s + "'");
  return v;
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw std::invalid_argument("expected true/false, got '" + s + "'");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    const auto end = comma == std::string::npos ? s.size() : comma;
    const std::string item = trim(std::string_view(s).substr(pos, end - pos));
    if (item.empty()) throw std::invalid_argument("empty list element in '" + s + "'");
    parts.push_back(item);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (parts.empty()) throw std::invalid_argument("expected a non-empty list");
  return parts;
}

std::vector<double> to_double_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) out.push_back(to_double(item));
  return out;
}

std::vector<int> to_int_list(const std::string& s) {
  std::vector<int> out;
  for (const auto& item : split_list(s)) out.push_back(to_int(item));
  return out;
}

std::vector<Scheme> to_scheme_list(const std::string& s) {
  std::vector<Scheme> out;
  for (const auto& item : split_list(s)) out.push_back(scheme_from_name(item));
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(int v) { return std::to_string(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }

std::string fmt(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += fmt(v[i]);
  }
  return out;
}

std::string fmt(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += fmt(v[i]);
  }
  return out;
}

std::string fmt(const std::vector<Scheme>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += scheme_name(v[i]);
  }
  return out;
}

struct KeyEntry {
  const char* name;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

const std::vector<KeyEntry>& key_table() {
  static const std::vector<KeyEntry> table = [] {
    std::vector<KeyEntry> t;
    const auto dbl = [&t](const char* name, double ExperimentConfig::* f) {
      t.push_back({name,
                   [f](ExperimentConfig& c, const std::string& v) { c.*f = to_double(v); },
                   [f](const ExperimentConfig& c) { return fmt(c.*f); }});
    };
    const auto integer = [&t](const char* name, int ExperimentConfig::* f) {
      t.push_back({name,
                   [f](ExperimentConfig& c, const std::string& v) { c.*f = to_int(v); },
                   [f](const ExperimentConfig& c) { return fmt(c.*f); }});
    };
    const auto u64 = [&t](const char* name, std::uint64_t ExperimentConfig::* f) {
      t.push_back({name,
                   [f](ExperimentConfig& c, const std::string& v) { c.*f = to_u64(v); },
                   [f](const ExperimentConfig& c) { return fmt(c.*f); }});
    };
    const auto boolean = [&t](const char* name, bool ExperimentConfig::* f) {
      t.push_back({name,
                   [f](ExperimentConfig& c, const std::string& v) { c.*f = to_bool(v); },
                   [f](const ExperimentConfig& c) { return fmt(c.*f); }});
    };

    u64("run.base_seed", &ExperimentConfig::base_seed);
    integer("run.episodes", &ExperimentConfig::episodes);
    integer("run.threads", &ExperimentConfig::threads);
    t.push_back({"run.schemes",
                 [](ExperimentConfig& c, const std::string& v) { c.schemes = to_scheme_list(v); },
                 [](const ExperimentConfig& c) { return fmt(c.schemes); }});
    t.push_back({"run.out_dir",
                 [](ExperimentConfig& c, const std::string& v) {
                   if (v.empty()) throw std::invalid_argument("expected a directory name");
                   c.out_dir = v;
                 },
                 [](const ExperimentConfig& c) { return c.out_dir; }});
    integer("run.trajectory_episodes", &ExperimentConfig::trajectory_episodes);

    t.push_back({"clock.tti_s",
                 [](ExperimentConfig& c, const std::string& v) { c.clock.tti_s = to_double(v); },
                 [](const ExperimentConfig& c) { return fmt(c.clock.tti_s); }});
    t.push_back({"clock.n_tti",
                 [](ExperimentConfig& c, const std::string& v) { c.clock.n_tti = to_int(v); },
                 [](const ExperimentConfig& c) { return fmt(c.clock.n_tti); }});
    t.push_back({"clock.n_m",
                 [](ExperimentConfig& c, const std::string& v) { c.clock.n_m = to_int(v); },
                 [](const ExperimentConfig& c) { return fmt(c.clock.n_m); }});

    dbl("channel.a", &ExperimentConfig::ch_a);
    dbl("channel.b", &ExperimentConfig::ch_b);
    dbl("channel.fc_hz", &ExperimentConfig::ch_fc_hz);
    dbl("channel.alpha", &ExperimentConfig::ch_alpha);
    dbl("channel.eta_los_db", &ExperimentConfig::ch_eta_los_db);
    dbl("channel.eta_nlos_db", &ExperimentConfig::ch_eta_nlos_db);
    dbl("channel.noise_dbm", &ExperimentConfig::ch_noise_dbm);
    dbl("channel.tx_power_dbm", &ExperimentConfig::ch_tx_power_dbm);
    dbl("channel.bandwidth_hz", &ExperimentConfig::ch_bandwidth_hz);
    dbl("channel.snr_threshold_db", &ExperimentConfig::ch_snr_threshold_db);
    dbl("channel.cnc_bits", &ExperimentConfig::ch_cnc_bits);
    boolean("channel.ideal", &ExperimentConfig::ch_ideal);

    const auto vec3 = [&t](const char* name, Vec3 ExperimentConfig::* f,
                           double Vec3::* axis) {
      t.push_back({name,
                   [f, axis](ExperimentConfig& c, const std::string& v) { c.*f.*axis = to_double(v); },
                   [f, axis](const ExperimentConfig& c) { return fmt(c.*f.*axis); }});
    };
    vec3("bs.x", &ExperimentConfig::bs_pos, &Vec3::x);
    vec3("bs.y", &ExperimentConfig::bs_pos, &Vec3::y);
    vec3("bs.z", &ExperimentConfig::bs_pos, &Vec3::z);

    t.push_back({"repetition.k_max",
                 [](ExperimentConfig& c, const std::string& v) { c.rep.k_max = to_int(v); },
                 [](const ExperimentConfig& c) { return fmt(c.rep.k_max); }});
    t.push_back({"repetition.t_rep_s",
                 [](ExperimentConfig& c, const std::string& v) { c.rep.t_rep_s = to_double(v); },
                 [](const ExperimentConfig& c) { return fmt(c.rep.t_rep_s); }});

    integer("queue.q_max", &ExperimentConfig::q_max);
    boolean("queue.log", &ExperimentConfig::queue_log);

    const auto vel = [&t](const char* name, std::vector<double> VelocitySets::* f) {
      t.push_back({name,
                   [f](ExperimentConfig& c, const std::string& v) { c.velocities.*f = to_double_list(v); },
                   [f](const ExperimentConfig& c) { return fmt(c.velocities.*f); }});
    };
    vel("velocities.x", &VelocitySets::x);
    vel("velocities.y", &VelocitySets::y);
    vel("velocities.z", &VelocitySets::z);

    t.push_back({"trajectory.kind",
                 [](ExperimentConfig& c, const std::string& v) {
                   c.trajectory_kind = trajectory_kind_from_name(v);
                 },
                 [](const ExperimentConfig& c) {
                   return std::string(trajectory_kind_name(c.trajectory_kind));
                 }});
    u64("trajectory.seed", &ExperimentConfig::trajectory_seed);
    dbl("trajectory.radius_m", &ExperimentConfig::trajectory_radius_m);
    vec3("trajectory.start_x", &ExperimentConfig::start, &Vec3::x);
    vec3("trajectory.start_y", &ExperimentConfig::start, &Vec3::y);
    vec3("trajectory.start_z", &ExperimentConfig::start, &Vec3::z);

    t.push_back({"trainer.hidden",
                 [](ExperimentConfig& c, const std::string& v) { c.trainer.hidden = to_int_list(v); },
                 [](const ExperimentConfig& c) { return fmt(c.trainer.hidden); }});
    const auto tdbl = [&t](const char* name, double dqn::TrainerConfig::* f) {
      t.push_back({name,
                   [f](ExperimentConfig& c, const std::string& v) { c.trainer.*f = to_double(v); },
                   [f](const ExperimentConfig& c) { return fmt(c.trainer.*f); }});
    };
    const auto tint = [&t](const char* name, int dqn::TrainerConfig::* f) {
      t.push_back({name,
                   [f](ExperimentConfig& c, const std::string& v) { c.trainer.*f = to_int(v); },
                   [f](const ExperimentConfig& c) { return fmt(c.trainer.*f); }});
    };
    tdbl("trainer.gamma", &dqn::TrainerConfig::gamma);
    tdbl("trainer.lr", &dqn::TrainerConfig::lr);
    tdbl("trainer.rho", &dqn::TrainerConfig::rho);
    tdbl("trainer.rms_eps", &dqn::TrainerConfig::rms_eps);
    tdbl("trainer.eps_start", &dqn::TrainerConfig::eps_start);
    tdbl("trainer.eps_end", &dqn::TrainerConfig::eps_end);
    tdbl("trainer.eps_decay_frac", &dqn::TrainerConfig::eps_decay_frac);
    tint("trainer.replay_capacity", &dqn::TrainerConfig::replay_capacity);
    tint("trainer.batch_size", &dqn::TrainerConfig::batch_size);
    tint("trainer.warmup", &dqn::TrainerConfig::warmup);
    tint("trainer.updates_per_step", &dqn::TrainerConfig::updates_per_step);
    tint("trainer.target_sync_episodes", &dqn::TrainerConfig::target_sync_episodes);
    tint("trainer.episodes", &dqn::TrainerConfig::episodes);
    tdbl("trainer.pos_scale_m", &dqn::TrainerConfig::pos_scale_m);
    tdbl("trainer.time_scale_s", &dqn::TrainerConfig::time_scale_s);
    tdbl("trainer.reward_scale", &dqn::TrainerConfig::reward_scale);
    t.push_back({"trainer.scheme",
                 [](ExperimentConfig& c, const std::string& v) {
                   c.trainer_scheme = scheme_from_name(v);
                 },
                 [](const ExperimentConfig& c) {
                   return std::string(scheme_name(c.trainer_scheme));
                 }});
    return t;
  }();
  return table;
}

void set_key(ExperimentConfig& cfg, const std::string& key,
             const std::string& value, const std::string& context) {
  for (const KeyEntry& entry : key_table()) {
    if (key == entry.name) {
      try {
        entry.set(cfg, value);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(context + ": key '" + key + "': " + e.what());
      }
      return;
    }
  }
  throw ConfigError(context + ": unknown key '" + key + "'");
}

}  // namespace

ChannelParams ExperimentConfig::channel_params() const {
  ChannelParams p;
  p.a = ch_a;
  p.b = ch_b;
  p.fc_hz = ch_fc_hz;
  p.alpha = ch_alpha;
  p.eta_los = db_to_linear(ch_eta_los_db);
  p.eta_nlos = db_to_linear(ch_eta_nlos_db);
  p.noise_dbm = ch_noise_dbm;
  p.tx_power_dbm = ch_tx_power_dbm;
  p.bandwidth_hz = ch_bandwidth_hz;
  p.snr_threshold_db = ch_snr_threshold_db;
  p.cnc_bits = ch_cnc_bits;
  return p;
}

EngineConfig ExperimentConfig::engine_config() const {
  EngineConfig e;
  e.clock = clock;
  e.bs_pos = bs_pos;
  e.velocities = velocities;
  e.rep = rep;
  e.q_max = q_max;
  return e;
}

void ExperimentConfig::validate() const {
  try {
    if (episodes < 1) throw std::invalid_argument("run.episodes must be >= 1");
    if (threads < 0) throw std::invalid_argument("run.threads must be >= 0");
    if (schemes.empty())
      throw std::invalid_argument("run.schemes must name at least one scheme");
    if (out_dir.empty())
      throw std::invalid_argument("run.out_dir must not be empty");
    if (trajectory_episodes < 0)
      throw std::invalid_argument("run.trajectory_episodes must be >= 0");
    clock.validate();
    channel_params().validate();
    rep.validate(clock);
    if (q_max < 1) throw std::invalid_argument("queue.q_max must be >= 1");
    velocities.validate();
    if (!(trajectory_radius_m > 0.0))
      throw std::invalid_argument("trajectory.radius_m must be positive");
    trainer.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
}

ExperimentConfig parse_config(std::istream& in, const std::string& name) {
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::string context = name + ":" + std::to_string(lineno);
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError(context + ": expected 'key = value'");
    const std::string key = trim(std::string_view(stripped).substr(0, eq));
    const std::string value = trim(std::string_view(stripped).substr(eq + 1));
    if (key.empty()) throw ConfigError(context + ": missing key before '='");
    set_key(cfg, key, value, context);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  return parse_config(f, path);
}

void apply_override(ExperimentConfig& cfg, const std::string& key,
                    const std::string& value) {
  set_key(cfg, trim(key), trim(value), "override");
}

std::string dump_config(const ExperimentConfig& cfg) {
  std::string out;
  for (const KeyEntry& entry : key_table()) {
    out += entry.name;
    out += " = ";
    out += entry.get(cfg);
    out += "\n";
  }
  return out;
}

}  // namespace gsrc
