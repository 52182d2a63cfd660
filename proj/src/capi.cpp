#include "gsrc.h"

#include <cstring>
#include <exception>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gsrc/config.hpp"
#include "gsrc/experiment.hpp"

struct gsrc_config {
  gsrc::ExperimentConfig cfg;
};

struct gsrc_model {
  gsrc::dqn::QNetwork net;
};

namespace {

thread_local std::string t_error;
thread_local int t_status = GSRC_OK;

template <class F>
int guard(F&& body) {
  try {
    body();
    t_error.clear();
    t_status = GSRC_OK;
  } catch (const gsrc::ConfigError& e) {
    t_error = e.what();
    t_status = GSRC_ERROR_CONFIG;
  } catch (const std::exception& e) {
    t_error = e.what();
    t_status = GSRC_ERROR_RUNTIME;
  } catch (...) {
    t_error = "unknown error";
    t_status = GSRC_ERROR_RUNTIME;
  }
  return t_status;
}

std::vector<double> parse_values(const char* values) {
  if (values == nullptr)
    throw gsrc::ConfigError("sweep: values must not be null");
  std::vector<double> out;
  std::stringstream ss(values);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos)
      throw gsrc::ConfigError("sweep: empty value in the list");
    item = item.substr(b, e - b + 1);
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw gsrc::ConfigError("sweep: bad value '" + item + "'");
    }
  }
  if (out.empty()) throw gsrc::ConfigError("sweep: no axis values given");
  return out;
}

}  // namespace

extern "C" {

const char* gsrc_version(void) { return "1.0.0"; }

const char* gsrc_last_error(void) { return t_error.c_str(); }

int gsrc_last_status(void) { return t_status; }

void gsrc_string_free(char* s) { delete[] s; }

gsrc_config_t* gsrc_config_create(void) {
  gsrc_config_t* out = nullptr;
  const int rc = guard([&] { out = new gsrc_config{}; });
  return rc == GSRC_OK ? out : nullptr;
}

gsrc_config_t* gsrc_config_load(const char* path) {
  gsrc_config_t* out = nullptr;
  const int rc = guard([&] {
    if (path == nullptr)
      throw gsrc::ConfigError("config path must not be null");
    out = new gsrc_config{gsrc::load_config(path)};
  });
  return rc == GSRC_OK ? out : nullptr;
}

int gsrc_config_set(gsrc_config_t* cfg, const char* key, const char* value) {
  return guard([&] {
    if (cfg == nullptr || key == nullptr || value == nullptr)
      throw gsrc::ConfigError("config, key and value must not be null");
    gsrc::apply_override(cfg->cfg, key, value);
  });
}

char* gsrc_config_dump(const gsrc_config_t* cfg) {
  char* out = nullptr;
  const int rc = guard([&] {
    if (cfg == nullptr) throw gsrc::ConfigError("config must not be null");
    const std::string text = gsrc::dump_config(cfg->cfg);
    out = new char[text.size() + 1];
    std::memcpy(out, text.c_str(), text.size() + 1);
  });
  return rc == GSRC_OK ? out : nullptr;
}

void gsrc_config_free(gsrc_config_t* cfg) { delete cfg; }

gsrc_model_t* gsrc_model_load(const char* path) {
  gsrc_model_t* out = nullptr;
  const int rc = guard([&] {
    if (path == nullptr)
      throw gsrc::ConfigError("model path must not be null");
    try {
      out = new gsrc_model{gsrc::dqn::load_network(path)};
    } catch (const gsrc::ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      // The path and file are operator input.
      throw gsrc::ConfigError(e.what());
    }
  });
  return rc == GSRC_OK ? out : nullptr;
}

int gsrc_model_save(const gsrc_model_t* model, const char* path) {
  return guard([&] {
    if (model == nullptr || path == nullptr)
      throw gsrc::ConfigError("model and path must not be null");
    gsrc::dqn::save_network(model->net, path);
  });
}

void gsrc_model_free(gsrc_model_t* model) { delete model; }

gsrc_model_t* gsrc_train(const gsrc_config_t* cfg) {
  gsrc_model_t* out = nullptr;
  const int rc = guard([&] {
    if (cfg == nullptr) throw gsrc::ConfigError("config must not be null");
    out = new gsrc_model{gsrc::experiment::cmd_train(cfg->cfg).net};
  });
  return rc == GSRC_OK ? out : nullptr;
}

int gsrc_eval(const gsrc_config_t* cfg, const gsrc_model_t* model) {
  return guard([&] {
    if (cfg == nullptr) throw gsrc::ConfigError("config must not be null");
    gsrc::experiment::cmd_eval(cfg->cfg, model ? &model->net : nullptr);
  });
}

int gsrc_sweep(const gsrc_config_t* cfg, const gsrc_model_t* model,
               const char* axis, const char* values) {
  return guard([&] {
    if (cfg == nullptr || axis == nullptr)
      throw gsrc::ConfigError("config and axis must not be null");
    gsrc::experiment::cmd_sweep(cfg->cfg,
                                gsrc::experiment::sweep_axis_from_name(axis),
                                parse_values(values),
                                model ? &model->net : nullptr);
  });
}

}  // extern "C"
