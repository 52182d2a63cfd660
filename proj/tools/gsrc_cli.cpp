#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gsrc.h"

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const std::string& s : items) {
    if (!out.empty()) out += ',';
    out += s;
  }
  return out;
}

// Prints the library's message and maps its status onto the exit code.
int fail() {
  std::fprintf(stderr, "error: %s\n", gsrc_last_error());
  return gsrc_last_status() == GSRC_ERROR_CONFIG ? 2 : 1;
}

struct ConfigHandle {
  gsrc_config_t* ptr = nullptr;
  ~ConfigHandle() { gsrc_config_free(ptr); }
};

struct ModelHandle {
  gsrc_model_t* ptr = nullptr;
  ~ModelHandle() { gsrc_model_free(ptr); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"goal-oriented semantic communication for UAV waypoint "
               "control: train, evaluate and sweep the downlink schemes"};
  app.require_subcommand(1);

  std::string config_path, out_dir, model_path, values;
  std::string axis = "kmax";
  std::vector<std::string> schemes;
  std::int64_t episodes = 0;
  std::uint64_t seed = 0;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "configuration file");
    cmd->add_option("--scheme", schemes,
                    "scheme to run (repeatable): tucf, vaqom, deeppro, gsrc");
    cmd->add_option("--episodes", episodes, "evaluation episode count");
    cmd->add_option("--seed", seed, "base seed");
    cmd->add_option("--out", out_dir, "output directory");
  };

  CLI::App* train = app.add_subcommand("train", "train the command agent");
  CLI::App* eval = app.add_subcommand("eval", "evaluate the schemes");
  CLI::App* sweep = app.add_subcommand("sweep", "sweep a repetition axis");
  add_common(train);
  add_common(eval);
  add_common(sweep);
  eval->add_option("--model", model_path, "trained model file");
  sweep->add_option("--model", model_path, "trained model file");
  sweep->add_option("--axis", axis, "sweep axis: kmax or trep");
  sweep->add_option("--values", values, "comma-separated axis values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // help/version
    (void)app.exit(e);
    return 2;  // bad flags are operator errors
  }

  CLI::App* cmd = train->parsed() ? train : eval->parsed() ? eval : sweep;

  ConfigHandle cfg;
  cfg.ptr = config_path.empty() ? gsrc_config_create()
                                : gsrc_config_load(config_path.c_str());
  if (cfg.ptr == nullptr) return fail();

  const auto set = [&](const char* key, const std::string& value) {
    return gsrc_config_set(cfg.ptr, key, value.c_str()) == GSRC_OK;
  };
  if (cmd->count("--scheme") && !set("run.schemes", join(schemes)))
    return fail();
  if (cmd->count("--episodes") &&
      !set("run.episodes", std::to_string(episodes)))
    return fail();
  if (cmd->count("--seed") && !set("run.base_seed", std::to_string(seed)))
    return fail();
  if (cmd->count("--out") && !set("run.out_dir", out_dir)) return fail();

  ModelHandle model;
  if (cmd != train && cmd->count("--model")) {
    model.ptr = gsrc_model_load(model_path.c_str());
    if (model.ptr == nullptr) return fail();
  }

  if (cmd == train) {
    ModelHandle trained;
    trained.ptr = gsrc_train(cfg.ptr);
    if (trained.ptr == nullptr) return fail();
  } else if (cmd == eval) {
    if (gsrc_eval(cfg.ptr, model.ptr) != GSRC_OK) return fail();
  } else {
    if (gsrc_sweep(cfg.ptr, model.ptr, axis.c_str(), values.c_str()) !=
        GSRC_OK)
      return fail();
  }
  return 0;
}
