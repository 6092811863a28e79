// bergflow: batch runner for the Bergman-kernel iteration experiments.
//
//   bergflow iterate      --config run.json --out results/ --seed 7
//   bergflow boundary-fit --out fit/
//   bergflow oracle-suite
//
// Exit status: 0 when every check passes, 2 on an acceptance failure, 1 on error.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "bergflow/experiment.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  using bergflow::ExperimentKind;

  CLI::App app{"Bergman kernel iteration experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  unsigned long long seed = 0;
  bool seed_given = false;

  const std::pair<const char*, ExperimentKind> commands[] = {
      {"iterate", ExperimentKind::iterate},
      {"boundary-fit", ExperimentKind::boundary_fit},
      {"exhaustion", ExperimentKind::exhaustion},
      {"variation", ExperimentKind::variation},
      {"oracle-suite", ExperimentKind::oracle_suite},
  };
  std::vector<CLI::App*> subs;
  for (const auto& [name, kind] : commands) {
    CLI::App* sub = app.add_subcommand(name, "run the " + bergflow::to_string(kind) + " experiment");
    sub->add_option("--config", config_path, "JSON experiment config");
    sub->add_option("--out", out_dir, "output directory (overrides the config)");
    sub->add_option_function<unsigned long long>(
        "--seed", [&](unsigned long long s) { seed = s, seed_given = true; }, "seed for randomized checks");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  ExperimentKind kind = ExperimentKind::iterate;
  for (std::size_t i = 0; i < subs.size(); ++i)
    if (subs[i]->parsed()) kind = commands[i].second;

  try {
    bergflow::ExperimentConfig config;
    if (!config_path.empty()) {
      const std::string text = read_file(config_path);
      const auto j = nlohmann::json::parse(text, nullptr, false);
      if (!j.is_discarded() && j.is_object() && j.contains("experiment") &&
          j["experiment"] != bergflow::to_string(kind))
        throw bergflow::ConfigError("experiment", "config is for '" + j["experiment"].dump() +
                                                      "' but the subcommand runs '" + bergflow::to_string(kind) + "'");
      config = bergflow::parse_config(text);
      config.kind = kind;
    } else {
      config = bergflow::default_config(kind);
    }
    if (!out_dir.empty()) config.output = out_dir;
    if (seed_given) config.seed = seed;

    const bergflow::ExperimentResult result = bergflow::run_experiment(config);
    std::cout << result.summary;
    for (const auto& f : result.files) std::cout << "wrote " << f.string() << "\n";
    return result.passed ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
