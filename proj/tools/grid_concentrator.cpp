#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "gridconc/config.hpp"
#include "gridconc/experiments.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitDominance = 2;

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw gridconc::ConfigError("cannot open config '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw gridconc::ConfigError(std::string("malformed config: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix concentration experiments for random power grids"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::string out_path;
  std::string format;
  bool assert_bounds = false;

  for (const char* name :
       {"fig1", "thm2_tail", "thm2_expectation", "lcpf_bounds", "manifold", "bruteforce"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "ExperimentConfig JSON")->required();
    sub->add_option("--seed", seed, "Master seed");
    sub->add_option("--samples", samples, "Samples per sweep point")->check(CLI::PositiveNumber);
    sub->add_option("--out", out_path, "Output file (stdout when omitted)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--assert-bounds", assert_bounds, "Exit 2 if a dominance check fails");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  gridconc::ExperimentConfig cfg;
  gridconc::ExperimentResult result;
  try {
    auto j = read_json(config_path);
    j["experiment"] = app.get_subcommands().front()->get_name();
    cfg = gridconc::config_from_json(j);
    if (seed) cfg.seed = *seed;
    if (samples) cfg.samples = *samples;
    if (!out_path.empty()) cfg.output = out_path;
    if (!format.empty()) cfg.format = gridconc::parse_output_format(format);
    result = gridconc::run_experiment(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (cfg.output.empty()) {
      gridconc::emit(result.table, cfg.format, std::cout);
    } else {
      gridconc::emit(result.table, cfg.format, cfg.output);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  for (const auto& msg : result.messages) std::cerr << "warning: " << msg << '\n';
  std::cerr << gridconc::to_string(cfg.experiment) << ": " << result.checked << " checks, "
            << result.violations << " violations\n";
  if (assert_bounds && !result.passed()) return kExitDominance;
  return kExitOk;
}
