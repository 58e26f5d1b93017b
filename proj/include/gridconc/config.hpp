#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "gridconc/table.hpp"
#include "gridconc/topology.hpp"

namespace gridconc {

enum class ExperimentKind { fig1, thm2_tail, thm2_expectation, lcpf_bounds, manifold, bruteforce };

std::string to_string(ExperimentKind kind);
/// Throws ConfigError for an unknown name.
ExperimentKind parse_experiment_kind(const std::string& name);

enum class Backend { exact, monte_carlo };

/// Invalid experiment configuration (CLI exit code 1).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::fig1;
  std::size_t n = 20;
  /// Edge-probability sweep for fig1.
  std::vector<double> p_grid;
  std::size_t samples = 200;
  std::vector<double> t_grid;
  std::uint64_t seed = 0;
  /// Fixed network for the non-fig1 experiments; complete graph on n nodes when absent.
  std::optional<Topology> topology;
  /// Line-distribution JSON (see line_distributions_from_json); per-experiment default when null.
  nlohmann::json lines;
  /// Perturbation bound for lcpf_bounds when `lines` is null.
  double delta = 0.1;
  /// Voltage step scale for the manifold experiment.
  double h_scale = 0.1;
  Backend backend = Backend::exact;
  std::size_t workers = 1;
  std::string output;
  OutputFormat format = OutputFormat::csv;

  Topology network() const;
  /// `lines` or the experiment's default law.
  nlohmann::json line_model() const;
};

/// Reads the ExperimentConfig JSON; missing keys take defaults (fig1 p grid
/// 0, 0.05, ..., 1; 20-point t grid starting at the contingency tail
/// validity threshold for tail experiments). Throws ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& j);

/// Throws ConfigError: samples >= 1, t_grid ascending, bruteforce m <= 20, ...
void validate(const ExperimentConfig& cfg);

nlohmann::json to_json(const ExperimentConfig& cfg);

}  // namespace gridconc
