#include "gridconc/config.hpp"

#include <algorithm>
#include <cmath>

#include "gridconc/admittance.hpp"
#include "gridconc/bounds.hpp"
#include "gridconc/experiments.hpp"

namespace gridconc {

namespace {

constexpr std::pair<ExperimentKind, const char*> kKindNames[] = {
    {ExperimentKind::fig1, "fig1"},
    {ExperimentKind::thm2_tail, "thm2_tail"},
    {ExperimentKind::thm2_expectation, "thm2_expectation"},
    {ExperimentKind::lcpf_bounds, "lcpf_bounds"},
    {ExperimentKind::manifold, "manifold"},
    {ExperimentKind::bruteforce, "bruteforce"},
};

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    out[k] = count == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1);
  }
  return out;
}

std::vector<double> default_t_grid(const ExperimentConfig& cfg) {
  const Topology t = cfg.network();
  if (cfg.experiment == ExperimentKind::thm2_tail) {
    const auto model = contingency_model_from_json(cfg.line_model(), t.num_edges());
    const auto profile = contingency_factors(t, model);
    const double start = profile.degenerate ? 0.0 : thm2_tail_threshold(profile);
    return linspace(start, start + 8.0, 20);
  }
  if (cfg.experiment == ExperimentKind::lcpf_bounds) {
    double delta = 0.0;
    for (const auto& d : line_distributions_from_json(cfg.line_model(), t.num_edges())) {
      if (const auto* b = std::get_if<BoundedPerturbation>(&d)) delta = std::max(delta, b->delta);
    }
    const double hi = 4.0 * lcpf_expectation_bound(t.num_nodes(), delta).value;
    return linspace(0.0, hi > 0.0 ? hi : 1.0, 20);
  }
  return {};
}

std::size_t count_field(const nlohmann::json& j, const char* key, std::size_t fallback) {
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number_integer() || it->get<std::int64_t>() < 0) {
    throw ConfigError(std::string(key) + " must be a non-negative integer");
  }
  return it->get<std::size_t>();
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  for (const auto& [k, n] : kKindNames) {
    if (name == n) return k;
  }
  throw ConfigError("unknown experiment '" + name + "'");
}

Topology ExperimentConfig::network() const {
  if (topology) return *topology;
  return Topology::complete(n);
}

nlohmann::json ExperimentConfig::line_model() const {
  if (!lines.is_null()) return lines;
  switch (experiment) {
    case ExperimentKind::fig1:
    case ExperimentKind::manifold:
      return {{"kind", "disk"}, {"radius", 1.0}};
    case ExperimentKind::lcpf_bounds:
      return {{"kind", "bounded"}, {"g", 1.0}, {"b", -1.0}, {"delta", delta}};
    default:
      return {{"kind", "bernoulli"}, {"p", 0.5}, {"y", {1.0, 0.0}}};
  }
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig cfg;
    cfg.experiment = parse_experiment_kind(j.at("experiment").get<std::string>());
    cfg.n = count_field(j, "n", cfg.n);
    cfg.samples = count_field(j, "samples", cfg.samples);
    if (auto it = j.find("seed"); it != j.end()) {
      if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<std::int64_t>() >= 0)) {
        throw ConfigError("seed must be a non-negative integer");
      }
      cfg.seed = it->get<std::uint64_t>();
    }
    cfg.delta = j.value("delta", cfg.delta);
    cfg.h_scale = j.value("h_scale", cfg.h_scale);
    cfg.workers = count_field(j, "workers", cfg.workers);
    cfg.output = j.value("output", std::string());
    cfg.format = parse_output_format(j.value("format", std::string("csv")));
    if (auto it = j.find("backend"); it != j.end()) {
      const auto name = it->get<std::string>();
      if (name == "exact") {
        cfg.backend = Backend::exact;
      } else if (name == "monte_carlo") {
        cfg.backend = Backend::monte_carlo;
      } else {
        throw ConfigError("unknown backend '" + name + "'");
      }
    }
    if (auto it = j.find("topology"); it != j.end() && !it->is_null()) {
      cfg.topology = topology_from_json(*it);
      cfg.n = cfg.topology->num_nodes();
    }
    if (auto it = j.find("lines"); it != j.end()) cfg.lines = *it;
    if (auto it = j.find("p_grid"); it != j.end()) {
      cfg.p_grid = it->get<std::vector<double>>();
    } else if (cfg.experiment == ExperimentKind::fig1) {
      cfg.p_grid = linspace(0.0, 1.0, 21);
    }
    if (auto it = j.find("t_grid"); it != j.end()) {
      cfg.t_grid = it->get<std::vector<double>>();
    } else {
      cfg.t_grid = default_t_grid(cfg);
    }
    validate(cfg);
    return cfg;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
}

void validate(const ExperimentConfig& cfg) {
  try {
    if (cfg.samples < 1) throw ConfigError("samples must be >= 1");
    if (cfg.n < 1) throw ConfigError("n must be >= 1");
    if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
    if (!std::is_sorted(cfg.t_grid.begin(), cfg.t_grid.end())) {
      throw ConfigError("t_grid must be sorted ascending");
    }
    for (double t : cfg.t_grid) {
      if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("t_grid entries must be finite and >= 0");
    }
    for (double p : cfg.p_grid) {
      if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p_grid entries must lie in [0, 1]");
    }
    if (!(cfg.h_scale >= 0.0)) throw ConfigError("h_scale must be >= 0");
    if (!(cfg.delta >= 0.0)) throw ConfigError("delta must be >= 0");
    if (cfg.experiment == ExperimentKind::fig1) {
      const auto dists = line_distributions_from_json(cfg.line_model(), 1);
      if (support_radius(dists.front()) > 1.0 + 1e-12) {
        throw ConfigError("fig1 line law must satisfy |w| <= 1");
      }
      return;
    }
    const Topology t = cfg.network();
    switch (cfg.experiment) {
      case ExperimentKind::thm2_tail:
      case ExperimentKind::thm2_expectation:
      case ExperimentKind::bruteforce: {
        const auto model = contingency_model_from_json(cfg.line_model(), t.num_edges());
        gridconc::validate(t, model);
        const bool exact = cfg.experiment == ExperimentKind::bruteforce || cfg.backend == Backend::exact;
        if (exact && t.num_edges() > kMaxBruteForceLines) {
          throw ConfigError("exhaustive enumeration needs m <= 20 lines");
        }
        break;
      }
      case ExperimentKind::lcpf_bounds: {
        const auto dists = line_distributions_from_json(cfg.line_model(), t.num_edges());
        for (const auto& d : dists) {
          if (!std::holds_alternative<BoundedPerturbation>(d)) {
            throw ConfigError("lcpf_bounds needs a bounded line law");
          }
        }
        break;
      }
      case ExperimentKind::manifold: {
        const auto dists = line_distributions_from_json(cfg.line_model(), t.num_edges());
        for (const auto& d : dists) {
          if (support_radius(d) > 1.0 + 1e-12) throw ConfigError("manifold line law must satisfy |w| <= 1");
        }
        break;
      }
      case ExperimentKind::fig1:
        break;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json j{{"experiment", to_string(cfg.experiment)},
                   {"n", cfg.n},
                   {"samples", cfg.samples},
                   {"seed", cfg.seed},
                   {"p_grid", cfg.p_grid},
                   {"t_grid", cfg.t_grid},
                   {"lines", cfg.line_model()},
                   {"delta", cfg.delta},
                   {"h_scale", cfg.h_scale},
                   {"backend", cfg.backend == Backend::exact ? "exact" : "monte_carlo"},
                   {"workers", cfg.workers},
                   {"format", cfg.format == OutputFormat::csv ? "csv" : "json"}};
  if (cfg.topology) j["topology"] = *cfg.topology;
  if (!cfg.output.empty()) j["output"] = cfg.output;
  return j;
}

}  // namespace gridconc
