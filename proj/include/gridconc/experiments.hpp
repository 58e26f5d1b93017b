#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gridconc/bounds.hpp"
#include "gridconc/config.hpp"
#include "gridconc/table.hpp"

namespace gridconc {

/// Empirical (Monte Carlo) or exact (enumerated) statistics of an operator norm.
struct SampleStats {
  std::vector<double> norms;
  /// Probability of each norm; empty for Monte Carlo (uniform 1/N).
  std::vector<double> weights;
  double mean = 0.0;
  double std_error = 0.0;  // sample std / sqrt(N); 0 when exact
  std::vector<double> t_grid;
  std::vector<double> tail;  // Pr(norm >= t) per grid point
  bool exact = false;
};

inline constexpr std::size_t kMaxBruteForceLines = 20;

/// Calls fn(pattern bits, probability, ||Y - E Y||) for every switch pattern
/// with nonzero probability. Throws if m > kMaxBruteForceLines.
void enumerate_patterns(const Topology& t, const ContingencyModel& model,
                        const std::function<void(std::uint64_t, double, double)>& fn);

/// Exact distribution of ||Y - E Y|| over all 2^m switch patterns.
SampleStats brute_force_distribution(const Topology& t, const ContingencyModel& model,
                                     const std::vector<double>& t_grid = {});

/// Monte Carlo distribution of ||Y - E Y||; sample s uses seed split_seed(seed, 0, s).
SampleStats monte_carlo_distribution(const Topology& t, const ContingencyModel& model,
                                     std::size_t samples, std::uint64_t seed,
                                     const std::vector<double>& t_grid = {},
                                     std::size_t workers = 1);

/// Builds the contingency model from a bernoulli line-distribution JSON.
ContingencyModel contingency_model_from_json(const nlohmann::json& lines, std::size_t m);

struct ExperimentResult {
  Table table;
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::vector<std::string> messages;

  bool passed() const { return violations == 0; }
};

/// Homogeneous ER sweep. Columns: p, sample_index, m, delta, norm, bound.
ExperimentResult run_fig1(const ExperimentConfig& cfg);

/// Columns for the bound-check experiments below:
/// statistic, t, empirical, bound, slack, valid, dominates, exact.
ExperimentResult run_tail_experiment(const ExperimentConfig& cfg);
ExperimentResult run_expectation_experiment(const ExperimentConfig& cfg);
ExperimentResult run_lcpf_experiment(const ExperimentConfig& cfg);

/// Per-sample columns: sample_index, delta, y_norm, h_inf, h_2, residual_norm,
/// taylor_gap, proxy_distance, certificate, holder_bound, crude_bound,
/// expected_bound, dominates.
ExperimentResult run_manifold_experiment(const ExperimentConfig& cfg);

/// Columns: pattern, probability, norm.
ExperimentResult run_bruteforce_experiment(const ExperimentConfig& cfg);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Per-sweep-point means of a fig1 table.
struct SweepSummary {
  double p = 0.0;
  double mean_lines = 0.0;
  double mean_norm = 0.0;
  double mean_bound = 0.0;
  double max_norm = 0.0;
};

std::vector<SweepSummary> summarize_fig1(const Table& fig1);

/// Spearman rank correlation (average ranks for ties).
double spearman(const std::vector<double>& x, const std::vector<double>& y);

/// Runs fn(k) for k in [0, count) on up to `workers` threads.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn);

}  // namespace gridconc
