#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "gridconc/spectra.hpp"
#include "gridconc/topology.hpp"

namespace gridconc {

/// Independent line contingencies: line l is closed with probability probs[l]
/// and then carries admittance admittances[l], |y_l| <= 1 per-unit.
struct ContingencyModel {
  std::vector<double> probs;
  std::vector<Complex> admittances;
};

/// Throws std::invalid_argument if lengths differ from t.num_edges(), a
/// probability lies outside [0, 1] or some |y_l| > 1 + 1e-12.
void validate(const Topology& t, const ContingencyModel& model);

/// Contingency factors c_l = 2 p_l (1 - p_l) |y_l|^2 with the derived nodal
/// criticality degrees d_i = sum_{l incident to i} c_l.
struct CriticalityProfile {
  std::vector<double> c;
  std::vector<double> d;
  double delta_c = 0.0;        // max_i d_i
  double d_bar = 0.0;          // sum_i d_i / delta_c, 0 when degenerate
  double variance_norm = 0.0;  // ||A^T diag(c) A||
  std::size_t n_nodes = 0;
  bool degenerate = true;      // delta_c == 0: the centered matrix is 0 a.s.

  /// tr(V) / ||V|| for V = A^T diag(c) A; 0 when degenerate.
  double variance_intdim() const;
};

CriticalityProfile contingency_factors(const Topology& t, const ContingencyModel& model);

/// A^T diag(c) A, the matrix variance E[Y~ Y~*] under contingencies.
RealMatrix variance_laplacian(const Topology& t, const CriticalityProfile& profile);

enum class BoundKind {
  thm1_expectation,
  thm2_tail,
  thm2_expectation,
  bernstein_tail,
  lcpf_tail,
  lcpf_expectation,
  manifold_distance,
};

std::string to_string(BoundKind kind);

struct BoundReport {
  BoundKind kind = BoundKind::thm1_expectation;
  std::map<std::string, double> inputs;
  double value = 0.0;
  bool valid = true;
  bool degenerate = false;
  std::string notes;

  /// min(1, value); tail values are reported raw otherwise.
  double clamped() const { return std::min(1.0, value); }
};

void to_json(nlohmann::json& j, const BoundReport& r);

/// sqrt(4 delta log(4n)) + (2/3) log(4n), natural log. Bounds E||Y|| for
/// fixed connectivity with |w_l| <= 1.
BoundReport thm1_expectation_bound(std::size_t n, double max_degree);

/// Deterministic ||Y|| <= 2 * max_degree * max|w_l|.
double degree_norm_bound(double max_degree, double max_weight = 1.0);

/// 8 D_bar exp(-t^2 / (4 (delta_c + t/3))); valid iff t >= sqrt(2 delta_c) + 2/3.
BoundReport thm2_tail_bound(double t, const CriticalityProfile& profile);

double thm2_tail_threshold(const CriticalityProfile& profile);

/// Explicit chain: sqrt(2 nu log(1+d)) + (2/3) L log(1+d) + 4 sqrt(nu) + (8/3) L
/// with nu = 2 delta_c, L = 2, d = 2 D_bar.
struct ExplicitForm {};
/// C (sqrt(2 delta_c log(1 + 2 D_bar)) + 2 log(1 + 2 D_bar)).
struct WithConstant {
  double c = 1.0;
};
using Thm2Form = std::variant<ExplicitForm, WithConstant>;

BoundReport thm2_expectation_bound(const CriticalityProfile& profile, Thm2Form form = ExplicitForm{});

/// 2 dim exp(-t^2 / (2 R t + 4 nu)).
BoundReport bernstein_tail(double t, std::size_t dim, double big_r, double nu);

struct SphereEnvelope {};
struct BoundedEnvelope {
  double delta = 0.0;
};
using EnvelopeMode = std::variant<SphereEnvelope, BoundedEnvelope>;

/// PSD upper envelope for E[F F*] and its norm nu:
///   sphere:  (2/n) I_2 (x) A^T A
///   bounded: 4 delta^2 I_2 (x) A^T A
/// `nu_cap` is the closed-form ceiling (2, resp. 4 delta^2 n).
struct VarianceEnvelope {
  RealMatrix matrix;
  double nu = 0.0;
  double nu_cap = 0.0;
};

VarianceEnvelope lcpf_variance_envelope(const Topology& t, EnvelopeMode mode);

/// n exp(-t^2 / (4 (delta^2 n + delta t / 3))), literal prefactor n.
BoundReport lcpf_tail_bound(double t, std::size_t n, double delta);

/// 2 delta sqrt(2) (sqrt(n log(4n)) + (1/3) log(4n)).
BoundReport lcpf_expectation_bound(std::size_t n, double delta);

}  // namespace gridconc
