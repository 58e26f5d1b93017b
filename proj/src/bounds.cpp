#include "gridconc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace gridconc {

void validate(const Topology& t, const ContingencyModel& model) {
  const std::size_t m = t.num_edges();
  if (model.probs.size() != m || model.admittances.size() != m) {
    throw std::invalid_argument("contingency model length must equal the number of lines");
  }
  for (double p : model.probs) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("line probability outside [0, 1]");
  }
  for (const Complex& y : model.admittances) {
    if (!(std::abs(y) <= 1.0 + 1e-12)) {
      throw std::invalid_argument("line admittance magnitude exceeds 1 per-unit");
    }
  }
}

double CriticalityProfile::variance_intdim() const {
  if (degenerate || variance_norm == 0.0) return 0.0;
  return std::accumulate(d.begin(), d.end(), 0.0) / variance_norm;
}

CriticalityProfile contingency_factors(const Topology& t, const ContingencyModel& model) {
  validate(t, model);
  CriticalityProfile prof;
  prof.n_nodes = t.num_nodes();
  prof.c.resize(t.num_edges());
  prof.d.assign(t.num_nodes(), 0.0);
  for (std::size_t l = 0; l < t.num_edges(); ++l) {
    const double p = model.probs[l];
    prof.c[l] = 2.0 * p * (1.0 - p) * std::norm(model.admittances[l]);
    prof.d[t.edge(l).from] += prof.c[l];
    prof.d[t.edge(l).to] += prof.c[l];
  }
  prof.delta_c = *std::max_element(prof.d.begin(), prof.d.end());
  prof.degenerate = !(prof.delta_c > 0.0);
  if (!prof.degenerate) {
    prof.d_bar = std::accumulate(prof.d.begin(), prof.d.end(), 0.0) / prof.delta_c;
    prof.variance_norm = operator_norm(variance_laplacian(t, prof));
  }
  return prof;
}

RealMatrix variance_laplacian(const Topology& t, const CriticalityProfile& profile) {
  const Eigen::Map<const Eigen::VectorXd> c(profile.c.data(),
                                            static_cast<Eigen::Index>(profile.c.size()));
  return weighted_laplacian(t, c);
}

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::thm1_expectation: return "thm1_expectation";
    case BoundKind::thm2_tail: return "thm2_tail";
    case BoundKind::thm2_expectation: return "thm2_expectation";
    case BoundKind::bernstein_tail: return "bernstein_tail";
    case BoundKind::lcpf_tail: return "lcpf_tail";
    case BoundKind::lcpf_expectation: return "lcpf_expectation";
    case BoundKind::manifold_distance: return "manifold_distance";
  }
  return "unknown";
}

void to_json(nlohmann::json& j, const BoundReport& r) {
  j = nlohmann::json{{"kind", to_string(r.kind)},
                     {"inputs", r.inputs},
                     {"value", r.value},
                     {"valid", r.valid},
                     {"degenerate", r.degenerate},
                     {"notes", r.notes}};
}

BoundReport thm1_expectation_bound(std::size_t n, double max_degree) {
  if (n == 0) throw std::invalid_argument("thm1 bound needs n >= 1");
  if (!(max_degree >= 0.0)) throw std::invalid_argument("max degree must be >= 0");
  const double log4n = std::log(4.0 * static_cast<double>(n));
  BoundReport r;
  r.kind = BoundKind::thm1_expectation;
  r.inputs = {{"n", static_cast<double>(n)}, {"delta", max_degree}};
  r.value = std::sqrt(4.0 * max_degree * log4n) + (2.0 / 3.0) * log4n;
  r.notes = "bounds E||Y|| for |w_l| <= 1; deterministic alternative 2*delta = " +
            std::to_string(degree_norm_bound(max_degree));
  return r;
}

double degree_norm_bound(double max_degree, double max_weight) {
  return 2.0 * max_degree * max_weight;
}

double thm2_tail_threshold(const CriticalityProfile& profile) {
  return std::sqrt(2.0 * profile.delta_c) + 2.0 / 3.0;
}

namespace {

std::map<std::string, double> profile_inputs(const CriticalityProfile& p) {
  return {{"delta_c", p.delta_c},
          {"d_bar", p.d_bar},
          {"variance_norm", p.variance_norm},
          {"dilation_d", 2.0 * p.variance_intdim()}};
}

std::string dilation_note(const CriticalityProfile& p) {
  std::ostringstream os;
  os << "intrinsic dilation d = 2 intdim(V) = " << 2.0 * p.variance_intdim()
     << " <= 2 D_bar = " << 2.0 * p.d_bar;
  return os.str();
}

}  // namespace

BoundReport thm2_tail_bound(double t, const CriticalityProfile& profile) {
  if (!(t >= 0.0)) throw std::invalid_argument("tail level t must be >= 0");
  BoundReport r;
  r.kind = BoundKind::thm2_tail;
  r.inputs = profile_inputs(profile);
  r.inputs["t"] = t;
  if (profile.degenerate) {
    r.degenerate = true;
    r.value = t > 0.0 ? 0.0 : 1.0;
    r.notes = "degenerate: all lines deterministic, centered matrix is zero";
    return r;
  }
  const double dc = profile.delta_c;
  r.value = 8.0 * profile.d_bar * std::exp(-t * t / (4.0 * (dc + t / 3.0)));
  r.valid = t >= thm2_tail_threshold(profile);
  r.notes = dilation_note(profile);
  return r;
}

BoundReport thm2_expectation_bound(const CriticalityProfile& profile, Thm2Form form) {
  BoundReport r;
  r.kind = BoundKind::thm2_expectation;
  r.inputs = profile_inputs(profile);
  if (const auto* wc = std::get_if<WithConstant>(&form); wc && !(wc->c > 0.0)) {
    throw std::invalid_argument("expectation constant C must be > 0");
  }
  if (profile.degenerate) {
    r.degenerate = true;
    r.value = 0.0;
    r.notes = "degenerate: all lines deterministic, centered matrix is zero";
    return r;
  }
  if (std::holds_alternative<ExplicitForm>(form)) {
    const double nu = 2.0 * profile.delta_c;
    const double big_l = 2.0;
    const double d = 2.0 * profile.d_bar;
    const double logd = std::log1p(d);
    r.value = std::sqrt(2.0 * nu * logd) + (2.0 / 3.0) * big_l * logd + 4.0 * std::sqrt(nu) +
              (8.0 / 3.0) * big_l;
    r.inputs["form_explicit"] = 1.0;
    r.notes = "explicit chain with nu = 2 delta_c, L = 2, d = 2 D_bar; " + dilation_note(profile);
  } else {
    const double c = std::get<WithConstant>(form).c;
    const double logd = std::log1p(2.0 * profile.d_bar);
    r.value = c * (std::sqrt(2.0 * profile.delta_c * logd) + 2.0 * logd);
    r.inputs["C"] = c;
    r.notes = "universal-constant form with chosen C; " + dilation_note(profile);
  }
  return r;
}

BoundReport bernstein_tail(double t, std::size_t dim, double big_r, double nu) {
  if (!(t >= 0.0)) throw std::invalid_argument("tail level t must be >= 0");
  if (!(big_r > 0.0)) throw std::invalid_argument("uniform bound R must be > 0");
  if (!(nu >= 0.0)) throw std::invalid_argument("variance statistic must be >= 0");
  BoundReport r;
  r.kind = BoundKind::bernstein_tail;
  r.inputs = {{"t", t}, {"dim", static_cast<double>(dim)}, {"R", big_r}, {"nu", nu}};
  const double denom = 2.0 * big_r * t + 4.0 * nu;
  r.value = 2.0 * static_cast<double>(dim) * (t == 0.0 ? 1.0 : std::exp(-t * t / denom));
  return r;
}

VarianceEnvelope lcpf_variance_envelope(const Topology& t, EnvelopeMode mode) {
  const RealMatrix lap = laplacian(t);
  const double lap_norm = operator_norm(lap);
  const double n = static_cast<double>(t.num_nodes());
  double scale = 0.0;
  VarianceEnvelope env;
  if (std::holds_alternative<SphereEnvelope>(mode)) {
    scale = 2.0 / n;
    env.nu_cap = 2.0;
  } else {
    const double delta = std::get<BoundedEnvelope>(mode).delta;
    if (!(delta >= 0.0)) throw std::invalid_argument("perturbation bound must be >= 0");
    scale = 4.0 * delta * delta;
    env.nu_cap = scale * n;
  }
  env.matrix = scale * kron(RealMatrix(RealMatrix::Identity(2, 2)), lap);
  env.nu = scale * lap_norm;
  return env;
}

BoundReport lcpf_tail_bound(double t, std::size_t n, double delta) {
  if (!(t >= 0.0)) throw std::invalid_argument("tail level t must be >= 0");
  if (!(delta >= 0.0)) throw std::invalid_argument("perturbation bound must be >= 0");
  if (n == 0) throw std::invalid_argument("lcpf bound needs n >= 1");
  BoundReport r;
  r.kind = BoundKind::lcpf_tail;
  r.inputs = {{"t", t}, {"n", static_cast<double>(n)}, {"delta", delta}};
  const double nd = static_cast<double>(n);
  const double denom = 4.0 * (delta * delta * nd + delta * t / 3.0);
  if (t == 0.0) {
    r.value = nd;
  } else if (denom == 0.0) {
    r.value = 0.0;
    r.degenerate = true;
  } else {
    r.value = nd * std::exp(-t * t / denom);
  }
  r.notes =
      "prefactor n is literal and hides a dimensional constant; rigorous alternatives are the "
      "Bernstein prefactor 2(2n) or an intrinsic-dimension prefactor";
  return r;
}

BoundReport lcpf_expectation_bound(std::size_t n, double delta) {
  if (!(delta >= 0.0)) throw std::invalid_argument("perturbation bound must be >= 0");
  if (n == 0) throw std::invalid_argument("lcpf bound needs n >= 1");
  BoundReport r;
  r.kind = BoundKind::lcpf_expectation;
  r.inputs = {{"n", static_cast<double>(n)}, {"delta", delta}};
  const double nd = static_cast<double>(n);
  const double log4n = std::log(4.0 * nd);
  r.value = 2.0 * delta * std::sqrt(2.0) * (std::sqrt(nd * log4n) + log4n / 3.0);
  return r;
}

}  // namespace gridconc
