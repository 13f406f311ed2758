#include "eigenbound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "eigenbound/calibration.hpp"

namespace eigenbound::lb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void set_truncation(BoundReport& r, const Spectrum& s) {
  r.truncation.truncated = s.profile() != Spectrum::Profile::Explicit;
  r.truncation.p = s.p();
  r.truncation.source = s.profile_name();
}

// Capped double sum for one candidate J (members 1-based ascending).
double eval_candidate(const Spectrum& s, const IndexSet& I,
                      const std::vector<int>& j_members, std::int64_t n,
                      std::vector<PairTermEntry>* terms) {
  const double cap = 1.0 / static_cast<double>(j_members.size());
  double total = 0.0;
  for (int i : j_members) {
    if (!I.contains(i)) continue;
    for (int j : j_members) {
      if (I.contains(j)) continue;
      const double t = std::min(pair_term(s[i], s[j], n), cap);
      total += t;
      if (terms) terms->push_back({i, j, t});
    }
  }
  return total;
}

bool is_leading_block(const IndexSet& I) {
  int expect = 1;
  for (int i : I) {
    if (i != expect) return false;
    ++expect;
  }
  return true;
}

std::vector<std::vector<int>> heuristic_candidates(int p, const IndexSet& I) {
  std::vector<std::vector<int>> cands;
  // All contiguous windows [a, b] of size >= 2 (the full set is [1, p]).
  for (int a = 1; a <= p; ++a) {
    for (int b = a + 1; b <= p; ++b) {
      std::vector<int> w;
      w.reserve(static_cast<std::size_t>(b - a + 1));
      for (int k = a; k <= b; ++k) w.push_back(k);
      cands.push_back(std::move(w));
    }
  }
  // All cross pairs {i, j}, i in I, j not in I.
  const IndexSet comp = I.complement(p);
  for (int i : I) {
    for (int j : comp) {
      cands.push_back(i < j ? std::vector<int>{i, j} : std::vector<int>{j, i});
    }
  }
  return cands;
}

std::vector<std::vector<int>> exhaustive_candidates(int p) {
  std::vector<std::vector<int>> cands;
  const std::uint32_t total = 1u << p;
  cands.reserve(total - 1);
  for (std::uint32_t mask = 1; mask < total; ++mask) {
    std::vector<int> members;
    for (int k = 0; k < p; ++k) {
      if (mask & (1u << k)) members.push_back(k + 1);
    }
    cands.push_back(std::move(members));
  }
  return cands;
}

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

double pair_term(double lam_i, double lam_j, std::int64_t n) {
  require(n >= 1, "pair_term: n must be >= 1");
  require(lam_i >= 0.0 && lam_j >= 0.0, "pair_term: eigenvalues must be >= 0");
  const double gap = lam_i - lam_j;
  if (gap == 0.0) return kInf;
  return lam_i * lam_j / (static_cast<double>(n) * gap * gap);
}

BoundReport theorem_main_bound(const Spectrum& spectrum, const IndexSet& I,
                               std::int64_t n, JSearch strategy, Exec exec) {
  const int p = spectrum.p();
  require(!I.empty() && I.max_index() <= p,
          "theorem_main_bound: I must be non-empty within 1..p");
  require(n >= 1, "theorem_main_bound: n must be >= 1");
  if (strategy == JSearch::Exhaustive) {
    require(p <= 12, "theorem_main_bound: exhaustive search limited to p <= 12");
  }

  const std::vector<std::vector<int>> cands = strategy == JSearch::Exhaustive
                                                  ? exhaustive_candidates(p)
                                                  : heuristic_candidates(p, I);
  if (cands.empty()) throw std::invalid_argument("theorem_main_bound: empty candidate family");

  std::vector<double> values(cands.size(), 0.0);
  parallel_for(static_cast<std::int64_t>(cands.size()), exec, [&](std::int64_t k) {
    values[static_cast<std::size_t>(k)] =
        eval_candidate(spectrum, I, cands[static_cast<std::size_t>(k)], n, nullptr);
  });

  // First maximal candidate in enumeration order; independent of thread count.
  std::size_t best = 0;
  for (std::size_t k = 1; k < cands.size(); ++k) {
    if (values[k] > values[best]) best = k;
  }

  BoundReport report;
  report.per_pair_terms.clear();
  report.value = eval_candidate(spectrum, I, cands[best], n, &report.per_pair_terms);
  report.witness_set = IndexSet(cands[best]);
  set_truncation(report, spectrum);
  for (const PairTermEntry& e : report.per_pair_terms) {
    if (spectrum[e.i] == spectrum[e.j]) {
      report.flags.push_back("equal_eigenvalue_pair_capped");
      break;
    }
  }
  if (strategy == JSearch::Heuristic && !is_leading_block(I)) {
    report.flags.push_back("heuristic_unverified_for_nonleading_target");
  }
  return report;
}

double asymptotic_limit(const Spectrum& spectrum, const IndexSet& I) {
  const int p = spectrum.p();
  require(!I.empty() && I.max_index() <= p,
          "asymptotic_limit: I must be non-empty within 1..p");
  const IndexSet comp = I.complement(p);
  double sum = 0.0;
  for (int i : I) {
    for (int j : comp) {
      const double gap = spectrum[i] - spectrum[j];
      if (gap == 0.0) return kInf;
      sum += spectrum[i] * spectrum[j] / (gap * gap);
    }
  }
  return 2.0 * sum;
}

BoundReport bayes_bound(const Spectrum& spectrum, int d, std::int64_t n,
                        double h) {
  const int p = spectrum.p();
  require(d >= 1 && d < p, "bayes_bound: need 1 <= d < p");
  require(n >= 1, "bayes_bound: n must be >= 1");
  require(h > 0.0 && std::isfinite(h), "bayes_bound: h must be positive finite");

  const double cap = 1.0 / (h * h * static_cast<double>(p));
  BoundReport report;
  for (int i = 1; i <= d; ++i) {
    for (int j = d + 1; j <= p; ++j) {
      const double t = std::min(pair_term(spectrum[i], spectrum[j], n), cap);
      report.per_pair_terms.push_back({i, j, t});
      report.value += t;
    }
  }
  report.witness_tuning["h"] = h;
  report.witness_tuning["cap"] = cap;
  report.witness_tuning["d"] = static_cast<double>(d);
  set_truncation(report, spectrum);
  if (h < prior::kCalibratedHConcentrationHalf) {
    report.flags.push_back("h_below_calibrated_concentration");
  }
  return report;
}

BoundReport spiked_bound(int p, int d, double hi, double lo, std::int64_t n) {
  require(p >= 2 && d >= 1 && d < p, "spiked_bound: need p >= 2 and 1 <= d < p");
  require(hi > lo && lo > 0.0, "spiked_bound: need hi > lo > 0");
  require(n >= 1, "spiked_bound: n must be >= 1");

  const double gap = hi - lo;
  const double raw = static_cast<double>(d) * static_cast<double>(p - d) /
                     static_cast<double>(n) * hi * lo / (gap * gap);
  BoundReport report;
  report.value = std::min(raw, static_cast<double>(std::min(d, p - d)));
  report.witness_tuning["d"] = static_cast<double>(d);
  report.witness_tuning["raw"] = raw;
  report.truncation.p = p;
  return report;
}

BoundReport spiked_general_bound(const Spectrum& spectrum, int d,
                                 std::int64_t n) {
  const int p = spectrum.p();
  require(d >= 1 && 2 * d <= p, "spiked_general_bound: need 1 <= d <= p - d");
  require(n >= 1, "spiked_general_bound: n must be >= 1");
  const double tail = spectrum[d + 1];
  for (int j = d + 1; j <= p; ++j) {
    require(std::abs(spectrum[j] - tail) <= 1e-12 * std::max(1.0, std::abs(tail)),
            "spiked_general_bound: tail eigenvalues must be constant");
  }
  require(spectrum[d] > tail, "spiked_general_bound: need lambda_d > tail value");

  BoundReport report;
  const double ratio = static_cast<double>(p) / static_cast<double>(n);
  for (int i = 1; i <= d; ++i) {
    const double gap = spectrum[i] - tail;
    const double t = std::min(ratio * spectrum[i] * tail / (gap * gap), 1.0);
    report.per_pair_terms.push_back({i, d + 1, t});
    report.value += t;
  }
  report.witness_tuning["d"] = static_cast<double>(d);
  set_truncation(report, spectrum);
  return report;
}

BoundReport decay_bounds(DecayKind kind, double alpha, int d, std::int64_t n,
                         DecayTarget target) {
  require(alpha > 0.0, "decay_bounds: alpha must be > 0");
  require(d >= 1, "decay_bounds: d must be >= 1");
  require(n >= 1, "decay_bounds: n must be >= 1");

  BoundReport report;
  report.witness_tuning["alpha"] = alpha;
  report.witness_tuning["d"] = static_cast<double>(d);
  const double dn = static_cast<double>(d) * static_cast<double>(d) /
                    static_cast<double>(n);
  if (kind == DecayKind::Exp) {
    report.value = 1.0 / static_cast<double>(n);
    report.truncation.source = "exp";
  } else if (target == DecayTarget::SingleProjector) {
    report.value = std::min(1.0, dn);
    report.truncation.source = "poly";
  } else {
    const double inner = std::min(static_cast<double>(d),
                                  std::sqrt(static_cast<double>(n) / static_cast<double>(d)));
    const double logplus = inner > 1.0 ? std::log(inner) : 0.0;
    report.value = std::min(static_cast<double>(d), dn * (1.0 + logplus));
    report.truncation.source = "poly";
  }
  // Witness construction behind the corollary: the boundary pair for the
  // single projector, the symmetric window around d for the leading block.
  if (target == DecayTarget::SingleProjector) {
    report.witness_set = IndexSet({d, d + 1});
  } else {
    std::vector<int> window;
    for (int j = d / 2 + 1; j <= (3 * d) / 2; ++j) window.push_back(j);
    if (window.size() < 2) window = {d, d + 1};
    report.witness_set = IndexSet(window);
  }
  // Closed-form profile bound: no explicit truncation enters the value.
  report.truncation.truncated = false;
  report.truncation.p = 0;
  return report;
}

double lemma_a1_sum(int m, double x) {
  require(m >= 1, "lemma_a1_sum: m must be >= 1");
  require(x >= 0.0, "lemma_a1_sum: x must be >= 0");
  double s = 0.0;
  for (int k = 1; k <= m; ++k) {
    s += std::min(x / static_cast<double>(k),
                  static_cast<double>(k) / static_cast<double>(m));
  }
  return s;
}

double lemma_a1_envelope(int m, double x) {
  require(m >= 1, "lemma_a1_envelope: m must be >= 1");
  require(x >= 0.0, "lemma_a1_envelope: x must be >= 0");
  if (x == 0.0) return 0.0;
  const double inner = std::min(static_cast<double>(m),
                                std::sqrt(static_cast<double>(m) / x));
  const double logplus = inner > 1.0 ? std::log(inner) : 0.0;
  return std::min(static_cast<double>(m), x * (1.0 + logplus));
}

double chapman_robbins_eval(double gain, double chi2_model, double chi2_prior) {
  require(chi2_model >= 0.0 && chi2_prior >= 0.0,
          "chapman_robbins_eval: chi-square divergences must be >= 0");
  if (gain == 0.0) return 0.0;
  const double denom = div::chi2_product(chi2_model, chi2_prior);
  if (denom == 0.0) return kInf;
  if (std::isinf(denom)) return 0.0;
  return gain * gain / denom;
}

double chapman_robbins_multi(const std::vector<double>& gains,
                             const std::vector<double>& chi2_model,
                             const std::vector<double>& chi2_prior) {
  require(!gains.empty() && gains.size() == chi2_model.size() &&
              gains.size() == chi2_prior.size(),
          "chapman_robbins_multi: gains and divergences must be same non-empty size");
  double gain = 0.0;
  double denom = 0.0;
  for (std::size_t k = 0; k < gains.size(); ++k) {
    gain += gains[k];
    denom += div::chi2_product(chi2_model[k], chi2_prior[k]);
  }
  if (gain == 0.0) return 0.0;
  if (denom == 0.0) return kInf;
  if (std::isinf(denom)) return 0.0;
  return gain * gain / denom;
}

BoundReport density_toy_bound(std::int64_t n, const DensityToyConfig& cfg) {
  require(n >= 1, "density_toy_bound: n must be >= 1");
  require(cfg.beta > 0.0, "density_toy_bound: beta must be > 0");
  require(cfg.q > 0.0 && cfg.q < 1.0, "density_toy_bound: q must be in (0,1)");
  require(cfg.c0 > 0.0, "density_toy_bound: c0 must be > 0");
  const double h = cfg.h_override
                       ? *cfg.h_override
                       : std::pow(static_cast<double>(n),
                                  -1.0 / (2.0 * cfg.beta + 1.0));
  require(h > 0.0 && h <= 1.0, "density_toy_bound: bandwidth must be in (0,1]");

  BoundReport report;
  const double hbeta = std::pow(h, cfg.beta);
  // Perturbation amplitude c0 h^beta K must keep the base density above 1/4.
  if (cfg.c0 * hbeta * cfg.kernel_max > 0.25 + 1e-12) {
    report.flags.push_back("density_floor_violated");
  }
  const double chi2_prior = (1.0 - 2.0 * cfg.q) * (1.0 - 2.0 * cfg.q) /
                            (cfg.q * (1.0 - cfg.q));
  const double exponent = 32.0 * cfg.c0 * cfg.c0 *
                          std::pow(h, 2.0 * cfg.beta + 1.0) *
                          static_cast<double>(n) * cfg.kernel_l2_sq;
  const double chi2_model = exponent > 709.0 ? kInf : std::expm1(exponent);
  const double gain =
      std::abs(1.0 - 2.0 * cfg.q) * 2.0 * hbeta * cfg.c0 * cfg.kernel_at_zero;
  report.value = chapman_robbins_eval(gain, chi2_model, chi2_prior);
  report.witness_tuning["h"] = h;
  report.witness_tuning["q"] = cfg.q;
  report.witness_tuning["beta"] = cfg.beta;
  report.witness_tuning["c0"] = cfg.c0;
  report.witness_tuning["chi2_model"] = chi2_model;
  report.witness_tuning["chi2_prior"] = chi2_prior;
  report.witness_tuning["gain"] = gain;
  return report;
}

double linear_functional_bound(const Spectrum& spectrum, int i,
                               const Eigen::VectorXd& alpha, std::int64_t n,
                               double k) {
  const int p = spectrum.p();
  require(i >= 1 && i <= p, "linear_functional_bound: rank i out of range");
  require(alpha.size() == p, "linear_functional_bound: alpha must have length p");
  require(n >= 1, "linear_functional_bound: n must be >= 1");
  require(k >= 1.0, "linear_functional_bound: tuning k must be >= 1");
  if (i > 1) {
    require(spectrum[i - 1] > spectrum[i],
            "linear_functional_bound: need separation lambda_{i-1} > lambda_i");
  }
  if (i < p) {
    require(spectrum[i] > spectrum[i + 1],
            "linear_functional_bound: need separation lambda_i > lambda_{i+1}");
  }
  const double c2 = std::cos(M_PI / (2.0 * k)) * std::cos(M_PI / (2.0 * k));
  double sum = 0.0;
  for (int j = 1; j <= p; ++j) {
    if (j == i) continue;
    const double li = spectrum[i];
    const double lj = spectrum[j];
    require(li > 0.0 && lj > 0.0,
            "linear_functional_bound: eigenvalues must be positive");
    const double gap = li - lj;
    const double denom =
        static_cast<double>(n) * gap * gap / (li * lj) + k * k;
    sum += alpha[j - 1] * alpha[j - 1] / denom;
  }
  return c2 * sum;
}

double linear_functional_bound_limit(const Spectrum& spectrum, int i,
                                     const Eigen::VectorXd& alpha, double c) {
  const int p = spectrum.p();
  require(i >= 1 && i <= p, "linear_functional_bound_limit: rank i out of range");
  require(alpha.size() == p, "linear_functional_bound_limit: alpha must have length p");
  require(c > 0.0, "linear_functional_bound_limit: c must be > 0");
  double sum = 0.0;
  for (int j = 1; j <= p; ++j) {
    if (j == i) continue;
    const double li = spectrum[i];
    const double lj = spectrum[j];
    require(li > 0.0 && lj > 0.0,
            "linear_functional_bound_limit: eigenvalues must be positive");
    const double gap = li - lj;
    const double denom = gap * gap / (li * lj) + M_PI * M_PI / (4.0 * c * c);
    sum += alpha[j - 1] * alpha[j - 1] / denom;
  }
  return sum;
}

VanTreesResult van_trees_matrix_bound(const Eigen::MatrixXd& m_dpsi,
                                      const Eigen::MatrixXd& m_model,
                                      const Eigen::MatrixXd& m_prior) {
  require(m_model.rows() == m_model.cols() && m_prior.rows() == m_prior.cols(),
          "van_trees_matrix_bound: denominator blocks must be square");
  require(m_model.rows() == m_prior.rows(),
          "van_trees_matrix_bound: denominator blocks must have equal size");
  require(m_dpsi.cols() == m_model.rows(),
          "van_trees_matrix_bound: m_dpsi column count must match");

  Eigen::MatrixXd denom = m_model + m_prior;
  denom = 0.5 * (denom + denom.transpose()).eval();
  VanTreesResult out;
  Eigen::LLT<Eigen::MatrixXd> llt(denom);
  if (llt.info() != Eigen::Success) {
    out.regularized = true;
    denom += 1e-10 * Eigen::MatrixXd::Identity(denom.rows(), denom.cols());
    llt.compute(denom);
    if (llt.info() != Eigen::Success) {
      throw std::runtime_error(
          "van_trees_matrix_bound: denominator singular after regularization");
    }
  }
  const Eigen::MatrixXd x = llt.solve(m_dpsi.transpose());
  out.value = (m_dpsi * x).trace();
  return out;
}

VanTreesResult van_trees_matrix_bound_mc(
    const div::PcaModel& model, double h,
    const std::vector<Eigen::MatrixXd>& prior_samples,
    const std::function<Eigen::VectorXd(const Eigen::MatrixXd&, int, int)>&
        dpsi_column) {
  require(h >= 0.0 && std::isfinite(h), "van_trees_matrix_bound_mc: h must be >= 0");
  require(!prior_samples.empty(),
          "van_trees_matrix_bound_mc: need at least one prior sample");
  const int p = model.spectrum.p();
  const int dim = SkewSymmetric::dim(p);

  const div::FisherForm fisher = div::fisher_pca(model);
  const Eigen::MatrixXd m_model = fisher.gram();

  int out_dim = -1;
  Eigen::MatrixXd m_dpsi;
  Eigen::MatrixXd m_prior = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd traces(dim);
  const double scale = 1.0 / static_cast<double>(prior_samples.size());
  for (const Eigen::MatrixXd& u : prior_samples) {
    require(u.rows() == p && u.cols() == p,
            "van_trees_matrix_bound_mc: sample dimension mismatch");
    for (int i = 1; i <= p; ++i) {
      for (int j = i + 1; j <= p; ++j) {
        const int k = SkewSymmetric::basis_index(i, j, p);
        // tr(U L^(ij)) = U_ji - U_ij.
        traces[k] = u(j - 1, i - 1) - u(i - 1, j - 1);
        const Eigen::VectorXd col = dpsi_column(u, i, j);
        if (out_dim < 0) {
          out_dim = static_cast<int>(col.size());
          m_dpsi = Eigen::MatrixXd::Zero(out_dim, dim);
        }
        require(col.size() == out_dim,
                "van_trees_matrix_bound_mc: dpsi_column size must be constant");
        m_dpsi.col(k) += scale * col;
      }
    }
    m_prior.selfadjointView<Eigen::Lower>().rankUpdate(traces, scale);
  }
  m_prior = Eigen::MatrixXd(m_prior.selfadjointView<Eigen::Lower>());
  m_prior *= (h * static_cast<double>(p)) * (h * static_cast<double>(p));
  return van_trees_matrix_bound(m_dpsi, m_model, m_prior);
}

BoundReport eigenspace_van_trees(const div::PcaModel& model, const IndexSet& I,
                                 double h, double pair_moment_value) {
  const int p = model.spectrum.p();
  require(!I.empty() && I.max_index() <= p,
          "eigenspace_van_trees: I must be non-empty within 1..p");
  require(h >= 0.0 && std::isfinite(h), "eigenspace_van_trees: h must be >= 0");
  require(std::abs(pair_moment_value) <= 1.0 + 1e-9,
          "eigenspace_van_trees: pair moment must lie in [-1, 1]");

  const div::FisherForm fisher = div::fisher_pca(model);
  const double prior_term = 8.0 * h * h * static_cast<double>(p);
  const IndexSet comp = I.complement(p);
  BoundReport report;
  double min_form = 0.0;
  const double delta = 0.5;
  for (int i : I) {
    for (int j : comp) {
      const int a = std::min(i, j);
      const int b = std::max(i, j);
      const double info = fisher.diag(a, b);
      const double t = 1.0 / (info + prior_term);
      report.per_pair_terms.push_back({i, j, t});
      report.value += t;
      const double alt = prior_term > 0.0
                             ? std::min((1.0 - delta) / info, delta / prior_term)
                             : (1.0 - delta) / info;
      min_form += alt;
    }
  }
  const double pref = 2.0 * pair_moment_value * pair_moment_value;
  report.value *= pref;
  for (PairTermEntry& e : report.per_pair_terms) e.term *= pref;
  report.witness_tuning["h"] = h;
  report.witness_tuning["pair_moment"] = pair_moment_value;
  report.witness_tuning["min_form_value"] = pref * min_form;
  set_truncation(report, model.spectrum);
  return report;
}

BoundReport denoise_bound(const div::DenoiseModel& model, const IndexSet& I,
                          double h, double delta) {
  const int p = model.spectrum.p();
  require(!I.empty() && I.max_index() <= p,
          "denoise_bound: I must be non-empty within 1..p");
  require(h > 0.0 && std::isfinite(h), "denoise_bound: h must be positive finite");
  require(delta > 0.0 && delta < 1.0, "denoise_bound: delta must be in (0,1)");

  const double cap = delta / (8.0 * h * h * static_cast<double>(p));
  const double sigma2 = model.sigma * model.sigma;
  const IndexSet comp = I.complement(p);
  BoundReport report;
  for (int i : I) {
    for (int j : comp) {
      const double gap = model.spectrum[i] - model.spectrum[j];
      const double raw = gap == 0.0 ? kInf : sigma2 / (gap * gap);
      const double t = std::min(raw, cap);
      report.per_pair_terms.push_back({i, j, t});
      report.value += t;
    }
  }
  report.value *= 2.0 * (1.0 - delta) * (1.0 - delta);
  for (PairTermEntry& e : report.per_pair_terms) {
    e.term *= 2.0 * (1.0 - delta) * (1.0 - delta);
  }
  report.witness_tuning["h"] = h;
  report.witness_tuning["delta"] = delta;
  report.witness_tuning["cap"] = cap;
  set_truncation(report, model.spectrum);
  return report;
}

}  // namespace eigenbound::lb
