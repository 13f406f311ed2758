#include "eigenbound/verify.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "eigenbound/bounds.hpp"
#include "eigenbound/divergences.hpp"
#include "eigenbound/gibbs_prior.hpp"
#include "eigenbound/io.hpp"
#include "eigenbound/risk_sim.hpp"
#include "eigenbound/rng.hpp"

namespace eigenbound::verify {

namespace {

using div::PcaModel;
using prior::ChainConfig;
using prior::ExpTracePrior;

// Frozen by a one-off oracle pre-run of the exact grid below: the minimum of
// capped-sum / envelope over m in 1..200 and the 25-point log grid of x.
constexpr double kEnvelopeGridMinFrozen = 0.50249999999999995;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void finish(CriterionResult& r, const Timer& t) {
  r.pass = !r.checks.empty();
  for (const CheckResult& c : r.checks) r.pass = r.pass && c.pass;
  r.seconds = t.seconds();
}

bool same_bits(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  return a.empty() ||
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

// Random descending eigenvalues with gaps bounded away from zero so Fisher
// quadratic forms are well-scaled.
std::vector<double> random_descending_spectrum(int p, RngStream& rs) {
  std::vector<double> v(static_cast<std::size_t>(p));
  double cur = 0.5 + rs.uniform();
  for (int i = p - 1; i >= 0; --i) {
    v[static_cast<std::size_t>(i)] = cur;
    cur += 0.05 + 1.5 * rs.uniform();
  }
  return v;
}

SkewSymmetric random_unit_direction(int p, RngStream& rs) {
  SkewSymmetric xi(p);
  for (int i = 1; i <= p; ++i) {
    for (int j = i + 1; j <= p; ++j) xi.set_entry(i, j, rs.normal());
  }
  const double norm = xi.hs_norm();
  xi *= 1.0 / norm;
  return xi;
}

ChainConfig chain_cfg(int burn, int samples, int chains, int thin,
                      std::uint64_t seed) {
  ChainConfig cfg;
  cfg.burn_in = burn;
  cfg.n_samples = samples;
  cfg.n_chains = chains;
  cfg.thinning = thin;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

CriterionResult criterion_fisher_fd(std::uint64_t seed, Exec /*exec*/) {
  Timer timer;
  CriterionResult out{1, "fisher_fd", false, 0.0, {}};
  RngStream rs = RngStream(seed).fork(1);

  double max_rel_pca = 0.0;
  double max_rel_denoise = 0.0;
  const int dims[3] = {2, 3, 5};
  for (int k = 0; k < 50; ++k) {
    const int p = dims[k % 3];
    const Spectrum spec = Spectrum::from_values(random_descending_spectrum(p, rs));
    const std::int64_t n = 1 + static_cast<std::int64_t>(rs.next_u32() % 20);
    const SkewSymmetric xi = random_unit_direction(p, rs);

    const PcaModel pca(spec, n);
    const div::FisherForm form_pca = div::fisher_pca(pca);
    const div::FdCheckResult fd_pca = div::fisher_fd_check(
        form_pca,
        [&](double t) { return div::chi2_pca_exact(pca, Rotation(expm_skew(xi, t))); },
        xi);
    max_rel_pca = std::max(max_rel_pca, fd_pca.relative_error);

    const double sigma = 0.3 + 1.7 * rs.uniform();
    const div::DenoiseModel den(spec, sigma);
    const div::FisherForm form_den = div::fisher_denoise(den);
    const div::FdCheckResult fd_den = div::fisher_fd_check(
        form_den,
        [&](double t) {
          return div::chi2_denoise_exact(den, Rotation(expm_skew(xi, t)));
        },
        xi);
    max_rel_denoise = std::max(max_rel_denoise, fd_den.relative_error);
  }

  out.checks.push_back({"pca_local_expansion", max_rel_pca <= 1e-2, max_rel_pca,
                        0.0, 1e-2,
                        "max relative error of chi^2(t)/t^2 vs quadratic form, "
                        "50 random (spectrum, n, direction), t=1e-3, Richardson"});
  out.checks.push_back({"denoise_local_expansion", max_rel_denoise <= 1e-2,
                        max_rel_denoise, 0.0, 1e-2,
                        "same draws, additive-noise model"});
  finish(out, timer);
  return out;
}

CriterionResult criterion_asymptotic_limit(std::uint64_t seed, Exec exec) {
  Timer timer;
  CriterionResult out{2, "asymptotic_limit", false, 0.0, {}};
  const Spectrum spec = Spectrum::from_values({3.0, 2.0, 1.0});
  const IndexSet I({1});
  const PcaModel model(spec, 5000);
  sim::SimConfig cfg;
  cfg.replicates = 2000;
  cfg.seed = RngStream::mix64(seed + 2);
  cfg.exec = exec;
  const sim::RiskEstimate est = sim::simulate_pca_risk(model, I, cfg);
  const double limit = lb::asymptotic_limit(spec, I);  // 13.5
  const double value = static_cast<double>(model.n) * est.mean;
  const bool pass = std::abs(value - limit) <= 0.10 * limit && !est.tie_warn;
  std::ostringstream detail;
  detail << "n*mean at n=5000, 2000 replicates, MC se(n*mean)="
         << io::format_g17(static_cast<double>(model.n) * est.std_error);
  out.checks.push_back({"n_times_risk", pass, value, limit, 0.10 * limit,
                        detail.str()});
  finish(out, timer);
  return out;
}

CriterionResult criterion_prior_oracle(std::uint64_t seed, Exec exec) {
  Timer timer;
  CriterionResult out{3, "prior_oracle", false, 0.0, {}};
  const double hs[3] = {0.5, 1.0, 2.0};
  int tag = 0;
  for (int p : {2, 3}) {
    for (double h : hs) {
      ++tag;
      const ExpTracePrior pr(p, h);
      const ChainConfig cfg = chain_cfg(5000, 3000, 4, 0,
                                        RngStream::mix64(seed + 300 + tag));
      bool bad = false;
      const MomentEstimate est = prior::mean_trace(pr, cfg, exec, &bad);
      const double ref = prior::prior_oracle_small_p(
          p, h, prior::SmallPFunctional::MeanTrace);
      const double tol = 3.0 * est.std_error;
      std::ostringstream name;
      name << "mean_trace_p" << p << "_h" << h;
      std::ostringstream detail;
      detail << "MCMC vs class-function quadrature, 3 SE window, se="
             << io::format_g17(est.std_error) << (bad ? ", NON-CONVERGED" : "");
      out.checks.push_back({name.str(), std::abs(est.value - ref) <= tol && !bad,
                            est.value, ref, tol, detail.str()});
    }
  }
  finish(out, timer);
  return out;
}

CriterionResult criterion_prior_concentration(std::uint64_t seed, Exec exec) {
  Timer timer;
  CriterionResult out{4, "prior_concentration", false, 0.0, {}};
  const double h = 20.0;
  for (int p = 2; p <= 6; ++p) {
    const ExpTracePrior pr(p, h);
    const ChainConfig cfg =
        chain_cfg(6000, 2000, 4, 0, RngStream::mix64(seed + 400 + p));
    bool bad = false;
    const MomentEstimate est = prior::mean_trace(pr, cfg, exec, &bad);
    const double value = est.value / static_cast<double>(p);
    std::ostringstream name;
    name << "mean_trace_over_p_p" << p;
    out.checks.push_back({name.str(), value >= 0.8 && !bad, value, 0.8, 0.0,
                          "concentration at h=20; requires mean_trace/p >= 0.8"});
  }
  finish(out, timer);
  return out;
}

CriterionResult criterion_free_energy(std::uint64_t seed, Exec exec) {
  Timer timer;
  CriterionResult out{5, "free_energy", false, 0.0, {}};

  {
    const ChainConfig cfg =
        chain_cfg(3000, 3000, 4, 1, RngStream::mix64(seed + 501));
    const prior::FreeEnergyResult fe = prior::free_energy(2, 1.0, cfg, exec, 11);
    const double ref =
        std::log(prior::prior_oracle_small_p(2, 1.0, prior::SmallPFunctional::Normalizer));
    const double tol = 0.01 * std::abs(ref);
    std::ostringstream detail;
    detail << "thermodynamic integration vs quadrature log-normalizer, mc_error="
           << io::format_g17(fe.mc_error)
           << (fe.non_converged ? ", NON-CONVERGED" : "");
    out.checks.push_back({"log_normalizer_p2_h1",
                          std::abs(fe.value - ref) <= tol && !fe.non_converged,
                          fe.value, ref, tol, detail.str()});
  }
  {
    const ChainConfig cfg =
        chain_cfg(3000, 500, 2, 12, RngStream::mix64(seed + 502));
    const prior::FreeEnergyResult fe = prior::free_energy(24, 0.4, cfg, exec, 11);
    const double value = fe.value / (24.0 * 24.0);
    const double ref = prior::free_energy_limit(0.4);  // 0.08
    const double tol = 0.15 * ref;
    std::ostringstream detail;
    detail << "psi(h)/p^2 at p=24 vs weak-coupling limit h^2/2, mc_error(psi)="
           << io::format_g17(fe.mc_error)
           << (fe.non_converged ? ", NON-CONVERGED" : "");
    out.checks.push_back({"free_energy_density_p24",
                          std::abs(value - ref) <= tol && !fe.non_converged,
                          value, ref, tol, detail.str()});
  }
  finish(out, timer);
  return out;
}

CriterionResult criterion_moment_symmetry(std::uint64_t seed, Exec exec) {
  Timer timer;
  CriterionResult out{6, "moment_symmetry", false, 0.0, {}};
  for (double h : {0.0, 2.0}) {
    const ExpTracePrior pr(5, h);
    const ChainConfig cfg = chain_cfg(
        5000, 2000, 4, 0,
        RngStream::mix64(seed + 600 + static_cast<std::uint64_t>(h * 16)));
    const prior::SymmetryCheckReport rep = prior::haar_symmetry_check(pr, cfg, exec);
    std::ostringstream name;
    name << "index_families_p5_h" << h;
    std::ostringstream detail;
    detail << "max over families {E U_ii, E U_ii U_jj, E U_ij U_ji, "
           << "E (U_ij-U_ji)^2} of within-family spread in pooled SE units";
    out.checks.push_back({name.str(),
                          rep.max_discrepancy_se <= 4.0 && !rep.non_converged,
                          rep.max_discrepancy_se, 0.0, 4.0, detail.str()});
  }
  finish(out, timer);
  return out;
}

CriterionResult criterion_pair_moment(std::uint64_t seed, Exec exec) {
  Timer timer;
  CriterionResult out{7, "pair_moment_large_h", false, 0.0, {}};
  const ExpTracePrior pr(10, 10.0);
  const ChainConfig cfg = chain_cfg(8000, 1000, 4, 15, RngStream::mix64(seed + 700));
  bool bad = false;
  const MomentEstimate est = prior::pair_moment(pr, cfg, exec, &bad);
  const double margin = 3.0 * est.std_error;
  std::ostringstream detail;
  detail << "E[U11 U22 + U12 U21] at p=10, h=10 must clear 0.5 with 3 SE margin; se="
         << io::format_g17(est.std_error) << (bad ? ", NON-CONVERGED" : "");
  out.checks.push_back({"pair_moment_p10_h10", est.value - margin >= 0.5 && !bad,
                        est.value, 0.5, margin, detail.str()});
  finish(out, timer);
  return out;
}

CriterionResult criterion_sandwich(std::uint64_t seed, Exec exec) {
  Timer timer;
  CriterionResult out{8, "sandwich", false, 0.0, {}};

  struct Case {
    std::string name;
    Spectrum spec;
    IndexSet I;
    std::int64_t reps;
  };
  const std::vector<Case> cases = {
      {"explicit_3_2_1", Spectrum::from_values({3.0, 2.0, 1.0}), IndexSet({1}), 2000},
      {"spiked_p6_d2", Spectrum::spiked(6, 2, 2.0, 1.0), IndexSet::leading(2), 1200},
      {"poly_alpha1_p32_d4", Spectrum::poly(1.0, 32), IndexSet::leading(4), 600},
  };
  int tag = 0;
  for (const Case& c : cases) {
    ++tag;
    const PcaModel model(c.spec, 5000);
    sim::SimConfig cfg;
    cfg.replicates = c.reps;
    cfg.seed = RngStream::mix64(seed + 800 + static_cast<std::uint64_t>(tag));
    cfg.exec = exec;
    const sim::SandwichResult sw = sim::sandwich_check(model, c.I, cfg, 0.1);
    std::ostringstream detail;
    detail << "2x capped structural sum (J = full) vs 1.1 x simulated plug-in "
              "risk at n=5000; risk mean="
           << io::format_g17(sw.risk.mean)
           << " se=" << io::format_g17(sw.risk.std_error);
    out.checks.push_back({"lower_vs_risk_" + c.name, sw.holds,
                          sw.lower_capped_2x, 1.1 * sw.risk.mean, 0.0,
                          detail.str()});
  }

  {
    const Spectrum spec = Spectrum::from_values({2.0, 1.0});
    const PcaModel model(spec, 50);
    const lb::BoundReport bound = lb::bayes_bound(spec, 1, 50, 2.0);
    sim::BayesSimConfig bayes;
    bayes.outer = 200;
    bayes.inner = 10;
    bayes.h = 2.0;
    bayes.chain = chain_cfg(4000, 200, 1, 3, 0);
    sim::SimConfig cfg;
    cfg.seed = RngStream::mix64(seed + 850);
    cfg.exec = exec;
    const sim::RiskEstimate est =
        sim::simulate_bayes_risk(model, IndexSet({1}), bayes, cfg);
    const double ceiling = est.mean + 3.0 * est.std_error;
    std::ostringstream detail;
    detail << "structural Bayes-risk bound must sit below the simulated Bayes "
              "risk (200x10 outer/inner) plus 3 SE; sim mean="
           << io::format_g17(est.mean);
    out.checks.push_back({"bayes_bound_vs_bayes_risk", bound.value <= ceiling,
                          bound.value, ceiling, 3.0 * est.std_error,
                          detail.str()});
  }
  finish(out, timer);
  return out;
}

CriterionResult criterion_envelope_grid() {
  Timer timer;
  CriterionResult out{9, "envelope_grid", false, 0.0, {}};
  double min_ratio = std::numeric_limits<double>::infinity();
  for (int m = 1; m <= 200; ++m) {
    for (int k = 0; k < 25; ++k) {
      const double x = std::pow(10.0, -3.0 + 6.0 * static_cast<double>(k) / 24.0);
      const double ratio = lb::lemma_a1_sum(m, x) / lb::lemma_a1_envelope(m, x);
      min_ratio = std::min(min_ratio, ratio);
    }
  }
  out.checks.push_back({"grid_min_ratio_floor", min_ratio >= 0.125, min_ratio,
                        0.125, 0.0,
                        "capped-sum / closed-envelope over m in 1..200, x in "
                        "10^{-3..3} (25 log points)"});
  const double drift = std::abs(min_ratio - kEnvelopeGridMinFrozen);
  out.checks.push_back({"grid_min_ratio_frozen",
                        drift <= 1e-9 * kEnvelopeGridMinFrozen, min_ratio,
                        kEnvelopeGridMinFrozen, 1e-9 * kEnvelopeGridMinFrozen,
                        "exact grid minimum frozen from the oracle pre-run"});
  finish(out, timer);
  return out;
}

CriterionResult criterion_density_rate() {
  Timer timer;
  CriterionResult out{10, "density_rate", false, 0.0, {}};
  const std::vector<std::int64_t> grid = {1000, 10'000, 100'000, 1'000'000};
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::int64_t n : grid) {
    const double x = std::log(static_cast<double>(n));
    const double y = std::log(lb::density_toy_bound(n).value);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(grid.size());
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double ref = -2.0 / 3.0;
  out.checks.push_back({"log_log_slope", std::abs(slope - ref) <= 0.05, slope,
                        ref, 0.05,
                        "least-squares slope of log bound vs log n over n in "
                        "{1e3,1e4,1e5,1e6} at beta=1, q=3/4"});
  finish(out, timer);
  return out;
}

CriterionResult criterion_exhaustive_guard(std::uint64_t seed, Exec exec) {
  Timer timer;
  CriterionResult out{11, "exhaustive_guard", false, 0.0, {}};
  RngStream rs = RngStream(seed).fork(11);
  double max_diff = 0.0;
  bool all_equal = true;
  for (int k = 0; k < 20; ++k) {
    const int p = 3 + static_cast<int>(rs.next_u32() % 6);  // 3..8
    const Spectrum spec = Spectrum::from_values(random_descending_spectrum(p, rs));
    const int d = 1 + static_cast<int>(rs.next_u32() % static_cast<unsigned>(p - 1));
    const std::int64_t n =
        std::max<std::int64_t>(1, static_cast<std::int64_t>(
                                      std::pow(10.0, 4.0 * rs.uniform())));
    const IndexSet I = IndexSet::leading(d);
    const lb::BoundReport heur =
        lb::theorem_main_bound(spec, I, n, lb::JSearch::Heuristic, exec);
    const lb::BoundReport exact =
        lb::theorem_main_bound(spec, I, n, lb::JSearch::Exhaustive, Exec::Serial);
    if (!same_bits(heur.value, exact.value)) all_equal = false;
    max_diff = std::max(max_diff, std::abs(heur.value - exact.value));
  }
  out.checks.push_back({"heuristic_equals_exhaustive", all_equal, max_diff, 0.0,
                        0.0,
                        "20 random spectra, p in 3..8, leading target blocks; "
                        "values must match bit-exactly"});
  finish(out, timer);
  return out;
}

CriterionResult criterion_determinism(std::uint64_t seed, Exec exec) {
  Timer timer;
  CriterionResult out{12, "determinism", false, 0.0, {}};
  const Spectrum spec = Spectrum::from_values({3.0, 2.0, 1.0});
  const IndexSet I({1});

  {
    const PcaModel model(spec, 500);
    sim::SimConfig cfg;
    cfg.replicates = 400;
    cfg.seed = RngStream::mix64(seed + 1201);
    cfg.exec = exec;
    const sim::RiskEstimate a = sim::simulate_pca_risk(model, I, cfg);
    const sim::RiskEstimate b = sim::simulate_pca_risk(model, I, cfg);
    sim::SimConfig serial_cfg = cfg;
    serial_cfg.exec = Exec::Serial;
    const sim::RiskEstimate c = sim::simulate_pca_risk(model, I, serial_cfg);
    const bool ok = same_bits(a.mean, b.mean) && same_bits(a.losses, b.losses) &&
                    same_bits(a.mean, c.mean) && same_bits(a.losses, c.losses);
    out.checks.push_back({"risk_sim_replay", ok, ok ? 1.0 : 0.0, 1.0, 0.0,
                          "same seed twice and serial-vs-parallel: bit-identical "
                          "losses and mean"});
  }
  {
    const ExpTracePrior pr(4, 1.0);
    const ChainConfig cfg = chain_cfg(2000, 800, 2, 0, RngStream::mix64(seed + 1202));
    const MomentEstimate a = prior::mean_trace(pr, cfg, exec);
    const MomentEstimate b = prior::mean_trace(pr, cfg, exec);
    const MomentEstimate c = prior::mean_trace(pr, cfg, Exec::Serial);
    const bool ok = same_bits(a.value, b.value) && same_bits(a.value, c.value) &&
                    same_bits(a.std_error, b.std_error) &&
                    same_bits(a.std_error, c.std_error);
    out.checks.push_back({"chain_moment_replay", ok, ok ? 1.0 : 0.0, 1.0, 0.0,
                          "multi-chain mean-trace estimate bit-identical across "
                          "reruns and execution policies"});
  }
  {
    const ChainConfig cfg = chain_cfg(1500, 400, 2, 0, RngStream::mix64(seed + 1203));
    const prior::FreeEnergyResult a = prior::free_energy(3, 0.5, cfg, exec, 11);
    const prior::FreeEnergyResult b = prior::free_energy(3, 0.5, cfg, exec, 11);
    const bool ok = same_bits(a.value, b.value) && same_bits(a.mc_error, b.mc_error);
    out.checks.push_back({"free_energy_replay", ok, ok ? 1.0 : 0.0, 1.0, 0.0,
                          "thermodynamic integration bit-identical across reruns"});
  }
  {
    const PcaModel model(spec, 100);
    sim::BayesSimConfig bayes;
    bayes.outer = 50;
    bayes.inner = 4;
    bayes.h = 1.0;
    bayes.chain = chain_cfg(1000, 50, 1, 2, 0);
    sim::SimConfig cfg;
    cfg.seed = RngStream::mix64(seed + 1204);
    cfg.exec = exec;
    const sim::RiskEstimate a = sim::simulate_bayes_risk(model, I, bayes, cfg);
    const sim::RiskEstimate b = sim::simulate_bayes_risk(model, I, bayes, cfg);
    const bool ok = same_bits(a.mean, b.mean) && same_bits(a.losses, b.losses);
    out.checks.push_back({"bayes_risk_replay", ok, ok ? 1.0 : 0.0, 1.0, 0.0,
                          "prior-averaged risk simulation bit-identical across "
                          "reruns"});
  }
  {
    const lb::BoundReport a =
        lb::theorem_main_bound(spec, I, 100, lb::JSearch::Heuristic, exec);
    const lb::BoundReport b =
        lb::theorem_main_bound(spec, I, 100, lb::JSearch::Heuristic, Exec::Serial);
    const bool ok = io::bound_report_json(a) == io::bound_report_json(b);
    out.checks.push_back({"bound_report_replay", ok, ok ? 1.0 : 0.0, 1.0, 0.0,
                          "serialized bound report identical across execution "
                          "policies"});
  }
  finish(out, timer);
  return out;
}

std::vector<CriterionResult> run_acceptance(std::uint64_t seed, Exec exec) {
  std::vector<CriterionResult> out;
  out.push_back(criterion_fisher_fd(seed, exec));
  out.push_back(criterion_asymptotic_limit(seed, exec));
  out.push_back(criterion_prior_oracle(seed, exec));
  out.push_back(criterion_prior_concentration(seed, exec));
  out.push_back(criterion_free_energy(seed, exec));
  out.push_back(criterion_moment_symmetry(seed, exec));
  out.push_back(criterion_pair_moment(seed, exec));
  out.push_back(criterion_sandwich(seed, exec));
  out.push_back(criterion_envelope_grid());
  out.push_back(criterion_density_rate());
  out.push_back(criterion_exhaustive_guard(seed, exec));
  out.push_back(criterion_determinism(seed, exec));
  return out;
}

std::vector<CriterionResult> run_suite(const std::string& suite,
                                       std::uint64_t seed, Exec exec) {
  std::vector<CriterionResult> out;
  if (suite == "fisher") {
    out.push_back(criterion_fisher_fd(seed, exec));
  } else if (suite == "prior") {
    out.push_back(criterion_prior_oracle(seed, exec));
    out.push_back(criterion_prior_concentration(seed, exec));
    out.push_back(criterion_free_energy(seed, exec));
    out.push_back(criterion_moment_symmetry(seed, exec));
    out.push_back(criterion_pair_moment(seed, exec));
  } else if (suite == "sandwich") {
    out.push_back(criterion_asymptotic_limit(seed, exec));
    out.push_back(criterion_sandwich(seed, exec));
  } else if (suite == "lemma-a1") {
    out.push_back(criterion_envelope_grid());
  } else if (suite == "density-toy") {
    out.push_back(criterion_density_rate());
  } else {
    throw std::invalid_argument("verify: unknown suite: " + suite);
  }
  return out;
}

bool all_pass(const std::vector<CriterionResult>& results) {
  for (const CriterionResult& r : results) {
    if (!r.pass) return false;
  }
  return !results.empty();
}

std::string report_json(const std::vector<CriterionResult>& results,
                        std::uint64_t seed) {
  std::ostringstream os;
  os << "{\n  \"seed\": " << seed << ",\n  \"criteria\": [\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const CriterionResult& r = results[i];
    os << "    {\"id\": " << r.id << ", \"name\": \"" << io::json_escape(r.name)
       << "\", \"pass\": " << (r.pass ? "true" : "false")
       << ", \"seconds\": " << io::json_number(r.seconds) << ", \"checks\": [\n";
    for (std::size_t k = 0; k < r.checks.size(); ++k) {
      const CheckResult& c = r.checks[k];
      os << "      {\"name\": \"" << io::json_escape(c.name)
         << "\", \"pass\": " << (c.pass ? "true" : "false")
         << ", \"value\": " << io::json_number(c.value)
         << ", \"reference\": " << io::json_number(c.reference)
         << ", \"tolerance\": " << io::json_number(c.tolerance)
         << ", \"detail\": \"" << io::json_escape(c.detail) << "\"}"
         << (k + 1 < r.checks.size() ? "," : "") << "\n";
    }
    os << "    ]}" << (i + 1 < results.size() ? "," : "") << "\n";
  }
  os << "  ],\n  \"all_pass\": " << (all_pass(results) ? "true" : "false")
     << "\n}\n";
  return os.str();
}

}  // namespace eigenbound::verify
