#include "eigenbound/gibbs_prior.hpp"

#include <cmath>

#include "eigenbound/quadrature.hpp"

namespace eigenbound::prior {

namespace {

// QR re-projection onto SO(p); applied periodically so multiplication drift
// never accumulates past the Rotation tolerance.
void reorthonormalize(Eigen::MatrixXd& u) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(u);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < q.cols(); ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  u = q;
}

SkewSymmetric gaussian_unit_direction(int p, RngStream& rng) {
  SkewSymmetric xi(p);
  Eigen::VectorXd& c = xi.coords();
  for (int k = 0; k < c.size(); ++k) c[k] = rng.normal();
  double norm = xi.hs_norm();
  if (norm > 0.0) c /= norm;
  return xi;
}

}  // namespace

ChainDiagnostics run_chain(
    const ExpTracePrior& prior, const ChainConfig& cfg, RngStream stream,
    const std::function<void(const Eigen::MatrixXd&)>& on_sample) {
  int p = prior.p;
  const double hp = prior.h * static_cast<double>(p);
  int thinning = cfg.effective_thinning(p);
  // Step sizes beyond the group diameter stop changing the proposal law, so
  // adaptation clamps here.
  constexpr double kMaxStepSize = 3.141592653589793;

  Eigen::MatrixXd u = Eigen::MatrixXd::Identity(p, p);
  double trace = static_cast<double>(p);
  double eps = cfg.step_init;

  ChainDiagnostics diag;

  auto step = [&](double step_size) -> bool {
    SkewSymmetric xi = gaussian_unit_direction(p, stream);
    Eigen::MatrixXd proposal = u * expm_skew(xi, step_size);
    double proposal_trace = proposal.trace();
    double log_alpha = hp * (proposal_trace - trace);
    bool accept = log_alpha >= 0.0 || std::log(stream.uniform()) < log_alpha;
    if (accept) {
      u = std::move(proposal);
      trace = proposal_trace;
    }
    return accept;
  };

  int window_accepts = 0;
  for (int i = 0; i < cfg.burn_in; ++i) {
    if (step(eps)) ++window_accepts;
    if ((i + 1) % 64 == 0) reorthonormalize(u), trace = u.trace();
    if ((i + 1) % cfg.adapt_window == 0) {
      double rate = static_cast<double>(window_accepts) /
                    static_cast<double>(cfg.adapt_window);
      if (rate > cfg.accept_hi)
        eps *= 1.25;
      else if (rate < cfg.accept_lo)
        eps /= 1.25;
      if (eps > kMaxStepSize) eps = kMaxStepSize;
      if (eps < 1e-5) eps = 1e-5;
      window_accepts = 0;
    }
  }
  diag.step_size = eps;

  std::int64_t accepts = 0;
  std::int64_t total = static_cast<std::int64_t>(cfg.n_samples) * thinning;
  std::int64_t done = 0;
  for (int s = 0; s < cfg.n_samples; ++s) {
    for (int t = 0; t < thinning; ++t) {
      if (step(eps)) ++accepts;
      ++done;
      if (done % 64 == 0) reorthonormalize(u), trace = u.trace();
    }
    diag.trace_series.push_back(trace);
    diag.acceptance_series.push_back(static_cast<double>(accepts) /
                                     static_cast<double>(done));
    on_sample(u);
  }
  diag.acceptance_rate =
      total > 0 ? static_cast<double>(accepts) / static_cast<double>(total)
                : 0.0;
  // High acceptance flags a failure only while the step can still grow: once
  // the step is pegged at the group diameter, proposals are near-independent
  // jumps and a nearly flat target (small h) accepts almost all of them --
  // that is healthy mixing, not a stuck chain.  At h = 0 the rate is exactly
  // 1 by construction.
  bool high_and_tunable = diag.acceptance_rate > 0.70 && eps < kMaxStepSize;
  diag.non_converged = diag.acceptance_rate < 0.10 || high_and_tunable;
  return diag;
}

ChainResult mcmc_sample(const ExpTracePrior& prior, const ChainConfig& cfg,
                        RngStream stream) {
  ChainResult out;
  out.samples.reserve(static_cast<std::size_t>(cfg.n_samples));
  out.diag = run_chain(prior, cfg, stream, [&](const Eigen::MatrixXd& u) {
    out.samples.push_back(u);
  });
  return out;
}

MomentEstimate estimate_moment(
    const ExpTracePrior& prior, const ChainConfig& cfg, Exec exec,
    const std::function<double(const Eigen::MatrixXd&)>& f,
    bool* non_converged) {
  int n_chains = cfg.n_chains;
  std::vector<std::vector<double>> series(
      static_cast<std::size_t>(n_chains));
  std::vector<char> flags(static_cast<std::size_t>(n_chains), 0);
  RngStream base(cfg.seed, 0);
  parallel_for(n_chains, exec, [&](std::int64_t c) {
    auto& vals = series[static_cast<std::size_t>(c)];
    vals.reserve(static_cast<std::size_t>(cfg.n_samples));
    ChainDiagnostics diag = run_chain(
        prior, cfg, base.fork(static_cast<std::uint64_t>(c)),
        [&](const Eigen::MatrixXd& u) { vals.push_back(f(u)); });
    flags[static_cast<std::size_t>(c)] = diag.non_converged ? 1 : 0;
  });
  std::vector<MomentEstimate> per_chain;
  bool any_flag = false;
  for (int c = 0; c < n_chains; ++c) {
    per_chain.push_back(batch_means(series[static_cast<std::size_t>(c)]));
    any_flag = any_flag || flags[static_cast<std::size_t>(c)] != 0;
  }
  if (non_converged) *non_converged = any_flag;
  return pool_chains(per_chain);
}

MomentEstimate mean_trace(const ExpTracePrior& prior, const ChainConfig& cfg,
                          Exec exec, bool* non_converged) {
  return estimate_moment(
      prior, cfg, exec, [](const Eigen::MatrixXd& u) { return u.trace(); },
      non_converged);
}

MomentEstimate pair_moment(const ExpTracePrior& prior, const ChainConfig& cfg,
                           Exec exec, bool* non_converged) {
  return estimate_moment(
      prior, cfg, exec,
      [](const Eigen::MatrixXd& u) {
        return u(0, 0) * u(1, 1) + u(0, 1) * u(1, 0);
      },
      non_converged);
}

double prior_oracle_small_p(int p, double h, SmallPFunctional which,
                            double tol) {
  if (p != 2 && p != 3)
    throw std::invalid_argument("prior_oracle_small_p: p must be 2 or 3");
  const double pi = 3.14159265358979323846;
  if (p == 2) {
    // Normalizers are >= 1, so an absolute floor equal to `tol` keeps every
    // returned moment accurate to ~tol even when the numerator integral is 0.
    auto weighted = [&](const std::function<double(double)>& g) {
      return integrate_doubling(
                 [&](double t) { return g(t) * std::exp(4.0 * h * std::cos(t)); },
                 0.0, 2.0 * pi, tol, tol) /
             (2.0 * pi);
    };
    double z = weighted([](double) { return 1.0; });
    switch (which) {
      case SmallPFunctional::Normalizer: return z;
      case SmallPFunctional::MeanTrace:
        return weighted([](double t) { return 2.0 * std::cos(t); }) / z;
      case SmallPFunctional::PairMoment:
        return weighted([](double t) { return std::cos(2.0 * t); }) / z;
    }
  }
  if (which == SmallPFunctional::PairMoment)
    throw std::invalid_argument(
        "prior_oracle_small_p: pair moment is not a class function for p=3");
  auto weighted = [&](const std::function<double(double)>& g) {
    return integrate_doubling(
               [&](double t) {
                 double tr = 1.0 + 2.0 * std::cos(t);
                 return g(tr) * std::exp(3.0 * h * tr) * (1.0 - std::cos(t));
               },
               0.0, pi, tol, tol) /
           pi;
  };
  double z = weighted([](double) { return 1.0; });
  if (which == SmallPFunctional::Normalizer) return z;
  return weighted([](double tr) { return tr; }) / z;
}

FreeEnergyResult free_energy(int p, double h, const ChainConfig& cfg,
                             Exec exec, int n_nodes) {
  if (n_nodes < 11 || n_nodes % 2 == 0)
    throw std::invalid_argument("free_energy: need odd n_nodes >= 11");
  if (!(h >= 0.0)) throw std::invalid_argument("free_energy: need h >= 0");
  FreeEnergyResult out;
  if (h == 0.0) return out;  // log Z(0) = 0 on the normalized Haar measure
  double step = h / static_cast<double>(n_nodes - 1);
  std::vector<double> w = simpson_weights(n_nodes, step);
  out.grid.resize(static_cast<std::size_t>(n_nodes));
  out.node_means.resize(static_cast<std::size_t>(n_nodes));
  double err2 = 0.0;
  for (int k = 0; k < n_nodes; ++k) {
    double s = step * static_cast<double>(k);
    out.grid[static_cast<std::size_t>(k)] = s;
    MomentEstimate m;
    if (k == 0) {
      // The endpoint node sits at the uniform measure, where the mean trace
      // vanishes exactly (the defining representation carries no trivial
      // component), so no sampling error enters here.
      m.value = 0.0;
      m.std_error = 0.0;
    } else {
      ChainConfig node_cfg = cfg;
      node_cfg.seed = RngStream::mix64(cfg.seed + 0x1000003ull *
                                       static_cast<std::uint64_t>(k));
      bool flag = false;
      m = mean_trace(ExpTracePrior(p, s), node_cfg, exec, &flag);
      out.non_converged = out.non_converged || flag;
    }
    out.node_means[static_cast<std::size_t>(k)] = m;
    double wk = w[static_cast<std::size_t>(k)] * static_cast<double>(p);
    out.value += wk * m.value;
    err2 += wk * wk * m.std_error * m.std_error;
  }
  out.mc_error = std::sqrt(err2);
  return out;
}

double free_energy_limit(double h) {
  if (!(h >= 0.0)) throw std::invalid_argument("free_energy_limit: h < 0");
  if (2.0 * h <= 1.0) return h * h / 2.0;
  return h - 0.25 * std::log(2.0 * h) - 0.375;
}

SymmetryCheckReport haar_symmetry_check(const ExpTracePrior& prior,
                                        const ChainConfig& cfg, Exec exec) {
  int p = prior.p;
  struct Entry {
    int family;
    int i, j;
  };
  std::vector<Entry> entries;
  std::vector<std::string> names = {"diag_mean", "diag_pair_product",
                                    "cross_product", "antisym_square"};
  for (int i = 0; i < p; ++i) entries.push_back({0, i, i});
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) {
      entries.push_back({1, i, j});
      entries.push_back({2, i, j});
      entries.push_back({3, i, j});
    }

  auto eval = [](const Entry& e, const Eigen::MatrixXd& u) {
    switch (e.family) {
      case 0: return u(e.i, e.i);
      case 1: return u(e.i, e.i) * u(e.j, e.j);
      case 2: return u(e.i, e.j) * u(e.j, e.i);
      default: {
        double d = u(e.i, e.j) - u(e.j, e.i);
        return d * d;
      }
    }
  };

  // One pass of chains, all functionals accumulated on the same samples.
  int n_chains = cfg.n_chains;
  std::vector<std::vector<std::vector<double>>> series(
      static_cast<std::size_t>(n_chains));
  std::vector<char> flags(static_cast<std::size_t>(n_chains), 0);
  RngStream base(cfg.seed, 0);
  parallel_for(n_chains, exec, [&](std::int64_t c) {
    auto& per_entry = series[static_cast<std::size_t>(c)];
    per_entry.assign(entries.size(), {});
    ChainDiagnostics diag =
        run_chain(prior, cfg, base.fork(static_cast<std::uint64_t>(c)),
                  [&](const Eigen::MatrixXd& u) {
                    for (std::size_t e = 0; e < entries.size(); ++e)
                      per_entry[e].push_back(eval(entries[e], u));
                  });
    flags[static_cast<std::size_t>(c)] = diag.non_converged ? 1 : 0;
  });

  SymmetryCheckReport report;
  for (int c = 0; c < n_chains; ++c)
    report.non_converged |= flags[static_cast<std::size_t>(c)] != 0;

  std::vector<MomentEstimate> pooled(entries.size());
  for (std::size_t e = 0; e < entries.size(); ++e) {
    std::vector<MomentEstimate> per_chain;
    for (int c = 0; c < n_chains; ++c)
      per_chain.push_back(
          batch_means(series[static_cast<std::size_t>(c)][e]));
    pooled[e] = pool_chains(per_chain);
  }

  for (int fam = 0; fam < 4; ++fam) {
    SymmetryFamilyReport fr;
    fr.name = names[static_cast<std::size_t>(fam)];
    for (std::size_t e = 0; e < entries.size(); ++e) {
      if (entries[e].family != fam) continue;
      fr.estimates.push_back(pooled[e].value);
      fr.std_errors.push_back(pooled[e].std_error);
    }
    for (std::size_t a = 0; a < fr.estimates.size(); ++a)
      for (std::size_t b = a + 1; b < fr.estimates.size(); ++b) {
        double se = std::sqrt(fr.std_errors[a] * fr.std_errors[a] +
                              fr.std_errors[b] * fr.std_errors[b]);
        double d = std::abs(fr.estimates[a] - fr.estimates[b]);
        double units = se > 0.0 ? d / se : (d > 0.0 ? 1e99 : 0.0);
        if (units > fr.max_discrepancy_se) fr.max_discrepancy_se = units;
      }
    report.max_discrepancy_se =
        std::max(report.max_discrepancy_se, fr.max_discrepancy_se);
    report.families.push_back(std::move(fr));
  }
  return report;
}

}  // namespace eigenbound::prior
