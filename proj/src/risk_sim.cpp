#include "eigenbound/risk_sim.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "eigenbound/bounds.hpp"
#include "eigenbound/rng.hpp"
#include "eigenbound/stats.hpp"

namespace eigenbound::sim {

namespace {

// Stream tags so each entry point owns a disjoint counter subspace of the
// master seed.
constexpr std::uint64_t kTagPca = 0x70636172ull;      // "pcar"
constexpr std::uint64_t kTagDenoise = 0x646e6f69ull;  // "dnoi"
constexpr std::uint64_t kTagBayesChain = 0x62636861ull;
constexpr std::uint64_t kTagBayesData = 0x62646174ull;

void validate_index_set(const IndexSet& I, int p) {
  if (I.empty() || I.max_index() > p) {
    throw std::invalid_argument("risk_sim: index set must be non-empty and within 1..p");
  }
}

// The target projector P_I(U Lambda U^T) is only defined when no eigenvalue
// tie straddles the selected ranks.
void validate_split_gap(const Spectrum& s, const IndexSet& I) {
  const IndexSet comp = I.complement(s.p());
  for (int i : I) {
    for (int j : comp) {
      if (s[i] == s[j]) {
        throw std::invalid_argument(
            "risk_sim: zero eigenvalue gap across the target split");
      }
    }
  }
}

Eigen::MatrixXd truth_matrix(const SimConfig& cfg, int p, RngStream& rs) {
  switch (cfg.truth) {
    case TruthMode::Identity:
      return Eigen::MatrixXd::Identity(p, p);
    case TruthMode::Fixed:
      if (!cfg.truth_rotation || cfg.truth_rotation->matrix().rows() != p) {
        throw std::invalid_argument("risk_sim: TruthMode::Fixed requires a p x p truth_rotation");
      }
      return cfg.truth_rotation->matrix();
    case TruthMode::Haar:
      return haar_sample(p, rs).matrix();
  }
  throw std::logic_error("risk_sim: unreachable truth mode");
}

RiskEstimate finalize(std::vector<double> losses, std::vector<std::uint8_t> tie) {
  RiskEstimate out;
  const std::int64_t reps = static_cast<std::int64_t>(losses.size());
  double sum = 0.0;
  std::int64_t used = 0;
  for (std::int64_t r = 0; r < reps; ++r) {
    if (tie[static_cast<std::size_t>(r)]) {
      ++out.tie_splits;
      continue;
    }
    sum += losses[static_cast<std::size_t>(r)];
    ++used;
  }
  if (used == 0) throw std::runtime_error("risk_sim: every replicate hit an eigenvalue tie");
  out.mean = sum / static_cast<double>(used);
  double ss = 0.0;
  for (std::int64_t r = 0; r < reps; ++r) {
    if (tie[static_cast<std::size_t>(r)]) continue;
    const double d = losses[static_cast<std::size_t>(r)] - out.mean;
    ss += d * d;
  }
  if (used > 1) out.std_error = std::sqrt(ss / static_cast<double>(used - 1) / static_cast<double>(used));
  out.replicates_used = used;
  out.tie_warn = static_cast<double>(out.tie_splits) > 1e-3 * static_cast<double>(reps);
  out.losses = std::move(losses);
  return out;
}

}  // namespace

RiskEstimate simulate_pca_risk(const div::PcaModel& model, const IndexSet& I,
                               const SimConfig& cfg) {
  const int p = model.spectrum.p();
  validate_index_set(I, p);
  validate_split_gap(model.spectrum, I);
  if (cfg.replicates < 1) throw std::invalid_argument("risk_sim: replicates must be >= 1");
  const std::int64_t n = model.n;
  Eigen::VectorXd sqrt_lam(p);
  for (int i = 0; i < p; ++i) sqrt_lam[i] = std::sqrt(model.spectrum[i + 1]);

  const std::int64_t reps = cfg.replicates;
  std::vector<double> losses(static_cast<std::size_t>(reps), 0.0);
  std::vector<std::uint8_t> tie(static_cast<std::size_t>(reps), 0);
  RngStream base = RngStream(cfg.seed).fork(kTagPca);

  const bool identity_truth = cfg.truth == TruthMode::Identity;
  parallel_for(reps, cfg.exec, [&](std::int64_t r) {
    RngStream rs = base.fork(static_cast<std::uint64_t>(r));
    const Eigen::MatrixXd u = truth_matrix(cfg, p, rs);
    // One column per observation: x = U diag(sqrt lambda) z, z ~ N(0, I_p).
    Eigen::MatrixXd scaled(p, n);
    for (std::int64_t j = 0; j < n; ++j) {
      for (int i = 0; i < p; ++i) scaled(i, j) = sqrt_lam[i] * rs.normal();
    }
    Eigen::MatrixXd x = identity_truth ? std::move(scaled)
                                       : Eigen::MatrixXd(u * scaled);
    Eigen::MatrixXd sigma_hat = Eigen::MatrixXd::Zero(p, p);
    sigma_hat.selfadjointView<Eigen::Lower>().rankUpdate(x, 1.0 / static_cast<double>(n));
    sigma_hat = Eigen::MatrixXd(sigma_hat.selfadjointView<Eigen::Lower>());
    const EigenprojectorResult hat = eigenprojector_hat(sigma_hat, I);
    if (hat.tie_split) {
      tie[static_cast<std::size_t>(r)] = 1;
      losses[static_cast<std::size_t>(r)] = std::numeric_limits<double>::quiet_NaN();
      return;
    }
    const Projector truth = projector(Rotation(u), I);
    losses[static_cast<std::size_t>(r)] = hs_distance_sq(hat.proj.entries, truth.entries);
  });

  return finalize(std::move(losses), std::move(tie));
}

RiskEstimate simulate_denoise_risk(const div::DenoiseModel& model,
                                   const IndexSet& I, const SimConfig& cfg) {
  const int p = model.spectrum.p();
  validate_index_set(I, p);
  validate_split_gap(model.spectrum, I);
  if (cfg.replicates < 1) throw std::invalid_argument("risk_sim: replicates must be >= 1");
  Eigen::VectorXd lam(p);
  for (int i = 0; i < p; ++i) lam[i] = model.spectrum[i + 1];

  const std::int64_t reps = cfg.replicates;
  std::vector<double> losses(static_cast<std::size_t>(reps), 0.0);
  std::vector<std::uint8_t> tie(static_cast<std::size_t>(reps), 0);
  RngStream base = RngStream(cfg.seed).fork(kTagDenoise);

  parallel_for(reps, cfg.exec, [&](std::int64_t r) {
    RngStream rs = base.fork(static_cast<std::uint64_t>(r));
    const Eigen::MatrixXd u = truth_matrix(cfg, p, rs);
    const Eigen::MatrixXd w = goe_sample(p, rs);
    Eigen::MatrixXd x = u * lam.asDiagonal() * u.transpose() + model.sigma * w;
    x = 0.5 * (x + x.transpose()).eval();
    const EigenprojectorResult hat = eigenprojector_hat(x, I);
    if (hat.tie_split) {
      tie[static_cast<std::size_t>(r)] = 1;
      losses[static_cast<std::size_t>(r)] = std::numeric_limits<double>::quiet_NaN();
      return;
    }
    const Projector truth = projector(Rotation(u), I);
    losses[static_cast<std::size_t>(r)] = hs_distance_sq(hat.proj.entries, truth.entries);
  });

  return finalize(std::move(losses), std::move(tie));
}

RiskEstimate simulate_bayes_risk(const div::PcaModel& model, const IndexSet& I,
                                 const BayesSimConfig& bayes,
                                 const SimConfig& cfg) {
  const int p = model.spectrum.p();
  validate_index_set(I, p);
  validate_split_gap(model.spectrum, I);
  if (bayes.outer < 2 || bayes.inner < 1) {
    throw std::invalid_argument("risk_sim: bayes outer >= 2 and inner >= 1 required");
  }
  if (!(bayes.h >= 0.0)) throw std::invalid_argument("risk_sim: bayes h must be >= 0");

  // Outer states from a single chain so that states are an honest prior
  // sample path; one stream per state for the inner data draws.
  prior::ExpTracePrior pr{p, bayes.h};
  prior::ChainConfig ch = bayes.chain;
  ch.n_chains = 1;
  ch.n_samples = bayes.outer;
  RngStream chain_rs = RngStream(cfg.seed).fork(kTagBayesChain);
  prior::ChainResult states = prior::mcmc_sample(pr, ch, chain_rs);

  const std::int64_t n = model.n;
  Eigen::VectorXd sqrt_lam(p);
  for (int i = 0; i < p; ++i) sqrt_lam[i] = std::sqrt(model.spectrum[i + 1]);

  std::vector<double> outer_means(static_cast<std::size_t>(bayes.outer), 0.0);
  std::vector<std::int64_t> outer_ties(static_cast<std::size_t>(bayes.outer), 0);
  RngStream base = RngStream(cfg.seed).fork(kTagBayesData);

  parallel_for(bayes.outer, cfg.exec, [&](std::int64_t o) {
    const Eigen::MatrixXd& u = states.samples[static_cast<std::size_t>(o)];
    const Projector truth = projector(Rotation(u), I);
    RngStream ro = base.fork(static_cast<std::uint64_t>(o));
    double acc = 0.0;
    std::int64_t used = 0;
    for (int i = 0; i < bayes.inner; ++i) {
      RngStream rs = ro.fork(static_cast<std::uint64_t>(i));
      Eigen::MatrixXd scaled(p, n);
      for (std::int64_t j = 0; j < n; ++j) {
        for (int k = 0; k < p; ++k) scaled(k, j) = sqrt_lam[k] * rs.normal();
      }
      Eigen::MatrixXd x = u * scaled;
      Eigen::MatrixXd sigma_hat = Eigen::MatrixXd::Zero(p, p);
      sigma_hat.selfadjointView<Eigen::Lower>().rankUpdate(x, 1.0 / static_cast<double>(n));
      sigma_hat = Eigen::MatrixXd(sigma_hat.selfadjointView<Eigen::Lower>());
      const EigenprojectorResult hat = eigenprojector_hat(sigma_hat, I);
      if (hat.tie_split) {
        ++outer_ties[static_cast<std::size_t>(o)];
        continue;
      }
      acc += hs_distance_sq(hat.proj.entries, truth.entries);
      ++used;
    }
    outer_means[static_cast<std::size_t>(o)] = used > 0
        ? acc / static_cast<double>(used)
        : std::numeric_limits<double>::quiet_NaN();
  });

  RiskEstimate out;
  double sum = 0.0;
  std::int64_t used = 0;
  for (int o = 0; o < bayes.outer; ++o) {
    out.tie_splits += outer_ties[static_cast<std::size_t>(o)];
    const double v = outer_means[static_cast<std::size_t>(o)];
    if (std::isnan(v)) continue;
    sum += v;
    ++used;
  }
  if (used == 0) throw std::runtime_error("risk_sim: every Bayes replicate hit an eigenvalue tie");
  out.mean = sum / static_cast<double>(used);
  double ss = 0.0;
  for (int o = 0; o < bayes.outer; ++o) {
    const double v = outer_means[static_cast<std::size_t>(o)];
    if (std::isnan(v)) continue;
    const double d = v - out.mean;
    ss += d * d;
  }
  if (used > 1) out.std_error = std::sqrt(ss / static_cast<double>(used - 1) / static_cast<double>(used));
  out.replicates_used = used;
  const std::int64_t total_inner = static_cast<std::int64_t>(bayes.outer) * bayes.inner;
  out.tie_warn = static_cast<double>(out.tie_splits) > 1e-3 * static_cast<double>(total_inner);
  out.losses = std::move(outer_means);
  return out;
}

SandwichResult sandwich_check(const div::PcaModel& model, const IndexSet& I,
                              const SimConfig& cfg, double tol) {
  SandwichResult res;
  res.tol = tol;
  const int p = model.spectrum.p();
  double sum = 0.0;
  const IndexSet comp = I.complement(p);
  for (int i : I) {
    for (int j : comp) {
      sum += std::min(lb::pair_term(model.spectrum[i], model.spectrum[j], model.n),
                      1.0 / static_cast<double>(p));
    }
  }
  res.lower_capped_2x = 2.0 * sum;
  res.risk = simulate_pca_risk(model, I, cfg);
  res.holds = res.lower_capped_2x <= (1.0 + tol) * res.risk.mean;
  return res;
}

}  // namespace eigenbound::sim
