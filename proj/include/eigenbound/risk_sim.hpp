#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "eigenbound/divergences.hpp"
#include "eigenbound/gibbs_prior.hpp"
#include "eigenbound/parallel.hpp"
#include "eigenbound/so_group.hpp"

namespace eigenbound::sim {

// How the true basis is chosen per replicate. Plug-in risk is rotation
// invariant, so Identity is the cheap default; Haar re-draws the basis each
// replicate and must agree within Monte Carlo error.
enum class TruthMode { Identity, Fixed, Haar };

struct SimConfig {
  std::int64_t replicates = 2000;
  std::uint64_t seed = 1;
  TruthMode truth = TruthMode::Identity;
  std::optional<Rotation> truth_rotation;  // for TruthMode::Fixed
  Exec exec = Exec::Parallel;
};

// Plug-in estimator risk estimate. Replicates that hit an eigenvalue tie at
// the boundary of I are excluded from the mean; more than 0.1% of them sets
// `tie_warn`.
struct RiskEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t replicates_used = 0;
  std::int64_t tie_splits = 0;
  bool tie_warn = false;
  std::vector<double> losses;  // per replicate, NaN where tie-split excluded
};

// E |P_I(hat Sigma) - P_I(U)|_HS^2 for hat Sigma the sample covariance of n
// draws from N(0, U Lambda U^T).
RiskEstimate simulate_pca_risk(const div::PcaModel& model, const IndexSet& I,
                               const SimConfig& cfg);

// Same loss for the denoising observation X = U Lambda U^T + sigma W.
RiskEstimate simulate_denoise_risk(const div::DenoiseModel& model,
                                   const IndexSet& I, const SimConfig& cfg);

// Bayes risk under the exp-trace prior: outer Monte Carlo over thinned chain
// states U ~ pi_h, inner data replicates per state. The standard error is
// computed across outer states (the chain is the dominant noise source).
struct BayesSimConfig {
  int outer = 200;
  int inner = 10;
  double h = 1.0;
  prior::ChainConfig chain;
};

RiskEstimate simulate_bayes_risk(const div::PcaModel& model, const IndexSet& I,
                                 const BayesSimConfig& bayes,
                                 const SimConfig& cfg);

// Lower-versus-simulated sanity: twice the capped structural sum at J = full
// set must not exceed (1+tol) times the simulated plug-in risk.
struct SandwichResult {
  double lower_capped_2x = 0.0;
  RiskEstimate risk;
  double tol = 0.1;
  bool holds = false;
};

SandwichResult sandwich_check(const div::PcaModel& model, const IndexSet& I,
                              const SimConfig& cfg, double tol = 0.1);

}  // namespace eigenbound::sim
