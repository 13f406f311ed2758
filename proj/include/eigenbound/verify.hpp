#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eigenbound/parallel.hpp"

namespace eigenbound::verify {

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;  // pinned in code, echoed for the report
  std::string detail;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::vector<CheckResult> checks;
};

inline constexpr std::uint64_t kDefaultVerifySeed = 0x20260814ull;

// The twelve acceptance criteria. Each runs standalone with a forked
// substream of `seed`; rerunning with the same seed is bit-reproducible.
CriterionResult criterion_fisher_fd(std::uint64_t seed, Exec exec);           // 1
CriterionResult criterion_asymptotic_limit(std::uint64_t seed, Exec exec);    // 2
CriterionResult criterion_prior_oracle(std::uint64_t seed, Exec exec);        // 3
CriterionResult criterion_prior_concentration(std::uint64_t seed, Exec exec); // 4
CriterionResult criterion_free_energy(std::uint64_t seed, Exec exec);         // 5
CriterionResult criterion_moment_symmetry(std::uint64_t seed, Exec exec);     // 6
CriterionResult criterion_pair_moment(std::uint64_t seed, Exec exec);         // 7
CriterionResult criterion_sandwich(std::uint64_t seed, Exec exec);            // 8
CriterionResult criterion_envelope_grid();                                    // 9
CriterionResult criterion_density_rate();                                     // 10
CriterionResult criterion_exhaustive_guard(std::uint64_t seed, Exec exec);    // 11
CriterionResult criterion_determinism(std::uint64_t seed, Exec exec);         // 12

std::vector<CriterionResult> run_acceptance(
    std::uint64_t seed = kDefaultVerifySeed, Exec exec = Exec::Parallel);

// Named sub-suites for the command-line `verify` command:
// fisher | prior | sandwich | lemma-a1 | density-toy.
// Throws std::invalid_argument for an unknown suite name.
std::vector<CriterionResult> run_suite(const std::string& suite,
                                       std::uint64_t seed, Exec exec);

bool all_pass(const std::vector<CriterionResult>& results);
std::string report_json(const std::vector<CriterionResult>& results,
                        std::uint64_t seed);

}  // namespace eigenbound::verify
