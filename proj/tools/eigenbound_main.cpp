// Command-line front end: compute lower bounds, run risk simulations, and run
// the verification suites. All stochastic commands are reproducible
// byte-for-byte for a fixed --seed regardless of thread count.
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eigenbound/bounds.hpp"
#include "eigenbound/divergences.hpp"
#include "eigenbound/io.hpp"
#include "eigenbound/risk_sim.hpp"
#include "eigenbound/verify.hpp"

namespace {

using namespace eigenbound;

std::vector<double> parse_double_list(const std::string& s, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw CLI::ValidationError(std::string(what) + ": bad number '" + tok + "'");
    }
  }
  if (out.empty()) throw CLI::ValidationError(std::string(what) + ": empty list");
  return out;
}

std::vector<int> parse_int_list(const std::string& s, const char* what) {
  std::vector<int> out;
  for (double v : parse_double_list(s, what)) {
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
      throw CLI::ValidationError(std::string(what) + ": expected integers");
    out.push_back(i);
  }
  return out;
}

struct ProfileSpec {
  std::string kind;  // explicit | spiked | poly | exp
  std::vector<double> values;
  int p = 0;
  int d = 0;
  double hi = 0.0, lo = 0.0;
  double alpha = 0.0;
};

ProfileSpec parse_profile(const std::string& s) {
  ProfileSpec out;
  const std::size_t colon = s.find(':');
  std::string kind = colon == std::string::npos ? "explicit" : s.substr(0, colon);
  std::string args = colon == std::string::npos ? s : s.substr(colon + 1);
  if (kind == "explicit") {
    out.kind = "explicit";
    out.values = parse_double_list(args, "--profile explicit");
  } else if (kind == "spiked") {
    const std::vector<double> v = parse_double_list(args, "--profile spiked");
    if (v.size() != 4) throw CLI::ValidationError("--profile spiked needs p,d,hi,lo");
    out.kind = "spiked";
    out.p = static_cast<int>(v[0]);
    out.d = static_cast<int>(v[1]);
    out.hi = v[2];
    out.lo = v[3];
  } else if (kind == "poly" || kind == "exp") {
    const std::vector<double> v = parse_double_list(args, "--profile");
    if (v.size() != 1) throw CLI::ValidationError("--profile " + kind + " needs one alpha");
    out.kind = kind;
    out.alpha = v[0];
  } else {
    throw CLI::ValidationError("--profile: unknown kind '" + kind + "'");
  }
  return out;
}

// Materialize a finite spectrum; infinite profiles are truncated at
// p_max = max(4d, 64) unless --pmax overrides.
Spectrum materialize(const ProfileSpec& prof, int d_hint, int pmax_override) {
  if (prof.kind == "explicit") return Spectrum::from_values(prof.values);
  if (prof.kind == "spiked") return Spectrum::spiked(prof.p, prof.d, prof.hi, prof.lo);
  const int d = d_hint > 0 ? d_hint : 1;
  const int pmax = pmax_override > 0 ? pmax_override : std::max(4 * d, 64);
  if (prof.kind == "poly") return Spectrum::poly(prof.alpha, pmax);
  return Spectrum::exponential(prof.alpha, pmax);
}

void emit(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    io::write_file(out_path, content);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "eigenbound: nonasymptotic minimax lower bounds for eigenspace "
      "estimation (PCA and matrix denoising), with Monte Carlo risk "
      "simulation and self-verification suites"};
  // --h is a domain option (prior concentration), so help must not claim the
  // short -h name anywhere in the command tree.
  app.set_help_flag("--help", "print help and exit");
  app.require_subcommand(1);

  // ---- bound ----
  auto* bound_cmd = app.add_subcommand(
      "bound", "Evaluate a lower bound and write a bound report (JSON)");
  bound_cmd->set_help_flag("--help", "print help and exit");
  std::string b_profile;
  std::string b_I;
  std::int64_t b_n = 0;
  int b_d = 0;
  int b_pmax = 0;
  double b_h = 0.0;
  bool b_single = false, b_leading = false, b_exhaustive = false, b_serial = false;
  std::string b_out, b_pairs_out, b_format = "json";
  bound_cmd->add_option("--profile", b_profile,
                        "explicit:v1,v2,... | spiked:p,d,hi,lo | poly:alpha | exp:alpha")
      ->required();
  bound_cmd->add_option("--I", b_I, "target index set, e.g. 1,2 (1-based)");
  bound_cmd->add_option("--n", b_n, "sample size")->required();
  bound_cmd->add_option("--d", b_d, "target block size for --single/--leading/--h");
  bound_cmd->add_option("--h", b_h, "prior concentration: evaluate the prior-capped bound");
  bound_cmd->add_option("--pmax", b_pmax, "truncation dimension for poly/exp profiles");
  bound_cmd->add_flag("--single", b_single, "decay profile, single projector target {d}");
  bound_cmd->add_flag("--leading", b_leading, "decay profile, leading block target {1..d}");
  bound_cmd->add_flag("--exhaustive", b_exhaustive, "exhaustive J-search (p <= 12)");
  bound_cmd->add_flag("--serial", b_serial, "disable parallel candidate evaluation");
  bound_cmd->add_option("--out", b_out, "output path (default: stdout)");
  bound_cmd->add_option("--pairs-out", b_pairs_out, "also write per-pair terms CSV");
  bound_cmd->add_option("--format", b_format, "json|csv for the main report")
      ->check(CLI::IsMember({"json", "csv"}));

  // ---- simulate ----
  auto* sim_cmd = app.add_subcommand(
      "simulate", "Monte Carlo risk of the spectral plug-in estimator");
  sim_cmd->set_help_flag("--help", "print help and exit");
  std::string s_model = "pca";
  std::string s_profile, s_I, s_ngrid, s_out, s_losses_out;
  std::int64_t s_n = 0;
  std::int64_t s_reps = 2000;
  double s_sigma = 1.0, s_h = 1.0;
  std::uint64_t s_seed = 1;
  int s_pmax = 0;
  bool s_serial = false, s_haar = false;
  sim_cmd->add_option("--model", s_model, "pca | denoise | bayes")
      ->check(CLI::IsMember({"pca", "denoise", "bayes"}));
  sim_cmd->add_option("--profile", s_profile, "spectrum profile")->required();
  sim_cmd->add_option("--I", s_I, "target index set (default 1)");
  sim_cmd->add_option("--n", s_n, "single sample size");
  sim_cmd->add_option("--n-grid", s_ngrid, "comma list of sample sizes");
  sim_cmd->add_option("--reps", s_reps, "replicates per grid point");
  sim_cmd->add_option("--sigma", s_sigma, "noise level (denoise model)");
  sim_cmd->add_option("--h", s_h, "prior concentration (bayes model)");
  sim_cmd->add_option("--seed", s_seed, "master seed");
  sim_cmd->add_option("--pmax", s_pmax, "truncation dimension for poly/exp profiles");
  sim_cmd->add_flag("--haar", s_haar, "redraw the true basis from Haar each replicate");
  sim_cmd->add_flag("--serial", s_serial, "serial execution");
  sim_cmd->add_option("--out", s_out, "output CSV path (default: stdout)");
  sim_cmd->add_option("--losses-out", s_losses_out, "per-replicate losses CSV");

  // ---- verify ----
  auto* ver_cmd = app.add_subcommand(
      "verify", "Run a verification suite (exit 0 pass, 1 fail)");
  ver_cmd->set_help_flag("--help", "print help and exit");
  std::string v_suite;
  std::uint64_t v_seed = verify::kDefaultVerifySeed;
  std::string v_out;
  bool v_serial = false;
  ver_cmd->add_option("suite", v_suite,
                      "fisher | prior | sandwich | lemma-a1 | density-toy | all")
      ->required();
  ver_cmd->add_option("--seed", v_seed, "master seed");
  ver_cmd->add_option("--out", v_out, "JSON verdict path (default: stdout)");
  ver_cmd->add_flag("--serial", v_serial, "serial execution");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (bound_cmd->parsed()) {
      const ProfileSpec prof = parse_profile(b_profile);
      const Exec exec = b_serial ? Exec::Serial : Exec::Parallel;
      lb::BoundReport report;
      if (b_single || b_leading) {
        if (prof.kind != "poly" && prof.kind != "exp")
          throw CLI::ValidationError("--single/--leading need a poly/exp profile");
        if (b_d <= 0) throw CLI::ValidationError("--single/--leading need --d");
        report = lb::decay_bounds(
            prof.kind == "poly" ? lb::DecayKind::Poly : lb::DecayKind::Exp,
            prof.alpha, b_d, b_n,
            b_single ? lb::DecayTarget::SingleProjector
                     : lb::DecayTarget::LeadingBlock);
      } else if (b_h > 0.0) {
        if (b_d <= 0 && b_I.empty())
          throw CLI::ValidationError("--h needs --d or a leading --I");
        int d = b_d;
        if (d <= 0) {
          const std::vector<int> members = parse_int_list(b_I, "--I");
          d = static_cast<int>(members.size());
          for (int k = 0; k < d; ++k) {
            if (members[static_cast<std::size_t>(k)] != k + 1)
              throw CLI::ValidationError("--h requires a leading index block");
          }
        }
        const Spectrum spec = materialize(prof, d, b_pmax);
        report = lb::bayes_bound(spec, d, b_n, b_h);
      } else {
        if (b_I.empty()) throw CLI::ValidationError("bound: --I is required");
        const std::vector<int> members = parse_int_list(b_I, "--I");
        IndexSet I(members);
        const Spectrum spec = materialize(prof, I.max_index(), b_pmax);
        report = lb::theorem_main_bound(
            spec, I, b_n,
            b_exhaustive ? lb::JSearch::Exhaustive : lb::JSearch::Heuristic, exec);
      }
      if (b_format == "json") {
        emit(io::bound_report_json(report), b_out);
      } else {
        emit(io::per_pair_csv(report.per_pair_terms), b_out);
      }
      if (!b_pairs_out.empty()) {
        io::write_file(b_pairs_out, io::per_pair_csv(report.per_pair_terms));
      }
      return 0;
    }

    if (sim_cmd->parsed()) {
      if (s_n <= 0 && s_ngrid.empty())
        throw CLI::ValidationError("simulate: provide --n or --n-grid");
      std::vector<std::int64_t> grid;
      if (!s_ngrid.empty()) {
        for (double v : parse_double_list(s_ngrid, "--n-grid"))
          grid.push_back(static_cast<std::int64_t>(v));
      } else {
        grid.push_back(s_n);
      }
      const ProfileSpec prof = parse_profile(s_profile);
      IndexSet I = s_I.empty() ? IndexSet({1}) : IndexSet(parse_int_list(s_I, "--I"));
      const Spectrum spec = materialize(prof, I.max_index(), s_pmax);

      sim::SimConfig cfg;
      cfg.replicates = s_reps;
      cfg.seed = s_seed;
      cfg.truth = s_haar ? sim::TruthMode::Haar : sim::TruthMode::Identity;
      cfg.exec = s_serial ? Exec::Serial : Exec::Parallel;

      std::vector<io::RiskGridRow> rows;
      std::vector<double> last_losses;
      for (std::int64_t n : grid) {
        sim::RiskEstimate est;
        if (s_model == "pca") {
          est = sim::simulate_pca_risk(div::PcaModel(spec, n), I, cfg);
        } else if (s_model == "denoise") {
          est = sim::simulate_denoise_risk(div::DenoiseModel(spec, s_sigma), I, cfg);
        } else {
          sim::BayesSimConfig bayes;
          bayes.h = s_h;
          est = sim::simulate_bayes_risk(div::PcaModel(spec, n), I, bayes, cfg);
        }
        if (est.tie_warn) {
          std::cerr << "warning: " << est.tie_splits
                    << " replicates hit an eigenvalue tie and were excluded\n";
        }
        rows.push_back({n, est.mean, est.std_error});
        last_losses = est.losses;
      }
      emit(io::risk_grid_csv(rows), s_out);
      if (!s_losses_out.empty()) {
        io::write_file(s_losses_out, io::losses_csv(last_losses));
      }
      return 0;
    }

    // verify
    const Exec exec = v_serial ? Exec::Serial : Exec::Parallel;
    std::vector<verify::CriterionResult> results;
    if (v_suite == "all") {
      results = verify::run_acceptance(v_seed, exec);
    } else {
      results = verify::run_suite(v_suite, v_seed, exec);
    }
    emit(verify::report_json(results, v_seed), v_out);
    for (const verify::CriterionResult& r : results) {
      std::cerr << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << " ("
                << r.seconds << "s)\n";
    }
    return verify::all_pass(results) ? 0 : 1;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
