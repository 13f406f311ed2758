// Compares the serial reference implementations against the OpenMP-parallel
// kernels: identical results are required (counter-based streams make the
// work decomposition invisible), so only wall time may differ.
#include <bit>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>

#include "eigenbound/bounds.hpp"
#include "eigenbound/divergences.hpp"
#include "eigenbound/gibbs_prior.hpp"
#include "eigenbound/parallel.hpp"
#include "eigenbound/risk_sim.hpp"

using namespace eigenbound;

namespace {

double time_once(const std::function<void()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

void report(const char* name, double serial_s, double parallel_s, bool match) {
  std::printf("%-28s serial %8.3fs   parallel %8.3fs   speedup %5.2fx   %s\n",
              name, serial_s, parallel_s,
              parallel_s > 0 ? serial_s / parallel_s : 0.0,
              match ? "results identical" : "RESULTS DIFFER");
}

bool bits_equal(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

}  // namespace

int main() {
  std::printf("threads available: %d\n\n", max_threads());

  {
    const Spectrum spec = Spectrum::from_values({3.0, 2.0, 1.0});
    const div::PcaModel model(spec, 2000);
    const IndexSet I({1});
    sim::SimConfig cfg;
    cfg.replicates = 1500;
    cfg.seed = 7;
    sim::RiskEstimate a, b;
    cfg.exec = Exec::Serial;
    const double ts = time_once([&] { a = sim::simulate_pca_risk(model, I, cfg); });
    cfg.exec = Exec::Parallel;
    const double tp = time_once([&] { b = sim::simulate_pca_risk(model, I, cfg); });
    report("pca risk replicates", ts, tp, bits_equal(a.mean, b.mean));
  }

  {
    const prior::ExpTracePrior pr(8, 2.0);
    prior::ChainConfig cfg;
    cfg.burn_in = 4000;
    cfg.n_samples = 1500;
    cfg.n_chains = 4;
    cfg.seed = 11;
    MomentEstimate a, b;
    const double ts =
        time_once([&] { a = prior::mean_trace(pr, cfg, Exec::Serial); });
    const double tp =
        time_once([&] { b = prior::mean_trace(pr, cfg, Exec::Parallel); });
    report("prior chains (p=8)", ts, tp, bits_equal(a.value, b.value));
  }

  {
    const Spectrum spec = Spectrum::poly(1.0, 64);
    const IndexSet I = IndexSet::leading(4);
    lb::BoundReport a, b;
    const double ts = time_once([&] {
      for (int k = 0; k < 200; ++k)
        a = lb::theorem_main_bound(spec, I, 5000, lb::JSearch::Heuristic,
                                   Exec::Serial);
    });
    const double tp = time_once([&] {
      for (int k = 0; k < 200; ++k)
        b = lb::theorem_main_bound(spec, I, 5000, lb::JSearch::Heuristic,
                                   Exec::Parallel);
    });
    report("J-search candidates (p=64)", ts, tp, bits_equal(a.value, b.value));
  }

  return 0;
}
