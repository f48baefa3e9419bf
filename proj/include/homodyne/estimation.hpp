#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "homodyne/protocol.hpp"

namespace homodyne::estimation {

/// One Monte-Carlo experiment: K trials of M homodyne samples at true_phi,
/// each estimated by Gaussian maximum likelihood around config.phi.
struct McRun {
  ProtocolConfig config;
  double true_phi = 0.0;
  int samples_per_trial = 10'000;
  int trials = 200;
  std::uint64_t seed = 42;
  std::uint64_t sample_budget = 100'000'000;
  double search_half_width = 0.5;
  unsigned threads = 0;  // 0: hardware concurrency; output does not depend on it
};

void validate(const McRun& run);

struct McReport {
  double phi_hat_mean = 0.0;
  double phi_hat_var = 0.0;  // unbiased, over trials
  double crb = 0.0;          // 1 / (M F_c)
  double ratio = 0.0;        // phi_hat_var / crb
  double cfi = 0.0;
  int boundary_hits = 0;
};

/// Counter-based uniform bits: a pure function of (seed, stream, counter).
std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

/// Standard normal draw by inverse CDF of the counter-based uniform.
double standard_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

/// Samples of trial `trial`, drawn from N(mu(true_phi), Omega^2(true_phi)).
std::vector<double> sample_stream(const McRun& run, int trial);

/// All K streams. Rejects inputs without a phase-sensitive mean (ZeroSignal).
std::vector<std::vector<double>> sample_homodyne(const McRun& run);

struct MleResult {
  double phi_hat = 0.0;
  bool boundary_hit = false;
};

/// Maximises the Gaussian log-likelihood of the samples over phi in
/// `interval` (401-point grid, then golden section to 1e-8).
MleResult mle_phase(std::span<const double> samples, const ProtocolConfig& config,
                    std::pair<double, double> interval);

McReport mc_report(const McRun& run);

}  // namespace homodyne::estimation
