#include "homodyne/estimation.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <string>
#include <thread>

#include "homodyne/error.hpp"
#include "homodyne/metrology.hpp"
#include "homodyne/optimizer.hpp"

namespace homodyne::estimation {

namespace {

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct Welford {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  static Welford of(double x) { return {1.0, x, 0.0}; }

  static Welford merge(const Welford& a, const Welford& b) {
    if (a.count == 0.0) return b;
    if (b.count == 0.0) return a;
    const double n = a.count + b.count;
    const double delta = b.mean - a.mean;
    return {n, a.mean + delta * b.count / n, a.m2 + b.m2 + delta * delta * a.count * b.count / n};
  }
};

// Pairwise reduction with a shape fixed by the index range alone.
Welford tree_reduce(std::span<const double> xs) {
  if (xs.empty()) return {};
  if (xs.size() == 1) return Welford::of(xs[0]);
  const std::size_t half = xs.size() / 2;
  return Welford::merge(tree_reduce(xs.first(half)), tree_reduce(xs.subspan(half)));
}

void require_signal(const ProtocolConfig& cfg) {
  if (!is_phase_sensitive(cfg.input)) {
    fail(ErrorKind::ZeroSignal, std::string(class_name(cfg.input)) +
                                    " input has no phase-dependent homodyne mean; phase estimation is impossible");
  }
}

ProtocolConfig at_phase(ProtocolConfig cfg, double phi) {
  cfg.phi = phi;
  return cfg;
}

template <class Fn>
void parallel_for(int n, unsigned threads, Fn&& fn) {
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max(n, 1)));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int i = static_cast<int>(w); i < n; i += static_cast<int>(workers)) fn(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

void validate(const McRun& run) {
  homodyne::validate(run.config);
  require(std::isfinite(run.true_phi), ErrorKind::Parameter, "true_phi must be finite");
  require(run.samples_per_trial > 0, ErrorKind::Parameter, "samples per trial M must be positive");
  require(run.trials > 1, ErrorKind::Parameter, "trial count K must be at least 2");
  require(static_cast<std::uint64_t>(run.samples_per_trial) * static_cast<std::uint64_t>(run.trials) <=
              run.sample_budget,
          ErrorKind::Parameter, "M * K exceeds the sample budget");
  require(run.search_half_width > 0.0 && run.search_half_width < std::numbers::pi / 2, ErrorKind::Parameter,
          "search half width must lie in (0, pi/2)");
}

std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return splitmix(splitmix(splitmix(seed) ^ stream) ^ counter);
}

double standard_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  const std::uint64_t bits = counter_hash(seed, stream, counter) >> 11;
  const double u = (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
}

std::vector<double> sample_stream(const McRun& run, int trial) {
  validate(run);
  require_signal(run.config);
  require(trial >= 0 && trial < run.trials, ErrorKind::Parameter, "trial index out of range");
  const OutputMoments m = output_moments(at_phase(run.config, run.true_phi));
  const double sd = std::sqrt(m.variance);
  std::vector<double> xs(static_cast<std::size_t>(run.samples_per_trial));
  for (std::size_t k = 0; k < xs.size(); ++k) {
    xs[k] = m.mean + sd * standard_normal(run.seed, static_cast<std::uint64_t>(trial), k);
  }
  return xs;
}

std::vector<std::vector<double>> sample_homodyne(const McRun& run) {
  validate(run);
  require_signal(run.config);
  std::vector<std::vector<double>> out(static_cast<std::size_t>(run.trials));
  parallel_for(run.trials, run.threads, [&](int i) { out[i] = sample_stream(run, i); });
  return out;
}

MleResult mle_phase(std::span<const double> samples, const ProtocolConfig& config,
                    std::pair<double, double> interval) {
  require(!samples.empty(), ErrorKind::Parameter, "mle needs at least one sample");
  const auto [lo, hi] = interval;
  require(lo < hi && lo > -std::numbers::pi / 2 && hi < std::numbers::pi / 2, ErrorKind::Parameter,
          "search interval must lie inside (-pi/2, pi/2)");
  require_signal(config);

  const Welford stats = tree_reduce(samples);
  const double xbar = stats.mean;
  const double s2 = stats.m2 / stats.count;
  const auto loglik = [&](double phi) {
    const OutputMoments m = output_moments(at_phase(config, phi));
    const double r = xbar - m.mean;
    return -0.5 * std::log(m.variance) - (r * r + s2) / (2.0 * m.variance);
  };
  const optim::ScanResult best = optim::maximize_scalar(loglik, lo, hi, 1e-8, 401);
  const double edge = 1e-7;
  return {best.argmax, best.argmax - lo <= edge || hi - best.argmax <= edge};
}

McReport mc_report(const McRun& run) {
  validate(run);
  require_signal(run.config);
  const std::pair interval{run.config.phi - run.search_half_width, run.config.phi + run.search_half_width};

  std::vector<double> estimates(static_cast<std::size_t>(run.trials));
  std::vector<char> hits(static_cast<std::size_t>(run.trials), 0);
  parallel_for(run.trials, run.threads, [&](int i) {
    const MleResult r = mle_phase(sample_stream(run, i), run.config, interval);
    estimates[i] = r.phi_hat;
    hits[i] = r.boundary_hit ? 1 : 0;
  });

  const Welford agg = tree_reduce(estimates);
  McReport rep;
  rep.phi_hat_mean = agg.mean;
  rep.phi_hat_var = run.trials > 1 ? agg.m2 / (agg.count - 1.0) : 0.0;
  rep.cfi = cfi_gaussian(at_phase(run.config, run.true_phi));
  require(rep.cfi > 0.0, ErrorKind::ZeroSignal, "Fisher information vanishes at the true phase");
  rep.crb = 1.0 / (run.samples_per_trial * rep.cfi);
  rep.ratio = rep.phi_hat_var / rep.crb;
  rep.boundary_hits = static_cast<int>(std::count(hits.begin(), hits.end(), 1));
  require(std::isfinite(rep.phi_hat_mean) && std::isfinite(rep.phi_hat_var), ErrorKind::NonFinite,
          "Monte-Carlo aggregate is not finite");
  return rep;
}

}  // namespace homodyne::estimation
