#include "homodyne/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "homodyne/error.hpp"
#include "homodyne/fock.hpp"
#include "homodyne/format.hpp"
#include "homodyne/metrology.hpp"
#include "homodyne/optimizer.hpp"

namespace homodyne::verify {

namespace {

// Absolute below magnitude 1, relative above.
double deviation(double value, double reference) {
  return std::abs(value - reference) / std::max(1.0, std::abs(reference));
}

double rel_deviation(double value, double reference) {
  return std::abs(value - reference) / std::abs(reference);
}

template <class Fn>
CheckResult run_check(std::string identity, std::string description, double tolerance, Fn&& fn) {
  CheckResult r{std::move(identity), std::move(description), 0.0, tolerance, Status::Pass, ""};
  try {
    r.deviation = fn();
    if (!(r.deviation <= tolerance)) {
      r.status = Status::Fail;
      r.note = "deviation exceeds tolerance";
    }
  } catch (const Error& e) {
    r.status = Status::Fail;
    r.deviation = std::numeric_limits<double>::quiet_NaN();
    r.note = std::string(to_string(e.kind())) + ": " + e.what();
    if (e.kind() == ErrorKind::CutoffTooSmall) r.note += " (hint: rerun with a larger --cutoff)";
  }
  return r;
}

ProtocolConfig coherent_cfg(double alpha_abs, double t, double phi) {
  return ProtocolConfig{coherent_on_axis(alpha_abs), phi, t, IdealLO{}, BeamSplitterConvention::Real};
}

constexpr double kTs[] = {0.0, 0.25, 0.5, 0.75, 1.0};
constexpr double kPhis[] = {-1.0, -0.4, 0.0, 0.3, 1.2};

}  // namespace

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.status == Status::Pass; });
}

VerifyReport run_oracle_suite(const VerifyOptions& opt) {
  VerifyReport rep;
  const double a = std::sqrt(opt.alpha2);
  const double fault = opt.inject_fault ? 1.01 : 1.0;

  rep.checks.push_back(run_check("coherent-mean", "<X_A> coherent: closed form vs Gaussian vs Fock over (T, phi)", 1e-6, [&] {
    double dev = 0.0;
    for (double t : kTs) {
      const fock::ProtocolOracle oracle(coherent_on_axis(a), t, opt.cutoff);
      for (double phi : kPhis) {
        const double closed = closed_form::coherent_expected_X(a, t, phi);
        dev = std::max(dev, deviation(expected_X(coherent_cfg(a, t, phi)), closed));
        dev = std::max(dev, deviation(fock::quadrature_stats(oracle.output_density(phi)).mean, closed));
      }
    }
    return dev;
  }));

  rep.checks.push_back(run_check("coherent-second-moment", "<X_A^2> coherent: closed form vs Gaussian vs Fock over (T, phi)", 1e-6, [&] {
    double dev = 0.0;
    for (double t : kTs) {
      const fock::ProtocolOracle oracle(coherent_on_axis(a), t, opt.cutoff);
      for (double phi : kPhis) {
        const double closed = closed_form::coherent_expected_X2(a, t, phi);
        dev = std::max(dev, deviation(expected_X2(coherent_cfg(a, t, phi)), closed));
        dev = std::max(dev, deviation(fock::quadrature_stats(oracle.output_density(phi)).second, closed));
      }
    }
    return dev;
  }));

  rep.checks.push_back(run_check("coherent-qfi", "QFI 2|alpha|^2 vs Gaussian and Fock 4 Var(n_A) after BS1", 1e-5, [&] {
    const double closed = 2.0 * opt.alpha2;
    const fock::ProtocolOracle oracle(coherent_on_axis(a), 1.0, opt.cutoff);
    const double numeric = 4.0 * fock::photon_moments(oracle.after_first_splitter(), 0).variance();
    return std::max(rel_deviation(qfi_photon_number(coherent_on_axis(a)), closed), rel_deviation(numeric, closed));
  }));

  rep.checks.push_back(run_check("coherent-max-cfi", "numeric CFI at phi = 0, T = 1 equals 2|alpha|^2", 1e-3, [&] {
    const fock::ProtocolOracle oracle(coherent_on_axis(a), 1.0, opt.cutoff);
    const auto grid = fock::default_quadrature_grid(oracle.output_density(0.0));
    return rel_deviation(fock::numeric_cfi(oracle.pdf_family(grid), grid, 0.0), 2.0 * opt.alpha2);
  }));

  rep.checks.push_back(run_check("gaussian-outcome-cfi", "Gaussian-outcome CFI vs numeric CFI (coherent and phase-dependent variance)",
                                 1e-3, [&] {
    double dev = 0.0;
    const std::pair<double, double> points[] = {{1.0, 0.0}, {1.0, 0.4}, {0.5, 0.0}, {0.75, 1.0}};
    for (const auto& [t, phi] : points) {
      const fock::ProtocolOracle oracle(coherent_on_axis(a), t, opt.cutoff);
      const auto grid = fock::default_quadrature_grid(oracle.output_density(phi));
      const double numeric = fock::numeric_cfi(oracle.pdf_family(grid), grid, phi);
      dev = std::max(dev, rel_deviation(numeric, cfi_gaussian(coherent_cfg(a, t, phi))));
    }
    const StateSpec ds = displaced_squeezed_on_axis(1.5, 0.4);
    const fock::ProtocolOracle oracle(ds, 1.0, opt.cutoff);
    for (double phi : {0.3, 0.8}) {
      const auto grid = fock::default_quadrature_grid(oracle.output_density(phi));
      const double numeric = fock::numeric_cfi(oracle.pdf_family(grid), grid, phi);
      dev = std::max(dev, rel_deviation(numeric, cfi_gaussian(ProtocolConfig{ds, phi, 1.0})));
    }
    return dev;
  }));

  const double lo_alpha = 1.0;
  for (const char* which : {"lo-difference-mean", "lo-difference-second-moment"}) {
    const bool second = std::string(which) == "lo-difference-second-moment";
    rep.checks.push_back(run_check(
        which,
        second ? "<(2J_z)^2> = |beta|^2 <X_A^2> + <n_A> vs Fock, |alpha|^2 = 1, |beta|^2 in {1,4,9}"
               : "<2J_z> = |beta| <X_A> vs Fock, |alpha|^2 = 1, |beta|^2 in {1,4,9}",
        second ? 1e-4 : 1e-5, [&] {
          double dev = 0.0;
          const double phi = 0.3;
          const fock::ProtocolOracle oracle(coherent_on_axis(lo_alpha), 1.0, opt.lo_cutoff);
          const fock::FockDensity out = oracle.output_density(phi);
          for (double beta2 : {1.0, 4.0, 9.0}) {
            const double beta = std::sqrt(beta2);
            ProtocolConfig cfg = coherent_cfg(lo_alpha, 1.0, phi);
            cfg.lo = FiniteLO{Complex{beta, 0.0}};
            const DifferenceMoments closed = homodyne_difference_moments(cfg);
            const fock::DifferenceStats numeric = fock::intensity_difference_moments(out, beta, opt.lo_cutoff);
            dev = std::max(dev, second ? deviation(numeric.second, closed.second_moment) : deviation(numeric.mean, closed.mean));
          }
          return dev;
        }));
  }

  const double dt_alpha = 2.0, dt_nt = 0.5;
  rep.checks.push_back(run_check("displaced-thermal-optimum", "displaced thermal optimum sqrt(N_T+1)/(sqrt2|alpha|) vs numeric CFI", 1e-3, [&] {
    const StateSpec dt = displaced_thermal_on_axis(dt_alpha, dt_nt);
    const fock::ProtocolOracle oracle(dt, 1.0, opt.cutoff);
    const auto grid = fock::default_quadrature_grid(oracle.output_density(0.0));
    const double numeric = fock::numeric_cfi(oracle.pdf_family(grid), grid, 0.0);
    const double closed = sensitivity_displaced_thermal(dt_alpha, dt_nt, 0.0);
    return rel_deviation(1.0 / std::sqrt(numeric), closed);
  }));

  rep.checks.push_back(run_check("displaced-thermal-sensitivity", "displaced thermal sensitivity vs Gaussian error propagation over phi", 1e-9, [&] {
    double dev = 0.0;
    for (double phi : {-0.7, 0.0, 0.2, 0.9}) {
      const ProtocolConfig cfg{displaced_thermal_on_axis(dt_alpha, dt_nt), phi, 1.0};
      dev = std::max(dev, deviation(delta_phi_error_prop(cfg), sensitivity_displaced_thermal(dt_alpha, dt_nt, phi)));
      dev = std::max(dev, deviation(expected_X2(cfg),
                                    closed_form::displaced_thermal_expected_X2(Complex{0.0, dt_alpha}, dt_nt, phi)));
    }
    return dev;
  }));

  const double ds_alpha = 2.0, ds_r = 0.5;
  rep.checks.push_back(run_check("displaced-squeezed-optimum", "displaced squeezed optimum vs numeric CFI at phi = 0", 1e-3, [&] {
    const StateSpec ds = displaced_squeezed_on_axis(ds_alpha, ds_r);
    const fock::ProtocolOracle oracle(ds, 1.0, opt.cutoff);
    const auto grid = fock::default_quadrature_grid(oracle.output_density(0.0));
    const double numeric = fock::numeric_cfi(oracle.pdf_family(grid), grid, 0.0);
    return rel_deviation(1.0 / std::sqrt(numeric), sensitivity_displaced_squeezed(ds_alpha, ds_r, 0.0, 0.0));
  }));

  rep.checks.push_back(run_check("displaced-squeezed-sensitivity", "displaced squeezed sensitivity vs Gaussian error propagation over (phi, theta)",
                                 1e-9, [&] {
    double dev = 0.0;
    for (double theta : {0.0, 0.6, std::numbers::pi}) {
      for (double phi : {-0.5, 0.0, 0.25, 1.0}) {
        const Complex alpha{0.0, ds_alpha};
        const ProtocolConfig cfg{DisplacedSqueezed{alpha, ds_r, theta}, phi, 1.0};
        dev = std::max(dev, deviation(delta_phi_error_prop(cfg), sensitivity_displaced_squeezed(ds_alpha, ds_r, theta, phi)));
        dev = std::max(dev, deviation(expected_X2(cfg), closed_form::displaced_squeezed_expected_X2(alpha, ds_r, theta, phi)));
        dev = std::max(dev, deviation(expected_X(cfg), closed_form::displaced_expected_X(alpha, phi)));
      }
    }
    return dev;
  }));

  rep.checks.push_back(run_check("displaced-squeezed-qfi", "displaced squeezed QFI vs Fock 4 Var(n_A), |alpha| = 1, r = 0.5", 1e-3, [&] {
    const StateSpec ds = displaced_squeezed_on_axis(1.0, 0.5);
    const fock::ProtocolOracle oracle(ds, 1.0, opt.qfi_cutoff);
    const double numeric = 4.0 * fock::photon_moments(oracle.after_first_splitter(), 0).variance();
    const double closed = fault * qfi_displaced_squeezed(1.0, 0.5);
    return std::max(rel_deviation(numeric, closed), rel_deviation(qfi_photon_number(ds), closed));
  }));

  rep.checks.push_back(run_check("optimal-split", "optimal |alpha|^2 vs grid + golden-section argmax, N in {1,5,10,50}", 1e-5, [&] {
    double dev = 0.0;
    for (double n : {1.0, 5.0, 10.0, 50.0}) {
      dev = std::max(dev, std::abs(optimal_alpha2(n) - optim::argmax_split(n).argmax));
    }
    return dev;
  }));

  rep.checks.push_back(run_check("max-cfi", "maximal CFI closed form vs numeric maximum, N in {0.1,...,1000}", 1e-6, [&] {
    double dev = 0.0;
    for (double n : {0.1, 1.0, 10.0, 100.0, 1000.0}) {
      dev = std::max(dev, rel_deviation(optim::argmax_split(n).max_value, max_cfi(n)));
    }
    return dev;
  }));

  rep.checks.push_back(run_check("zero-signal-classes", "phase-insensitive classes have <X_A> = 0 over 100 phases", 1e-12, [&] {
    double dev = 0.0;
    const StateSpec specs[] = {Thermal{1.0}, SqueezedVacuum{0.7, 0.3}, SqueezedThermal{0.5, 1.1, 0.8}};
    for (const auto& s : specs) {
      for (int i = 0; i < 100; ++i) {
        const double phi = -std::numbers::pi + 2.0 * std::numbers::pi * i / 99.0;
        dev = std::max(dev, std::abs(expected_X(ProtocolConfig{s, phi, 1.0})));
      }
    }
    return dev;
  }));

  // Known inconsistencies in the reference closed forms; reported, never failed.
  {
    CheckResult w{"matched-lo-xi", "", 0.0, 0.0, Status::Warn, ""};
    ProtocolConfig cfg = coherent_cfg(a, 0.5, 0.0);
    cfg.lo = FiniteLO{Complex{a / std::numbers::sqrt2, 0.0}};
    const double xi = xi_coefficient(cfg);
    const double dphi = delta_phi_finite_lo(cfg);
    std::ostringstream msg;
    msg << "|beta| = |alpha|/sqrt2 at T = 1/2 gives xi = " << format_double(xi) << " (the shot-noise argument assumes 1); finite-LO "
        << "sensitivity " << format_double(dphi) << " vs SNL 1/|alpha| = " << format_double(1.0 / a)
        << "; with xi = 1 the formula gives sqrt2/|alpha| = " << format_double(std::numbers::sqrt2 / a);
    w.description = msg.str();
    w.deviation = xi - 1.0;
    rep.warnings.push_back(w);
  }
  {
    CheckResult w{"outcome-density-amplitude", "", 0.0, 0.0, Status::Warn, ""};
    const double phi = 0.3;
    // Position convention x = X / sqrt2, real displacement.
    double oracle_mean = std::numeric_limits<double>::quiet_NaN();
    try {
      const fock::ProtocolOracle oracle(Coherent{Complex{a, 0.0}}, 1.0, opt.cutoff);
      oracle_mean = fock::quadrature_stats(oracle.output_density(phi)).mean / std::numbers::sqrt2;
    } catch (const Error&) {
      oracle_mean = expected_X(ProtocolConfig{Coherent{Complex{a, 0.0}}, phi, 1.0}) / std::numbers::sqrt2;
    }
    const double reference = std::numbers::sqrt2 * a * std::cos(phi);
    std::ostringstream msg;
    msg << "reference outcome density uses mean sqrt2|alpha|cos(phi) = " << format_double(reference)
        << " but the output amplitude alpha e^{i phi}/sqrt2 gives |alpha|cos(phi) = " << format_double(oracle_mean)
        << " (ratio " << format_double(reference / oracle_mean) << "); propagation result is used";
    w.description = msg.str();
    w.deviation = reference / oracle_mean;
    rep.warnings.push_back(w);
  }
  return rep;
}

std::string render(const VerifyReport& report) {
  std::ostringstream out;
  for (const auto& c : report.checks) {
    out << (c.status == Status::Pass ? "PASS" : "FAIL") << "  " << c.identity << "  max_dev="
        << format_double(c.deviation) << "  tol=" << format_double(c.tolerance) << "  " << c.description;
    if (!c.note.empty()) out << "  [" << c.note << "]";
    out << '\n';
  }
  for (const auto& w : report.warnings) out << "WARN  " << w.identity << "  " << w.description << '\n';
  out << (report.all_passed() ? "verify-oracle: all checks passed" : "verify-oracle: FAILURES present") << '\n';
  return out.str();
}

}  // namespace homodyne::verify
