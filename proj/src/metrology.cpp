#include "homodyne/metrology.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "homodyne/error.hpp"

namespace homodyne {

namespace {

constexpr double kFdStep = 1e-5;
constexpr double kFdCheckStep = 1e-6;

Eigen::Matrix2d complex_block(Complex c) {
  Eigen::Matrix2d m;
  m << c.real(), -c.imag(), c.imag(), c.real();
  return m;
}

OutputMoments analytic_moments(const ProtocolConfig& cfg) {
  const GaussianState in = make_state(cfg.input);
  const double st = std::sqrt(cfg.transmissivity);
  const double sr = std::sqrt(1.0 - cfg.transmissivity);
  const Complex phase = std::polar(1.0, cfg.phi);
  const Complex c = (st * phase + sr) / std::numbers::sqrt2;
  const Complex dc = Complex{0.0, st} * phase / std::numbers::sqrt2;

  const Eigen::Matrix2d l = complex_block(c);
  const Eigen::Matrix2d dl = complex_block(dc);
  const Eigen::Vector2d d = l * in.mean();
  const Eigen::Matrix2d v = l * in.cov() * l.transpose() + (1.0 - std::norm(c)) * Eigen::Matrix2d::Identity();
  const Eigen::Matrix2d dv = dl * in.cov() * l.transpose() + l * in.cov() * dl.transpose();

  OutputMoments m;
  m.mean = d(0);
  m.variance = v(0, 0);
  m.dmean = (dl * in.mean())(0);
  m.dvariance = dv(0, 0) - 2.0 * (std::conj(c) * dc).real();
  m.photons = std::max(0.0, 0.25 * d.squaredNorm() + 0.25 * (v.trace() - 2.0));
  return m;
}

QuadratureMoments moments_at(ProtocolConfig cfg, double phi) {
  cfg.phi = phi;
  return quadrature_moments(output_mode(cfg), kModeA);
}

OutputMoments numeric_moments(const ProtocolConfig& cfg) {
  const GaussianState out = output_mode(cfg);
  const QuadratureMoments q = quadrature_moments(out, kModeA);

  auto central = [&](double h) {
    const QuadratureMoments plus = moments_at(cfg, cfg.phi + h);
    const QuadratureMoments minus = moments_at(cfg, cfg.phi - h);
    return std::pair{(plus.mean - minus.mean) / (2.0 * h), (plus.variance - minus.variance) / (2.0 * h)};
  };
  const auto [dmean, dvar] = central(kFdStep);
  const auto [dmean_check, dvar_check] = central(kFdCheckStep);
  const double tol = 1e-6;
  require(std::abs(dmean - dmean_check) <= tol * std::max(1.0, std::abs(dmean)) &&
              std::abs(dvar - dvar_check) <= tol * std::max(1.0, std::abs(dvar)),
          ErrorKind::GridTooCoarse, "finite-difference phase derivative failed its step check");

  return {q.mean, q.variance, dmean, dvar, mean_photon(out, kModeA)};
}

// Slope below which the homodyne mean carries no phase information.
double slope_floor(const ProtocolConfig& cfg) { return 1e-10 * std::sqrt(1.0 + total_photons(cfg.input)); }

double require_signal(const ProtocolConfig& cfg, const OutputMoments& m) {
  if (std::abs(m.dmean) <= slope_floor(cfg)) {
    fail(ErrorKind::ZeroSignal, std::string("homodyne mean is phase-insensitive for ") +
                                    std::string(class_name(cfg.input)) + " input at phi = " + std::to_string(cfg.phi));
  }
  return std::abs(m.dmean);
}

const FiniteLO& require_finite_lo(const ProtocolConfig& cfg) {
  const FiniteLO* lo = finite_lo(cfg);
  require(lo != nullptr, ErrorKind::Parameter, "operation requires a finite local oscillator");
  return *lo;
}

void require_positive(double n, const char* what) {
  require(std::isfinite(n) && n > 0.0, ErrorKind::Parameter, std::string(what) + " must be positive");
}

}  // namespace

OutputMoments output_moments(const ProtocolConfig& cfg) {
  validate(cfg);
  if (cfg.convention == BeamSplitterConvention::Real) return analytic_moments(cfg);
  return numeric_moments(cfg);
}

double expected_X(const ProtocolConfig& cfg) {
  validate(cfg);
  return quadrature_moments(output_mode(cfg), kModeA).mean;
}

double expected_X2(const ProtocolConfig& cfg) {
  validate(cfg);
  const QuadratureMoments q = quadrature_moments(output_mode(cfg), kModeA);
  return q.variance + q.mean * q.mean;
}

double delta_phi_error_prop(const ProtocolConfig& cfg) {
  const OutputMoments m = output_moments(cfg);
  return std::sqrt(m.variance) / require_signal(cfg, m);
}

double xi_coefficient(const ProtocolConfig& cfg) {
  const FiniteLO& lo = require_finite_lo(cfg);
  validate(cfg);
  return mean_photon(output_mode(cfg), kModeA) / std::norm(lo.beta);
}

double delta_phi_finite_lo(const ProtocolConfig& cfg, std::optional<double> pinned_xi) {
  require_finite_lo(cfg);
  if (pinned_xi) {
    require(std::isfinite(*pinned_xi) && *pinned_xi >= 0.0, ErrorKind::Parameter, "xi must be >= 0");
  }
  const OutputMoments m = output_moments(cfg);
  const double xi = pinned_xi ? *pinned_xi : xi_coefficient(cfg);
  return std::sqrt(m.variance + xi) / require_signal(cfg, m);
}

DifferenceMoments homodyne_difference_moments(const ProtocolConfig& cfg) {
  const FiniteLO& lo = require_finite_lo(cfg);
  validate(cfg);
  const GaussianState out = output_mode(cfg);
  const QuadratureMoments q = quadrature_moments(out, kModeA);
  const double beta = std::abs(lo.beta);
  return {beta * q.mean, beta * beta * (q.variance + q.mean * q.mean) + mean_photon(out, kModeA)};
}

double cfi_gaussian(const ProtocolConfig& cfg) {
  const OutputMoments m = output_moments(cfg);
  require(m.variance > 0.0, ErrorKind::ZeroVariance, "homodyne variance vanished");
  return m.dmean * m.dmean / m.variance + m.dvariance * m.dvariance / (2.0 * m.variance * m.variance);
}

Eigen::MatrixXd cfi_surface(double alpha2, std::span<const double> t_grid, std::span<const double> xi_grid) {
  require(std::isfinite(alpha2) && alpha2 >= 0.0, ErrorKind::Parameter, "|alpha|^2 must be >= 0");
  require(!t_grid.empty() && !xi_grid.empty(), ErrorKind::Parameter, "surface grids must be non-empty");
  Eigen::MatrixXd out(static_cast<Eigen::Index>(t_grid.size()), static_cast<Eigen::Index>(xi_grid.size()));
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    require(t >= 0.0 && t <= 1.0, ErrorKind::Parameter, "T grid must lie in [0, 1]");
    for (std::size_t j = 0; j < xi_grid.size(); ++j) {
      const double xi = xi_grid[j];
      require(std::isfinite(xi) && xi >= 0.0, ErrorKind::Parameter, "xi grid must be >= 0");
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 2.0 * t * alpha2 / (1.0 + xi);
    }
  }
  return out;
}

double qfi_photon_number(const StateSpec& input) {
  validate(input);
  if (!is_pure(input)) {
    fail(ErrorKind::MixedState, std::string("photon-number QFI needs a pure input, got ") +
                                    std::string(class_name(input)) + " with thermal photons");
  }
  return 4.0 * photon_variance(after_first_splitter(input), kModeA);
}

double qfi_displaced_squeezed(double alpha2, double r) {
  require(std::isfinite(alpha2) && alpha2 >= 0.0, ErrorKind::Parameter, "|alpha|^2 must be >= 0");
  require(std::isfinite(r) && r >= 0.0, ErrorKind::Parameter, "r must be >= 0");
  const double s2r = std::sinh(2.0 * r);
  const double sr = std::sinh(r);
  return (std::exp(2.0 * r) + 1.0) * alpha2 + 0.5 * s2r * s2r + sr * sr;
}

double sensitivity_displaced_thermal(double alpha_abs, double n_thermal, double phi) {
  require(std::isfinite(n_thermal) && n_thermal >= 0.0, ErrorKind::Parameter, "N_T must be >= 0");
  const double slope = std::abs(std::numbers::sqrt2 * alpha_abs * std::cos(phi));
  require(slope > 1e-12, ErrorKind::ZeroSignal, "displaced thermal sensitivity has zero slope");
  return std::sqrt(n_thermal + 1.0) / slope;
}

double threshold_displaced_thermal(double n_thermal) {
  require(std::isfinite(n_thermal) && n_thermal >= 0.0, ErrorKind::Parameter, "N_T must be >= 0");
  if (n_thermal >= 1.0) {
    fail(ErrorKind::NoThreshold, "displaced thermal input cannot beat the SNL for N_T >= 1");
  }
  return (n_thermal * n_thermal + n_thermal) / (1.0 - n_thermal);
}

double sensitivity_displaced_squeezed(double alpha_abs, double r, double theta, double phi) {
  require(std::isfinite(r) && r >= 0.0, ErrorKind::Parameter, "r must be >= 0");
  const double slope = std::abs(std::numbers::sqrt2 * alpha_abs * std::cos(phi));
  require(slope > 1e-12, ErrorKind::ZeroSignal, "displaced squeezed sensitivity has zero slope");
  const double ch = std::cosh(r);
  const double sh = std::sinh(r);
  return std::sqrt(ch * ch - sh * ch * std::cos(2.0 * phi + theta)) / slope;
}

double threshold_displaced_squeezed(double n_squeezed) {
  require(std::isfinite(n_squeezed) && n_squeezed >= 0.0, ErrorKind::Parameter, "N_SV must be >= 0");
  const double root = std::sqrt(n_squeezed * (n_squeezed + 1.0));
  const double denom = 1.0 - n_squeezed + root;
  if (denom <= 0.0) fail(ErrorKind::NoThreshold, "displaced squeezed threshold denominator is not positive");
  return n_squeezed * (n_squeezed + 1.0 - root) / denom;
}

double displaced_squeezed_cfi(double n_ds, double alpha2) {
  require(std::isfinite(n_ds) && n_ds >= 0.0, ErrorKind::Parameter, "N_DS must be >= 0");
  require(alpha2 >= 0.0 && alpha2 <= n_ds, ErrorKind::Parameter, "|alpha|^2 must lie in [0, N_DS]");
  if (alpha2 == 0.0) return 0.0;
  const double r = std::asinh(std::sqrt(n_ds - alpha2));
  const double dphi = sensitivity_displaced_squeezed(std::sqrt(alpha2), r, 0.0, 0.0);
  return 1.0 / (dphi * dphi);
}

double displaced_thermal_cfi(double n_dt, double alpha2) {
  require(std::isfinite(n_dt) && n_dt >= 0.0, ErrorKind::Parameter, "N_DT must be >= 0");
  require(alpha2 >= 0.0 && alpha2 <= n_dt, ErrorKind::Parameter, "|alpha|^2 must lie in [0, N_DT]");
  if (alpha2 == 0.0) return 0.0;
  const double dphi = sensitivity_displaced_thermal(std::sqrt(alpha2), n_dt - alpha2, 0.0);
  return 1.0 / (dphi * dphi);
}

double optimal_alpha2(double n_ds) {
  require_positive(n_ds, "N_DS");
  const double n = n_ds;
  return 2.0 * (1.0 + 3.0 * n + 2.0 * n * n - std::sqrt(1.0 + 3.0 * n + 3.0 * n * n + n * n * n)) / (3.0 + 4.0 * n);
}

double max_cfi(double n_ds) {
  require_positive(n_ds, "N_DS");
  const double n = n_ds;
  const double s = std::sqrt((1.0 + n) * (1.0 + n) * (1.0 + n));
  const double h1 = 2.0 * s - 3.0 * n - 2.0;
  const double h2 = 2.0 * s + n + 1.0;
  return (4.0 + 12.0 * n + 8.0 * n * n - 4.0 * s) / (1.0 + n + 2.0 * s - std::sqrt(h1 * h2));
}

ShotNoise snl(double n_total) {
  require_positive(n_total, "photon number");
  return {1.0 / std::sqrt(n_total), n_total};
}

SensitivityReport report(const ProtocolConfig& cfg) {
  validate(cfg);
  SensitivityReport rep;
  rep.config = cfg;
  rep.n_total = total_photons(cfg.input);
  rep.snl_delta_phi = rep.n_total > 0.0 ? snl(rep.n_total).delta_phi : 0.0;
  if (is_pure(cfg.input)) rep.qfi = qfi_photon_number(cfg.input);

  if (finite_lo(cfg) != nullptr) {
    rep.xi = xi_coefficient(cfg);
    rep.delta_phi_error_prop = delta_phi_finite_lo(cfg);
    rep.cfi = 1.0 / (rep.delta_phi_error_prop * rep.delta_phi_error_prop);
  } else {
    rep.cfi = cfi_gaussian(cfg);
    rep.delta_phi_error_prop = delta_phi_error_prop(cfg);
  }
  require(rep.cfi > 0.0, ErrorKind::ZeroSignal, "configuration carries no phase information");
  rep.delta_phi = 1.0 / std::sqrt(rep.cfi);
  return rep;
}

namespace closed_form {

double coherent_expected_X(double alpha_abs, double transmissivity, double phi) {
  return -std::sqrt(2.0 * transmissivity) * alpha_abs * std::sin(phi);
}

double coherent_expected_X2(double alpha_abs, double transmissivity, double phi) {
  return transmissivity * alpha_abs * alpha_abs * (1.0 - std::cos(2.0 * phi)) + 1.0;
}

double coherent_delta_phi(double alpha_abs, double transmissivity, double phi) {
  const double slope = std::abs(std::sqrt(2.0 * transmissivity) * alpha_abs * std::cos(phi));
  require(slope > 1e-12, ErrorKind::ZeroSignal, "coherent sensitivity has zero slope");
  return 1.0 / slope;
}

double displaced_expected_X(Complex alpha, double phi) {
  const Complex e = std::polar(1.0, phi);
  return ((std::conj(e) * std::conj(alpha) + e * alpha) / std::numbers::sqrt2).real();
}

double displaced_thermal_expected_X2(Complex alpha, double n_thermal, double phi) {
  const Complex e2 = std::polar(1.0, 2.0 * phi);
  const double n_dt = n_thermal + std::norm(alpha);
  return 0.5 * (std::conj(e2) * std::conj(alpha) * std::conj(alpha) + e2 * alpha * alpha).real() + n_dt + 1.0;
}

double displaced_squeezed_expected_X2(Complex alpha, double r, double theta, double phi) {
  const Complex e2 = std::polar(1.0, 2.0 * phi);
  const Complex et = std::polar(1.0, theta);
  const double sc = std::sinh(r) * std::cosh(r);
  const double n_ds = std::sinh(r) * std::sinh(r) + std::norm(alpha);
  const Complex term = std::conj(e2) * (std::conj(alpha) * std::conj(alpha) - std::conj(et) * sc) +
                       e2 * (alpha * alpha - et * sc);
  return 0.5 * term.real() + n_ds + 1.0;
}

}  // namespace closed_form

}  // namespace homodyne
