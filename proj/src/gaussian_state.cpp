#include "homodyne/gaussian_state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "homodyne/error.hpp"

namespace homodyne {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kUncertaintyTol = 1e-9;

Eigen::MatrixXd symplectic_form(int n_modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

void check_mode(const GaussianState& state, int mode) {
  require(mode >= 0 && mode < state.n_modes(), ErrorKind::ModeOutOfRange,
          "mode " + std::to_string(mode) + " out of range for " + std::to_string(state.n_modes()) + "-mode state");
}

// Applies the symplectic map S on the listed modes: mean -> S mean, cov -> S cov S^T.
GaussianState apply_local(const GaussianState& state, const std::vector<int>& modes, const Eigen::MatrixXd& map) {
  const int n = 2 * state.n_modes();
  Eigen::MatrixXd full = Eigen::MatrixXd::Identity(n, n);
  for (std::size_t i = 0; i < modes.size(); ++i) {
    for (std::size_t j = 0; j < modes.size(); ++j) {
      full.block<2, 2>(2 * modes[i], 2 * modes[j]) = map.block<2, 2>(2 * i, 2 * j);
    }
  }
  Eigen::MatrixXd cov = full * state.cov() * full.transpose();
  cov = 0.5 * (cov + cov.transpose());
  return GaussianState(full * state.mean(), std::move(cov));
}

// Quadrature representation of a -> c a for complex c = u + i v.
Eigen::Matrix2d complex_block(Complex c) {
  Eigen::Matrix2d m;
  m << c.real(), -c.imag(), c.imag(), c.real();
  return m;
}

Eigen::Matrix2d rotation(double angle) { return complex_block(std::polar(1.0, angle)); }

}  // namespace

GaussianState::GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov) : mean_(std::move(mean)), cov_(std::move(cov)) {
  require(mean_.size() > 0 && mean_.size() % 2 == 0, ErrorKind::Parameter, "mean vector must have even length");
  require(cov_.rows() == mean_.size() && cov_.cols() == mean_.size(), ErrorKind::Parameter,
          "covariance shape does not match mean");
  require(mean_.allFinite() && cov_.allFinite(), ErrorKind::NonFinite, "Gaussian state has non-finite entries");
  const double asym = (cov_ - cov_.transpose()).cwiseAbs().maxCoeff();
  require(asym <= kSymmetryTol * std::max(1.0, cov_.cwiseAbs().maxCoeff()), ErrorKind::Parameter,
          "covariance matrix is not symmetric");
  const auto nu = symplectic_eigenvalues();
  require(nu.front() >= 1.0 - kUncertaintyTol, ErrorKind::Parameter,
          "covariance violates the uncertainty relation (symplectic eigenvalue " + std::to_string(nu.front()) + ")");
}

GaussianState GaussianState::vacuum(int n_modes) {
  require(n_modes > 0, ErrorKind::Parameter, "n_modes must be positive");
  return GaussianState(Eigen::VectorXd::Zero(2 * n_modes), Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
}

std::vector<double> GaussianState::symplectic_eigenvalues() const {
  // A = V^{1/2} Omega V^{1/2} is antisymmetric; A^T A has eigenvalues nu^2, each twice.
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> vs(cov_);
  if (vs.eigenvalues().minCoeff() <= 0.0) return std::vector<double>(n_modes(), 0.0);
  const Eigen::MatrixXd root = vs.operatorSqrt();
  const Eigen::MatrixXd a = root * symplectic_form(n_modes()) * root;
  const Eigen::MatrixXd ata = a.transpose() * a;
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(0.5 * (ata + ata.transpose())).eigenvalues();
  std::vector<double> out;
  for (Eigen::Index i = 0; i + 1 < ev.size(); i += 2) out.push_back(std::sqrt(std::max(0.0, 0.5 * (ev(i) + ev(i + 1)))));
  return out;
}

GaussianState GaussianState::tensor(const GaussianState& other) const {
  const auto n1 = mean_.size();
  const auto n2 = other.mean_.size();
  Eigen::VectorXd mean(n1 + n2);
  mean << mean_, other.mean_;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n1 + n2, n1 + n2);
  cov.topLeftCorner(n1, n1) = cov_;
  cov.bottomRightCorner(n2, n2) = other.cov_;
  return GaussianState(std::move(mean), std::move(cov));
}

GaussianState make_state(const StateSpec& spec) {
  validate(spec);
  const GaussianParams p = params_of(spec);
  const Eigen::Matrix2d rot = rotation(0.5 * p.theta);
  const Eigen::Matrix2d squeeze = Eigen::Vector2d(std::exp(-2.0 * p.r), std::exp(2.0 * p.r)).asDiagonal();
  Eigen::Matrix2d cov = (2.0 * p.n_thermal + 1.0) * rot * squeeze * rot.transpose();
  cov = 0.5 * (cov + cov.transpose());
  Eigen::Vector2d mean(2.0 * p.alpha.real(), 2.0 * p.alpha.imag());
  return GaussianState(mean, cov);
}

GaussianState apply_phase(const GaussianState& state, int mode, double phi) {
  check_mode(state, mode);
  require(std::isfinite(phi), ErrorKind::Parameter, "phase must be finite");
  return apply_local(state, {mode}, rotation(phi));
}

GaussianState apply_beamsplitter(const GaussianState& state, int mode_a, int mode_b, double transmissivity,
                                 BeamSplitterConvention convention) {
  check_mode(state, mode_a);
  check_mode(state, mode_b);
  require(mode_a != mode_b, ErrorKind::Parameter, "beamsplitter modes must be distinct");
  require(transmissivity >= 0.0 && transmissivity <= 1.0, ErrorKind::Parameter,
          "transmissivity must lie in [0, 1]");
  const double t = std::sqrt(transmissivity);
  const double s = std::sqrt(1.0 - transmissivity);
  // Mode matrix U with (a', b') = U (a, b), mapped block-wise to quadratures.
  Complex u00 = t, u01 = s, u10 = -s, u11 = t;
  if (convention == BeamSplitterConvention::Symmetric) {
    u01 = Complex{0.0, s};
    u10 = Complex{0.0, s};
  }
  Eigen::Matrix4d map;
  map.block<2, 2>(0, 0) = complex_block(u00);
  map.block<2, 2>(0, 2) = complex_block(u01);
  map.block<2, 2>(2, 0) = complex_block(u10);
  map.block<2, 2>(2, 2) = complex_block(u11);
  return apply_local(state, {mode_a, mode_b}, map);
}

GaussianState reduce(const GaussianState& state, int mode) {
  check_mode(state, mode);
  return GaussianState(state.mean().segment<2>(2 * mode), state.cov().block<2, 2>(2 * mode, 2 * mode));
}

double mean_photon(const GaussianState& state, int mode) {
  check_mode(state, mode);
  const Eigen::Vector2d d = state.mean().segment<2>(2 * mode);
  const Eigen::Matrix2d v = state.cov().block<2, 2>(2 * mode, 2 * mode);
  return std::max(0.0, 0.25 * d.squaredNorm() + 0.25 * (v.trace() - 2.0));
}

QuadratureMoments quadrature_moments(const GaussianState& state, int mode) {
  check_mode(state, mode);
  return {state.mean()(2 * mode), state.cov()(2 * mode, 2 * mode)};
}

double photon_variance(const GaussianState& state, int mode) {
  check_mode(state, mode);
  const Eigen::Vector2d d = state.mean().segment<2>(2 * mode);
  const Eigen::Matrix2d v = state.cov().block<2, 2>(2 * mode, 2 * mode);
  return ((v * v).trace() - 2.0) / 8.0 + d.dot(v * d) / 4.0;
}

}  // namespace homodyne
