#pragma once

#include <Eigen/Dense>
#include <vector>

#include "homodyne/state_spec.hpp"

namespace homodyne {

/// Mean vector and covariance matrix of an n-mode bosonic Gaussian state.
///
/// Quadratures are ordered (X1, P1, X2, P2, ...) with X = a + a^dag and
/// P = i(a^dag - a), so [X, P] = 2i and the vacuum covariance is the
/// identity. Construction checks symmetry, finiteness and the uncertainty
/// relation (every symplectic eigenvalue >= 1).
class GaussianState {
 public:
  GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov);

  static GaussianState vacuum(int n_modes);

  int n_modes() const { return static_cast<int>(mean_.size() / 2); }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cov() const { return cov_; }

  /// Sorted ascending, one value per mode.
  std::vector<double> symplectic_eigenvalues() const;

  /// Product state (this) (x) (other); this state's modes come first.
  GaussianState tensor(const GaussianState& other) const;

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
};

/// Beamsplitter phase convention.
///   Real:      a' = sqrt(T) a + sqrt(1-T) b,    b' = -sqrt(1-T) a + sqrt(T) b
///   Symmetric: a' = sqrt(T) a + i sqrt(1-T) b,  b' = i sqrt(1-T) a + sqrt(T) b
enum class BeamSplitterConvention { Real, Symmetric };

struct QuadratureMoments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Single-mode state D(alpha) S(r, theta) rho_T S^dag D^dag.
GaussianState make_state(const StateSpec& spec);

/// Phase shift exp(i phi a^dag a) on one mode: a -> a e^{i phi}.
GaussianState apply_phase(const GaussianState& state, int mode, double phi);

/// Passive two-mode mixing with transmissivity T; see BeamSplitterConvention.
GaussianState apply_beamsplitter(const GaussianState& state, int mode_a, int mode_b, double transmissivity,
                                 BeamSplitterConvention convention = BeamSplitterConvention::Real);

/// Marginal of a single mode.
GaussianState reduce(const GaussianState& state, int mode);

double mean_photon(const GaussianState& state, int mode);

/// Mean and variance of X = a + a^dag on one mode.
QuadratureMoments quadrature_moments(const GaussianState& state, int mode);

/// Variance of a^dag a on one mode (the marginal is Gaussian).
double photon_variance(const GaussianState& state, int mode);

}  // namespace homodyne
