#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <vector>

#include "homodyne/state_spec.hpp"

// Truncated number-basis simulation used as an independent oracle for the
// Gaussian closed forms. Position-representation wave functions use the
// x = (a + a^dag)/sqrt(2) convention internally and are converted to
// X = a + a^dag at the interface.
namespace homodyne::fock {

inline constexpr double kDefaultLeak = 1e-8;

/// Pure state. Single mode: amps[n]. Two modes: amps[n_a * cutoff + n_b],
/// populated only for n_a + n_b < cutoff.
struct FockVector {
  int cutoff = 0;
  int modes = 1;
  Eigen::VectorXcd amps;

  double norm() const { return amps.norm(); }
};

/// Single-mode density matrix.
struct FockDensity {
  int cutoff = 0;
  Eigen::MatrixXcd rho;

  double trace() const { return rho.trace().real(); }
};

/// Weighted ensemble of pure states; how mixed inputs travel through the
/// two-mode evolution without forming D^2 x D^2 density matrices.
struct Mixture {
  std::vector<double> weights;
  std::vector<FockVector> states;
};

FockVector coherent_fock(Complex alpha, int cutoff, double leak = kDefaultLeak);

/// D(alpha) S(r, theta) |0> with S = exp((r/2)(e^{-i theta} a^2 - e^{i theta} a^dag^2)).
FockVector squeezed_displaced_fock(Complex alpha, double r, double theta, int cutoff, double leak = kDefaultLeak);

FockDensity thermal_fock(double n_thermal, int cutoff, double leak = kDefaultLeak);

/// Any supported input class as an ensemble D S |m> with thermal weights.
Mixture input_mixture(const StateSpec& spec, int cutoff, double leak = kDefaultLeak);
FockDensity input_density(const StateSpec& spec, int cutoff, double leak = kDefaultLeak);

FockDensity to_density(const Mixture& mixture);
FockDensity to_density(const FockVector& single_mode);

/// Eigen-decomposition of a density matrix; eigenvalues below floor are dropped.
Mixture to_mixture(const FockDensity& density, double floor = 1e-14);

/// Real-convention beamsplitter exp(theta (a^dag b - a b^dag)), theta = arccos sqrt(T),
/// stored as one orthogonal block per total photon number N < cutoff.
struct BeamSplitterBlocks {
  double transmissivity = 1.0;
  int cutoff = 0;
  std::vector<Eigen::MatrixXd> blocks;

  double unitarity_error() const;
};

BeamSplitterBlocks bs_fock(double transmissivity, int cutoff);

/// Diagonal of exp(i phi a^dag a).
Eigen::VectorXcd phase_fock(double phi, int cutoff);

/// Two-mode product with total photon number truncated below cutoff.
FockVector tensor(const FockVector& a, const FockVector& b, int cutoff);

/// Applies the beamsplitter to a two-mode vector. swap_roles exchanges the
/// modes' roles, i.e. applies the inverse (transposed) blocks.
FockVector apply(const BeamSplitterBlocks& bs, const FockVector& state, bool swap_roles = false);
FockVector apply_phase(const FockVector& state, int mode, double phi);

/// Reduced density matrix of one mode of a two-mode vector.
FockDensity reduce(const FockVector& state, int mode);

struct PhotonMoments {
  double mean = 0.0;    // <n>
  double second = 0.0;  // <n^2>

  double variance() const { return second - mean * mean; }
};

PhotonMoments photon_moments(const FockVector& state, int mode);
PhotonMoments photon_moments(const Mixture& mixture, int mode);
PhotonMoments photon_moments(const FockDensity& density);

struct QuadratureStats {
  double mean = 0.0;    // <X>
  double second = 0.0;  // <X^2>

  double variance() const { return second - mean * mean; }
};

/// Operator moments of X = a + a^dag.
QuadratureStats quadrature_stats(const FockDensity& density);

/// Normalised Hermite functions psi_n(x), n < count, by the three-term recurrence.
std::vector<double> hermite_functions(double x, int count);

/// Density of X = a + a^dag on the given grid.
std::vector<double> quadrature_pdf(const FockDensity& density, std::span<const double> x_grid);

/// 2001-point grid centred on <X>, half width max(2 sqrt(<n>) + 6, 9 sd(X)).
std::vector<double> default_quadrature_grid(const FockDensity& density, int points = 2001);

double trapezoid(std::span<const double> x, std::span<const double> y);

using PdfFamily = std::function<std::vector<double>(double phi)>;

/// Integral of (dp/dphi)^2 / p over the grid, central differences in phi.
/// The step-halved estimate is returned; GridTooCoarse if the two disagree by
/// more than 1e-3 relative.
double numeric_cfi(const PdfFamily& family, std::span<const double> x_grid, double phi, double dphi = 1e-4);

/// Full interferometer in the number basis: BS1 (1/2, oriented as the
/// Gaussian protocol), phase on path A, BS2 (T).
class ProtocolOracle {
 public:
  ProtocolOracle(const StateSpec& input, double transmissivity, int cutoff, double leak = kDefaultLeak);

  int cutoff() const { return cutoff_; }

  /// Two-mode ensemble after BS1.
  const Mixture& after_first_splitter() const { return after_bs1_; }

  /// Reduced output-A state at the given phase.
  FockDensity output_density(double phi) const;

  /// Quadrature-density family of output A for numeric_cfi.
  PdfFamily pdf_family(std::span<const double> x_grid) const;

 private:
  int cutoff_;
  BeamSplitterBlocks bs2_;
  Mixture after_bs1_;
};

/// Moments of the photon-number difference n_c - n_d after mixing state_a with
/// a coherent local oscillator |beta> on a 50:50 real-convention beamsplitter.
/// The two-mode evolution runs at cutoff 2 * cutoff so no block is truncated.
struct DifferenceStats {
  double mean = 0.0;
  double second = 0.0;
};

DifferenceStats intensity_difference_moments(const FockDensity& state_a, Complex beta, int cutoff,
                                             double leak = 1e-6);

}  // namespace homodyne::fock
