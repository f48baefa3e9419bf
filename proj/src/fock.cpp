#include "homodyne/fock.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "homodyne/error.hpp"
#include "homodyne/format.hpp"

namespace homodyne::fock {

namespace {

using RowMajorMatrixXcd = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kUnitarityTol = 1e-9;

void check_cutoff(int cutoff) {
  require(cutoff >= 2, ErrorKind::Parameter, "Fock cutoff must be >= 2");
}

[[noreturn]] void cutoff_too_small(int cutoff, double leaked, double budget) {
  fail(ErrorKind::CutoffTooSmall, "cutoff " + std::to_string(cutoff) + " leaks " + format_double(leaked) +
                                      " probability (budget " + format_double(budget) + "); increase the cutoff");
}

Eigen::MatrixXcd annihilation(int dim) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

// Working dimension for state preparation; truncation artefacts of the
// exponentials stay above the returned cutoff.
int padded(int cutoff) { return 2 * cutoff + 16; }

void check_unitary(const Eigen::MatrixXcd& u) {
  const auto dim = u.rows();
  const double err = (u.adjoint() * u - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff();
  require(err < kUnitarityTol, ErrorKind::NonFinite,
          "matrix exponential lost unitarity (" + std::to_string(err) + ")");
}

// D(alpha) S(r, theta) in the padded space.
Eigen::MatrixXcd preparation_unitary(const GaussianParams& p, int dim) {
  const Eigen::MatrixXcd a = annihilation(dim);
  const Eigen::MatrixXcd ad = a.adjoint();
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  if (p.r != 0.0) {
    const Eigen::MatrixXcd gen =
        (0.5 * p.r) * (std::polar(1.0, -p.theta) * (a * a) - std::polar(1.0, p.theta) * (ad * ad));
    u = gen.exp();
  }
  if (p.alpha != Complex{0.0, 0.0}) {
    const Eigen::MatrixXcd gen = p.alpha * ad - std::conj(p.alpha) * a;
    u = gen.exp() * u;
  }
  check_unitary(u);
  return u;
}

FockVector truncate(const Eigen::VectorXcd& v, int cutoff, double* leaked) {
  *leaked = v.tail(v.size() - cutoff).squaredNorm();
  return FockVector{cutoff, 1, v.head(cutoff)};
}

FockVector single_mode_vacuum(int cutoff) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(cutoff);
  v(0) = 1.0;
  return FockVector{cutoff, 1, v};
}

RowMajorMatrixXcd as_matrix(const FockVector& state) {
  return Eigen::Map<const RowMajorMatrixXcd>(state.amps.data(), state.cutoff, state.cutoff);
}

void check_two_mode(const FockVector& state) {
  require(state.modes == 2 && state.amps.size() == static_cast<Eigen::Index>(state.cutoff) * state.cutoff,
          ErrorKind::Parameter, "expected a two-mode Fock vector");
}

}  // namespace

FockVector coherent_fock(Complex alpha, int cutoff, double leak) {
  check_cutoff(cutoff);
  const double n = std::norm(alpha);
  if (n > cutoff / 4.0) {
    fail(ErrorKind::CutoffTooSmall, "coherent state with |alpha|^2 = " + std::to_string(n) +
                                        " needs cutoff >= " + std::to_string(static_cast<int>(std::ceil(4.0 * n))));
  }
  Eigen::VectorXcd amps(cutoff);
  amps(0) = std::exp(-0.5 * n);
  for (int k = 1; k < cutoff; ++k) amps(k) = amps(k - 1) * alpha / std::sqrt(static_cast<double>(k));
  const double leaked = std::max(0.0, 1.0 - amps.squaredNorm());
  if (leaked > leak) cutoff_too_small(cutoff, leaked, leak);
  return FockVector{cutoff, 1, amps};
}

FockVector squeezed_displaced_fock(Complex alpha, double r, double theta, int cutoff, double leak) {
  check_cutoff(cutoff);
  validate(StateSpec{DisplacedSqueezed{alpha, r, theta}});
  const int dim = padded(cutoff);
  const Eigen::MatrixXcd u = preparation_unitary(GaussianParams{alpha, r, theta, 0.0}, dim);
  double leaked = 0.0;
  FockVector out = truncate(u.col(0), cutoff, &leaked);
  if (leaked > leak) cutoff_too_small(cutoff, leaked, leak);
  return out;
}

FockDensity thermal_fock(double n_thermal, int cutoff, double leak) {
  check_cutoff(cutoff);
  require(std::isfinite(n_thermal) && n_thermal >= 0.0, ErrorKind::Parameter, "N_T must be >= 0");
  const double q = n_thermal / (n_thermal + 1.0);
  const double tail = std::pow(q, cutoff);
  if (tail > leak) cutoff_too_small(cutoff, tail, leak);
  Eigen::VectorXd diag(cutoff);
  double w = 1.0 / (n_thermal + 1.0);
  for (int m = 0; m < cutoff; ++m) {
    diag(m) = w;
    w *= q;
  }
  return FockDensity{cutoff, diag.cast<Complex>().asDiagonal()};
}

Mixture input_mixture(const StateSpec& spec, int cutoff, double leak) {
  check_cutoff(cutoff);
  validate(spec);
  const GaussianParams p = params_of(spec);
  const int dim = padded(cutoff);
  const Eigen::MatrixXcd u = preparation_unitary(p, dim);

  const double q = p.n_thermal / (p.n_thermal + 1.0);
  double weight = 1.0 / (p.n_thermal + 1.0);
  double remaining = 1.0;  // thermal mass not yet assigned
  double leaked = 0.0;
  Mixture out;
  for (int m = 0; m < cutoff && remaining > 1e-3 * leak; ++m) {
    double component_leak = 0.0;
    out.states.push_back(truncate(u.col(m), cutoff, &component_leak));
    out.weights.push_back(weight);
    leaked += weight * component_leak;
    remaining -= weight;
    weight *= q;
  }
  leaked += std::max(0.0, remaining);
  if (leaked > leak) cutoff_too_small(cutoff, leaked, leak);
  return out;
}

FockDensity input_density(const StateSpec& spec, int cutoff, double leak) {
  return to_density(input_mixture(spec, cutoff, leak));
}

FockDensity to_density(const Mixture& mixture) {
  require(!mixture.states.empty(), ErrorKind::Parameter, "empty mixture");
  const int cutoff = mixture.states.front().cutoff;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(cutoff, cutoff);
  for (std::size_t i = 0; i < mixture.states.size(); ++i) {
    require(mixture.states[i].modes == 1, ErrorKind::Parameter, "to_density expects single-mode components");
    const auto& v = mixture.states[i].amps;
    rho += mixture.weights[i] * v * v.adjoint();
  }
  return FockDensity{cutoff, rho};
}

FockDensity to_density(const FockVector& single_mode) {
  return to_density(Mixture{{1.0}, {single_mode}});
}

Mixture to_mixture(const FockDensity& density, double floor) {
  const Eigen::MatrixXcd herm = 0.5 * (density.rho + density.rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm);
  Mixture out;
  for (Eigen::Index i = solver.eigenvalues().size() - 1; i >= 0; --i) {
    const double w = solver.eigenvalues()(i);
    if (w <= floor) continue;
    out.weights.push_back(w);
    out.states.push_back(FockVector{density.cutoff, 1, solver.eigenvectors().col(i)});
  }
  return out;
}

double BeamSplitterBlocks::unitarity_error() const {
  double err = 0.0;
  for (const auto& u : blocks) {
    const auto dim = u.rows();
    err = std::max(err, (u.transpose() * u - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff());
  }
  return err;
}

BeamSplitterBlocks bs_fock(double transmissivity, int cutoff) {
  check_cutoff(cutoff);
  require(transmissivity >= 0.0 && transmissivity <= 1.0, ErrorKind::Parameter, "T must lie in [0, 1]");
  const double theta = std::acos(std::sqrt(transmissivity));
  BeamSplitterBlocks out{transmissivity, cutoff, {}};
  out.blocks.reserve(cutoff);
  // Block N acts on |k, N - k>, k = n_a.
  for (int total = 0; total < cutoff; ++total) {
    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(total + 1, total + 1);
    for (int k = 0; k < total; ++k) {
      const double elem = theta * std::sqrt(static_cast<double>(k + 1) * (total - k));
      gen(k + 1, k) = elem;   // a^dag b
      gen(k, k + 1) = -elem;  // -a b^dag
    }
    out.blocks.push_back(gen.exp());
  }
  require(out.unitarity_error() < kUnitarityTol, ErrorKind::NonFinite, "beamsplitter exponential lost unitarity");
  return out;
}

Eigen::VectorXcd phase_fock(double phi, int cutoff) {
  check_cutoff(cutoff);
  Eigen::VectorXcd diag(cutoff);
  for (int n = 0; n < cutoff; ++n) diag(n) = std::polar(1.0, phi * n);
  return diag;
}

FockVector tensor(const FockVector& a, const FockVector& b, int cutoff) {
  require(a.modes == 1 && b.modes == 1, ErrorKind::Parameter, "tensor expects single-mode factors");
  check_cutoff(cutoff);
  FockVector out{cutoff, 2, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(cutoff) * cutoff)};
  for (int na = 0; na < std::min(a.cutoff, cutoff); ++na) {
    for (int nb = 0; nb < std::min(b.cutoff, cutoff - na); ++nb) {
      out.amps(na * cutoff + nb) = a.amps(na) * b.amps(nb);
    }
  }
  return out;
}

FockVector apply(const BeamSplitterBlocks& bs, const FockVector& state, bool swap_roles) {
  check_two_mode(state);
  require(bs.cutoff == state.cutoff, ErrorKind::Parameter, "beamsplitter and state cutoffs differ");
  const int c = state.cutoff;
  FockVector out{c, 2, Eigen::VectorXcd::Zero(state.amps.size())};
  for (int total = 0; total < c; ++total) {
    Eigen::VectorXcd v(total + 1);
    for (int k = 0; k <= total; ++k) v(k) = state.amps(k * c + (total - k));
    const Eigen::VectorXcd w = swap_roles ? Eigen::VectorXcd(bs.blocks[total].transpose().cast<Complex>() * v)
                                          : Eigen::VectorXcd(bs.blocks[total].cast<Complex>() * v);
    for (int k = 0; k <= total; ++k) out.amps(k * c + (total - k)) = w(k);
  }
  return out;
}

FockVector apply_phase(const FockVector& state, int mode, double phi) {
  require(mode >= 0 && mode < state.modes, ErrorKind::ModeOutOfRange, "phase mode out of range");
  FockVector out = state;
  if (state.modes == 1) {
    out.amps = out.amps.cwiseProduct(phase_fock(phi, state.cutoff));
    return out;
  }
  const int c = state.cutoff;
  for (int na = 0; na < c; ++na) {
    for (int nb = 0; nb < c; ++nb) out.amps(na * c + nb) *= std::polar(1.0, phi * (mode == 0 ? na : nb));
  }
  return out;
}

FockDensity reduce(const FockVector& state, int mode) {
  check_two_mode(state);
  require(mode == 0 || mode == 1, ErrorKind::ModeOutOfRange, "reduce mode out of range");
  const RowMajorMatrixXcd m = as_matrix(state);
  if (mode == 0) return FockDensity{state.cutoff, m * m.adjoint()};
  return FockDensity{state.cutoff, m.transpose() * m.conjugate()};
}

PhotonMoments photon_moments(const FockVector& state, int mode) {
  require(mode >= 0 && mode < state.modes, ErrorKind::ModeOutOfRange, "photon moment mode out of range");
  PhotonMoments out;
  const int c = state.cutoff;
  for (Eigen::Index i = 0; i < state.amps.size(); ++i) {
    const double p = std::norm(state.amps(i));
    const double n = state.modes == 1 ? static_cast<double>(i) : static_cast<double>(mode == 0 ? i / c : i % c);
    out.mean += p * n;
    out.second += p * n * n;
  }
  return out;
}

PhotonMoments photon_moments(const Mixture& mixture, int mode) {
  PhotonMoments out;
  for (std::size_t i = 0; i < mixture.states.size(); ++i) {
    const PhotonMoments m = photon_moments(mixture.states[i], mode);
    out.mean += mixture.weights[i] * m.mean;
    out.second += mixture.weights[i] * m.second;
  }
  return out;
}

PhotonMoments photon_moments(const FockDensity& density) {
  PhotonMoments out;
  for (int n = 0; n < density.cutoff; ++n) {
    const double p = density.rho(n, n).real();
    out.mean += p * n;
    out.second += p * n * static_cast<double>(n);
  }
  return out;
}

QuadratureStats quadrature_stats(const FockDensity& density) {
  const Eigen::MatrixXcd a = annihilation(density.cutoff);
  const Complex ea = (density.rho * a).trace();
  const Complex ea2 = (density.rho * a * a).trace();
  const double en = photon_moments(density).mean;
  return {2.0 * ea.real(), 2.0 * ea2.real() + 2.0 * en + 1.0};
}

std::vector<double> hermite_functions(double x, int count) {
  std::vector<double> psi(static_cast<std::size_t>(std::max(count, 0)), 0.0);
  if (count <= 0) return psi;
  psi[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  if (count > 1) psi[1] = std::numbers::sqrt2 * x * psi[0];
  for (int n = 1; n + 1 < count; ++n) {
    psi[n + 1] = std::sqrt(2.0 / (n + 1)) * x * psi[n] - std::sqrt(static_cast<double>(n) / (n + 1)) * psi[n - 1];
  }
  return psi;
}

std::vector<double> quadrature_pdf(const FockDensity& density, std::span<const double> x_grid) {
  const int d = density.cutoff;
  const auto g = static_cast<Eigen::Index>(x_grid.size());
  Eigen::MatrixXd psi(g, d);
  for (Eigen::Index i = 0; i < g; ++i) {
    // X = sqrt(2) x
    const auto row = hermite_functions(x_grid[i] / std::numbers::sqrt2, d);
    for (int n = 0; n < d; ++n) psi(i, n) = row[n];
  }
  const Eigen::MatrixXcd y = psi.cast<Complex>() * density.rho;
  std::vector<double> out(x_grid.size());
  for (Eigen::Index i = 0; i < g; ++i) {
    double p = 0.0;
    for (int n = 0; n < d; ++n) p += y(i, n).real() * psi(i, n);
    out[i] = p / std::numbers::sqrt2;
  }
  return out;
}

std::vector<double> default_quadrature_grid(const FockDensity& density, int points) {
  require(points >= 3, ErrorKind::Parameter, "quadrature grid needs at least 3 points");
  const QuadratureStats s = quadrature_stats(density);
  const double n = std::max(0.0, photon_moments(density).mean);
  const double half = std::max(2.0 * std::sqrt(n) + 6.0, 9.0 * std::sqrt(std::max(s.variance(), 0.0)));
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) grid[i] = s.mean - half + 2.0 * half * i / (points - 1);
  return grid;
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 2, ErrorKind::Parameter, "trapezoid needs matching grids");
  double sum = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) sum += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return sum;
}

double numeric_cfi(const PdfFamily& family, std::span<const double> x_grid, double phi, double dphi) {
  require(dphi > 0.0, ErrorKind::Parameter, "dphi must be positive");
  const std::vector<double> p0 = family(phi);
  require(p0.size() == x_grid.size(), ErrorKind::Parameter, "pdf family returned a mismatched grid");
  // Tail points where the truncated expansion is pure round-off carry no information.
  const double floor = 1e-12 * *std::max_element(p0.begin(), p0.end());
  auto fisher = [&](double h) {
    const std::vector<double> plus = family(phi + h);
    const std::vector<double> minus = family(phi - h);
    std::vector<double> integrand(p0.size());
    for (std::size_t i = 0; i < p0.size(); ++i) {
      const double dp = (plus[i] - minus[i]) / (2.0 * h);
      integrand[i] = p0[i] > floor ? dp * dp / p0[i] : 0.0;
    }
    return trapezoid(x_grid, integrand);
  };
  const double coarse = fisher(dphi);
  const double fine = fisher(0.5 * dphi);
  if (std::abs(coarse - fine) > 1e-3 * std::abs(fine) + 1e-12) {
    fail(ErrorKind::GridTooCoarse, "numeric CFI step check failed: " + std::to_string(coarse) + " vs " +
                                       std::to_string(fine));
  }
  return fine;
}

ProtocolOracle::ProtocolOracle(const StateSpec& input, double transmissivity, int cutoff, double leak)
    : cutoff_(cutoff), bs2_(bs_fock(transmissivity, cutoff)) {
  const Mixture in = input_mixture(input, cutoff, leak);
  const BeamSplitterBlocks bs1 = bs_fock(0.5, cutoff);
  const FockVector vac = single_mode_vacuum(cutoff);
  after_bs1_.weights = in.weights;
  for (const auto& s : in.states) {
    // Same orientation as the Gaussian protocol: the vacuum port carries the sign.
    after_bs1_.states.push_back(apply(bs1, tensor(s, vac, cutoff), /*swap_roles=*/true));
  }
}

FockDensity ProtocolOracle::output_density(double phi) const {
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(cutoff_, cutoff_);
  for (std::size_t i = 0; i < after_bs1_.states.size(); ++i) {
    const FockVector out = apply(bs2_, apply_phase(after_bs1_.states[i], 0, phi));
    rho += after_bs1_.weights[i] * reduce(out, 0).rho;
  }
  return FockDensity{cutoff_, rho};
}

PdfFamily ProtocolOracle::pdf_family(std::span<const double> x_grid) const {
  std::vector<double> grid(x_grid.begin(), x_grid.end());
  return [this, grid = std::move(grid)](double phi) { return quadrature_pdf(output_density(phi), grid); };
}

DifferenceStats intensity_difference_moments(const FockDensity& state_a, Complex beta, int cutoff, double leak) {
  check_cutoff(cutoff);
  Eigen::VectorXcd lo(cutoff);
  lo(0) = std::exp(-0.5 * std::norm(beta));
  for (int k = 1; k < cutoff; ++k) lo(k) = lo(k - 1) * beta / std::sqrt(static_cast<double>(k));
  const double lo_leak = std::max(0.0, 1.0 - lo.squaredNorm());
  const double a_leak = std::max(0.0, 1.0 - state_a.trace());
  if (lo_leak + a_leak > leak) cutoff_too_small(cutoff, lo_leak + a_leak, leak);

  const int wide = 2 * cutoff;
  const BeamSplitterBlocks bs = bs_fock(0.5, wide);
  const FockVector lo_state{cutoff, 1, lo};
  const Mixture signal = to_mixture(state_a);
  DifferenceStats out;
  for (std::size_t i = 0; i < signal.states.size(); ++i) {
    const FockVector mixed = apply(bs, tensor(signal.states[i], lo_state, wide));
    double m1 = 0.0, m2 = 0.0;
    for (int na = 0; na < wide; ++na) {
      for (int nb = 0; na + nb < wide; ++nb) {
        const double p = std::norm(mixed.amps(na * wide + nb));
        const double diff = na - nb;
        m1 += p * diff;
        m2 += p * diff * diff;
      }
    }
    out.mean += signal.weights[i] * m1;
    out.second += signal.weights[i] * m2;
  }
  return out;
}

}  // namespace homodyne::fock
