#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>

#include "homodyne/protocol.hpp"

namespace homodyne {

/// Homodyne statistics of output A and their phase derivatives.
struct OutputMoments {
  double mean = 0.0;       // <X_A>
  double variance = 0.0;   // Var(X_A)
  double dmean = 0.0;      // d<X_A>/dphi
  double dvariance = 0.0;  // dVar(X_A)/dphi
  double photons = 0.0;    // <a^dag a> on output A
};

/// Output-A moments. The real-convention protocol uses the exact linear map
/// a_out = c(phi) a_in + vacuum, with c = (sqrt(T) e^{i phi} + sqrt(1-T)) / sqrt(2),
/// so the derivatives are analytic. Other conventions propagate the full
/// two-mode state and differentiate numerically (central step 1e-5, checked
/// against step 1e-6).
OutputMoments output_moments(const ProtocolConfig& cfg);

double expected_X(const ProtocolConfig& cfg);
double expected_X2(const ProtocolConfig& cfg);

/// sqrt(Var X) / |d<X>/dphi|. Throws ZeroSignal when the slope vanishes.
double delta_phi_error_prop(const ProtocolConfig& cfg);

/// xi = <a^dag a>_A / |beta|^2 for a finite local oscillator.
double xi_coefficient(const ProtocolConfig& cfg);

/// sqrt(Var X + xi) / |d<X>/dphi|. xi is taken from the actual output photon
/// number unless pinned by the caller.
double delta_phi_finite_lo(const ProtocolConfig& cfg, std::optional<double> pinned_xi = std::nullopt);

struct DifferenceMoments {
  double mean = 0.0;
  double second_moment = 0.0;
};

/// Photocurrent difference after BS3 against |beta>:
/// (|beta| <X_A>, |beta|^2 <X_A^2> + <a^dag a>_A).
DifferenceMoments homodyne_difference_moments(const ProtocolConfig& cfg);

/// Fisher information of the Gaussian outcome density N(mu(phi), Omega^2(phi)):
/// mu'^2 / Omega^2 + 2 (Omega')^2 / Omega^2.
double cfi_gaussian(const ProtocolConfig& cfg);

/// F_c(T, xi) = 2 T |alpha|^2 / (1 + xi) at phi = 0. Rows follow t_grid, columns xi_grid.
Eigen::MatrixXd cfi_surface(double alpha2, std::span<const double> t_grid, std::span<const double> xi_grid);

/// 4 Var(a^dag a) on path A after BS1. Pure inputs only (MixedState otherwise).
double qfi_photon_number(const StateSpec& input);

double qfi_displaced_squeezed(double alpha2, double r);

double sensitivity_displaced_thermal(double alpha_abs, double n_thermal, double phi);
double threshold_displaced_thermal(double n_thermal);

double sensitivity_displaced_squeezed(double alpha_abs, double r, double theta, double phi);
double threshold_displaced_squeezed(double n_squeezed);

/// Displaced-squeezed CFI at the working point for a fixed total photon
/// number n_ds, with |alpha|^2 = alpha2 and sinh^2 r = n_ds - alpha2.
double displaced_squeezed_cfi(double n_ds, double alpha2);

/// Displaced-thermal CFI at the working point, N_T = n_dt - alpha2.
double displaced_thermal_cfi(double n_dt, double alpha2);

/// Displacement photon number maximising displaced_squeezed_cfi.
double optimal_alpha2(double n_ds);

/// displaced_squeezed_cfi at optimal_alpha2, in closed form.
double max_cfi(double n_ds);

struct ShotNoise {
  double delta_phi = 0.0;
  double cfi = 0.0;
};
ShotNoise snl(double n_total);

struct SensitivityReport {
  ProtocolConfig config;
  double delta_phi = 0.0;             // 1 / sqrt(cfi)
  double cfi = 0.0;
  double delta_phi_error_prop = 0.0;  // includes xi for a finite LO
  std::optional<double> qfi;
  double n_total = 0.0;
  double snl_delta_phi = 0.0;
  std::optional<double> xi;
};

/// Full summary for one configuration. For a finite LO the CFI is the inverse
/// square of the xi-corrected sensitivity.
SensitivityReport report(const ProtocolConfig& cfg);

/// Reference closed forms, kept separate from the propagation path so the two
/// can be checked against each other.
namespace closed_form {

// Coherent input alpha = i|alpha|, any T.
double coherent_expected_X(double alpha_abs, double transmissivity, double phi);
double coherent_expected_X2(double alpha_abs, double transmissivity, double phi);
double coherent_delta_phi(double alpha_abs, double transmissivity, double phi);

// T = 1 expectations for displaced thermal and displaced squeezed inputs.
double displaced_expected_X(Complex alpha, double phi);
double displaced_thermal_expected_X2(Complex alpha, double n_thermal, double phi);
double displaced_squeezed_expected_X2(Complex alpha, double r, double theta, double phi);

}  // namespace closed_form

}  // namespace homodyne
