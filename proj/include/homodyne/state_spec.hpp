#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <variant>

namespace homodyne {

using Complex = std::complex<double>;

/// Single-mode input classes. Every class is a special case of the displaced
/// squeezed thermal state D(alpha) S(r, theta) rho_T S^dag D^dag.
struct Coherent {
  Complex alpha;
};
struct Thermal {
  double n_thermal = 0.0;
};
struct SqueezedVacuum {
  double r = 0.0;
  double theta = 0.0;
};
struct SqueezedThermal {
  double r = 0.0;
  double theta = 0.0;
  double n_thermal = 0.0;
};
struct DisplacedThermal {
  Complex alpha;
  double n_thermal = 0.0;
};
struct DisplacedSqueezed {
  Complex alpha;
  double r = 0.0;
  double theta = 0.0;
};

using StateSpec =
    std::variant<Coherent, Thermal, SqueezedVacuum, SqueezedThermal, DisplacedThermal, DisplacedSqueezed>;

/// Flattened parameters of a StateSpec; absent fields are zero.
struct GaussianParams {
  Complex alpha{0.0, 0.0};
  double r = 0.0;
  double theta = 0.0;
  double n_thermal = 0.0;
};

GaussianParams params_of(const StateSpec& spec);

/// Throws ErrorKind::Parameter on negative or non-finite parameters.
void validate(const StateSpec& spec);

/// Mean photon number of the input, |alpha|^2 + (2 N_T + 1)(sinh^2 r + 1/2) - 1/2.
double total_photons(const StateSpec& spec);

/// True when the input is a pure state (no thermal component).
bool is_pure(const StateSpec& spec);

/// Whether homodyne detection on the protocol output carries phase
/// information at all (requires a displacement).
bool is_phase_sensitive(const StateSpec& spec);

std::string_view class_name(const StateSpec& spec);

// Working-point constructors: displacement on the imaginary axis, squeezing
// angle zero, so phi = 0 maximises the homodyne Fisher information.
Coherent coherent_on_axis(double alpha_abs);
DisplacedThermal displaced_thermal_on_axis(double alpha_abs, double n_thermal);
DisplacedSqueezed displaced_squeezed_on_axis(double alpha_abs, double r);

}  // namespace homodyne
