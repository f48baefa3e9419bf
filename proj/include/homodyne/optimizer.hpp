#pragma once

#include <functional>
#include <utility>

namespace homodyne::optim {

struct ScanResult {
  double argmax = 0.0;
  double max_value = 0.0;
  int evaluations = 0;
  std::pair<double, double> bracket;  // final golden-section interval
};

/// Deterministic 1-D maximisation: an evenly spaced coarse grid brackets the
/// best point, then golden-section search shrinks the bracket below tol.
/// Throws NonFinite if f returns NaN or Inf.
ScanResult maximize_scalar(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-8,
                           int grid_points = 1001);

/// Number of strict local maxima of f on an evenly spaced grid, endpoints included.
int count_local_maxima(const std::function<double(double)>& f, double lo, double hi, int grid_points = 1001);

/// Best displacement share of a displaced squeezed input with N_DS photons,
/// maximising the working-point CFI over |alpha|^2 in [0, N_DS].
ScanResult argmax_split(double n_ds, double tol = 1e-8);

}  // namespace homodyne::optim
