#include "homodyne/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "homodyne/error.hpp"
#include "homodyne/metrology.hpp"

namespace homodyne::optim {

namespace {

struct Counted {
  const std::function<double(double)>& f;
  int calls = 0;

  double operator()(double x) {
    ++calls;
    const double y = f(x);
    require(std::isfinite(y), ErrorKind::NonFinite, "objective is not finite at x = " + std::to_string(x));
    return y;
  }
};

void check_interval(double lo, double hi, int grid_points) {
  require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, ErrorKind::Parameter, "need a finite interval lo < hi");
  require(grid_points >= 3, ErrorKind::Parameter, "grid needs at least 3 points");
}

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = lo + (hi - lo) * i / (n - 1);
  xs.back() = hi;
  return xs;
}

}  // namespace

ScanResult maximize_scalar(const std::function<double(double)>& f, double lo, double hi, double tol,
                           int grid_points) {
  check_interval(lo, hi, grid_points);
  require(tol > 0.0, ErrorKind::Parameter, "tol must be positive");
  Counted eval{f};

  const std::vector<double> xs = grid(lo, hi, grid_points);
  std::size_t best = 0;
  double best_val = eval(xs[0]);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double v = eval(xs[i]);
    if (v > best_val) {
      best = i;
      best_val = v;
    }
  }

  double a = xs[best == 0 ? 0 : best - 1];
  double b = xs[best + 1 == xs.size() ? best : best + 1];
  const double inv_phi = 1.0 / std::numbers::phi;
  double c = b - (b - a) * inv_phi;
  double d = a + (b - a) * inv_phi;
  double fc = eval(c);
  double fd = eval(d);
  while (b - a >= tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - (b - a) * inv_phi;
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + (b - a) * inv_phi;
      fd = eval(d);
    }
  }

  ScanResult out;
  out.bracket = {a, b};
  out.argmax = 0.5 * (a + b);
  out.max_value = eval(out.argmax);
  // Interval ends can win when the maximum sits on the boundary.
  for (double x : {a, b}) {
    const double v = eval(x);
    if (v > out.max_value) {
      out.max_value = v;
      out.argmax = x;
    }
  }
  if (best_val > out.max_value) {
    out.max_value = best_val;
    out.argmax = xs[best];
  }
  out.evaluations = eval.calls;
  return out;
}

int count_local_maxima(const std::function<double(double)>& f, double lo, double hi, int grid_points) {
  check_interval(lo, hi, grid_points);
  Counted eval{f};
  std::vector<double> ys;
  for (double x : grid(lo, hi, grid_points)) ys.push_back(eval(x));
  int count = 0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const bool left = i == 0 || ys[i] > ys[i - 1];
    const bool right = i + 1 == ys.size() || ys[i] > ys[i + 1];
    if (left && right) ++count;
  }
  return count;
}

ScanResult argmax_split(double n_ds, double tol) {
  require(std::isfinite(n_ds) && n_ds > 0.0, ErrorKind::Parameter, "N_DS must be positive");
  const auto cfi = [n_ds](double alpha2) { return displaced_squeezed_cfi(n_ds, std::clamp(alpha2, 0.0, n_ds)); };
  return maximize_scalar(cfi, 0.0, n_ds, tol);
}

}  // namespace homodyne::optim
