#pragma once

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

namespace homodyne::testing {

// Absolute below magnitude 1, relative above.
inline ::testing::AssertionResult Close(double value, double reference, double tol) {
  const double scale = std::max(1.0, std::abs(reference));
  const double dev = std::abs(value - reference) / scale;
  if (dev <= tol) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << "value " << value << " vs reference " << reference << " (scaled deviation "
                                       << dev << " > " << tol << ")";
}

inline ::testing::AssertionResult RelClose(double value, double reference, double tol) {
  const double dev = std::abs(value - reference) / std::abs(reference);
  if (dev <= tol) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << "value " << value << " vs reference " << reference << " (relative deviation "
                                       << dev << " > " << tol << ")";
}

// Fixed-seed generator for the property tests; failures are reproducible.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

 private:
  std::mt19937_64 rng_;
};

}  // namespace homodyne::testing
