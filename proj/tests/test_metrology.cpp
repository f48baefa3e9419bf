#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "homodyne/error.hpp"
#include "homodyne/fock.hpp"
#include "homodyne/metrology.hpp"
#include "support.hpp"

using namespace homodyne;
using homodyne::testing::Close;
using homodyne::testing::RelClose;

namespace {

ProtocolConfig coherent(double alpha2, double t, double phi) {
  return ProtocolConfig{coherent_on_axis(std::sqrt(alpha2)), phi, t};
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Io;
}

}  // namespace

TEST(ExpectedX, CoherentQuarterTurn) {
  EXPECT_TRUE(Close(expected_X(coherent(10, 1, std::numbers::pi / 2)), -std::sqrt(20.0), 1e-12));
  EXPECT_TRUE(Close(closed_form::coherent_expected_X(std::sqrt(10.0), 1, std::numbers::pi / 2), -std::sqrt(20.0), 1e-12));
}

TEST(ExpectedX, ZeroAtWorkingPointForAnyTransmissivity) {
  for (double t : {0.0, 0.2, 0.5, 0.9, 1.0}) EXPECT_NEAR(expected_X(coherent(10, t, 0.0)), 0.0, 1e-12);
}

TEST(ExpectedX, ThermalCarriesNoSignal) {
  for (double phi : {-1.0, 0.2, 2.5}) EXPECT_NEAR(expected_X(ProtocolConfig{Thermal{1.3}, phi, 0.7}), 0.0, 1e-14);
}

TEST(ExpectedX2, CoherentExamples) {
  EXPECT_TRUE(Close(expected_X2(coherent(10, 1, std::numbers::pi / 2)), 21.0, 1e-12));
  EXPECT_TRUE(Close(expected_X2(coherent(3.7, 0.4, 0.0)), 1.0, 1e-12));
}

TEST(ExpectedX2, DisplacedSqueezedMatchesFockOracle) {
  const StateSpec ds = displaced_squeezed_on_axis(2.0, 0.5);
  const double phi = 0.1;
  const fock::ProtocolOracle oracle(ds, 1.0, 60);
  const double numeric = fock::quadrature_stats(oracle.output_density(phi)).second;
  EXPECT_TRUE(Close(expected_X2(ProtocolConfig{ds, phi, 1.0}), numeric, 1e-6));
  EXPECT_TRUE(Close(closed_form::displaced_squeezed_expected_X2({0.0, 2.0}, 0.5, 0.0, phi), numeric, 1e-6));
}

TEST(DeltaPhi, OptimalAndShotNoise) {
  EXPECT_TRUE(Close(delta_phi_error_prop(coherent(10, 1, 0)), 1.0 / std::sqrt(20.0), 1e-12));
  EXPECT_TRUE(Close(delta_phi_error_prop(coherent(10, 0.5, 0)), 1.0 / std::sqrt(10.0), 1e-12));
}

TEST(DeltaPhi, ThermalIsZeroSignal) {
  EXPECT_EQ(kind_of([] { delta_phi_error_prop(ProtocolConfig{Thermal{1.0}, 0.0, 1.0}); }), ErrorKind::ZeroSignal);
}

TEST(Xi, StrongLocalOscillatorVanishes) {
  ProtocolConfig cfg = coherent(10, 1, 0);
  double prev = 1e9;
  for (double beta2 : {1.0, 1e2, 1e4, 1e6, 1e8}) {
    cfg.lo = FiniteLO{{std::sqrt(beta2), 0.0}};
    const double xi = xi_coefficient(cfg);
    EXPECT_LT(xi, prev);
    prev = xi;
  }
  EXPECT_LT(prev, 1e-6);
}

TEST(Xi, MatchedLocalOscillatorGivesTwo) {
  const double a = std::sqrt(10.0);
  ProtocolConfig cfg = coherent(10, 0.5, 0);
  cfg.lo = FiniteLO{{a / std::numbers::sqrt2, 0.0}};
  EXPECT_TRUE(Close(xi_coefficient(cfg), 2.0, 1e-12));
}

TEST(Xi, VacuumOutputGivesZero) {
  ProtocolConfig cfg{Coherent{{0.0, 0.0}}, 0.0, 1.0, FiniteLO{{3.0, 0.0}}};
  EXPECT_NEAR(xi_coefficient(cfg), 0.0, 1e-15);
}

TEST(FiniteLo, PinnedXiExamples) {
  ProtocolConfig cfg = coherent(10, 1, 0);
  cfg.lo = FiniteLO{{100.0, 0.0}};
  EXPECT_TRUE(Close(delta_phi_finite_lo(cfg, 0.0), delta_phi_error_prop(cfg), 1e-15));
  EXPECT_TRUE(Close(delta_phi_finite_lo(cfg, 1.0), std::sqrt(2.0) / std::sqrt(20.0), 1e-12));
  double prev = 0.0;
  for (double xi : {0.0, 0.1, 0.5, 1.0, 3.0}) {
    const double d = delta_phi_finite_lo(cfg, xi);
    EXPECT_GT(d, prev);
    prev = d;
  }
}

TEST(FiniteLo, DifferenceMomentsScaleWithLocalOscillator) {
  ProtocolConfig cfg = coherent(10, 1, 0.3);
  cfg.lo = FiniteLO{{10.0, 0.0}};
  const auto m = homodyne_difference_moments(cfg);
  const double a = std::sqrt(10.0);
  EXPECT_TRUE(Close(m.mean, 10.0 * closed_form::coherent_expected_X(a, 1, 0.3), 1e-12));
  EXPECT_TRUE(Close(m.second_moment, 100.0 * closed_form::coherent_expected_X2(a, 1, 0.3) + 5.0, 1e-12));

  ProtocolConfig vac{Coherent{{0.0, 0.0}}, 0.3, 1.0, FiniteLO{{4.0, 0.0}}};
  const auto v = homodyne_difference_moments(vac);
  EXPECT_NEAR(v.mean, 0.0, 1e-14);
  EXPECT_NEAR(v.second_moment, 16.0, 1e-12);
}

TEST(CfiGaussian, CoherentExamples) {
  EXPECT_TRUE(Close(cfi_gaussian(coherent(10, 1, 0)), 20.0, 1e-12));
  for (double t : {0.2, 0.6, 1.0}) {
    for (double phi : {-0.8, 0.0, 0.5}) {
      const auto cfg = coherent(10, t, phi);
      const double expected = 2.0 * t * 10.0 * std::pow(std::cos(phi), 2);
      EXPECT_TRUE(Close(cfi_gaussian(cfg), expected, 1e-12));
      if (expected > 1e-9) EXPECT_TRUE(RelClose(cfi_gaussian(cfg), 1.0 / std::pow(delta_phi_error_prop(cfg), 2), 1e-12));
    }
  }
}

TEST(CfiSurface, ReferencePlanes) {
  const std::vector<double> ts{0.0, 0.5, 1.0};
  const std::vector<double> xis{0.0, 1.0};
  const auto s = cfi_surface(7.0, ts, xis);
  EXPECT_EQ(s(1, 0), 7.0);
  EXPECT_EQ(s(2, 0), 14.0);
  EXPECT_EQ(s(0, 0), 0.0);
  EXPECT_EQ(s(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(s(2, 1), 7.0);
}

TEST(Qfi, Examples) {
  EXPECT_TRUE(Close(qfi_photon_number(coherent_on_axis(std::sqrt(10.0))), 20.0, 1e-12));
  EXPECT_NEAR(qfi_photon_number(Coherent{{0.0, 0.0}}), 0.0, 1e-14);
  EXPECT_EQ(kind_of([] { qfi_photon_number(Thermal{0.5}); }), ErrorKind::MixedState);
}

TEST(Qfi, DisplacedSqueezedClosedForm) {
  EXPECT_TRUE(Close(qfi_displaced_squeezed(3.0, 0.0), 6.0, 1e-14));
  EXPECT_TRUE(Close(qfi_displaced_squeezed(0.0, 1.0), std::pow(std::sinh(2.0), 2) / 2 + std::pow(std::sinh(1.0), 2), 1e-14));
  EXPECT_TRUE(Close(qfi_displaced_squeezed(0.0, 1.0), 7.958156, 1e-6));
  EXPECT_TRUE(Close(qfi_displaced_squeezed(4.0, 0.5), 15.8352, 1e-4));
  EXPECT_TRUE(RelClose(qfi_photon_number(displaced_squeezed_on_axis(2.0, 0.5)), qfi_displaced_squeezed(4.0, 0.5), 1e-12));
}

TEST(DisplacedThermal, SensitivityExamples) {
  EXPECT_TRUE(Close(sensitivity_displaced_thermal(3.0, 0.0, 0.0), 1.0 / (std::numbers::sqrt2 * 3.0), 1e-14));
  EXPECT_TRUE(Close(sensitivity_displaced_thermal(std::sqrt(8.0), 2.0, 0.0), std::sqrt(3.0) / 4.0, 1e-14));
  for (double nt : {0.1, 1.0, 5.0}) {
    EXPECT_GE(sensitivity_displaced_thermal(2.0, nt, 0.0), sensitivity_displaced_thermal(2.0, 0.0, 0.0));
  }
}

TEST(DisplacedThermal, ThresholdExamples) {
  EXPECT_EQ(threshold_displaced_thermal(0.0), 0.0);
  EXPECT_TRUE(Close(threshold_displaced_thermal(0.5), 1.5, 1e-14));
  EXPECT_EQ(kind_of([] { threshold_displaced_thermal(1.0); }), ErrorKind::NoThreshold);
  const double a2 = 1.5 * (1 + 1e-3);
  EXPECT_GT(1.0 / std::pow(sensitivity_displaced_thermal(std::sqrt(a2), 0.5, 0.0), 2), a2 + 0.5);
}

TEST(DisplacedSqueezed, SensitivityExamples) {
  EXPECT_TRUE(Close(sensitivity_displaced_squeezed(3.0, 0.0, 0.0, 0.0), 1.0 / (std::numbers::sqrt2 * 3.0), 1e-14));
  const double expected = std::sqrt(std::cosh(0.5) * std::exp(-0.5)) / (std::numbers::sqrt2 * std::sqrt(8.0));
  EXPECT_TRUE(Close(sensitivity_displaced_squeezed(std::sqrt(8.0), 0.5, 0.0, 0.0), expected, 1e-14));
  EXPECT_NEAR(sensitivity_displaced_squeezed(std::sqrt(8.0), 0.5, 0.0, 0.0), 0.2067516, 1e-7);
  EXPECT_GT(sensitivity_displaced_squeezed(std::sqrt(8.0), 0.5, std::numbers::pi, 0.0),
            sensitivity_displaced_squeezed(std::sqrt(8.0), 0.5, 0.0, 0.0));
}

TEST(DisplacedSqueezed, SensitivityMatchesGaussianCfi) {
  for (double phi : {-0.3, 0.0, 0.4}) {
    const ProtocolConfig cfg{displaced_squeezed_on_axis(2.0, 0.6), phi, 1.0};
    EXPECT_TRUE(RelClose(sensitivity_displaced_squeezed(2.0, 0.6, 0.0, phi), delta_phi_error_prop(cfg), 1e-10));
  }
}

TEST(DisplacedSqueezed, ThresholdExamples) {
  EXPECT_EQ(threshold_displaced_squeezed(0.0), 0.0);
  EXPECT_TRUE(Close(threshold_displaced_squeezed(1.0), (2.0 - std::sqrt(2.0)) / std::sqrt(2.0), 1e-14));
}

TEST(Split, OptimumApproachesFullDisplacement) {
  EXPECT_NEAR(optimal_alpha2(1e-12), 0.0, 1e-9);
  double prev = 0.0;
  for (double n : {10.0, 100.0, 1000.0}) {
    const double share = optimal_alpha2(n) / n;
    EXPECT_GT(share, prev);
    prev = share;
  }
  EXPECT_GT(optimal_alpha2(100.0) / 100.0, 0.95);
}

TEST(Split, MaxCfiValues) {
  EXPECT_TRUE(RelClose(max_cfi(10.0), 30.7335008, 1e-8));
  EXPECT_NEAR(max_cfi(100.0) / 400.0, 0.909, 1e-3);
  EXPECT_NEAR(max_cfi(1e-9), 0.0, 1e-8);
}

TEST(Split, CoherentEndpoint) {
  EXPECT_TRUE(Close(displaced_squeezed_cfi(10.0, 10.0), 20.0, 1e-12));
  EXPECT_TRUE(Close(displaced_thermal_cfi(10.0, 10.0), 20.0, 1e-12));
  EXPECT_EQ(displaced_squeezed_cfi(10.0, 0.0), 0.0);
}

TEST(Snl, Examples) {
  EXPECT_TRUE(Close(snl(10.0).delta_phi, 0.31623, 1e-5));
  EXPECT_EQ(snl(10.0).cfi, 10.0);
  EXPECT_EQ(snl(1.0).delta_phi, 1.0);
  EXPECT_THROW(snl(0.0), Error);
}

TEST(Report, CoherentBeatsShotNoiseBySqrtTwo) {
  const auto rep = report(coherent(10, 1, 0));
  EXPECT_TRUE(Close(rep.delta_phi, rep.snl_delta_phi / std::numbers::sqrt2, 1e-12));
  ASSERT_TRUE(rep.qfi.has_value());
  EXPECT_TRUE(Close(*rep.qfi, 20.0, 1e-12));
  EXPECT_FALSE(rep.xi.has_value());
}

TEST(Report, FiniteLoCarriesXi) {
  ProtocolConfig cfg = coherent(10, 1, 0);
  cfg.lo = FiniteLO{{10.0, 0.0}};
  const auto rep = report(cfg);
  ASSERT_TRUE(rep.xi.has_value());
  EXPECT_TRUE(Close(*rep.xi, 0.05, 1e-12));
  EXPECT_TRUE(RelClose(rep.cfi, 20.0 / 1.05, 1e-12));
}

TEST(Conventions, SymmetricPathMatchesDirectDifferences) {
  ProtocolConfig sym = coherent(4, 0.7, 0.3);
  sym.convention = BeamSplitterConvention::Symmetric;
  const auto m = output_moments(sym);
  const double h = 1e-4;
  ProtocolConfig plus = sym, minus = sym;
  plus.phi += h;
  minus.phi -= h;
  EXPECT_NEAR(m.dmean, (expected_X(plus) - expected_X(minus)) / (2 * h), 1e-6);
  EXPECT_TRUE(Close(mean_photon(propagate(sym), 0) + mean_photon(propagate(sym), 1), 4.0, 1e-12));
  EXPECT_TRUE(Close(cfi_gaussian(sym), m.dmean * m.dmean / m.variance, 1e-9));
}
