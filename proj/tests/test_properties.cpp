#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "homodyne/fock.hpp"
#include "homodyne/gaussian_state.hpp"
#include "homodyne/metrology.hpp"
#include "homodyne/optimizer.hpp"
#include "support.hpp"

using namespace homodyne;
using homodyne::testing::Close;
using homodyne::testing::Gen;
using homodyne::testing::RelClose;

namespace {

StateSpec random_spec(Gen& g) {
  const Complex alpha = std::polar(std::sqrt(g.uniform(0.0, 3.0)), g.uniform(-3.1, 3.1));
  const double r = g.uniform(0.0, 0.8);
  const double theta = g.uniform(-3.1, 3.1);
  const double nt = g.uniform(0.0, 1.5);
  switch (static_cast<int>(g.uniform(0.0, 6.0))) {
    case 0: return Coherent{alpha};
    case 1: return Thermal{nt};
    case 2: return SqueezedVacuum{r, theta};
    case 3: return SqueezedThermal{r, theta, nt};
    case 4: return DisplacedThermal{alpha, nt};
    default: return DisplacedSqueezed{alpha, r, theta};
  }
}

void expect_same(const GaussianState& a, const GaussianState& b, double tol) {
  EXPECT_LE((a.mean() - b.mean()).cwiseAbs().maxCoeff(), tol);
  EXPECT_LE((a.cov() - b.cov()).cwiseAbs().maxCoeff(), tol);
}

}  // namespace

TEST(Property, SymplecticMapsPreserveSymplecticEigenvalues) {
  Gen g(1);
  for (int trial = 0; trial < 200; ++trial) {
    const auto in = make_state(random_spec(g)).tensor(make_state(random_spec(g)));
    const auto before = in.symplectic_eigenvalues();
    const auto conv = trial % 2 ? BeamSplitterConvention::Symmetric : BeamSplitterConvention::Real;
    const auto out = apply_phase(apply_beamsplitter(in, 0, 1, g.uniform(0.0, 1.0), conv), 1, g.uniform(-3.0, 3.0));
    const auto after = out.symplectic_eigenvalues();
    ASSERT_EQ(before.size(), after.size());
    for (std::size_t k = 0; k < before.size(); ++k) EXPECT_TRUE(Close(after[k], before[k], 1e-9));
  }
}

TEST(Property, BeamSplitterConservesPhotonNumber) {
  Gen g(2);
  for (int trial = 0; trial < 200; ++trial) {
    const auto in = make_state(random_spec(g)).tensor(make_state(random_spec(g)));
    const auto out = apply_beamsplitter(in, 1, 0, g.uniform(0.0, 1.0));
    const double before = mean_photon(in, 0) + mean_photon(in, 1);
    const double after = mean_photon(out, 0) + mean_photon(out, 1);
    EXPECT_NEAR(after, before, 1e-10 * std::max(1.0, before));
  }
}

TEST(Property, PhaseShiftsCompose) {
  Gen g(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = make_state(random_spec(g));
    const double p1 = g.uniform(-4.0, 4.0), p2 = g.uniform(-4.0, 4.0);
    expect_same(apply_phase(apply_phase(s, 0, p1), 0, p2), apply_phase(s, 0, p1 + p2), 1e-10);
  }
}

TEST(Property, GaussianMomentsMatchFockOracle) {
  Gen g(4);
  for (int trial = 0; trial < 40; ++trial) {
    const StateSpec spec = random_spec(g);
    const auto gs = make_state(spec);
    const auto rho = fock::input_density(spec, 80);
    const auto q = fock::quadrature_stats(rho);
    const auto qg = quadrature_moments(gs, 0);
    EXPECT_TRUE(Close(q.mean, qg.mean, 1e-6)) << class_name(spec);
    EXPECT_TRUE(Close(q.variance(), qg.variance, 1e-6)) << class_name(spec);
    EXPECT_TRUE(Close(fock::photon_moments(rho).mean, mean_photon(gs, 0), 1e-6)) << class_name(spec);
  }
}

TEST(Property, QuadraturePdfMomentsMatchGaussian) {
  Gen g(5);
  for (int trial = 0; trial < 12; ++trial) {
    const StateSpec spec = random_spec(g);
    const auto rho = fock::input_density(spec, 60);
    const auto grid = fock::default_quadrature_grid(rho);
    const auto p = fock::quadrature_pdf(rho, grid);
    std::vector<double> xp(grid.size()), x2p(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      xp[i] = grid[i] * p[i];
      x2p[i] = grid[i] * grid[i] * p[i];
    }
    const double m1 = fock::trapezoid(grid, xp);
    const double var = fock::trapezoid(grid, x2p) - m1 * m1;
    const auto qg = quadrature_moments(make_state(spec), 0);
    EXPECT_TRUE(Close(m1, qg.mean, 1e-6)) << class_name(spec);
    EXPECT_TRUE(Close(var, qg.variance, 1e-6)) << class_name(spec);
  }
}

TEST(Property, CoherentNumericCfiOverTransmissivityAndPhase) {
  const double a = 2.0;
  for (double t : {0.3, 0.7, 1.0}) {
    const fock::ProtocolOracle oracle(coherent_on_axis(a), t, 30);
    for (double phi : {-0.6, 0.0, 0.9}) {
      const auto grid = fock::default_quadrature_grid(oracle.output_density(phi));
      const double numeric = fock::numeric_cfi(oracle.pdf_family(grid), grid, phi);
      EXPECT_TRUE(RelClose(numeric, 2.0 * t * a * a * std::pow(std::cos(phi), 2), 1e-3)) << t << " " << phi;
    }
  }
}

TEST(Property, CutoffDoublingChangesNothing) {
  const std::vector<StateSpec> specs = {coherent_on_axis(1.5), displaced_squeezed_on_axis(1.0, 0.5),
                                        displaced_thermal_on_axis(1.0, 0.4)};
  for (const auto& spec : specs) {
    const fock::ProtocolOracle small(spec, 0.8, 40), large(spec, 0.8, 80);
    const auto qs = fock::quadrature_stats(small.output_density(0.3));
    const auto ql = fock::quadrature_stats(large.output_density(0.3));
    EXPECT_TRUE(RelClose(qs.second, ql.second, 1e-6)) << class_name(spec);
    if (std::abs(ql.mean) > 1e-9) EXPECT_TRUE(RelClose(qs.mean, ql.mean, 1e-6)) << class_name(spec);
    const double vs = fock::photon_moments(small.after_first_splitter(), 0).variance();
    const double vl = fock::photon_moments(large.after_first_splitter(), 0).variance();
    EXPECT_TRUE(RelClose(vs, vl, 1e-6)) << class_name(spec);
  }
}

TEST(Property, FockUnitariesPreserveNorm) {
  Gen g(6);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 30;
    const auto in = fock::tensor(fock::coherent_fock(std::polar(g.uniform(0.0, 1.5), g.uniform(-3.0, 3.0)), d),
                                 fock::squeezed_displaced_fock({g.uniform(-1.0, 1.0), 0.0}, g.uniform(0.0, 0.5), 0.0, d), d);
    const auto out = fock::apply_phase(fock::apply(fock::bs_fock(g.uniform(0.0, 1.0), d), in), 0, g.uniform(-3.0, 3.0));
    EXPECT_NEAR(out.norm(), in.norm(), 1e-9);
  }
}

TEST(Property, QfiBoundsCfi) {
  for (double alpha2 = 0.5; alpha2 <= 10.0 + 1e-12; alpha2 += 0.5) {
    for (double r = 0.0; r <= 1.0 + 1e-12; r += 0.25) {
      const StateSpec spec = displaced_squeezed_on_axis(std::sqrt(alpha2), r);
      const double qfi = qfi_photon_number(spec);
      for (int k = 0; k < 20; ++k) {
        const double phi = -1.5 + 3.0 * k / 19.0;
        EXPECT_GE(qfi, cfi_gaussian(ProtocolConfig{spec, phi, 1.0}) - 1e-9) << alpha2 << " " << r << " " << phi;
      }
    }
  }
}

TEST(Property, WorkingPointCfiIsCoherentLimitAtFullTransmission) {
  Gen g(7);
  for (int trial = 0; trial < 100; ++trial) {
    const double alpha2 = g.uniform(0.1, 20.0), t = g.uniform(0.0, 1.0);
    const ProtocolConfig cfg{coherent_on_axis(std::sqrt(alpha2)), 0.0, t};
    EXPECT_TRUE(Close(cfi_gaussian(cfg), 2.0 * t * alpha2, 1e-12));
    if (t > 1e-6) EXPECT_TRUE(RelClose(cfi_gaussian(cfg), 1.0 / std::pow(delta_phi_error_prop(cfg), 2), 1e-10));
  }
}

TEST(Property, ZeroSignalClassesHaveNoMean) {
  const std::vector<StateSpec> specs = {Thermal{0.7}, SqueezedVacuum{0.6, 0.0}, SqueezedThermal{0.6, 0.3, 0.4}};
  for (const auto& spec : specs) {
    for (int k = 0; k < 100; ++k) {
      const double phi = -std::numbers::pi + 2.0 * std::numbers::pi * k / 99.0;
      EXPECT_LT(std::abs(expected_X(ProtocolConfig{spec, phi, 0.6})), 1e-12);
    }
  }
}

TEST(Property, FiniteLoConvergesForUnitVarianceOutputs) {
  const std::vector<StateSpec> specs = {coherent_on_axis(std::sqrt(10.0)), displaced_thermal_on_axis(2.0, 0.5)};
  for (const auto& spec : specs) {
    ProtocolConfig cfg{spec, 0.2, 0.9};
    const double n_a = output_moments(cfg).photons;
    cfg.lo = FiniteLO{{std::sqrt(1e3 * n_a), 0.0}};
    EXPECT_TRUE(RelClose(delta_phi_finite_lo(cfg), delta_phi_error_prop(cfg), 1e-3)) << class_name(spec);
  }
}

TEST(Property, OptimalSplitDominatesFineGrid) {
  for (double n : {0.1, 1.0, 10.0, 100.0, 1000.0}) {
    const double best = displaced_squeezed_cfi(n, optimal_alpha2(n));
    EXPECT_TRUE(RelClose(max_cfi(n), best, 1e-9)) << n;
    const int steps = 100'000;
    for (int i = 0; i <= steps; ++i) {
      ASSERT_GE(best, displaced_squeezed_cfi(n, n * i / steps) - 1e-12 * best) << n << " " << i;
    }
  }
}

TEST(Property, ThresholdsSeparateShotNoise) {
  Gen g(8);
  for (int trial = 0; trial < 50; ++trial) {
    const double nt = g.uniform(0.05, 0.95);
    const double th = threshold_displaced_thermal(nt);
    auto dt_cfi = [&](double a2) { return std::pow(sensitivity_displaced_thermal(std::sqrt(a2), nt, 0.0), -2); };
    EXPECT_GT(dt_cfi(th * (1 + 1e-3)), th * (1 + 1e-3) + nt);
    EXPECT_LT(dt_cfi(th * (1 - 1e-3)), th * (1 - 1e-3) + nt);

    const double nsv = g.uniform(0.05, 5.0);
    const double r = std::asinh(std::sqrt(nsv));
    const double ts = threshold_displaced_squeezed(nsv);
    auto ds_cfi = [&](double a2) { return std::pow(sensitivity_displaced_squeezed(std::sqrt(a2), r, 0.0, 0.0), -2); };
    EXPECT_GT(ds_cfi(ts * (1 + 1e-3)), ts * (1 + 1e-3) + nsv);
    EXPECT_LT(ds_cfi(ts * (1 - 1e-3)), ts * (1 - 1e-3) + nsv);
  }
}
