#include <catenoid/index_engine.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace catenoid;

namespace {

const CriticalParams& P() { return critical_catenoid(); }

Grid1D s_grid(std::size_t n) { return Grid1D::uniform(Chart::s, n, P()); }

SurfaceFunction field(FieldKind k) { return SurfaceFunction::from_field(ClosedFormField::make(k, P()), P()); }

}  // namespace

TEST(MorseIndex, RobinCountsAtDefaultGrid) {
  const IndexReport r = morse_index(10, s_grid(1024), P());
  ASSERT_EQ(r.per_mode_negative.size(), 11u);
  EXPECT_EQ(r.per_mode_negative[0], 2u);
  EXPECT_EQ(r.per_mode_negative[1], 1u);
  for (std::size_t n = 2; n <= 10; ++n) EXPECT_EQ(r.per_mode_negative[n], 0u);
  EXPECT_EQ(r.total_index, 4u);
  EXPECT_TRUE(r.converged);
  EXPECT_TRUE(r.resolved);
  EXPECT_EQ(r.refinement_grid_sizes, (std::vector<std::size_t>{1024, 2047, 4093}));
  EXPECT_EQ(r.refinement_totals, (std::vector<std::size_t>{4, 4, 4}));
}

TEST(MorseIndex, TotalFormulaAndMonotoneTail) {
  const IndexReport r = morse_index(6, s_grid(512), P());
  std::size_t total = r.per_mode_negative[0];
  for (std::size_t n = 1; n < r.per_mode_negative.size(); ++n) {
    total += 2 * r.per_mode_negative[n];
    if (n > 1) EXPECT_LE(r.per_mode_negative[n], r.per_mode_negative[n - 1]);
  }
  EXPECT_EQ(r.total_index, total);
  EXPECT_EQ(weighted_total(r.per_mode_negative), total);
}

TEST(MorseIndex, IndependentOfMaxModeAndChart) {
  EXPECT_EQ(morse_index(2, s_grid(512), P()).total_index, morse_index(20, s_grid(512), P()).total_index);
  const IndexReport phi = morse_index(10, Grid1D::uniform(Chart::phi, 1024, P()), P());
  EXPECT_EQ(phi.per_mode_negative, morse_index(10, s_grid(1024), P()).per_mode_negative);
}

TEST(MorseIndex, CountsStableAcrossGrids) {
  const auto a = morse_index(4, s_grid(512), P()).per_mode_negative;
  EXPECT_EQ(a, morse_index(4, s_grid(1024), P()).per_mode_negative);
  EXPECT_EQ(a, morse_index(4, s_grid(2048), P()).per_mode_negative);
}

TEST(MorseIndex, CoarseGridIsUnresolved) {
  const IndexReport r = morse_index(3, s_grid(64), P());
  EXPECT_TRUE(r.converged);
  EXPECT_FALSE(r.resolved);
  EXPECT_GT(r.discretization_error, r.tol);
}

TEST(MorseIndex, DirichletIsStableWithZeroGroundState) {
  const IndexReport r = morse_index(10, s_grid(1024), P(), IndexOptions{BoundaryCondition::dirichlet});
  EXPECT_EQ(r.total_index, 0u);
  EXPECT_EQ(r.per_mode_near_zero[0], 1u);
  EXPECT_LE(std::abs(r.lowest_eigenvalues[0][0]), r.zero_threshold);
}

TEST(MorseIndex, ThreadCountDoesNotChangeReport) {
  const IndexReport a = morse_index(8, s_grid(512), P(), IndexOptions{BoundaryCondition::robin, 1e-4, 1});
  const IndexReport b = morse_index(8, s_grid(512), P(), IndexOptions{BoundaryCondition::robin, 1e-4, 4});
  EXPECT_EQ(a.per_mode_negative, b.per_mode_negative);
  EXPECT_EQ(a.lowest_eigenvalues, b.lowest_eigenvalues);
  EXPECT_EQ(a.discretization_error, b.discretization_error);
}

TEST(MorseIndex, RejectsRadialGrid) {
  EXPECT_THROW(morse_index(3, Grid1D(Chart::radial, 128, 0.0, 1.0), P()), Error);
  EXPECT_THROW(disk_index(s_grid(128), 3, P()), Error);
}

TEST(Steklov, SpectrumOfJ) {
  const auto spec = steklov_spectrum_J(3, s_grid(2048), P());
  ASSERT_EQ(spec[0].eigenvalues.size(), 1u);
  EXPECT_TRUE(spec[0].singular_even_channel);
  EXPECT_NEAR(spec[0].eigenvalues[0], 1 / (P().sinhT * P().sinhT), 1e-4);
  ASSERT_EQ(spec[1].eigenvalues.size(), 2u);
  EXPECT_NEAR(spec[1].eigenvalues[0], -1.0, 1e-4);
  EXPECT_NEAR(spec[1].eigenvalues[1], 1.0, 1e-4);
  EXPECT_GT(spec[2].eigenvalues[0], 1.0);
  EXPECT_GT(spec[3].eigenvalues[0], spec[2].eigenvalues[0]);
}

TEST(Steklov, SecondOrderConvergence) {
  const double target = 1 / (P().sinhT * P().sinhT);
  const double e1 = std::abs(steklov_spectrum_J(0, s_grid(257), P())[0].eigenvalues[0] - target);
  const double e2 = std::abs(steklov_spectrum_J(0, s_grid(513), P())[0].eigenvalues[0] - target);
  EXPECT_NEAR(std::log2(e1 / e2), 2.0, 0.1);
}

TEST(Steklov, ModeZeroEigenfunctionIsTanh) {
  const Grid1D g = s_grid(1024);
  const auto v = steklov_mode0_eigenfunction(g, P());
  std::vector<double> t(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) t[i] = std::tanh(g[i]);
  EXPECT_GE(std::abs(correlation(v, t)), 0.999);
}

TEST(Steklov, NeedsSGrid) {
  EXPECT_THROW(steklov_spectrum_J(2, Grid1D::uniform(Chart::phi, 128, P()), P()), Error);
}

TEST(Dirichlet, ModeOneEvenData) {
  const Grid1D g = s_grid(1025);
  const auto sol = solve_dirichlet({BoundaryMode{1, Angular::cos, 1.0, 1.0}}, g, P());
  ASSERT_EQ(sol.modes.size(), 1u);
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(sol.modes[0].profile[i] - P().coshT / std::cosh(g[i])));
  EXPECT_LT(err, 1e-4);
  // u = sech s / sech T is a v_x-type Steklov field with ∂u/∂ν = −u.
  EXPECT_NEAR(sol.modes[0].normal_plus, -1.0, 1e-4);
}

TEST(Dirichlet, ConstantDataIsNotSolvable) {
  try {
    solve_dirichlet({BoundaryMode{0, Angular::cos, 1.0, 1.0}}, s_grid(257), P());
    FAIL() << "expected NOT_SOLVABLE";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::not_solvable);
  }
}

TEST(Dirichlet, OddModeZeroDataHasZeroFlux) {
  const Grid1D g = s_grid(1025);
  const auto sol = solve_dirichlet({BoundaryMode{0, Angular::cos, 1.0, -1.0}}, g, P());
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(sol.modes[0].profile[i] - P().T * std::tanh(g[i])));
  EXPECT_LT(err, 1e-4);
  EXPECT_LE(std::abs(sol.flux), 1e-8 * sol.flux_scale);
  EXPECT_GT(sol.flux_scale, 0.0);
  // u = T tanh s = T v_z: ∂u/∂ν = u / sinh²T on s = T.
  EXPECT_NEAR(sol.modes[0].normal_plus, 1 / (P().sinhT * P().sinhT), 1e-5);
}

TEST(Dirichlet, MixedDataMatchesShooting) {
  const auto sol = solve_dirichlet({BoundaryMode{2, Angular::sin, 0.25, -0.75}, BoundaryMode{3, Angular::cos, 1.0, 0.0}},
                                   s_grid(2049), P());
  EXPECT_LT(sol.max_reference_error, 1e-6);
  EXPECT_EQ(sol.modes[1].profile.front(), 0.0);
  EXPECT_EQ(sol.modes[1].profile.back(), 1.0);
}

TEST(Disk, IndexOne) {
  const Grid1D g(Chart::radial, 1024, 0.0, 1.0);
  const IndexReport r = disk_index(g, 10, P());
  EXPECT_EQ(r.total_index, 1u);
  EXPECT_EQ(r.per_mode_negative[0], 1u);
  EXPECT_EQ(r.per_mode_near_zero[1], 1u);
  EXPECT_LE(std::abs(r.lowest_eigenvalues[1][0]), r.zero_threshold);
  for (std::size_t n = 2; n <= 10; ++n) EXPECT_GT(r.lowest_eigenvalues[n][0], r.zero_threshold);
}

TEST(Sigma1, LaplacianFirstSteklovIsOne) {
  const Sigma1Report s = sigma1_laplacian(s_grid(1024), 10, P());
  EXPECT_NEAR(s.value, 1.0, 1e-3);
  EXPECT_NE(std::find(s.attaining_modes.begin(), s.attaining_modes.end(), 0), s.attaining_modes.end());
  EXPECT_NE(std::find(s.attaining_modes.begin(), s.attaining_modes.end(), 1), s.attaining_modes.end());
  EXPECT_TRUE(s.spectrum[0].singular_even_channel || s.spectrum[0].eigenvalues.size() == 2);
  // Mode 0 attains 1 through z = a s, which the scheme reproduces exactly; the mode-1
  // eigenvalue (coordinate x) converges at second order.
  EXPECT_NEAR(s.spectrum[0].eigenvalues.back(), 1.0, 1e-12);
  auto mode1_err = [](std::size_t n) {
    const auto spec = sigma1_laplacian(s_grid(n), 3, P()).spectrum[1].eigenvalues;
    double err = 1e300;
    for (double v : spec) err = std::min(err, std::abs(v - 1.0));
    return err;
  };
  EXPECT_NEAR(std::log2(mode1_err(257) / mode1_err(513)), 2.0, 0.1);
}

TEST(Complement, NegativeSpaceProjectsToZero) {
  const Resolution res{256, 64, true};
  for (FieldKind k : {FieldKind::const_one, FieldKind::vx, FieldKind::vz}) {
    const ProjectedForm pf = complement_q(field(k), res, P());
    EXPECT_NEAR(pf.q / pf.l2_norm_sq, 0.0, 1e-10);
  }
  const auto mix = 2.0 * field(FieldKind::vy) - field(FieldKind::const_one);
  EXPECT_NEAR(complement_q(mix, res, P()).q, 0.0, 1e-9);
}

TEST(Complement, XiProjection) {
  // ξ is Q-null but pairs with 1: Q(1, ξ) = ∮∂_ν ξ = −4π(1/T + T sech²T). By parity and mode
  // orthogonality only the constant direction survives, so Q(ξ^⊥) = Q(1, ξ)² / |Q(1)|.
  const Resolution res{256, 64, true};
  const double q1xi = -4 * pi * (1 / P().T + P().T / (P().coshT * P().coshT));
  EXPECT_NEAR(q1xi, -15.0756, 1e-4);
  EXPECT_NEAR(q_bilinear(field(FieldKind::const_one), field(FieldKind::xi), res, P()), q1xi, 1e-6);
  const double expected = q1xi * q1xi / (12 * pi / P().T);
  EXPECT_NEAR(expected, 7.2324, 1e-4);
  EXPECT_NEAR(complement_q(field(FieldKind::xi), res, P()).q, expected, 1e-5);
}

TEST(Complement, RandomSamplesAreNonnegative) {
  const ComplementReport a = complement_positivity_check(20, P(), 3);
  EXPECT_TRUE(a.pass);
  EXPECT_GE(a.min_q, -1e-3);
  EXPECT_EQ(complement_positivity_check(20, P(), 3).min_q, a.min_q);
  EXPECT_THROW(complement_positivity_check(0, P()), std::invalid_argument);
}

TEST(Thresholds, CalibrationConstant) {
  // λ₁ of the discrete mode-0 Dirichlet problem is ≈ −C h² with C ≈ 1.
  const double c = xi_calibration_constant(P());
  EXPECT_GT(c, 0.5);
  EXPECT_LT(c, 2.0);
  const Grid1D g = s_grid(1024);
  EXPECT_NEAR(zero_threshold(g, P()), 5 * c * g.spacing() * g.spacing(), 1e-18);
}
