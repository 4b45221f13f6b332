#include <catenoid/fields.hpp>
#include <catenoid/random.hpp>
#include <catenoid/sturm_liouville.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace catenoid;

namespace {

const CriticalParams& P() { return critical_catenoid(); }

double dot(const std::vector<double>& x, const std::vector<double>& y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

std::vector<double> sample(const Grid1D& g, double (*f)(double)) {
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = f(g[i]);
  return out;
}

double inv_sin2(double phi) { return 1.0 / (std::sin(phi) * std::sin(phi)); }

}  // namespace

TEST(ModeProblem, PotentialShiftsByModeSquared) {
  for (int n : {1, 2, 5}) {
    const auto mn = ModeProblem::make(n, Chart::s, BoundaryCondition::robin);
    const auto m0 = ModeProblem::make(0, Chart::s, BoundaryCondition::robin);
    for (double s : {-1.0, 0.0, 0.8}) EXPECT_NEAR(mn.potential(s) - m0.potential(s), n * n, 1e-13);
  }
}

TEST(ModeProblem, RobinDataGivesBoundaryCoefficientOneOverT) {
  // ∂u/∂ν = u with ∂/∂ν = (a cosh s)⁻¹ ∂/∂s and a cosh T = 1/T gives f′(±T) = ±f/T.
  const auto s = ModeProblem::make(0, Chart::s, BoundaryCondition::robin);
  const auto phi = ModeProblem::make(0, Chart::phi, BoundaryCondition::robin);
  EXPECT_NEAR(s.robin_coeff(P()) * s.leading_coeff(P().T), 1 / P().T, 1e-15);
  EXPECT_NEAR(phi.robin_coeff(P()) * phi.leading_coeff(P().phi_star), 1 / P().T, 1e-14);
}

TEST(Assemble, ChartMismatch) {
  try {
    assemble(ModeProblem::make(0, Chart::phi, BoundaryCondition::robin), Grid1D::uniform(Chart::s, 64, P()), P());
    FAIL() << "expected CHART_MISMATCH";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::chart_mismatch);
  }
}

TEST(Assemble, DirichletModeZeroHasNearZeroGroundState) {
  const auto P0 = assemble(ModeProblem::make(0, Chart::s, BoundaryCondition::dirichlet), Grid1D::uniform(Chart::s, 1024, P()), P());
  EXPECT_EQ(P0.size(), 1022u);
  EXPECT_NEAR(pencil_eigs(P0, 1, 1e-12)[0], 0.0, 5e-5);
}

TEST(Assemble, SteklovMassLivesOnTwoEndpoints) {
  const auto S = assemble(ModeProblem::make(1, Chart::s, BoundaryCondition::steklov), Grid1D::uniform(Chart::s, 65, P()), P());
  std::size_t nonzero = 0;
  for (double b : S.B.diag) nonzero += b != 0.0;
  EXPECT_EQ(nonzero, 2u);
  EXPECT_NE(S.B.diag.front(), 0.0);
  EXPECT_NE(S.B.diag.back(), 0.0);
  EXPECT_NO_THROW(check_pencil(S));
}

TEST(Assemble, RobinFormEqualsTwiceQn) {
  const Grid1D g = Grid1D::uniform(Chart::phi, 513, P());
  const auto R = assemble(ModeProblem::make(2, Chart::phi, BoundaryCondition::robin), g, P());
  Rng rng(1);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> u(g.size());
    for (double& x : u) x = rng.uniform(-1, 1);
    const double lhs = R.A.quadratic_form(u);
    EXPECT_NEAR(lhs, 2 * qn_value(2, u, g, P()), 1e-10 * std::abs(lhs));
  }
}

TEST(Qn, Examples) {
  const Grid1D g = Grid1D::uniform(Chart::phi, 1025, P());
  EXPECT_EQ(qn_value(2, std::vector<double>(g.size(), 0.0), g, P()), 0.0);
  EXPECT_GT(qn_value(2, sample(g, inv_sin2), g, P()), 0.0);
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> f(g.size());
    for (double& x : f) x = rng.uniform(-1, 1);
    EXPECT_GE(qn_value(3, f, g, P()), qn_value(2, f, g, P()));
  }
}

TEST(Qn, ConstantClosedForm) {
  // f ≡ 1, n = 0: ½[−2 ∫ sin φ dφ − 2/T] = −(2 cos φ* + 1/T) = −3/T, since cos φ* = 1/T.
  const Grid1D g = Grid1D::uniform(Chart::phi, 4097, P());
  EXPECT_NEAR(qn_value(0, std::vector<double>(g.size(), 1.0), g, P()), -3 / P().T, 1e-6);
}

TEST(ChartEquivalence, DirichletSpectraAgree) {
  const Grid1D gs = Grid1D::uniform(Chart::s, 2048, P());
  const Grid1D gp = Grid1D::uniform(Chart::phi, 2048, P());
  for (int n = 0; n <= 3; ++n) {
    auto ms = ModeProblem::make(n, Chart::s, BoundaryCondition::dirichlet);
    ms.weight_kind = WeightKind::round_sphere;
    const auto mp = ModeProblem::make(n, Chart::phi, BoundaryCondition::dirichlet);
    const auto es = pencil_eigs(assemble(ms, gs, P()), 5, 1e-12);
    const auto ep = pencil_eigs(assemble(mp, gp, P()), 5, 1e-12);
    for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(es[k], ep[k], 1e-4 * std::max(1.0, std::abs(es[k]))) << n << " " << k;
  }
}

TEST(Eigenfunctions, ModeZeroGroundStateIsXi) {
  const Grid1D g = Grid1D::uniform(Chart::s, 1024, P());
  const auto D = assemble(ModeProblem::make(0, Chart::s, BoundaryCondition::dirichlet), g, P());
  const double lambda = pencil_eigs(D, 1, 1e-12)[0];
  const auto v = inverse_iteration(D, lambda - 1e-3);
  std::vector<double> xi(v.size());
  for (std::size_t i = 0; i < xi.size(); ++i) xi[i] = profile_jet(FieldKind::xi, g[i + 1], P()).f;
  EXPECT_GE(std::abs(dot(v, xi)) / std::sqrt(dot(v, v) * dot(xi, xi)), 0.9999);
}

TEST(Eigenfunctions, ModeOneKernelByShooting) {
  const double T = P().T;
  const std::size_t steps = 2000;
  const auto even = integrate_mode_ode(1, -T, T, 1 / std::cosh(T), std::tanh(T) / std::cosh(T), steps);
  const auto odd = integrate_mode_ode(1, -T, T, rotation_profile(-T, P()), profile_jet(FieldKind::rot_xz, -T, P()).df, steps);
  double err_even = 0.0;
  double err_odd = 0.0;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double s = -T + 2 * T * static_cast<double>(k) / static_cast<double>(steps);
    err_even = std::max(err_even, std::abs(even[k] * std::cosh(s) - 1.0));
    err_odd = std::max(err_odd, std::abs(odd[k] - rotation_profile(s, P())) / rotation_profile(T, P()));
  }
  EXPECT_LT(err_even, 1e-6);
  EXPECT_LT(err_odd, 1e-6);
  // Shooting back from +T reproduces the same solutions.
  const auto back = integrate_mode_ode(1, T, -T, 1 / std::cosh(T), -std::tanh(T) / std::cosh(T), steps);
  EXPECT_NEAR(back.back() * std::cosh(T), 1.0, 1e-6);
}

TEST(Certificate, InverseSineSquaredPasses) {
  // Both margins: sin φ* · 2 cot φ* − 1/T = 2 cos φ* − 1/T = 1/T.
  std::vector<double> err;
  for (std::size_t n_nodes : {1025u, 4097u}) {
    const Grid1D g = Grid1D::uniform(Chart::phi, n_nodes, P());
    const auto r = ground_state_certificate(2, sample(g, inv_sin2), g, P());
    EXPECT_TRUE(r.pass);
    EXPECT_GE(r.interior_min, -r.interior_tol);
    EXPECT_NEAR(r.left_margin, r.right_margin, 1e-12);
    err.push_back(std::abs(r.left_margin - 1 / P().T));
  }
  EXPECT_LT(err[1], 1e-5);
  EXPECT_NEAR(std::log2(err[0] / err[1]) / 2, 2.0, 0.1);
}

TEST(Certificate, ConstantFailsAtBoundary) {
  const Grid1D g = Grid1D::uniform(Chart::phi, 513, P());
  const auto r = ground_state_certificate(2, std::vector<double>(g.size(), 1.0), g, P());
  EXPECT_FALSE(r.pass);
  EXPECT_GT(r.interior_min, 0.0);
  EXPECT_NEAR(r.left_margin, -1 / P().T, 1e-12);
  EXPECT_NEAR(r.right_margin, -1 / P().T, 1e-12);
}

TEST(Certificate, NonpositiveTrialFunction) {
  const Grid1D g = Grid1D::uniform(Chart::phi, 65, P());
  auto h = sample(g, inv_sin2);
  h[10] = 0.0;
  try {
    ground_state_certificate(2, h, g, P());
    FAIL() << "expected NONPOSITIVE_H";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::nonpositive_h);
  }
}

TEST(Fornberg, ReproducesPolynomialDerivatives) {
  const std::vector<double> x{-0.3, -0.1, 0.0, 0.2, 0.5};
  const auto w = fornberg_weights(0.05, x, 2);
  // p(x) = x⁴ − x: p′(0.05) = 4·0.05³ − 1, p″(0.05) = 12·0.05².
  double d0 = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double p = std::pow(x[j], 4) - x[j];
    d0 += w[0][j] * p;
    d1 += w[1][j] * p;
    d2 += w[2][j] * p;
  }
  EXPECT_NEAR(d0, std::pow(0.05, 4) - 0.05, 1e-13);
  EXPECT_NEAR(d1, 4 * std::pow(0.05, 3) - 1, 1e-12);
  EXPECT_NEAR(d2, 12 * 0.05 * 0.05, 1e-10);
}

TEST(Legendre, SecondOrderResidual) {
  const auto r1 = legendre_substitution_check(1024, P());
  const auto r2 = legendre_substitution_check(2047, P());
  EXPECT_LE(r1.residual, 1e-4);
  EXPECT_NEAR(std::log2(r1.absolute_residual / r2.absolute_residual), 2.0, 0.1);
}
