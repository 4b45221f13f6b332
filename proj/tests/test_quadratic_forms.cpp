#include <catenoid/quadratic_forms.hpp>
#include <catenoid/random.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace catenoid;

namespace {

const CriticalParams& P() { return critical_catenoid(); }
const Resolution kRes{};

SurfaceFunction field(FieldKind k) { return SurfaceFunction::from_field(ClosedFormField::make(k, P()), P()); }

SurfaceFunction one() { return field(FieldKind::const_one); }

// Trigonometric polynomial of θ-degree ≤ max_mode with random polynomial profiles.
SurfaceFunction random_trig(Rng& rng, int max_mode) {
  SurfaceFunction u;
  for (int n = 0; n <= max_mode; ++n) {
    for (Angular ang : {Angular::cos, Angular::sin}) {
      if (n == 0 && ang == Angular::sin) continue;
      const double c0 = rng.uniform(-1, 1);
      const double c1 = rng.uniform(-1, 1);
      const double c2 = rng.uniform(-1, 1);
      u += SurfaceFunction::separated(n, ang, [=](double s) { return c0 + c1 * s + c2 * s * s; });
    }
  }
  return u;
}

}  // namespace

TEST(Forms, ConstantFunction) {
  EXPECT_NEAR(q_form(one(), kRes, P()), -12 * pi / P().T, 1e-8);
  EXPECT_NEAR(-12 * pi / P().T, -31.4243419679277, 1e-10);
  EXPECT_NEAR(s_form(one(), one(), kRes, P()), -4 * pi / P().T, 1e-10);
}

TEST(Forms, HeightFunctionIsSNull) {
  const auto z = field(FieldKind::coord_z);
  EXPECT_NEAR(s_form(z, z, kRes, P()), 0.0, 1e-5);
  EXPECT_NEAR(s_form(one(), z, kRes, P()), 0.0, 1e-5);
}

TEST(Forms, XiIsQNull) { EXPECT_NEAR(q_form(field(FieldKind::xi), kRes, P()), 0.0, 1e-4); }

TEST(Forms, TranslationFieldsAreOrthogonal) {
  EXPECT_NEAR(q_bilinear(field(FieldKind::vx), field(FieldKind::vy), kRes, P()), 0.0, 1e-10);
}

TEST(Forms, GreenIdentityForSteklovFields) {
  Rng rng(4);
  const Resolution res{256, 64, true};
  for (FieldKind k : {FieldKind::vx, FieldKind::vz, FieldKind::rot_xz, FieldKind::rot_yz}) {
    const auto cf = ClosedFormField::make(k, P());
    const auto u = SurfaceFunction::from_field(cf, P());
    for (int trial = 0; trial < 3; ++trial) {
      const auto v = random_trig(rng, 2);
      const double rhs = (*cf.steklov_eigenvalue - 1) * boundary_inner(u, v, 64, P());
      const double lhs = q_bilinear(u, v, res, P());
      EXPECT_NEAR(lhs, rhs, 1e-5 * std::max(1.0, std::abs(rhs))) << cf.label();
    }
  }
}

TEST(Forms, BilinearAndSymmetric) {
  Rng rng(9);
  const Resolution res{128, 32, true};
  const auto u = random_trig(rng, 3);
  const auto v = random_trig(rng, 3);
  const auto w = random_trig(rng, 3);
  const double uv = q_bilinear(u, v, res, P());
  EXPECT_NEAR(uv, q_bilinear(v, u, res, P()), 1e-12 * std::abs(uv));
  const double combo = q_bilinear(u, 2.0 * v + w, res, P());
  EXPECT_NEAR(combo, 2 * uv + q_bilinear(u, w, res, P()), 1e-11 * std::max(1.0, std::abs(combo)));
}

TEST(Forms, ConformalChartsAgree) {
  Rng rng(12);
  for (int trial = 0; trial < 3; ++trial) {
    const auto u = random_trig(rng, 3);
    const double qs = q_form(u, kRes, P());
    EXPECT_NEAR(q_phi_form(u, kRes, P()), qs, 1e-6 * std::abs(qs));
  }
  const double qv = q_form(field(FieldKind::vz), kRes, P());
  EXPECT_NEAR(q_phi_form(field(FieldKind::vz), kRes, P()), qv, 1e-6 * std::abs(qv));
}

TEST(Forms, ModeSplitMatchesQuadrature) {
  Rng rng(21);
  for (int trial = 0; trial < 3; ++trial) {
    const auto u = random_trig(rng, 5);
    const double q2d = q_form(u, kRes, P());
    EXPECT_NEAR(mode_split_q(u, kRes, P()), q2d, 1e-8 * std::abs(q2d));
  }
}

TEST(Forms, GenericCallableMatchesSeparated) {
  const auto sep = field(FieldKind::vx);
  const auto gen = SurfaceFunction::generic([](double s, double th) { return std::cos(th) / std::cosh(s); });
  const Resolution res{256, 128, true};
  const double qs = q_form(sep, res, P());
  // Central θ-differences scale u_θ² by sin²h/h² ≈ 1 − h²/3; ∫∫ sech² s sin² θ ds dθ = 2π/T.
  const double h = 2 * pi / 128;
  const double leading = h * h / 3 * (2 * pi / P().T);
  EXPECT_NEAR(qs - q_form(gen, res, P()), leading, 0.01 * leading);
}

TEST(Gram, NegativeSpaceIsNegativeDefinite) {
  const auto g = gram(FormKind::q, fields_of({FieldKind::const_one, FieldKind::vx, FieldKind::vy, FieldKind::vz}, P()), kRes, P());
  EXPECT_EQ(g.inertia, (Inertia{4, 0, 0}));
  EXPECT_LE(g.max_offdiag_abs, 1e-5);
  EXPECT_NEAR(g.matrix(0, 0), -12 * pi / P().T, 1e-8);
  // Q(v) = (λ − 1)∮v² with λ = −1 for v_x and boundary values sech T cos θ.
  const double vx_expected = -2 * (2 * pi / P().T) / (P().coshT * P().coshT);
  EXPECT_NEAR(g.matrix(1, 1), vx_expected, 1e-6 * std::abs(vx_expected));
}

TEST(Gram, CoordinateSpaceIsSNonpositive) {
  const auto g = gram(FormKind::s,
                      fields_of({FieldKind::const_one, FieldKind::coord_x, FieldKind::coord_y, FieldKind::coord_z}, P()),
                      kRes, P());
  EXPECT_EQ(g.inertia.n_pos, 0u);
  EXPECT_EQ(g.l2_rank, 4u);
}

TEST(Gram, XiIsZeroAtThreshold) {
  const auto g = gram(FormKind::q, fields_of({FieldKind::xi}, P()), kRes, P());
  EXPECT_EQ(g.inertia, (Inertia{0, 1, 0}));
}

TEST(Gram, RejectsBadBasis) {
  EXPECT_THROW(gram(FormKind::q, std::vector<SurfaceFunction>{}, {}, kRes, P()), std::invalid_argument);
  EXPECT_THROW(gram(FormKind::q, std::vector<SurfaceFunction>{one()}, {"a", "b"}, kRes, P()), std::invalid_argument);
}

TEST(Gap, Examples) {
  EXPECT_NEAR(strict_gap_check(one(), kRes, P()).gap, 8 * pi / P().T, 1e-8);
  // ∫|A|² tanh² s dA = 2π ∫ 2 sech² s tanh² s ds = 8π tanh³T / 3 = 8π / (3T³).
  const auto vz = strict_gap_check(field(FieldKind::vz), kRes, P());
  EXPECT_TRUE(vz.strict);
  EXPECT_NEAR(vz.gap, 8 * pi / (3 * std::pow(P().T, 3)), 1e-7);
  try {
    strict_gap_check(0.0 * one(), kRes, P());
    FAIL() << "expected ZERO_FUNCTION";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::zero_function);
  }
}

TEST(Forms, L2AndBoundaryInner) {
  const double area = 2 * pi * P().a * P().a * (P().T + P().sinhT * P().coshT);
  EXPECT_NEAR(l2_inner(one(), one(), kRes, P()), area, 1e-9);
  // (v_z)² = 1/T² on both circles of total length 4π/T.
  const auto vz = field(FieldKind::vz);
  EXPECT_NEAR(boundary_inner(vz, vz, 64, P()), 4 * pi / std::pow(P().T, 3), 1e-12);
  EXPECT_NEAR(4 * pi / std::pow(P().T, 3), 7.27805083225805, 1e-10);
}
