#pragma once

// Per-Fourier-mode reductions of the Jacobi operator.
//
// In the s-chart the mode-n part of Q is (up to the factor 2π or π from the θ integral)
//     ∫ (f'² + (n² − 2 sech² s) f²) ds − (1/T)(f(T)² + f(−T)²),
// and in the φ-chart it is the round-sphere form with leading coefficient sin φ.
// Both are discretized as weak forms, so uᵀAu is exactly the discrete quadratic form.

#include <catenoid/geometry.hpp>
#include <catenoid/linalg.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <stdexcept>
#include <vector>

namespace catenoid {

enum class BoundaryCondition { dirichlet, robin, steklov, natural };
enum class WeightKind {
  area,          // a² cosh² s: spectrum of J itself
  round_sphere,  // sech² s = sin φ: spectrum of Δ_{S²} − 2
};
enum class OperatorKind { jacobi, laplacian };

inline std::string to_string(BoundaryCondition bc) {
  switch (bc) {
    case BoundaryCondition::dirichlet: return "dirichlet";
    case BoundaryCondition::robin: return "robin";
    case BoundaryCondition::steklov: return "steklov";
    case BoundaryCondition::natural: return "natural";
  }
  return "?";
}

/// Mode-n problem −(m f′)′ + m V f = λ ρ f on one chart.
/// The radial chart describes the flat unit disk; the origin end is always
/// regular (natural for n = 0, Dirichlet for n ≥ 1) and `bc` applies at r = 1.
struct ModeProblem {
  int n = 0;
  Chart chart = Chart::s;
  BoundaryCondition bc = BoundaryCondition::robin;
  WeightKind weight_kind = WeightKind::area;
  OperatorKind op = OperatorKind::jacobi;

  static ModeProblem make(int n, Chart chart, BoundaryCondition bc, OperatorKind op = OperatorKind::jacobi) {
    if (n < 0) throw std::invalid_argument("ModeProblem: negative mode");
    ModeProblem mp;
    mp.n = n;
    mp.chart = chart;
    mp.bc = bc;
    mp.op = chart == Chart::radial ? OperatorKind::laplacian : op;
    mp.weight_kind = chart == Chart::s ? WeightKind::area : WeightKind::round_sphere;
    return mp;
  }

  double leading_coeff(double x) const {
    switch (chart) {
      case Chart::s: return 1.0;
      case Chart::phi: return std::sin(x);
      case Chart::radial: return x;
    }
    return 0.0;
  }

  /// V(x); infinite at r = 0 for radial modes n ≥ 1.
  double potential(double x) const {
    const double n2 = static_cast<double>(n) * n;
    const double curv = op == OperatorKind::jacobi ? 2.0 : 0.0;
    switch (chart) {
      case Chart::s: return n2 - curv / (std::cosh(x) * std::cosh(x));
      case Chart::phi: return n2 / (std::sin(x) * std::sin(x)) - curv;
      case Chart::radial: return n2 / (x * x);
    }
    return 0.0;
  }

  /// m(x) V(x), finite wherever the node survives assembly.
  double weighted_potential(double x) const {
    if (chart == Chart::radial) return x == 0.0 ? 0.0 : static_cast<double>(n) * n / x;
    return leading_coeff(x) * potential(x);
  }

  /// Density ρ of the eigenvalue weight.
  double weight(double x, const CriticalParams& p) const {
    switch (chart) {
      case Chart::s: {
        const double c = std::cosh(x);
        return weight_kind == WeightKind::area ? p.a * p.a * c * c : 1.0 / (c * c);
      }
      case Chart::phi: {
        const double sn = std::sin(x);
        return weight_kind == WeightKind::area ? p.a * p.a / (sn * sn * sn) : sn;
      }
      case Chart::radial: return x;
    }
    return 0.0;
  }

  /// Coefficient c in f′ = ±c f at the ends, so that β = c·m(end) = 1/T on the catenoid.
  double robin_coeff(const CriticalParams& p) const {
    switch (chart) {
      case Chart::s: return 1.0 / p.T;
      case Chart::phi: return p.coshT / p.T;
      case Chart::radial: return 1.0;
    }
    return 0.0;
  }

  bool left_is_boundary() const { return chart != Chart::radial; }
};

/// Grid nodes that carry unknowns after Dirichlet elimination.
inline std::vector<std::size_t> active_nodes(const ModeProblem& mp, const Grid1D& grid) {
  const std::size_t n = grid.size();
  const bool drop_right = mp.bc == BoundaryCondition::dirichlet;
  const bool drop_left = mp.left_is_boundary() ? drop_right : mp.n > 0;
  std::vector<std::size_t> out;
  for (std::size_t i = drop_left ? 1 : 0; i < (drop_right ? n - 1 : n); ++i) out.push_back(i);
  return out;
}

/// Natural-boundary weak-form matrices on the whole grid (A without boundary terms, lumped B).
inline std::pair<TriMatrix, std::vector<double>> weak_form(const ModeProblem& mp, const Grid1D& grid,
                                                           const CriticalParams& p) {
  const std::size_t n = grid.size();
  const double h = grid.spacing();
  std::vector<double> d(n, 0.0);
  std::vector<double> e(n - 1, 0.0);
  const auto w = grid.trapezoid_weights();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double mc = 0.5 * (mp.leading_coeff(grid[i]) + mp.leading_coeff(grid[i + 1]));
    d[i] += mc / h;
    d[i + 1] += mc / h;
    e[i] = -mc / h;
  }
  const bool singular_origin = mp.chart == Chart::radial && mp.n > 0;
  for (std::size_t i = singular_origin ? 1 : 0; i < n; ++i) d[i] += w[i] * mp.weighted_potential(grid[i]);

  std::vector<double> mass(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    if (i > 0) acc += mp.weight(grid[i] - 0.25 * h, p);
    if (i + 1 < n) acc += mp.weight(grid[i] + 0.25 * h, p);
    mass[i] = 0.5 * h * acc;
  }
  return {TriMatrix(std::move(d), std::move(e)), std::move(mass)};
}

inline TriPencil assemble(const ModeProblem& mp, const Grid1D& grid, const CriticalParams& p) {
  if (grid.chart() != mp.chart) {
    throw Error(ErrorCode::chart_mismatch, "grid chart " + to_string(grid.chart()) + " but problem chart " +
                                               to_string(mp.chart));
  }
  auto [A, mass] = weak_form(mp, grid, p);
  const std::size_t n = grid.size();
  const double beta_right = mp.robin_coeff(p) * mp.leading_coeff(grid.upper());
  const double beta_left = mp.robin_coeff(p) * mp.leading_coeff(grid.lower());

  TriPencil P;
  if (mp.bc == BoundaryCondition::robin) {
    A.diag[n - 1] -= beta_right;
    if (mp.left_is_boundary()) A.diag[0] -= beta_left;
  }

  const auto keep = active_nodes(mp, grid);
  const std::size_t first = keep.front();
  const std::size_t m = keep.size();
  std::vector<double> d(A.diag.begin() + static_cast<std::ptrdiff_t>(first),
                        A.diag.begin() + static_cast<std::ptrdiff_t>(first + m));
  std::vector<double> e(A.offdiag.begin() + static_cast<std::ptrdiff_t>(first),
                        A.offdiag.begin() + static_cast<std::ptrdiff_t>(first + m - 1));
  P.A = TriMatrix(std::move(d), std::move(e));

  if (mp.bc == BoundaryCondition::steklov) {
    std::vector<double> b(m, 0.0);
    b[m - 1] = beta_right;
    P.boundary.push_back(m - 1);
    if (mp.left_is_boundary()) {
      b[0] = beta_left;
      P.boundary.insert(P.boundary.begin(), 0);
    }
    P.B = TriMatrix::diagonal(std::move(b));
    P.b_kind = BKind::boundary_semidefinite;
  } else {
    std::vector<double> b(mass.begin() + static_cast<std::ptrdiff_t>(first),
                          mass.begin() + static_cast<std::ptrdiff_t>(first + m));
    P.B = TriMatrix::diagonal(std::move(b));
    P.b_kind = BKind::positive_definite;
  }
  return P;
}

/// Q_n(f) for a nodal function on a φ-grid: half of the trapezoid/midpoint evaluation of
///   ∫ (f′² + (n²/sin²φ − 2) f²) sin φ dφ − (1/T)(f(π−φ*)² + f(φ*)²).
inline double qn_value(int n, std::span<const double> f, const Grid1D& grid, const CriticalParams& p) {
  if (grid.chart() != Chart::phi) throw Error(ErrorCode::chart_mismatch, "qn_value needs a phi-grid");
  if (f.size() != grid.size()) throw std::invalid_argument("qn_value: size mismatch");
  const double h = grid.spacing();
  const auto w = grid.trapezoid_weights();
  const double n2 = static_cast<double>(n) * n;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double mc = 0.5 * (std::sin(grid[i]) + std::sin(grid[i + 1]));
    const double df = f[i + 1] - f[i];
    total += mc * df * df / h;
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double sn = std::sin(grid[i]);
    total += w[i] * (n2 / (sn * sn) - 2.0) * sn * f[i] * f[i];
  }
  total -= (f.front() * f.front() + f.back() * f.back()) / p.T;
  return 0.5 * total;
}

/// Finite-difference weights for the derivatives 0..order at z on arbitrary nodes.
/// Returns w[k][j]: weight of node j for the k-th derivative.
inline std::vector<std::vector<double>> fornberg_weights(double z, std::span<const double> x, int order) {
  const std::size_t n = x.size();
  const auto mo = static_cast<std::size_t>(order);
  std::vector<std::vector<double>> c(mo + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min(i, mo);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k) {
          c[k][i] = c1 * (static_cast<double>(k) * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        }
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k) {
        c[k][j] = (c4 * c[k][j] - static_cast<double>(k) * c[k - 1][j]) / c3;
      }
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

struct CertificateResult {
  bool pass = false;
  double interior_min = 0.0;   // min over interior nodes of −(m h′)′/m + V h
  double interior_tol = 0.0;   // hypothesis (i) accepts interior_min ≥ −interior_tol
  double left_margin = 0.0;    // −m(a)(log h)′(a) − α
  double right_margin = 0.0;   //  m(b)(log h)′(b) − α
};

/// Ground-state positivity test for Q_n on a φ-grid with positive trial function h:
/// (i) h is a supersolution of the mode-n equation, (ii)/(iii) its log-derivative
/// beats the boundary coefficient α = 1/T at both ends.
inline CertificateResult ground_state_certificate(int n, std::span<const double> h, const Grid1D& grid,
                                                  const CriticalParams& p) {
  if (grid.chart() != Chart::phi) throw Error(ErrorCode::chart_mismatch, "certificate needs a phi-grid");
  const std::size_t N = grid.size();
  if (h.size() != N) throw std::invalid_argument("ground_state_certificate: size mismatch");
  if (N < 8) throw std::invalid_argument("ground_state_certificate: need at least 8 nodes");
  for (double v : h) {
    if (!(v > 0.0)) throw Error(ErrorCode::nonpositive_h, "trial function must be positive at every node");
  }
  const ModeProblem mp = ModeProblem::make(n, Chart::phi, BoundaryCondition::robin);
  const double dx = grid.spacing();
  const double alpha = 1.0 / p.T;

  // 7-point stencils spread over ~512 cells; dense 7-point stencils lose to roundoff on fine grids.
  constexpr std::size_t width = 7;
  const std::size_t stride = std::max<std::size_t>(1, (N - 1) / 512);
  const std::size_t span_nodes = (width - 1) * stride;
  if (span_nodes >= N) throw std::invalid_argument("ground_state_certificate: grid too coarse");

  CertificateResult out;
  out.interior_min = std::numeric_limits<double>::infinity();
  double scale = 0.0;
  std::array<double, width> xs{};
  for (std::size_t i = 1; i + 1 < N; ++i) {
    const std::size_t half = (width / 2) * stride;
    const std::size_t start = std::min(i >= half ? i - half : 0, N - 1 - span_nodes);
    for (std::size_t k = 0; k < width; ++k) xs[k] = (static_cast<double>(start + k * stride) - static_cast<double>(i)) * dx;
    const auto c = fornberg_weights(0.0, xs, 2);
    double d1 = 0.0;
    double d2 = 0.0;
    for (std::size_t k = 0; k < width; ++k) {
      d1 += c[1][k] * h[start + k * stride];
      d2 += c[2][k] * h[start + k * stride];
    }
    const double x = grid[i];
    const double vh = mp.potential(x) * h[i];
    const double residual = -(d2 + std::cos(x) / std::sin(x) * d1) + vh;
    out.interior_min = std::min(out.interior_min, residual);
    scale = std::max(scale, std::abs(vh));
  }
  out.interior_tol = 1e-8 * scale;

  const double dl = (-3.0 * h[0] + 4.0 * h[1] - h[2]) / (2.0 * dx);
  const double dr = (3.0 * h[N - 1] - 4.0 * h[N - 2] + h[N - 3]) / (2.0 * dx);
  out.left_margin = -mp.leading_coeff(grid.lower()) * dl / h[0] - alpha;
  out.right_margin = mp.leading_coeff(grid.upper()) * dr / h[N - 1] - alpha;
  out.pass = out.interior_min >= -out.interior_tol && out.left_margin > 0.0 && out.right_margin > 0.0;
  return out;
}

struct LegendreCheck {
  double residual = 0.0;           // sup |L a| / scale
  double absolute_residual = 0.0;  // sup |L a|
  double scale = 0.0;              // sup |(4/(1−x²) − 2) a|
};

/// Applies −((1−x²) a′)′ + (4/(1−x²) − 2) a on x ∈ [−1/T, 1/T] to a = (1−x²)⁻¹
/// with the conservative three-point scheme.
inline LegendreCheck legendre_substitution_check(std::size_t n_nodes, const CriticalParams& p) {
  if (n_nodes < 5) throw std::invalid_argument("legendre_substitution_check: need at least 5 nodes");
  const double lo = -1.0 / p.T;
  const double hi = 1.0 / p.T;
  const double dx = (hi - lo) / static_cast<double>(n_nodes - 1);
  auto x_at = [&](double k) { return lo + k * dx; };
  auto a_at = [](double x) { return 1.0 / (1.0 - x * x); };
  LegendreCheck out;
  for (std::size_t i = 1; i + 1 < n_nodes; ++i) {
    const double k = static_cast<double>(i);
    const double x = x_at(k);
    const double mp = 1.0 - x_at(k + 0.5) * x_at(k + 0.5);
    const double mm = 1.0 - x_at(k - 0.5) * x_at(k - 0.5);
    const double flux = (mp * (a_at(x_at(k + 1)) - a_at(x)) - mm * (a_at(x) - a_at(x_at(k - 1)))) / (dx * dx);
    const double va = (4.0 / (1.0 - x * x) - 2.0) * a_at(x);
    out.absolute_residual = std::max(out.absolute_residual, std::abs(-flux + va));
    out.scale = std::max(out.scale, std::abs(va));
  }
  out.residual = out.absolute_residual / out.scale;
  return out;
}

/// RK4 integration of the s-chart mode equation f″ = (n² − c·sech² s) f,
/// c = 2 for the Jacobi operator and 0 for the Laplacian. Returns f at s0 + k(s1−s0)/steps.
inline std::vector<double> integrate_mode_ode(int n, double s0, double s1, double f0, double df0, std::size_t steps,
                                              OperatorKind op = OperatorKind::jacobi) {
  if (steps == 0) throw std::invalid_argument("integrate_mode_ode: zero steps");
  const double n2 = static_cast<double>(n) * n;
  const double c = op == OperatorKind::jacobi ? 2.0 : 0.0;
  auto rhs = [&](double s, std::array<double, 2> y) -> std::array<double, 2> {
    const double sech = 1.0 / std::cosh(s);
    return {y[1], (n2 - c * sech * sech) * y[0]};
  };
  const double h = (s1 - s0) / static_cast<double>(steps);
  std::array<double, 2> y{f0, df0};
  std::vector<double> out{f0};
  out.reserve(steps + 1);
  for (std::size_t k = 0; k < steps; ++k) {
    const double s = s0 + h * static_cast<double>(k);
    const auto k1 = rhs(s, y);
    const auto k2 = rhs(s + 0.5 * h, {y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]});
    const auto k3 = rhs(s + 0.5 * h, {y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]});
    const auto k4 = rhs(s + h, {y[0] + h * k3[0], y[1] + h * k3[1]});
    y[0] += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
    y[1] += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
    out.push_back(y[0]);
  }
  return out;
}

}  // namespace catenoid
