#pragma once

// Second variation Q(u) = ∫(|∇u|² − |A|²u²) − ∮u² and the auxiliary form S (no |A|² term),
// evaluated by 2D quadrature in the conformal (s, θ) chart, where
//   ∫|∇u|² dA = ∫∫ (u_s² + u_θ²) ds dθ,   |A|² dA = 2 sech² s ds dθ,   dℓ = (1/T) dθ.
// s-derivatives use the same staggered differences as the mode assembly; one Richardson
// step over grids with n_s and 2n_s − 1 nodes lifts the result to fourth order.

#include <catenoid/fields.hpp>
#include <catenoid/geometry.hpp>
#include <catenoid/linalg.hpp>
#include <catenoid/sturm_liouville.hpp>
#include <catenoid/surface_function.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace catenoid {

struct Resolution {
  std::size_t n_s = 512;
  std::size_t n_theta = 512;
  bool extrapolate = true;
};

/// Q = gradient − curvature − boundary, S = gradient − boundary.
struct FormTerms {
  double gradient = 0.0;
  double curvature = 0.0;
  double boundary = 0.0;

  double q() const { return gradient - curvature - boundary; }
  double s() const { return gradient - boundary; }
  double magnitude() const { return std::abs(gradient) + std::abs(curvature) + std::abs(boundary); }
};

namespace detail {

using Samples = SurfaceFunction::Samples;

inline FormTerms richardson(const FormTerms& coarse, const FormTerms& fine) {
  return {(4.0 * fine.gradient - coarse.gradient) / 3.0, (4.0 * fine.curvature - coarse.curvature) / 3.0,
          (4.0 * fine.boundary - coarse.boundary) / 3.0};
}

inline double ring_dot(const std::vector<double>& a, const std::vector<double>& b, std::size_t i, std::size_t nt) {
  double acc = 0.0;
  for (std::size_t j = 0; j < nt; ++j) acc += a[i * nt + j] * b[i * nt + j];
  return acc;
}

/// Terms on an s-grid. Every θ sum carries the factor dθ.
inline FormTerms s_chart_terms(const Samples& u, const Samples& v, const Grid1D& grid, const CriticalParams& p) {
  const std::size_t ns = u.n_s;
  const std::size_t nt = u.n_theta;
  const double h = grid.spacing();
  const double dtheta = 2.0 * pi / static_cast<double>(nt);
  const auto w = grid.trapezoid_weights();
  FormTerms out;
  for (std::size_t i = 0; i + 1 < ns; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < nt; ++j) {
      acc += (u.value[(i + 1) * nt + j] - u.value[i * nt + j]) * (v.value[(i + 1) * nt + j] - v.value[i * nt + j]);
    }
    out.gradient += acc / h;
  }
  for (std::size_t i = 0; i < ns; ++i) {
    const double sech = 1.0 / std::cosh(grid[i]);
    out.gradient += w[i] * ring_dot(u.d_theta, v.d_theta, i, nt);
    out.curvature += w[i] * 2.0 * sech * sech * ring_dot(u.value, v.value, i, nt);
  }
  out.boundary = (ring_dot(u.value, v.value, 0, nt) + ring_dot(u.value, v.value, ns - 1, nt)) / p.T;
  out.gradient *= dtheta;
  out.curvature *= dtheta;
  out.boundary *= dtheta;
  return out;
}

/// Same form on a φ-grid: ∫∫ (u_φ² sin φ + u_θ²/sin φ − 2u² sin φ) dφ dθ − (1/T)∮u².
inline FormTerms phi_chart_terms(const Samples& u, const Samples& v, const Grid1D& grid, const CriticalParams& p) {
  const std::size_t ns = u.n_s;
  const std::size_t nt = u.n_theta;
  const double h = grid.spacing();
  const double dtheta = 2.0 * pi / static_cast<double>(nt);
  const auto w = grid.trapezoid_weights();
  FormTerms out;
  for (std::size_t i = 0; i + 1 < ns; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < nt; ++j) {
      acc += (u.value[(i + 1) * nt + j] - u.value[i * nt + j]) * (v.value[(i + 1) * nt + j] - v.value[i * nt + j]);
    }
    out.gradient += 0.5 * (std::sin(grid[i]) + std::sin(grid[i + 1])) * acc / h;
  }
  for (std::size_t i = 0; i < ns; ++i) {
    const double sn = std::sin(grid[i]);
    out.gradient += w[i] / sn * ring_dot(u.d_theta, v.d_theta, i, nt);
    out.curvature += w[i] * 2.0 * sn * ring_dot(u.value, v.value, i, nt);
  }
  out.boundary = (ring_dot(u.value, v.value, 0, nt) + ring_dot(u.value, v.value, ns - 1, nt)) / p.T;
  out.gradient *= dtheta;
  out.curvature *= dtheta;
  out.boundary *= dtheta;
  return out;
}

inline double s_chart_l2(const Samples& u, const Samples& v, const Grid1D& grid, const CriticalParams& p) {
  const auto w = grid.trapezoid_weights();
  double total = 0.0;
  for (std::size_t i = 0; i < u.n_s; ++i) {
    const double c = std::cosh(grid[i]);
    total += w[i] * p.a * p.a * c * c * ring_dot(u.value, v.value, i, u.n_theta);
  }
  return total * 2.0 * pi / static_cast<double>(u.n_theta);
}

inline std::vector<Grid1D> levels(Chart chart, const Resolution& res, const CriticalParams& p) {
  std::vector<Grid1D> out{Grid1D::uniform(chart, res.n_s, p)};
  if (res.extrapolate) out.push_back(out.front().refined());
  return out;
}

/// s-coordinates of the nodes of a grid in either catenoid chart.
inline std::vector<double> s_nodes(const Grid1D& grid, const CriticalParams& p) {
  if (grid.chart() == Chart::s) return grid.nodes();
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = chart_convert(grid[i], Chart::phi, Chart::s, p);
  return out;
}

inline void check_resolution(const Resolution& res) {
  if (res.n_s < 8 || res.n_theta < 8) throw std::invalid_argument("Resolution: need n_s, n_theta >= 8");
}

}  // namespace detail

/// All Q/S ingredients for every pair of a basis, sampled once per grid level.
inline std::vector<std::vector<FormTerms>> pairwise_terms(const std::vector<SurfaceFunction>& basis,
                                                          const Resolution& res, const CriticalParams& p,
                                                          Chart chart = Chart::s) {
  detail::check_resolution(res);
  const std::size_t k = basis.size();
  std::vector<std::vector<FormTerms>> result;
  for (const Grid1D& grid : detail::levels(chart, res, p)) {
    const auto nodes = detail::s_nodes(grid, p);
    std::vector<SurfaceFunction::Samples> samples;
    samples.reserve(k);
    for (const auto& u : basis) samples.push_back(u.sample(nodes, res.n_theta));
    std::vector<std::vector<FormTerms>> level(k, std::vector<FormTerms>(k));
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a; b < k; ++b) {
        level[a][b] = chart == Chart::s ? detail::s_chart_terms(samples[a], samples[b], grid, p)
                                        : detail::phi_chart_terms(samples[a], samples[b], grid, p);
        level[b][a] = level[a][b];
      }
    }
    if (result.empty()) {
      result = std::move(level);
    } else {
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) result[a][b] = detail::richardson(result[a][b], level[a][b]);
      }
    }
  }
  return result;
}

inline FormTerms bilinear_terms(const SurfaceFunction& u, const SurfaceFunction& v, const Resolution& res,
                                const CriticalParams& p) {
  return pairwise_terms({u, v}, res, p)[0][1];
}

inline double q_bilinear(const SurfaceFunction& u, const SurfaceFunction& v, const Resolution& res,
                         const CriticalParams& p) {
  return bilinear_terms(u, v, res, p).q();
}

inline double q_form(const SurfaceFunction& u, const Resolution& res, const CriticalParams& p) {
  return pairwise_terms({u}, res, p)[0][0].q();
}

inline double s_form(const SurfaceFunction& u, const SurfaceFunction& v, const Resolution& res,
                     const CriticalParams& p) {
  return bilinear_terms(u, v, res, p).s();
}

/// Q(u) through the round-sphere chart (φ, θ), for cross-checking the s-chart evaluation.
inline double q_phi_form(const SurfaceFunction& u, const Resolution& res, const CriticalParams& p) {
  return pairwise_terms({u}, res, p, Chart::phi)[0][0].q();
}

/// ∫_Σ u v dA.
inline double l2_inner(const SurfaceFunction& u, const SurfaceFunction& v, const Resolution& res,
                       const CriticalParams& p) {
  detail::check_resolution(res);
  std::vector<double> vals;
  for (const Grid1D& grid : detail::levels(Chart::s, res, p)) {
    const auto su = u.sample(grid.nodes(), res.n_theta);
    const auto sv = v.sample(grid.nodes(), res.n_theta);
    vals.push_back(detail::s_chart_l2(su, sv, grid, p));
  }
  return vals.size() == 1 ? vals[0] : (4.0 * vals[1] - vals[0]) / 3.0;
}

/// ∮_∂Σ u v dℓ (periodic trapezoid on both circles).
inline double boundary_inner(const SurfaceFunction& u, const SurfaceFunction& v, std::size_t n_theta,
                             const CriticalParams& p) {
  return boundary_integral([&](double s, double theta) { return u(s, theta) * v(s, theta); }, n_theta, p);
}

/// Q(u) as a sum of mode forms c_n·fᵀA_n f (c_0 = 2π, c_n = π), A_n the Robin weak-form matrix.
/// Only the separated terms of u take part.
inline double mode_split_q(const SurfaceFunction& u, const Resolution& res, const CriticalParams& p) {
  double coarse = 0.0;
  double total = 0.0;
  const auto grids = detail::levels(Chart::s, res, p);
  for (std::size_t level = 0; level < grids.size(); ++level) {
    const Grid1D& grid = grids[level];
    double sum = 0.0;
    for (const auto& [key, f] : u.mode_profiles(grid.nodes())) {
      const int n = key.first;
      const TriPencil P = assemble(ModeProblem::make(n, Chart::s, BoundaryCondition::robin), grid, p);
      sum += (n == 0 ? 2.0 * pi : pi) * P.A.quadratic_form(f);
    }
    if (level == 0) coarse = sum;
    total = level == 0 ? sum : (4.0 * sum - coarse) / 3.0;
  }
  return total;
}

enum class FormKind { q, s };

struct GramReport {
  std::vector<std::string> labels;
  Eigen::MatrixXd matrix;
  Inertia inertia;
  double max_offdiag_abs = 0.0;
  double max_diag_abs = 0.0;
  double zero_threshold = 0.0;
  double form_scale = 0.0;
  std::size_t l2_rank = 0;  // rank of the L² Gram matrix, i.e. dim span(basis)
};

inline GramReport gram(FormKind kind, const std::vector<SurfaceFunction>& basis, std::vector<std::string> labels,
                       const Resolution& res, const CriticalParams& p) {
  if (basis.empty() || basis.size() > 6) throw std::invalid_argument("gram: basis size must be 1..6");
  if (labels.size() != basis.size()) throw std::invalid_argument("gram: one label per basis element");
  const auto terms = pairwise_terms(basis, res, p);
  const auto k = static_cast<Eigen::Index>(basis.size());

  GramReport out;
  out.labels = std::move(labels);
  out.matrix = Eigen::MatrixXd::Zero(k, k);
  Eigen::MatrixXd l2 = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    out.form_scale = std::max(out.form_scale, terms[ua][ua].magnitude());
    for (Eigen::Index b = 0; b < k; ++b) {
      const FormTerms& t = terms[ua][static_cast<std::size_t>(b)];
      out.matrix(a, b) = kind == FormKind::q ? t.q() : t.s();
      if (b >= a) l2(a, b) = l2(b, a) = l2_inner(basis[ua], basis[static_cast<std::size_t>(b)], res, p);
    }
  }
  for (Eigen::Index a = 0; a < k; ++a) {
    out.max_diag_abs = std::max(out.max_diag_abs, std::abs(out.matrix(a, a)));
    for (Eigen::Index b = 0; b < k; ++b) {
      if (a != b) out.max_offdiag_abs = std::max(out.max_offdiag_abs, std::abs(out.matrix(a, b)));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(out.matrix, Eigen::EigenvaluesOnly);
  const double norm2 = solver.eigenvalues().cwiseAbs().maxCoeff();
  out.zero_threshold = 1e-3 * std::max(norm2, out.form_scale);
  out.inertia = dense_inertia(out.matrix, out.zero_threshold);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> l2_solver(l2, Eigen::EigenvaluesOnly);
  const double l2_max = l2_solver.eigenvalues().cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < k; ++i) {
    if (l2_solver.eigenvalues()(i) > 1e-8 * l2_max) ++out.l2_rank;
  }
  return out;
}

inline GramReport gram(FormKind kind, const std::vector<ClosedFormField>& fields, const Resolution& res,
                       const CriticalParams& p) {
  std::vector<SurfaceFunction> basis;
  std::vector<std::string> labels;
  for (const auto& f : fields) {
    basis.push_back(SurfaceFunction::from_field(f, p));
    labels.push_back(f.label());
  }
  return gram(kind, basis, std::move(labels), res, p);
}

struct GapReport {
  double q = 0.0;
  double s = 0.0;
  double gap = 0.0;  // s − q = ∫|A|²u²
  bool strict = false;
};

inline GapReport strict_gap_check(const SurfaceFunction& u, const Resolution& res, const CriticalParams& p) {
  const Grid1D grid = Grid1D::uniform(Chart::s, res.n_s, p);
  const auto samples = u.sample(grid.nodes(), res.n_theta);
  double sup = 0.0;
  for (double v : samples.value) sup = std::max(sup, std::abs(v));
  if (sup <= 1e-12) throw Error(ErrorCode::zero_function, "strict_gap_check: u vanishes on the sample grid");
  const FormTerms t = pairwise_terms({u}, res, p)[0][0];
  GapReport out;
  out.q = t.q();
  out.s = t.s();
  out.gap = out.s - out.q;
  out.strict = out.gap > 0.0;
  return out;
}

}  // namespace catenoid
