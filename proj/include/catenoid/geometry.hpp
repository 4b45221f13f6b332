#pragma once

// Geometry of the critical catenoid in the unit ball.
//
// The surface is X(s, θ) = a (cosh s cos θ, cosh s sin θ, s) for s in [-T, T],
// where T tanh T = 1 and a = 1 / (T cosh T). In these coordinates the metric is
// conformally flat, g = a² cosh² s (ds² + dθ²), which is what every 1D reduction
// in this library relies on.

#include <catenoid/error.hpp>

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace catenoid {

inline constexpr double pi = std::numbers::pi;

struct CriticalParams {
  double T = 0.0;         // T tanh T = 1
  double a = 0.0;         // dilation 1 / (T cosh T)
  double phi_star = 0.0;  // conformal colatitude of the boundary circle s = T
  double sinhT = 0.0;
  double coshT = 0.0;

  /// Radius of each boundary circle, a cosh T = 1/T.
  double boundary_radius() const { return a * coshT; }
};

/// Root of T tanh T = 1: bisection on [1, 2] down to width 1e-3, then Newton.
inline CriticalParams solve_critical_T(double tol = 1e-14) {
  if (!(tol > 0.0 && tol <= 1e-6)) {
    throw std::invalid_argument("solve_critical_T: tol must lie in (0, 1e-6]");
  }
  auto f = [](double t) { return t * std::tanh(t) - 1.0; };
  double lo = 1.0;
  double hi = 2.0;
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 60; ++it) {
    const double sech = 1.0 / std::cosh(t);
    const double step = f(t) / (std::tanh(t) + t * sech * sech);
    t -= step;
    if (std::abs(step) <= 0.1 * tol) break;
  }

  CriticalParams p;
  p.T = t;
  p.coshT = std::cosh(t);
  p.sinhT = std::sinh(t);
  p.a = 1.0 / (t * p.coshT);
  p.phi_star = 2.0 * std::atan(std::exp(-t));
  return p;
}

/// Process-wide solved constants (thread-safe static initialisation).
inline const CriticalParams& critical_catenoid() {
  static const CriticalParams params = solve_critical_T(1e-15);
  return params;
}

/// |A|² = 2 / (a² cosh⁴ s).
inline double second_fundamental_norm_sq(double s, const CriticalParams& p) {
  const double c = std::cosh(s);
  return 2.0 / (p.a * p.a * c * c * c * c);
}

enum class Chart {
  s,       // s in [-T, T]
  phi,     // φ = 2 atan(e^{-s}) in [φ*, π - φ*]
  radial,  // r in [0, 1], flat unit disk
};

inline std::string to_string(Chart chart) {
  switch (chart) {
    case Chart::s: return "s";
    case Chart::phi: return "phi";
    case Chart::radial: return "radial";
  }
  return "?";
}

inline std::pair<double, double> chart_interval(Chart chart, const CriticalParams& p) {
  switch (chart) {
    case Chart::s: return {-p.T, p.T};
    case Chart::phi: return {p.phi_star, pi - p.phi_star};
    case Chart::radial: return {0.0, 1.0};
  }
  return {0.0, 0.0};
}

inline constexpr double chart_slack = 1e-12;

/// s ↔ φ. φ decreases as s increases, so s = ±T maps to φ = φ*, π - φ*.
inline double chart_convert(double x, Chart from, Chart to, const CriticalParams& p) {
  if (from == Chart::radial || to == Chart::radial) {
    throw std::invalid_argument("chart_convert: the radial chart has no catenoid counterpart");
  }
  const auto [lo, hi] = chart_interval(from, p);
  if (x < lo - chart_slack || x > hi + chart_slack) {
    throw Error(ErrorCode::domain, "chart_convert: " + std::to_string(x) + " outside the " +
                                       to_string(from) + " interval");
  }
  if (from == to) return x;
  if (from == Chart::s) return 2.0 * std::atan(std::exp(-x));
  return -std::log(std::tan(0.5 * x));
}

/// Uniform 1D grid with exact endpoints.
class Grid1D {
 public:
  static Grid1D uniform(Chart chart, std::size_t n_nodes, const CriticalParams& p) {
    const auto [lo, hi] = chart_interval(chart, p);
    return Grid1D(chart, n_nodes, lo, hi);
  }

  Grid1D(Chart chart, std::size_t n_nodes, double lo, double hi) : chart_(chart) {
    if (n_nodes < 3) throw std::invalid_argument("Grid1D: need at least 3 nodes");
    if (!(hi > lo)) throw std::invalid_argument("Grid1D: empty interval");
    spacing_ = (hi - lo) / static_cast<double>(n_nodes - 1);
    nodes_.resize(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) nodes_[i] = lo + static_cast<double>(i) * spacing_;
    nodes_.front() = lo;
    nodes_.back() = hi;
  }

  Chart chart() const { return chart_; }
  std::size_t size() const { return nodes_.size(); }
  double spacing() const { return spacing_; }
  double lower() const { return nodes_.front(); }
  double upper() const { return nodes_.back(); }
  double operator[](std::size_t i) const { return nodes_[i]; }
  const std::vector<double>& nodes() const { return nodes_; }

  /// Same interval, half the spacing (2n - 1 nodes, every old node kept).
  Grid1D refined() const { return Grid1D(chart_, 2 * size() - 1, lower(), upper()); }

  /// Composite trapezoid weights.
  std::vector<double> trapezoid_weights() const {
    std::vector<double> w(size(), spacing_);
    w.front() = w.back() = 0.5 * spacing_;
    return w;
  }

 private:
  Chart chart_;
  double spacing_ = 0.0;
  std::vector<double> nodes_;
};

using Vec3 = Eigen::Vector3d;

struct SurfacePoint {
  double s = 0.0;
  double theta = 0.0;
  Vec3 position = Vec3::Zero();
  Vec3 normal = Vec3::Zero();
};

inline SurfacePoint surface_point(double s, double theta, const CriticalParams& p) {
  const double ch = std::cosh(s);
  SurfacePoint pt;
  pt.s = s;
  pt.theta = theta;
  pt.position = p.a * Vec3(ch * std::cos(theta), ch * std::sin(theta), s);
  pt.normal = Vec3(-std::cos(theta) / ch, -std::sin(theta) / ch, std::tanh(s));
  return pt;
}

/// ∂X/∂s
inline Vec3 tangent_s(double s, double theta, const CriticalParams& p) {
  return p.a * Vec3(std::sinh(s) * std::cos(theta), std::sinh(s) * std::sin(theta), 1.0);
}

/// ∂X/∂θ
inline Vec3 tangent_theta(double s, double theta, const CriticalParams& p) {
  return p.a * Vec3(-std::cosh(s) * std::sin(theta), std::cosh(s) * std::cos(theta), 0.0);
}

/// Outward unit conormal on the boundary circle s = ±T.
inline Vec3 outward_conormal(double s, double theta, const CriticalParams& p) {
  const double sign = s >= 0.0 ? 1.0 : -1.0;
  return sign * tangent_s(s, theta, p).normalized();
}

/// ∫_Σ f dA, trapezoid in s and periodic trapezoid in θ, dA = a² cosh² s ds dθ.
template <class F>
double surface_integral(F&& f, std::size_t n_s, std::size_t n_theta, const CriticalParams& p) {
  if (n_s < 8 || n_theta < 8) throw std::invalid_argument("surface_integral: need n_s, n_theta >= 8");
  const Grid1D grid = Grid1D::uniform(Chart::s, n_s, p);
  const auto w = grid.trapezoid_weights();
  const double dtheta = 2.0 * pi / static_cast<double>(n_theta);
  double total = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double s = grid[i];
    const double ch = std::cosh(s);
    double ring = 0.0;
    for (std::size_t j = 0; j < n_theta; ++j) ring += f(s, dtheta * static_cast<double>(j));
    total += w[i] * p.a * p.a * ch * ch * ring * dtheta;
  }
  return total;
}

/// ∮_∂Σ f dℓ over both circles s = ±T (each of radius 1/T).
template <class F>
double boundary_integral(F&& f, std::size_t n_theta, const CriticalParams& p) {
  if (n_theta < 8) throw std::invalid_argument("boundary_integral: need n_theta >= 8");
  const double dtheta = 2.0 * pi / static_cast<double>(n_theta);
  double total = 0.0;
  for (std::size_t j = 0; j < n_theta; ++j) {
    const double theta = dtheta * static_cast<double>(j);
    total += f(p.T, theta) + f(-p.T, theta);
  }
  return total * dtheta * p.boundary_radius();
}

}  // namespace catenoid
