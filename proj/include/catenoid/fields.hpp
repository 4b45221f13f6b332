#pragma once

// Closed-form Jacobi fields and coordinate functions on the critical catenoid.
//
// Every field here separates as profile(s) · angular(θ) with angular ∈ {1, cos θ, sin θ}.
// Sign convention: the normal-component fields v^⊥ = <N, v> carry an extra global sign
// so that v_x^⊥ = sech(s) cos θ, i.e. positive multiples of cos θ on the boundary.
// Quadratic-form values and Steklov eigenvalues do not depend on that sign.

#include <catenoid/geometry.hpp>

#include <cmath>
#include <algorithm>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace catenoid {

enum class FieldKind { vx, vy, vz, rot_xz, rot_yz, xi, coord_x, coord_y, coord_z, const_one };
enum class Parity { even, odd };
enum class Angular { cos, sin };

inline std::string to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::vx: return "v_x";
    case FieldKind::vy: return "v_y";
    case FieldKind::vz: return "v_z";
    case FieldKind::rot_xz: return "rot_xz";
    case FieldKind::rot_yz: return "rot_yz";
    case FieldKind::xi: return "xi";
    case FieldKind::coord_x: return "x";
    case FieldKind::coord_y: return "y";
    case FieldKind::coord_z: return "z";
    case FieldKind::const_one: return "1";
  }
  return "?";
}

inline std::string to_string(Angular a) { return a == Angular::cos ? "cos" : "sin"; }

/// Value and first two s-derivatives of a profile.
struct ProfileJet {
  double f = 0.0;
  double df = 0.0;
  double d2f = 0.0;
};

struct ClosedFormField {
  FieldKind kind = FieldKind::const_one;
  int mode = 0;
  Angular angular = Angular::cos;
  Parity parity = Parity::even;
  std::optional<double> steklov_eigenvalue;

  static ClosedFormField make(FieldKind kind, const CriticalParams& p) {
    ClosedFormField field;
    field.kind = kind;
    switch (kind) {
      case FieldKind::vx:
      case FieldKind::vy:
        field.mode = 1;
        field.parity = Parity::even;
        field.steklov_eigenvalue = -1.0;
        break;
      case FieldKind::vz:
        field.parity = Parity::odd;
        field.steklov_eigenvalue = 1.0 / (p.sinhT * p.sinhT);
        break;
      case FieldKind::rot_xz:
      case FieldKind::rot_yz:
        field.mode = 1;
        field.parity = Parity::odd;
        field.steklov_eigenvalue = 1.0;
        break;
      case FieldKind::xi:
        field.parity = Parity::even;
        break;
      case FieldKind::coord_x:
      case FieldKind::coord_y:
        field.mode = 1;
        field.parity = Parity::even;
        field.steklov_eigenvalue = 1.0;  // for the Laplacian
        break;
      case FieldKind::coord_z:
        field.parity = Parity::odd;
        field.steklov_eigenvalue = 1.0;  // for the Laplacian
        break;
      case FieldKind::const_one:
        field.parity = Parity::even;
        break;
    }
    if (kind == FieldKind::vy || kind == FieldKind::rot_yz || kind == FieldKind::coord_y) {
      field.angular = Angular::sin;
    }
    return field;
  }

  std::string label() const { return to_string(kind); }
};

/// Λ(s) = a (s sech s + tanh s cosh s), the profile of the rotation fields.
inline double rotation_profile(double s, const CriticalParams& p) {
  return p.a * (s / std::cosh(s) + std::sinh(s));
}

inline ProfileJet profile_jet(FieldKind kind, double s, const CriticalParams& p) {
  const double sech = 1.0 / std::cosh(s);
  const double th = std::tanh(s);
  switch (kind) {
    case FieldKind::vx:
    case FieldKind::vy:
      return {sech, -sech * th, sech * (th * th - sech * sech)};
    case FieldKind::vz:
      return {th, sech * sech, -2.0 * sech * sech * th};
    case FieldKind::rot_xz:
    case FieldKind::rot_yz:
      return {rotation_profile(s, p), p.a * (sech - s * sech * th + std::cosh(s)),
              p.a * (-2.0 * sech * th + s * sech * (th * th - sech * sech) + std::sinh(s))};
    case FieldKind::xi:
      return {1.0 - s * th, -th - s * sech * sech, -2.0 * sech * sech + 2.0 * s * sech * sech * th};
    case FieldKind::coord_x:
    case FieldKind::coord_y:
      return {p.a * std::cosh(s), p.a * std::sinh(s), p.a * std::cosh(s)};
    case FieldKind::coord_z:
      return {p.a * s, p.a, 0.0};
    case FieldKind::const_one:
      return {1.0, 0.0, 0.0};
  }
  return {};
}

inline double angular_factor(int mode, Angular angular, double theta) {
  if (mode == 0) return 1.0;
  const double arg = static_cast<double>(mode) * theta;
  return angular == Angular::cos ? std::cos(arg) : std::sin(arg);
}

inline double evaluate(const ClosedFormField& field, double s, double theta, const CriticalParams& p) {
  if (std::abs(s) > p.T + chart_slack) {
    throw Error(ErrorCode::domain, "evaluate: |s| exceeds T");
  }
  return profile_jet(field.kind, s, p).f * angular_factor(field.mode, field.angular, theta);
}

/// sup over interior nodes and θ samples of |J u|, with second-order central
/// differences in s and exact differentiation in θ (every field is a single Fourier mode).
inline double jacobi_residual(const ClosedFormField& field, const Grid1D& grid, std::size_t n_theta,
                              const CriticalParams& p) {
  if (grid.chart() != Chart::s) throw Error(ErrorCode::chart_mismatch, "jacobi_residual needs an s-grid");
  const std::size_t n = grid.size();
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = profile_jet(field.kind, grid[i], p).f;

  std::vector<double> ang(n_theta);
  double ang_max = 0.0;
  for (std::size_t j = 0; j < n_theta; ++j) {
    ang[j] = angular_factor(field.mode, field.angular, 2.0 * pi * static_cast<double>(j) / static_cast<double>(n_theta));
    ang_max = std::max(ang_max, std::abs(ang[j]));
  }

  const double h2 = grid.spacing() * grid.spacing();
  const double m2 = static_cast<double>(field.mode * field.mode);
  double sup = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double ch2 = std::cosh(grid[i]) * std::cosh(grid[i]);
    const double fss = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
    const double ju = -(fss - m2 * f[i]) / (p.a * p.a * ch2) - second_fundamental_norm_sq(grid[i], p) * f[i];
    sup = std::max(sup, std::abs(ju));
  }
  return sup * ang_max;
}

/// (∂u/∂ν) / u on the circle s = T, with ∂/∂ν = (a cosh s)^{-1} ∂/∂s.
inline double steklov_ratio(const ClosedFormField& field, const CriticalParams& p) {
  const ProfileJet jet = profile_jet(field.kind, p.T, p);
  if (std::abs(jet.f) < 1e-12) {
    throw Error(ErrorCode::singular, "steklov_ratio: boundary value of " + field.label() + " vanishes");
  }
  return jet.df / (p.a * p.coshT * jet.f);
}

/// Same ratio on the circle s = -T, where the outward direction is -∂/∂s.
inline double steklov_ratio_lower(const ClosedFormField& field, const CriticalParams& p) {
  const ProfileJet jet = profile_jet(field.kind, -p.T, p);
  if (std::abs(jet.f) < 1e-12) {
    throw Error(ErrorCode::singular, "steklov_ratio: boundary value of " + field.label() + " vanishes");
  }
  return -jet.df / (p.a * p.coshT * jet.f);
}

inline std::vector<ClosedFormField> fields_of(std::initializer_list<FieldKind> kinds, const CriticalParams& p) {
  std::vector<ClosedFormField> out;
  for (FieldKind k : kinds) out.push_back(ClosedFormField::make(k, p));
  return out;
}

}  // namespace catenoid
