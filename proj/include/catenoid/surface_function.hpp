#pragma once

// Functions on the catenoid annulus in (s, θ) coordinates.
//
// A SurfaceFunction is a finite sum of separated terms c·f(s)·{cos, sin}(nθ) plus
// optional generic callables. Separated terms are differentiated exactly in θ;
// generic parts use a periodic central difference with the sampling step.

#include <catenoid/fields.hpp>
#include <catenoid/geometry.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <utility>
#include <vector>

namespace catenoid {

class SurfaceFunction {
 public:
  using Profile = std::function<double(double)>;
  using Callable = std::function<double(double, double)>;

  struct Term {
    int mode = 0;
    Angular angular = Angular::cos;
    Profile profile;
    double coeff = 1.0;
  };

  struct GenericPart {
    Callable f;
    double coeff = 1.0;
  };

  SurfaceFunction() = default;

  static SurfaceFunction separated(int mode, Angular angular, Profile profile, double coeff = 1.0) {
    SurfaceFunction u;
    u.terms_.push_back({mode, mode == 0 ? Angular::cos : angular, std::move(profile), coeff});
    return u;
  }

  static SurfaceFunction generic(Callable f) {
    SurfaceFunction u;
    u.generic_.push_back({std::move(f), 1.0});
    return u;
  }

  static SurfaceFunction from_field(const ClosedFormField& field, const CriticalParams& p) {
    const FieldKind kind = field.kind;
    return separated(field.mode, field.angular, [kind, p](double s) { return profile_jet(kind, s, p).f; });
  }

  SurfaceFunction& operator+=(const SurfaceFunction& other) {
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    generic_.insert(generic_.end(), other.generic_.begin(), other.generic_.end());
    return *this;
  }

  SurfaceFunction& operator*=(double c) {
    for (auto& t : terms_) t.coeff *= c;
    for (auto& g : generic_) g.coeff *= c;
    return *this;
  }

  friend SurfaceFunction operator+(SurfaceFunction a, const SurfaceFunction& b) { return a += b; }
  friend SurfaceFunction operator*(double c, SurfaceFunction a) { return a *= c; }
  friend SurfaceFunction operator-(SurfaceFunction a, const SurfaceFunction& b) { return a += -1.0 * b; }

  double operator()(double s, double theta) const {
    double v = 0.0;
    for (const auto& t : terms_) v += t.coeff * t.profile(s) * angular_factor(t.mode, t.angular, theta);
    for (const auto& g : generic_) v += g.coeff * g.f(s, theta);
    return v;
  }

  bool is_trigonometric() const { return generic_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }
  const std::vector<GenericPart>& generic_parts() const { return generic_; }

  int max_mode() const {
    int m = 0;
    for (const auto& t : terms_) m = std::max(m, t.mode);
    return m;
  }

  /// Nodal values and θ-derivatives on grid × {2πj/n_theta}, row-major in s.
  struct Samples {
    std::size_t n_s = 0;
    std::size_t n_theta = 0;
    std::vector<double> value;
    std::vector<double> d_theta;

    double at(std::size_t i, std::size_t j) const { return value[i * n_theta + j]; }
  };

  Samples sample(const std::vector<double>& s_nodes, std::size_t n_theta) const {
    Samples out;
    out.n_s = s_nodes.size();
    out.n_theta = n_theta;
    out.value.assign(out.n_s * n_theta, 0.0);
    out.d_theta.assign(out.n_s * n_theta, 0.0);
    const double dtheta = 2.0 * pi / static_cast<double>(n_theta);

    for (const auto& t : terms_) {
      std::vector<double> ang(n_theta);
      std::vector<double> dang(n_theta);
      const double m = static_cast<double>(t.mode);
      for (std::size_t j = 0; j < n_theta; ++j) {
        const double theta = dtheta * static_cast<double>(j);
        ang[j] = angular_factor(t.mode, t.angular, theta);
        if (t.mode == 0) {
          dang[j] = 0.0;
        } else {
          dang[j] = t.angular == Angular::cos ? -m * std::sin(m * theta) : m * std::cos(m * theta);
        }
      }
      for (std::size_t i = 0; i < out.n_s; ++i) {
        const double f = t.coeff * t.profile(s_nodes[i]);
        for (std::size_t j = 0; j < n_theta; ++j) {
          out.value[i * n_theta + j] += f * ang[j];
          out.d_theta[i * n_theta + j] += f * dang[j];
        }
      }
    }

    for (const auto& g : generic_) {
      for (std::size_t i = 0; i < out.n_s; ++i) {
        const double s = s_nodes[i];
        for (std::size_t j = 0; j < n_theta; ++j) {
          const double theta = dtheta * static_cast<double>(j);
          out.value[i * n_theta + j] += g.coeff * g.f(s, theta);
          out.d_theta[i * n_theta + j] +=
              g.coeff * (g.f(s, theta + dtheta) - g.f(s, theta - dtheta)) / (2.0 * dtheta);
        }
      }
    }
    return out;
  }

  /// Profiles of the separated terms grouped by (mode, angular), evaluated on nodes.
  std::map<std::pair<int, Angular>, std::vector<double>> mode_profiles(const std::vector<double>& s_nodes) const {
    std::map<std::pair<int, Angular>, std::vector<double>> out;
    for (const auto& t : terms_) {
      auto& f = out[{t.mode, t.angular}];
      f.resize(s_nodes.size(), 0.0);
      for (std::size_t i = 0; i < s_nodes.size(); ++i) f[i] += t.coeff * t.profile(s_nodes[i]);
    }
    return out;
  }

 private:
  std::vector<Term> terms_;
  std::vector<GenericPart> generic_;
};

}  // namespace catenoid
