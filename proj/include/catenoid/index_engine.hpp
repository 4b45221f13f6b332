#pragma once

// Headline spectral results assembled from the per-mode problems: Morse index by Robin
// counts, Steklov spectra, the degenerate Dirichlet problem, the flat disk, σ₁(Δ), and the
// sampled positivity of Q on the complement of the negative directions.

#include <catenoid/fields.hpp>
#include <catenoid/geometry.hpp>
#include <catenoid/linalg.hpp>
#include <catenoid/parallel.hpp>
#include <catenoid/quadratic_forms.hpp>
#include <catenoid/random.hpp>
#include <catenoid/sturm_liouville.hpp>
#include <catenoid/surface_function.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace catenoid {

/// C_ξ = |λ₁| / h² for the mode-0 Dirichlet problem on 257 nodes. λ₁ = 0 in the continuum
/// (the Jacobi field ξ), so this measures the discretization error of an exact null direction.
inline double xi_calibration_constant(const CriticalParams& p) {
  const Grid1D grid = Grid1D::uniform(Chart::s, 257, p);
  const TriPencil P = assemble(ModeProblem::make(0, Chart::s, BoundaryCondition::dirichlet), grid, p);
  const double lambda = pencil_eigs(P, 1, 1e-14)[0];
  return std::abs(lambda) / (grid.spacing() * grid.spacing());
}

/// τ = 5·C_ξ·h²: eigenvalues in [−τ, τ] count as zero.
inline double zero_threshold(const Grid1D& grid, const CriticalParams& p) {
  return 5.0 * xi_calibration_constant(p) * grid.spacing() * grid.spacing();
}

/// Eigenvalues below λ; on SHIFT_SINGULAR the shift moves by ±delta.
inline std::size_t robust_count_below(const TriPencil& P, double lambda, double delta) {
  for (double shift : {lambda, lambda - delta, lambda + delta}) {
    try {
      return pencil_count_below(P, shift, counting_zero_tol);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::shift_singular) throw;
    }
  }
  throw Error(ErrorCode::shift_singular, "no regular shift near " + std::to_string(lambda));
}

struct IndexOptions {
  BoundaryCondition bc = BoundaryCondition::robin;
  double tol = 1e-4;        // a-posteriori bound on the Richardson error estimate
  std::size_t threads = 1;  // per-mode workers
};

struct IndexReport {
  std::string problem;
  std::vector<std::size_t> per_mode_negative;   // one entry per mode, before the ×2 of n ≥ 1
  std::vector<std::size_t> per_mode_near_zero;
  std::vector<std::vector<double>> lowest_eigenvalues;  // two smallest per mode
  std::size_t total_index = 0;                  // n_0 + 2 Σ_{n≥1} n_n
  std::size_t total_near_zero = 0;
  int max_mode = 0;
  std::size_t grid_size = 0;
  double zero_threshold = 0.0;
  bool converged = false;                       // per-mode counts equal on three grids
  std::vector<std::size_t> refinement_grid_sizes;
  std::vector<std::size_t> refinement_totals;
  double discretization_error = 0.0;            // Richardson estimate over modes 0..2
  double tol = 0.0;
  bool resolved = false;                        // discretization_error ≤ tol
};

inline std::size_t weighted_total(const std::vector<std::size_t>& per_mode) {
  std::size_t total = 0;
  for (std::size_t n = 0; n < per_mode.size(); ++n) total += (n == 0 ? 1 : 2) * per_mode[n];
  return total;
}

namespace detail {

struct ModeCount {
  std::size_t negative = 0;
  std::size_t near_zero = 0;
  std::vector<double> lowest;
};

using ProblemFactory = std::function<ModeProblem(int)>;

inline ModeCount count_mode(const ModeProblem& mp, const Grid1D& grid, double tau, bool want_eigs,
                            const CriticalParams& p) {
  const TriPencil P = assemble(mp, grid, p);
  ModeCount out;
  const double delta = 1e-3 * tau;
  const std::size_t below_neg = robust_count_below(P, -tau, delta);
  const std::size_t below_pos = robust_count_below(P, tau, delta);
  out.negative = below_neg;
  out.near_zero = below_pos - below_neg;
  if (want_eigs) out.lowest = pencil_eigs(P, std::min<std::size_t>(2, P.size()), 1e-12);
  return out;
}

inline IndexReport mode_sweep(const std::string& name, const ProblemFactory& factory, int max_mode,
                              const Grid1D& grid, const IndexOptions& opts, const CriticalParams& p) {
  if (max_mode < 2) throw std::invalid_argument("index: max_mode must be at least 2");
  if (grid.size() < 64) throw std::invalid_argument("index: grid needs at least 64 nodes");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("index: tol must be positive");

  const std::vector<Grid1D> grids{grid, grid.refined(), grid.refined().refined()};
  const auto modes = static_cast<std::size_t>(max_mode) + 1;
  std::vector<std::vector<ModeCount>> counts(grids.size(), std::vector<ModeCount>(modes));
  const double c_xi = xi_calibration_constant(p);

  for (std::size_t level = 0; level < grids.size(); ++level) {
    const Grid1D& g = grids[level];
    const double tau = 5.0 * c_xi * g.spacing() * g.spacing();
    parallel_for(modes, opts.threads, [&](std::size_t n) {
      const bool want_eigs = level == 0 || (level == 1 && n <= 2);
      counts[level][n] = count_mode(factory(static_cast<int>(n)), g, tau, want_eigs, p);
    });
  }

  IndexReport out;
  out.problem = name;
  out.max_mode = max_mode;
  out.grid_size = grid.size();
  out.zero_threshold = 5.0 * c_xi * grid.spacing() * grid.spacing();
  out.tol = opts.tol;
  for (std::size_t n = 0; n < modes; ++n) {
    out.per_mode_negative.push_back(counts[0][n].negative);
    out.per_mode_near_zero.push_back(counts[0][n].near_zero);
    out.lowest_eigenvalues.push_back(counts[0][n].lowest);
  }
  out.total_index = weighted_total(out.per_mode_negative);
  out.total_near_zero = weighted_total(out.per_mode_near_zero);

  out.converged = true;
  for (std::size_t level = 0; level < grids.size(); ++level) {
    std::vector<std::size_t> neg;
    for (const auto& c : counts[level]) neg.push_back(c.negative);
    out.refinement_grid_sizes.push_back(grids[level].size());
    out.refinement_totals.push_back(weighted_total(neg));
    if (neg != out.per_mode_negative) out.converged = false;
  }

  for (std::size_t n = 0; n <= 2; ++n) {
    const auto& coarse = counts[0][n].lowest;
    const auto& fine = counts[1][n].lowest;
    for (std::size_t k = 0; k < std::min(coarse.size(), fine.size()); ++k) {
      out.discretization_error = std::max(out.discretization_error, 4.0 / 3.0 * std::abs(coarse[k] - fine[k]));
    }
  }
  out.resolved = out.discretization_error <= opts.tol;
  return out;
}

}  // namespace detail

/// Robin (or, via opts.bc, Dirichlet) negative counts of the catenoid modes 0..max_mode.
/// Counts do not depend on the chart; τ always comes from the s-chart calibration.
inline IndexReport morse_index(int max_mode, const Grid1D& grid, const CriticalParams& p,
                               const IndexOptions& opts = {}) {
  if (grid.chart() == Chart::radial) throw Error(ErrorCode::chart_mismatch, "morse_index needs an s- or phi-grid");
  const Chart chart = grid.chart();
  const BoundaryCondition bc = opts.bc;
  if (bc != BoundaryCondition::robin && bc != BoundaryCondition::dirichlet) {
    throw std::invalid_argument("morse_index: bc must be robin or dirichlet");
  }
  return detail::mode_sweep(
      "catenoid_" + to_string(bc), [bc, chart](int n) { return ModeProblem::make(n, chart, bc); }, max_mode, grid,
      opts, p);
}

/// Flat unit disk, Robin condition ∂u/∂ν = u at r = 1.
inline IndexReport disk_index(const Grid1D& radial_grid, int max_mode, const CriticalParams& p,
                              const IndexOptions& opts = {}) {
  if (radial_grid.chart() != Chart::radial) throw Error(ErrorCode::chart_mismatch, "disk_index needs a radial grid");
  return detail::mode_sweep(
      "disk_robin", [](int n) { return ModeProblem::make(n, Chart::radial, BoundaryCondition::robin); }, max_mode,
      radial_grid, opts, p);
}

struct SteklovMode {
  int mode = 0;
  std::vector<double> eigenvalues;    // finite discrete Steklov eigenvalues, ascending
  bool singular_even_channel = false;  // mode 0: even channel carries a Dirichlet kernel
};

namespace detail {

inline TriPencil channel_pencil(const TriPencil& P, Channel channel) {
  TriPencil out;
  out.A = fold(P.A, channel);
  out.B = fold(P.B, channel);
  out.b_kind = BKind::boundary_semidefinite;
  out.boundary = {0};
  return out;
}

inline double channel_steklov(const TriPencil& channel) {
  return schur_reduce(channel, std::span<const std::size_t>(channel.boundary)).eigenvalues()[0];
}

}  // namespace detail

/// Discrete Steklov spectrum per mode for J (op = jacobi) or Δ (op = laplacian).
/// Mode 0 is split into s-odd and s-even channels; an even channel whose interior
/// Dirichlet problem has an eigenvalue within the zero threshold is flagged, not reduced.
inline std::vector<SteklovMode> steklov_spectrum(int max_mode, const Grid1D& grid, const CriticalParams& p,
                                                 OperatorKind op = OperatorKind::jacobi, std::size_t threads = 1) {
  if (grid.chart() != Chart::s) throw Error(ErrorCode::chart_mismatch, "steklov_spectrum needs an s-grid");
  if (max_mode < 0) throw std::invalid_argument("steklov_spectrum: negative max_mode");
  const auto modes = static_cast<std::size_t>(max_mode) + 1;
  std::vector<SteklovMode> out(modes);
  const double tau = zero_threshold(grid, p);
  parallel_for(modes, threads, [&](std::size_t idx) {
    const int n = static_cast<int>(idx);
    SteklovMode& sm = out[idx];
    sm.mode = n;
    const TriPencil P = assemble(ModeProblem::make(n, Chart::s, BoundaryCondition::steklov, op), grid, p);
    if (n > 0) {
      sm.eigenvalues = steklov_reduce(P, {0, P.size() - 1}).eigenvalues();
      return;
    }
    sm.eigenvalues.push_back(detail::channel_steklov(detail::channel_pencil(P, Channel::odd)));
    const TriPencil D = assemble(ModeProblem::make(0, Chart::s, BoundaryCondition::dirichlet, op), grid, p);
    const double lambda1 = pencil_eigs(D, 1, 1e-12)[0];
    if (std::abs(lambda1) <= tau) {
      sm.singular_even_channel = true;
    } else {
      try {
        sm.eigenvalues.push_back(detail::channel_steklov(detail::channel_pencil(P, Channel::even)));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::interior_singular) throw;
        sm.singular_even_channel = true;
      }
    }
    std::sort(sm.eigenvalues.begin(), sm.eigenvalues.end());
  });
  return out;
}

inline std::vector<SteklovMode> steklov_spectrum_J(int max_mode, const Grid1D& grid, const CriticalParams& p,
                                                   std::size_t threads = 1) {
  return steklov_spectrum(max_mode, grid, p, OperatorKind::jacobi, threads);
}

/// Nodal eigenfunction of the mode-0 odd Steklov channel, by inverse iteration.
inline std::vector<double> steklov_mode0_eigenfunction(const Grid1D& grid, const CriticalParams& p) {
  const TriPencil P = assemble(ModeProblem::make(0, Chart::s, BoundaryCondition::steklov), grid, p);
  const TriPencil odd = detail::channel_pencil(P, Channel::odd);
  const double sigma = detail::channel_steklov(odd);
  const auto v = inverse_iteration(odd, sigma - 1e-3 * std::max(1.0, std::abs(sigma)));
  return unfold(v, grid.size(), Channel::odd);
}

/// |⟨x, y⟩| / (‖x‖‖y‖).
inline double correlation(std::span<const double> x, std::span<const double> y) {
  double xy = 0.0;
  double xx = 0.0;
  double yy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xy += x[i] * y[i];
    xx += x[i] * x[i];
    yy += y[i] * y[i];
  }
  return std::abs(xy) / std::sqrt(xx * yy);
}

// --- degenerate Dirichlet problem -------------------------------------------------------

/// Boundary data u = plus·trig(nθ) on s = T and minus·trig(nθ) on s = −T.
struct BoundaryMode {
  int mode = 0;
  Angular angular = Angular::cos;
  double plus = 0.0;
  double minus = 0.0;
};

struct ModeSolution {
  BoundaryMode data;
  std::vector<double> profile;   // nodal values on the s-grid
  double normal_plus = 0.0;      // ∂u/∂ν on s = T, per unit trig(nθ)
  double normal_minus = 0.0;     // ∂u/∂ν on s = −T
  double reference_error = 0.0;  // sup |profile − exact solution|
};

struct DirichletSolution {
  std::vector<double> nodes;
  std::vector<ModeSolution> modes;
  double flux = 0.0;        // ∮ ∂u/∂ν over both circles
  double flux_scale = 0.0;  // Σ 2π(|∂_s u(T)| + |∂_s u(−T)|) of the mode-0 part
  double max_reference_error = 0.0;
};

namespace detail {

/// Reference solution of the mode equation with the given end values: tanh for mode 0,
/// RK4 shooting with four substeps per cell otherwise.
inline std::vector<double> dirichlet_reference(const BoundaryMode& bm, const Grid1D& grid, const CriticalParams& p) {
  const std::size_t N = grid.size();
  std::vector<double> out(N);
  if (bm.mode == 0) {
    for (std::size_t i = 0; i < N; ++i) out[i] = bm.plus * std::tanh(grid[i]) / std::tanh(p.T);
    return out;
  }
  const std::size_t sub = 4;
  const auto f1 = integrate_mode_ode(bm.mode, -p.T, p.T, 1.0, 0.0, sub * (N - 1));
  const auto f2 = integrate_mode_ode(bm.mode, -p.T, p.T, 0.0, 1.0, sub * (N - 1));
  const double c = (bm.plus - bm.minus * f1.back()) / f2.back();
  for (std::size_t i = 0; i < N; ++i) out[i] = bm.minus * f1[sub * i] + c * f2[sub * i];
  return out;
}

/// Solves the rows 1..m−1 of M with x_0 prescribed; the last row is an interior row.
inline std::vector<double> solve_with_first_fixed(const TriMatrix& M, double x0) {
  const std::size_t m = M.size();
  std::vector<double> d(M.diag.begin() + 1, M.diag.end());
  std::vector<double> e(M.offdiag.begin() + 1, M.offdiag.end());
  std::vector<double> rhs(m - 1, 0.0);
  rhs[0] = -M.offdiag[0] * x0;
  auto inner = solve_tridiagonal(TriMatrix(std::move(d), std::move(e)), rhs);
  inner.insert(inner.begin(), x0);
  return inner;
}

}  // namespace detail

/// J u = 0 in Σ with u given on ∂Σ. Mode-0 data must be odd in s: the even part would
/// have to pair with ξ, which vanishes on ∂Σ with nonzero flux, so the problem is solvable
/// exactly when ∮u = 0. The ξ-component is fixed to zero, which gives zero flux.
inline DirichletSolution solve_dirichlet(const std::vector<BoundaryMode>& data, const Grid1D& grid,
                                         const CriticalParams& p) {
  if (grid.chart() != Chart::s) throw Error(ErrorCode::chart_mismatch, "solve_dirichlet needs an s-grid");
  const std::size_t N = grid.size();
  DirichletSolution out;
  out.nodes = grid.nodes();
  for (const BoundaryMode& bm : data) {
    if (bm.mode < 0) throw std::invalid_argument("solve_dirichlet: negative mode");
    ModeSolution ms;
    ms.data = bm;
    const auto [A, mass] = weak_form(ModeProblem::make(bm.mode, Chart::s, BoundaryCondition::natural), grid, p);
    (void)mass;
    if (bm.mode == 0) {
      const double even = 0.5 * (bm.plus + bm.minus);
      if (std::abs(even) > 1e-10) {
        throw Error(ErrorCode::not_solvable, "mode-0 data has nonzero mean " + std::to_string(even) +
                                                 "; solvable only when the boundary integral vanishes");
      }
      const TriMatrix odd = fold(A, Channel::odd);
      const double odd_value = 0.5 * (bm.minus - bm.plus);  // value at s = −T of the odd part
      const auto v = detail::solve_with_first_fixed(odd, std::sqrt(2.0) * odd_value);
      ms.profile = unfold(v, N, Channel::odd);
      const auto Af = A.apply(ms.profile);
      out.flux += 2.0 * pi * (Af.front() + Af.back());
      out.flux_scale += 2.0 * pi * (std::abs(Af.front()) + std::abs(Af.back()));
      ms.data.plus = -odd_value;
      ms.data.minus = odd_value;
    } else {
      std::vector<double> d(A.diag.begin() + 1, A.diag.end() - 1);
      std::vector<double> e(A.offdiag.begin() + 1, A.offdiag.end() - 1);
      std::vector<double> rhs(N - 2, 0.0);
      rhs.front() -= A.offdiag.front() * bm.minus;
      rhs.back() -= A.offdiag.back() * bm.plus;
      const auto inner = solve_tridiagonal(TriMatrix(std::move(d), std::move(e)), rhs);
      ms.profile.reserve(N);
      ms.profile.push_back(bm.minus);
      ms.profile.insert(ms.profile.end(), inner.begin(), inner.end());
      ms.profile.push_back(bm.plus);
    }
    // Boundary rows of the natural weak form give ±f′ at the ends; ∂/∂ν = T·(±∂/∂s) there.
    const auto Af = A.apply(ms.profile);
    ms.normal_plus = p.T * Af.back();
    ms.normal_minus = p.T * Af.front();
    const auto ref = detail::dirichlet_reference(ms.data, grid, p);
    for (std::size_t i = 0; i < N; ++i) ms.reference_error = std::max(ms.reference_error, std::abs(ms.profile[i] - ref[i]));
    out.max_reference_error = std::max(out.max_reference_error, ms.reference_error);
    out.modes.push_back(std::move(ms));
  }
  return out;
}

// --- σ₁(Δ) -------------------------------------------------------------------------------

struct Sigma1Report {
  double value = 0.0;
  std::vector<int> attaining_modes;
  std::vector<SteklovMode> spectrum;
};

/// Smallest positive Steklov eigenvalue of Δ over modes 0..max_mode. Eigenvalues with
/// |σ| ≤ 1e-8 (the constants) are excluded; modes within `attain_tol` of the minimum are listed.
inline Sigma1Report sigma1_laplacian(const Grid1D& grid, int max_mode, const CriticalParams& p,
                                     std::size_t threads = 1, double attain_tol = 1e-4) {
  Sigma1Report out;
  out.spectrum = steklov_spectrum(max_mode, grid, p, OperatorKind::laplacian, threads);
  out.value = std::numeric_limits<double>::infinity();
  for (const auto& sm : out.spectrum) {
    for (double s : sm.eigenvalues) {
      if (std::abs(s) > 1e-8) out.value = std::min(out.value, s);
    }
  }
  for (const auto& sm : out.spectrum) {
    for (double s : sm.eigenvalues) {
      if (std::abs(s) > 1e-8 && std::abs(s - out.value) <= attain_tol) {
        out.attaining_modes.push_back(sm.mode);
        break;
      }
    }
  }
  return out;
}

// --- positivity on the Q-orthogonal complement of 𝒲 ----------------------------------

/// 𝒲 = span{1, v_x^⊥, v_y^⊥, v_z^⊥}.
inline std::vector<SurfaceFunction> negative_space_basis(const CriticalParams& p) {
  std::vector<SurfaceFunction> out;
  for (FieldKind k : {FieldKind::const_one, FieldKind::vx, FieldKind::vy, FieldKind::vz}) {
    out.push_back(SurfaceFunction::from_field(ClosedFormField::make(k, p), p));
  }
  return out;
}

struct ProjectedForm {
  double q = 0.0;        // Q(u − P_𝒲 u), P_𝒲 the Q-orthogonal projection
  double l2_norm_sq = 0.0;
};

/// Q of the Q-orthogonal projection of u off 𝒲.
inline ProjectedForm complement_q(const SurfaceFunction& u, const Resolution& res, const CriticalParams& p) {
  auto basis = negative_space_basis(p);
  basis.push_back(u);
  const auto terms = pairwise_terms(basis, res, p);
  Eigen::Matrix4d G;
  Eigen::Vector4d b;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) G(i, j) = terms[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].q();
    b(i) = terms[static_cast<std::size_t>(i)][4].q();
  }
  if (dense_inertia(G, 1e-3 * G.cwiseAbs().maxCoeff()) != Inertia{4, 0, 0}) {
    throw Error(ErrorCode::gram_singular, "Q-Gram on the negative space is not negative definite");
  }
  ProjectedForm out;
  out.q = terms[4][4].q() - b.dot(G.ldlt().solve(b));
  out.l2_norm_sq = l2_inner(u, u, res, p);
  return out;
}

/// Random u = Σ_{n ≤ 4} P_{n,±}(s/T)·{cos, sin}(nθ), deg P ≤ 6, coefficients uniform in [−1, 1].
inline SurfaceFunction random_trig_polynomial(Rng& rng, const CriticalParams& p) {
  SurfaceFunction u;
  for (int n = 0; n <= 4; ++n) {
    for (Angular ang : {Angular::cos, Angular::sin}) {
      if (n == 0 && ang == Angular::sin) continue;
      std::vector<double> c(7);
      for (double& x : c) x = rng.uniform(-1.0, 1.0);
      const double T = p.T;
      u += SurfaceFunction::separated(n, ang, [c, T](double s) {
        const double x = s / T;
        double acc = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
        return acc;
      });
    }
  }
  return u;
}

struct ComplementReport {
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  double min_q = 0.0;  // min over samples of Q(u^⊥) / ‖u‖²
  double tolerance = 1e-3;
  bool pass = false;
};

inline ComplementReport complement_positivity_check(std::size_t n_samples, const CriticalParams& p,
                                                    std::uint64_t seed = 0,
                                                    const Resolution& res = Resolution{256, 64, true}) {
  if (n_samples == 0) throw std::invalid_argument("complement_positivity_check: need at least one sample");
  Rng rng(seed);
  ComplementReport out;
  out.n_samples = n_samples;
  out.seed = seed;
  out.min_q = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n_samples; ++k) {
    const SurfaceFunction u = random_trig_polynomial(rng, p);
    const ProjectedForm pf = complement_q(u, res, p);
    out.min_q = std::min(out.min_q, pf.q / pf.l2_norm_sq);
  }
  out.pass = out.min_q >= -out.tolerance;
  return out;
}

}  // namespace catenoid
