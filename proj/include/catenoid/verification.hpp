#pragma once

// The acceptance suite: twelve numbered criteria, each a list of checks with
// actual/expected/tolerance. Shared by `catenoid verify` and the acceptance test binary.

#include <catenoid/fields.hpp>
#include <catenoid/geometry.hpp>
#include <catenoid/index_engine.hpp>
#include <catenoid/linalg.hpp>
#include <catenoid/quadratic_forms.hpp>
#include <catenoid/random.hpp>
#include <catenoid/sturm_liouville.hpp>
#include <catenoid/surface_function.hpp>

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace catenoid {

inline constexpr double no_value = std::numeric_limits<double>::quiet_NaN();

struct Check {
  std::string name;
  bool pass = false;
  double actual = no_value;
  double expected = no_value;
  double tolerance = no_value;
};

struct CriterionResult {
  int number = 0;
  std::string title;
  std::vector<Check> checks;
  bool not_converged = false;  // a discretization did not meet the requested tolerance
  double seconds = 0.0;

  bool pass() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return !checks.empty();
  }

  /// |actual − expected| ≤ tol
  void near(std::string name, double actual, double expected, double tol) {
    checks.push_back({std::move(name), std::abs(actual - expected) <= tol, actual, expected, tol});
  }
  /// actual ≤ bound
  void at_most(std::string name, double actual, double bound) {
    checks.push_back({std::move(name), actual <= bound, actual, no_value, bound});
  }
  /// actual ≥ bound
  void at_least(std::string name, double actual, double bound) {
    checks.push_back({std::move(name), actual >= bound, actual, no_value, bound});
  }
  void equal(std::string name, double actual, double expected) {
    checks.push_back({std::move(name), actual == expected, actual, expected, 0.0});
  }
  void truth(std::string name, bool ok) { checks.push_back({std::move(name), ok, ok ? 1.0 : 0.0, 1.0, 0.0}); }
};

struct VerifyConfig {
  std::size_t grid_n = 1024;
  int modes = 10;
  double tol = 1e-4;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

struct VerificationReport {
  VerifyConfig config;
  std::vector<CriterionResult> criteria;
  double seconds = 0.0;

  bool pass() const {
    for (const auto& c : criteria) {
      if (!c.pass()) return false;
    }
    return true;
  }
  bool not_converged() const {
    for (const auto& c : criteria) {
      if (c.not_converged) return true;
    }
    return false;
  }
};

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline double observed_order(double coarse_err, double fine_err) { return std::log2(coarse_err / fine_err); }

inline std::vector<double> nodal(const Grid1D& grid, const std::function<double(double)>& f) {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = f(grid[i]);
  return out;
}

/// Random trigonometric polynomial of θ-degree ≤ max_mode with smooth random s-profiles.
inline SurfaceFunction random_profile_function(Rng& rng, int max_mode, const CriticalParams& p) {
  SurfaceFunction u;
  for (int n = 0; n <= max_mode; ++n) {
    for (Angular ang : {Angular::cos, Angular::sin}) {
      if (n == 0 && ang == Angular::sin) continue;
      const double c0 = rng.uniform(-1.0, 1.0);
      const double c1 = rng.uniform(-1.0, 1.0);
      const double c2 = rng.uniform(-1.0, 1.0);
      const double k = rng.uniform(0.5, 2.0);
      const double T = p.T;
      u += SurfaceFunction::separated(n, ang, [=](double s) {
        return c0 + c1 * std::sin(k * s) + c2 * std::cosh(s / T) * s * s;
      });
    }
  }
  return u;
}

inline TriMatrix random_tridiagonal(Rng& rng, std::size_t n) {
  std::vector<double> d(n);
  std::vector<double> e(n - 1);
  for (double& x : d) x = rng.uniform(-1.0, 1.0);
  for (double& x : e) x = rng.uniform(-1.0, 1.0);
  return TriMatrix(std::move(d), std::move(e));
}

}  // namespace detail

inline CriterionResult criterion_constants() {
  CriterionResult c{1, "critical constants", {}, false, 0.0};
  const auto t0 = std::chrono::steady_clock::now();
  constexpr int reps = 100;
  CriticalParams p;
  for (int i = 0; i < reps; ++i) p = solve_critical_T(1e-12);
  const double per_call = detail::seconds_since(t0) / reps;
  c.at_most("|T tanh T - 1|", std::abs(p.T * std::tanh(p.T) - 1.0), 1e-12);
  c.at_most("|a T cosh T - 1|", std::abs(p.a * p.T * p.coshT - 1.0), 1e-12);
  c.at_most("|cos(phi*) - 1/T|", std::abs(std::cos(p.phi_star) - 1.0 / p.T), 1e-12);
  c.at_most("|sin(phi*) - 1/cosh T|", std::abs(std::sin(p.phi_star) - 1.0 / p.coshT), 1e-12);
  c.at_most("|a cosh T - 1/T|", std::abs(p.a * p.coshT - 1.0 / p.T), 1e-12);
  c.at_most("solve time [s]", per_call, 1e-3);
  c.seconds = detail::seconds_since(t0);
  return c;
}

inline CriterionResult criterion_steklov(const CriticalParams& p, std::size_t threads) {
  CriterionResult c{2, "Steklov spectrum of J", {}, false, 0.0};
  const auto t0 = std::chrono::steady_clock::now();
  const double vz = 1.0 / (p.sinhT * p.sinhT);
  std::vector<double> err0;
  std::vector<double> err1;
  std::vector<SteklovMode> finest;
  for (std::size_t n : {512u, 1024u, 2048u}) {
    finest = steklov_spectrum_J(2, Grid1D::uniform(Chart::s, n, p), p, threads);
    err0.push_back(std::abs(finest[0].eigenvalues[0] - vz));
    err1.push_back(std::max(std::abs(finest[1].eigenvalues[0] + 1.0), std::abs(finest[1].eigenvalues[1] - 1.0)));
  }
  c.near("mode 0 eigenvalue (2048)", finest[0].eigenvalues[0], vz, 1e-4);
  c.truth("mode 0 even channel flagged singular", finest[0].singular_even_channel);
  c.near("mode 1 lower eigenvalue (2048)", finest[1].eigenvalues[0], -1.0, 1e-4);
  c.near("mode 1 upper eigenvalue (2048)", finest[1].eigenvalues[1], 1.0, 1e-4);
  c.at_least("mode 2 lower eigenvalue", finest[2].eigenvalues[0], 1.0);
  c.near("order mode 0 (512/1024)", detail::observed_order(err0[0], err0[1]), 2.0, 0.3);
  c.near("order mode 0 (1024/2048)", detail::observed_order(err0[1], err0[2]), 2.0, 0.3);
  c.near("order mode 1 (512/1024)", detail::observed_order(err1[0], err1[1]), 2.0, 0.3);
  c.near("order mode 1 (1024/2048)", detail::observed_order(err1[1], err1[2]), 2.0, 0.3);
  const Grid1D g = Grid1D::uniform(Chart::s, 1024, p);
  const auto ef = steklov_mode0_eigenfunction(g, p);
  c.at_least("mode 0 eigenfunction vs tanh", correlation(ef, detail::nodal(g, [](double s) { return std::tanh(s); })),
             0.999);
  c.seconds = detail::seconds_since(t0);
  c.at_most("runtime [s]", c.seconds, 1.0);
  return c;
}

inline CriterionResult criterion_dirichlet_stability(const VerifyConfig& cfg, const CriticalParams& p) {
  CriterionResult c{3, "Dirichlet stability", {}, false, 0.0};
  const auto t0 = std::chrono::steady_clock::now();
  const Grid1D g = Grid1D::uniform(Chart::s, cfg.grid_n, p);
  const IndexReport r =
      morse_index(std::max(10, cfg.modes), g, p, IndexOptions{BoundaryCondition::dirichlet, cfg.tol, cfg.threads});
  c.near("mode 0 lowest eigenvalue", r.lowest_eigenvalues[0][0], 0.0, r.zero_threshold);
  c.equal("negative Dirichlet eigenvalues (modes <= 10)", static_cast<double>(r.total_index), 0.0);
  c.truth("counts stable under refinement", r.converged);

  const TriPencil P = assemble(ModeProblem::make(0, Chart::s, BoundaryCondition::dirichlet), g, p);
  const double lambda = r.lowest_eigenvalues[0][0];
  const auto v = inverse_iteration(P, lambda - 0.1);
  std::vector<double> xi(P.size());
  for (std::size_t i = 0; i < xi.size(); ++i) xi[i] = 1.0 - g[i + 1] * std::tanh(g[i + 1]);
  c.at_least("ground state vs xi", correlation(v, xi), 0.9999);
  c.not_converged = !r.converged || !r.resolved;
  c.seconds = detail::seconds_since(t0);
  return c;
}

inline CriterionResult criterion_morse_index(const VerifyConfig& cfg, const CriticalParams& p) {
  CriterionResult c{4, "Morse index", {}, false, 0.0};
  const auto t0 = std::chrono::steady_clock::now();
  const Grid1D g = Grid1D::uniform(Chart::s, cfg.grid_n, p);
  const IndexOptions opts{BoundaryCondition::robin, cfg.tol, cfg.threads};
  const IndexReport r = morse_index(cfg.modes, g, p, opts);
  c.equal("mode 0 negatives", static_cast<double>(r.per_mode_negative[0]), 2.0);
  c.equal("mode 1 negatives", static_cast<double>(r.per_mode_negative[1]), 1.0);
  std::size_t tail = 0;
  for (std::size_t n = 2; n < r.per_mode_negative.size(); ++n) tail += r.per_mode_negative[n];
  c.equal("negatives in modes >= 2", static_cast<double>(tail), 0.0);
  c.equal("total index", static_cast<double>(r.total_index), 4.0);
  c.truth("identical on three refinements", r.converged);
  c.at_most("Richardson error estimate", r.discretization_error, cfg.tol);
  for (int m : {5, 10, 20}) {
    const IndexReport rm = morse_index(m, g, p, opts);
    c.equal("total index, max_mode " + std::to_string(m), static_cast<double>(rm.total_index), 4.0);
  }
  c.not_converged = !r.converged || !r.resolved;
  c.seconds = detail::seconds_since(t0);
  c.at_most("runtime [s]", c.seconds, 5.0);
  return c;
}

inline CriterionResult criterion_q2_positivity(const VerifyConfig& cfg, const CriticalParams& p) {
  CriterionResult c{5, "mode-2 positivity", {}, false, 0.0};
  const auto t0 = std::chrono::steady_clock::now();
  const Grid1D g = Grid1D::uniform(Chart::s, cfg.grid_n, p);
  const TriPencil P = assemble(ModeProblem::make(2, Chart::s, BoundaryCondition::robin), g, p);
  c.at_least("lowest mode-2 Robin eigenvalue (margin)", pencil_eigs(P, 1, 1e-12)[0], 0.0);

  const Grid1D gp = Grid1D::uniform(Chart::phi, 16385, p);
  const auto h = detail::nodal(gp, [](double x) { return 1.0 / (std::sin(x) * std::sin(x)); });
  const CertificateResult cert = ground_state_certificate(2, h, gp, p);
  c.at_least("supersolution residual", cert.interior_min, -cert.interior_tol);
  c.near("left boundary margin", cert.left_margin, 1.0 / p.T, 1e-6);
  c.near("right boundary margin", cert.right_margin, 1.0 / p.T, 1e-6);
  c.truth("certificate passes", cert.pass);
  c.seconds = detail::seconds_since(t0);
  return c;
}

inline CriterionResult criterion_legendre(const CriticalParams& p) {
  CriterionResult c{6, "Legendre substitution", {}, false, 0.0};
  const auto t0 = std::chrono::steady_clock::now();
  const auto r512 = legendre_substitution_check(512, p);
  const auto r1024 = legendre_substitution_check(1024, p);
  const auto r2048 = legendre_substitution_check(2048, p);
  c.at_most("relative residual (1024)", r1024.residual, 1e-4);
  c.near("halving order (512/1024)", detail::observed_order(r512.residual, r1024.residual), 2.0, 0.2);
  c.near("halving order (1024/2048)", detail::observed_order(r1024.residual, r2048.residual), 2.0, 0.2);
  c.seconds = detail::seconds_since(t0);
  return c;
}

inline CriterionResult criterion_gram(const CriticalParams& p) {
  CriterionResult c{7, "Q-Gram on the negative space", {}, false, 0.0};
  const auto t0 = std::chrono::steady_clock::now();
  const GramReport G = gram(FormKind::q, fields_of({FieldKind::const_one, FieldKind::vx, FieldKind::vy, FieldKind::vz}, p),
                            Resolution{}, p);
  c.equal("negative eigenvalues", static_cast<double>(G.inertia.n_neg), 4.0);
  c.equal("zero eigenvalues", static_cast<double>(G.inertia.n_zero), 0.0);
  c.equal("positive eigenvalues", static_cast<double>(G.inertia.n_pos), 0.0);
  c.at_most("max off-diagonal / max diagonal", G.max_offdiag_abs / G.max_diag_abs, 1e-5);
  const double q1 = -12.0 * pi / p.T;
  c.near("Q(1) relative error", (G.matrix(0, 0) - q1) / std::abs(q1), 0.0, 1e-5);
  c.seconds = detail::seconds_since(t0);
  return c;
}

inline CriterionResult criterion_dirichlet_problem(const VerifyConfig& cfg, const CriticalParams& p) {
  CriterionResult c{8, "Dirichlet problem dichotomy", {}, false, 0.0};
  const auto t0 = std::chrono::steady_clock::now();
  const Grid1D g = Grid1D::uniform(Chart::s, cfg.grid_n, p);
  bool rejected = false;
  try {
    solve_dirichlet({{0, Angular::cos, 1.0, 1.0}}, g, p);
  } catch (const Error& e) {
    rejected = e.code() == ErrorCode::not_solvable;
  }
  c.truth("constant data rejected (NOT_SOLVABLE)", rejected);

  const std::vector<BoundaryMode> data{
      {0, Angular::cos, 1.0, -1.0}, {1, Angular::cos, 1.0, 1.0}, {2, Angular::sin, 0.5, -0.25}};
  const DirichletSolution coarse = solve_dirichlet(data, g, p);
  const DirichletSolution fine = solve_dirichlet(data, g.refined(), p);
  c.at_most("|flux|", std::abs(coarse.flux), 1e-8 * std::max(1.0, coarse.flux_scale));
  c.near("solution error order", detail::observed_order(coarse.max_reference_error, fine.max_reference_error), 2.0,
         0.3);
  c.seconds = detail::seconds_since(t0);
  return c;
}

inline CriterionResult criterion_lower_bound(const VerifyConfig& cfg, const CriticalParams& p) {
  CriterionResult c{9, "lower bound from the auxiliary form", {}, false, 0.0};
  const auto t0 = std::chrono::steady_clock::now();
  const auto basis = fields_of({FieldKind::const_one, FieldKind::coord_x, FieldKind::coord_y, FieldKind::coord_z}, p);
  const GramReport S = gram(FormKind::s, basis, Resolution{}, p);
  c.equal("S-Gram positive eigenvalues", static_cast<double>(S.inertia.n_pos), 0.0);
  c.equal("dim span{1, x, y, z}", static_cast<double>(S.l2_rank), 4.0);
  for (const auto& f : basis) {
    const GapReport gap = strict_gap_check(SurfaceFunction::from_field(f, p), Resolution{}, p);
    c.at_least("gap S - Q for " + f.label(), gap.gap, 1e-8);
  }
  const IndexReport r = morse_index(cfg.modes, Grid1D::uniform(Chart::s, cfg.grid_n, p), p,
                                    IndexOptions{BoundaryCondition::robin, cfg.tol, cfg.threads});
  c.at_least("Robin index consistent with index >= 4", static_cast<double>(r.total_index), 4.0);
  c.seconds = detail::seconds_since(t0);
  return c;
}

inline CriterionResult criterion_disk(const VerifyConfig& cfg, const CriticalParams& p) {
  CriterionResult c{10, "flat disk", {}, false, 0.0};
  const auto t0 = std::chrono::steady_clock::now();
  const IndexReport r = disk_index(Grid1D(Chart::radial, cfg.grid_n, 0.0, 1.0), cfg.modes, p,
                                   IndexOptions{BoundaryCondition::robin, cfg.tol, cfg.threads});
  c.equal("total index", static_cast<double>(r.total_index), 1.0);
  c.equal("mode 0 negatives", static_cast<double>(r.per_mode_negative[0]), 1.0);
  c.near("mode 1 lowest eigenvalue", r.lowest_eigenvalues[1][0], 0.0, r.zero_threshold);
  c.truth("counts stable under refinement", r.converged);
  c.not_converged = !r.converged;
  c.seconds = detail::seconds_since(t0);
  return c;
}

inline CriterionResult criterion_sigma1(const VerifyConfig& cfg, const CriticalParams& p) {
  CriterionResult c{11, "first Steklov eigenvalue of the Laplacian", {}, false, 0.0};
  const auto t0 = std::chrono::steady_clock::now();
  const Sigma1Report s = sigma1_laplacian(Grid1D::uniform(Chart::s, cfg.grid_n, p), cfg.modes, p, cfg.threads, 1e-3);
  c.near("sigma_1", s.value, 1.0, 1e-3);
  const bool mode1 = std::find(s.attaining_modes.begin(), s.attaining_modes.end(), 1) != s.attaining_modes.end();
  c.truth("attained in mode 1", mode1);
  c.seconds = detail::seconds_since(t0);
  return c;
}

inline CriterionResult criterion_properties(const VerifyConfig& cfg, const CriticalParams& p) {
  CriterionResult c{12, "property suites", {}, false, 0.0};
  const auto t0 = std::chrono::steady_clock::now();
  const Resolution res;

  for (FieldKind k : {FieldKind::vx, FieldKind::vy, FieldKind::vz}) {
    const auto u = SurfaceFunction::from_field(ClosedFormField::make(k, p), p);
    const double rhs = -2.0 * l2_inner(u, u, res, p);
    c.at_most("Q(v) = -2|v|^2 relative error, " + to_string(k), std::abs(q_form(u, res, p) - rhs) / std::abs(rhs), 1e-6);
  }

  Rng rng(cfg.seed);
  const SurfaceFunction w = detail::random_profile_function(rng, 5, p);
  const double q2d = q_form(w, res, p);
  c.at_most("mode split of Q relative error", std::abs(q2d - mode_split_q(w, res, p)) / std::abs(q2d), 1e-8);

  const SurfaceFunction test = detail::random_profile_function(rng, 2, p);
  for (FieldKind k : {FieldKind::vx, FieldKind::vy, FieldKind::vz, FieldKind::rot_xz, FieldKind::rot_yz}) {
    const ClosedFormField f = ClosedFormField::make(k, p);
    const auto u = SurfaceFunction::from_field(f, p);
    const FormTerms t = bilinear_terms(u, test, res, p);
    const double rhs = (*f.steklov_eigenvalue - 1.0) * boundary_inner(u, test, res.n_theta, p);
    c.at_most("Green identity relative error, " + to_string(k),
              std::abs(t.q() - rhs) / std::max(std::abs(rhs), t.magnitude()), 1e-5);
  }

  // Brute-force oracles for the tridiagonal engine.
  std::size_t inertia_mismatch = 0;
  std::size_t count_mismatch = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 8);
    const TriMatrix M = detail::random_tridiagonal(rng, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M.dense(), Eigen::EigenvaluesOnly);
    Inertia brute;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      (es.eigenvalues()(i) < 0.0 ? brute.n_neg : brute.n_pos) += 1;
    }
    if (ldlt_inertia(M) != brute) ++inertia_mismatch;

    TriPencil P;
    P.A = M;
    std::vector<double> b(n);
    for (double& x : b) x = rng.uniform(0.5, 2.0);
    P.B = TriMatrix::diagonal(b);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> gs(P.A.dense(), P.B.dense(), Eigen::EigenvaluesOnly);
    const auto& ev = gs.eigenvalues();
    for (Eigen::Index i = 0; i + 1 < ev.size(); ++i) {
      if (ev(i + 1) - ev(i) < 1e-9) continue;
      if (pencil_count_below(P, 0.5 * (ev(i) + ev(i + 1))) != static_cast<std::size_t>(i + 1)) ++count_mismatch;
    }
  }
  c.equal("inertia mismatches vs brute force (300 matrices, n <= 8)", static_cast<double>(inertia_mismatch), 0.0);
  c.equal("count mismatches vs brute force", static_cast<double>(count_mismatch), 0.0);

  const ComplementReport comp = complement_positivity_check(200, p, cfg.seed);
  c.at_least("min Q on complement of W / |u|^2 (200 samples)", comp.min_q, -comp.tolerance);
  c.seconds = detail::seconds_since(t0);
  return c;
}

/// Runs every criterion in order; `total verify time` is appended to criterion 12.
inline VerificationReport run_verification(const VerifyConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const CriticalParams& p = critical_catenoid();
  VerificationReport rep;
  rep.config = cfg;
  rep.criteria.push_back(criterion_constants());
  rep.criteria.push_back(criterion_steklov(p, cfg.threads));
  rep.criteria.push_back(criterion_dirichlet_stability(cfg, p));
  rep.criteria.push_back(criterion_morse_index(cfg, p));
  rep.criteria.push_back(criterion_q2_positivity(cfg, p));
  rep.criteria.push_back(criterion_legendre(p));
  rep.criteria.push_back(criterion_gram(p));
  rep.criteria.push_back(criterion_dirichlet_problem(cfg, p));
  rep.criteria.push_back(criterion_lower_bound(cfg, p));
  rep.criteria.push_back(criterion_disk(cfg, p));
  rep.criteria.push_back(criterion_sigma1(cfg, p));
  rep.criteria.push_back(criterion_properties(cfg, p));
  rep.seconds = detail::seconds_since(t0);
  rep.criteria.back().at_most("total verify time [s]", rep.seconds, 60.0);
  return rep;
}

}  // namespace catenoid
