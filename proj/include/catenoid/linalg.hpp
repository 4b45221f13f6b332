#pragma once

// Symmetric tridiagonal pencils (A, B): inertia by LDLᵀ, eigenvalues by bisection on
// Sylvester counts, Schur reduction onto boundary nodes for Steklov problems.

#include <catenoid/error.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace catenoid {

struct TriMatrix {
  std::vector<double> diag;
  std::vector<double> offdiag;

  TriMatrix() = default;
  TriMatrix(std::vector<double> d, std::vector<double> e) : diag(std::move(d)), offdiag(std::move(e)) {
    if (diag.empty()) throw std::invalid_argument("TriMatrix: empty");
    if (offdiag.size() + 1 != diag.size()) throw std::invalid_argument("TriMatrix: offdiag must have n-1 entries");
  }

  static TriMatrix diagonal(std::vector<double> d) {
    const std::size_t n = d.size();
    return TriMatrix(std::move(d), std::vector<double>(n - 1, 0.0));
  }
  static TriMatrix identity(std::size_t n) { return diagonal(std::vector<double>(n, 1.0)); }

  std::size_t size() const { return diag.size(); }

  /// max |diag| + max |offdiag|
  double scale() const {
    double dmax = 0.0;
    double emax = 0.0;
    for (double d : diag) dmax = std::max(dmax, std::abs(d));
    for (double e : offdiag) emax = std::max(emax, std::abs(e));
    return dmax + emax;
  }

  double at(std::size_t i, std::size_t j) const {
    if (i == j) return diag[i];
    if (i + 1 == j) return offdiag[i];
    if (j + 1 == i) return offdiag[j];
    return 0.0;
  }

  std::vector<double> apply(std::span<const double> x) const {
    const std::size_t n = size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      double acc = diag[i] * x[i];
      if (i > 0) acc += offdiag[i - 1] * x[i - 1];
      if (i + 1 < n) acc += offdiag[i] * x[i + 1];
      y[i] = acc;
    }
    return y;
  }

  double quadratic_form(std::span<const double> x) const {
    const auto y = apply(x);
    return std::inner_product(y.begin(), y.end(), x.begin(), 0.0);
  }

  /// this - lambda * other
  TriMatrix shifted(const TriMatrix& other, double lambda) const {
    TriMatrix out = *this;
    for (std::size_t i = 0; i < size(); ++i) out.diag[i] -= lambda * other.diag[i];
    for (std::size_t i = 0; i + 1 < size(); ++i) out.offdiag[i] -= lambda * other.offdiag[i];
    return out;
  }

  Eigen::MatrixXd dense() const {
    const auto n = static_cast<Eigen::Index>(size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      m(i, i) = diag[static_cast<std::size_t>(i)];
      if (i + 1 < n) m(i, i + 1) = m(i + 1, i) = offdiag[static_cast<std::size_t>(i)];
    }
    return m;
  }
};

enum class BKind { positive_definite, boundary_semidefinite };

struct TriPencil {
  TriMatrix A;
  TriMatrix B;
  BKind b_kind = BKind::positive_definite;
  std::vector<std::size_t> boundary;  // rows carrying B when b_kind is boundary_semidefinite

  std::size_t size() const { return A.size(); }
};

struct Inertia {
  std::size_t n_neg = 0;
  std::size_t n_zero = 0;
  std::size_t n_pos = 0;

  std::size_t total() const { return n_neg + n_zero + n_pos; }
  bool operator==(const Inertia&) const = default;
};

inline constexpr double default_zero_tol = 1e-9;

/// Pivot tolerance for eigenvalue counting. LDLᵀ pivot signs of a tridiagonal matrix are
/// backward stable, so counts near an eigenvalue stay exact even for pivots far below
/// default_zero_tol·scale; only pivots at roundoff level are treated as zero.
inline constexpr double counting_zero_tol = 1e-15;

namespace detail {

inline void classify(double value, double threshold, Inertia& out) {
  if (std::abs(value) <= threshold) {
    ++out.n_zero;
  } else if (value < 0.0) {
    ++out.n_neg;
  } else {
    ++out.n_pos;
  }
}

}  // namespace detail

/// Sylvester inertia from the LDLᵀ pivots. A pivot that falls below
/// zero_tol · scale while still coupled to the next row is merged into a 2×2 block.
inline Inertia ldlt_inertia(const TriMatrix& M, double zero_tol = default_zero_tol) {
  if (!(zero_tol > 0.0 && zero_tol <= 1e-4)) {
    throw std::invalid_argument("ldlt_inertia: zero_tol must lie in (0, 1e-4]");
  }
  const std::size_t n = M.size();
  const double thr = zero_tol * M.scale();
  Inertia out;
  if (M.scale() == 0.0) {
    out.n_zero = n;
    return out;
  }

  double pivot = M.diag[0];
  std::size_t i = 0;
  while (i < n) {
    const bool last = i + 1 == n;
    const double coupling = last ? 0.0 : M.offdiag[i];
    if (std::abs(pivot) > thr || last || std::abs(coupling) <= thr) {
      detail::classify(pivot, thr, out);
      if (!last) {
        const double update = std::abs(pivot) > thr ? coupling * coupling / pivot : 0.0;
        pivot = M.diag[i + 1] - update;
      }
      ++i;
      continue;
    }

    // 2×2 block [[pivot, b], [b, c]]
    const double b = coupling;
    const double c = M.diag[i + 1];
    const double det = pivot * c - b * b;
    if (std::abs(det) <= thr * (std::abs(b) + std::abs(c))) {
      ++out.n_zero;
      detail::classify(pivot + c, thr, out);
    } else if (det < 0.0) {
      ++out.n_neg;
      ++out.n_pos;
    } else if (pivot + c > 0.0) {
      out.n_pos += 2;
    } else {
      out.n_neg += 2;
    }
    if (i + 2 < n) {
      const double e = M.offdiag[i + 1];
      pivot = M.diag[i + 2] - e * e * (pivot / det);
    }
    i += 2;
  }
  return out;
}

/// Throws std::invalid_argument when the pencil violates its declared B structure.
inline void check_pencil(const TriPencil& P) {
  if (P.A.size() != P.B.size()) throw std::invalid_argument("TriPencil: A and B differ in size");
  if (P.b_kind == BKind::positive_definite) {
    if (ldlt_inertia(P.B).n_pos != P.B.size()) {
      throw std::invalid_argument("TriPencil: B is not positive definite");
    }
    return;
  }
  for (std::size_t i = 0; i < P.B.size(); ++i) {
    const bool on_boundary = std::find(P.boundary.begin(), P.boundary.end(), i) != P.boundary.end();
    const bool row_nonzero = P.B.diag[i] != 0.0 || (i > 0 && P.B.offdiag[i - 1] != 0.0) ||
                             (i + 1 < P.B.size() && P.B.offdiag[i] != 0.0);
    if (row_nonzero && !on_boundary) {
      throw std::invalid_argument("TriPencil: semidefinite B has support off the boundary rows");
    }
  }
}

/// Number of negative pivots of A - λB; zero pivots are not counted.
inline std::size_t count_negative(const TriPencil& P, double lambda, double zero_tol = default_zero_tol) {
  return ldlt_inertia(P.A.shifted(P.B, lambda), zero_tol).n_neg;
}

/// Number of pencil eigenvalues strictly below λ.
inline std::size_t pencil_count_below(const TriPencil& P, double lambda, double zero_tol = default_zero_tol) {
  if (P.b_kind != BKind::positive_definite) {
    throw std::invalid_argument("pencil_count_below: B must be positive definite");
  }
  const Inertia in = ldlt_inertia(P.A.shifted(P.B, lambda), zero_tol);
  if (in.n_zero > 0) {
    throw Error(ErrorCode::shift_singular, "shift " + std::to_string(lambda) + " hits a pencil eigenvalue");
  }
  return in.n_neg;
}

/// The k smallest pencil eigenvalues, each bracketed by bisection to width tol.
inline std::vector<double> pencil_eigs(const TriPencil& P, std::size_t k, double tol) {
  if (P.b_kind != BKind::positive_definite) {
    throw std::invalid_argument("pencil_eigs: B must be positive definite");
  }
  if (k > P.size()) throw std::invalid_argument("pencil_eigs: k exceeds the dimension");
  if (!(tol > 0.0)) throw std::invalid_argument("pencil_eigs: tol must be positive");
  std::vector<double> out;
  if (k == 0) return out;

  double lower = -1.0;
  while (count_negative(P, lower, counting_zero_tol) > 0) lower *= 2.0;
  double upper = 1.0;
  while (count_negative(P, upper, counting_zero_tol) < k) upper *= 2.0;

  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    double lo = i == 0 ? lower : std::max(lower, out.back() - tol);
    double hi = upper;
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (count_negative(P, mid, counting_zero_tol) > i ? hi : lo) = mid;
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

/// Solves M x = rhs by LDLᵀ without pivoting.
inline std::vector<double> solve_tridiagonal(const TriMatrix& M, std::span<const double> rhs) {
  const std::size_t n = M.size();
  if (rhs.size() != n) throw std::invalid_argument("solve_tridiagonal: size mismatch");
  std::vector<double> d(n);
  std::vector<double> l(n > 0 ? n - 1 : 0);
  const double tiny = 1e-300;
  d[0] = M.diag[0];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) < tiny) throw Error(ErrorCode::singular, "solve_tridiagonal: zero pivot");
    l[i] = M.offdiag[i] / d[i];
    d[i + 1] = M.diag[i + 1] - l[i] * M.offdiag[i];
  }
  if (std::abs(d[n - 1]) < tiny) throw Error(ErrorCode::singular, "solve_tridiagonal: zero pivot");

  std::vector<double> x(rhs.begin(), rhs.end());
  for (std::size_t i = 1; i < n; ++i) x[i] -= l[i - 1] * x[i - 1];
  for (std::size_t i = 0; i < n; ++i) x[i] /= d[i];
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= l[i] * x[i + 1];
  return x;
}

/// Eigenvector of the pencil closest to `shift`, unit Euclidean norm.
/// B may be boundary-supported; A - shift·B must be nonsingular.
inline std::vector<double> inverse_iteration(const TriPencil& P, double shift, int iterations = 8) {
  const TriMatrix M = P.A.shifted(P.B, shift);
  std::vector<double> x(P.size(), 1.0);
  for (int it = 0; it < iterations; ++it) {
    x = solve_tridiagonal(M, P.B.apply(x));
    double norm = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
    if (norm == 0.0) throw Error(ErrorCode::singular, "inverse_iteration: B x vanished");
    const auto largest = std::max_element(x.begin(), x.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    if (*largest < 0.0) norm = -norm;
    for (double& v : x) v /= norm;
  }
  return x;
}

/// Dense Schur complement of A onto boundary rows, with B's boundary block.
struct BoundaryReduction {
  Eigen::MatrixXd S;
  Eigen::MatrixXd B;

  /// Generalised eigenvalues of (S, B), ascending.
  std::vector<double> eigenvalues() const {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(S, B, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    return std::vector<double>(ev.data(), ev.data() + ev.size());
  }
};

inline BoundaryReduction schur_reduce(const TriPencil& P, std::span<const std::size_t> boundary) {
  const std::size_t n = P.size();
  std::vector<bool> is_boundary(n, false);
  for (std::size_t b : boundary) {
    if (b >= n) throw std::invalid_argument("schur_reduce: boundary index out of range");
    is_boundary[b] = true;
  }
  std::vector<std::size_t> interior;
  std::vector<std::size_t> position(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_boundary[i]) {
      position[i] = interior.size();
      interior.push_back(i);
    }
  }
  const std::size_t m = interior.size();
  const auto nb = static_cast<Eigen::Index>(boundary.size());
  BoundaryReduction out;
  out.S = Eigen::MatrixXd::Zero(nb, nb);
  out.B = Eigen::MatrixXd::Zero(nb, nb);
  for (Eigen::Index p = 0; p < nb; ++p) {
    for (Eigen::Index q = 0; q < nb; ++q) {
      out.S(p, q) = P.A.at(boundary[static_cast<std::size_t>(p)], boundary[static_cast<std::size_t>(q)]);
      out.B(p, q) = P.B.at(boundary[static_cast<std::size_t>(p)], boundary[static_cast<std::size_t>(q)]);
    }
  }
  if (m == 0) return out;

  std::vector<double> d(m);
  std::vector<double> e(m > 0 ? m - 1 : 0, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    d[k] = P.A.diag[interior[k]];
    if (k + 1 < m && interior[k + 1] == interior[k] + 1) e[k] = P.A.offdiag[interior[k]];
  }
  const TriMatrix interior_block(std::move(d), std::move(e));
  if (ldlt_inertia(interior_block).n_zero > 0) {
    throw Error(ErrorCode::interior_singular, "interior block has a zero pivot (Dirichlet kernel)");
  }

  // Columns of A_IB: boundary row b couples only to b - 1 and b + 1.
  std::vector<std::vector<double>> coupling(boundary.size(), std::vector<double>(m, 0.0));
  for (std::size_t p = 0; p < boundary.size(); ++p) {
    const std::size_t b = boundary[p];
    if (b > 0 && !is_boundary[b - 1]) coupling[p][position[b - 1]] = P.A.offdiag[b - 1];
    if (b + 1 < n && !is_boundary[b + 1]) coupling[p][position[b + 1]] = P.A.offdiag[b];
  }
  for (std::size_t q = 0; q < boundary.size(); ++q) {
    const auto x = solve_tridiagonal(interior_block, coupling[q]);
    for (std::size_t p = 0; p < boundary.size(); ++p) {
      out.S(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) -=
          std::inner_product(coupling[p].begin(), coupling[p].end(), x.begin(), 0.0);
    }
  }
  out.S = 0.5 * (out.S + out.S.transpose()).eval();
  return out;
}

/// Discrete Steklov reduction onto a pair of boundary rows.
inline BoundaryReduction steklov_reduce(const TriPencil& P, std::array<std::size_t, 2> boundary_idx) {
  return schur_reduce(P, std::span<const std::size_t>(boundary_idx));
}

enum class Channel { even, odd };

/// Restriction of a mirror-symmetric tridiagonal matrix (M_ij = M_{n-1-i, n-1-j})
/// to its even or odd subspace, in the orthonormal basis (e_i ± e_{n-1-i})/√2
/// (plus e_c for the centre node of an odd-length even channel). Row 0 stays row 0.
inline TriMatrix fold(const TriMatrix& M, Channel channel) {
  const std::size_t n = M.size();
  const std::size_t half = n / 2;
  const bool has_centre = n % 2 == 1;
  const double sign = channel == Channel::even ? 1.0 : -1.0;
  const std::size_t m = (has_centre && channel == Channel::even) ? half + 1 : half;
  if (m == 0) throw std::invalid_argument("fold: empty channel");

  std::vector<double> d(m);
  std::vector<double> e(m - 1);
  for (std::size_t i = 0; i < half; ++i) {
    const std::size_t j = n - 1 - i;
    d[i] = 0.5 * (M.diag[i] + M.diag[j]);
    if (j == i + 1) d[i] += sign * M.offdiag[i];
    if (i + 1 < half) e[i] = 0.5 * (M.offdiag[i] + M.offdiag[j - 1]);
  }
  if (m == half + 1) {
    const std::size_t c = half;
    d[c] = M.diag[c];
    e[c - 1] = std::sqrt(0.5) * (M.offdiag[c - 1] + M.offdiag[c]);
  }
  return TriMatrix(std::move(d), std::move(e));
}

/// Inverse of `fold` on vectors: expands channel coordinates to the full grid.
inline std::vector<double> unfold(std::span<const double> v, std::size_t n, Channel channel) {
  const std::size_t half = n / 2;
  const double sign = channel == Channel::even ? 1.0 : -1.0;
  std::vector<double> x(n, 0.0);
  for (std::size_t i = 0; i < half; ++i) {
    x[i] = std::sqrt(0.5) * v[i];
    x[n - 1 - i] = sign * std::sqrt(0.5) * v[i];
  }
  if (n % 2 == 1 && channel == Channel::even) x[half] = v[half];
  return x;
}

/// Inertia of a small dense symmetric matrix, |μ| <= zero_threshold counted as zero.
inline Inertia dense_inertia(const Eigen::MatrixXd& G, double zero_threshold) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(G, Eigen::EigenvaluesOnly);
  Inertia out;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    detail::classify(solver.eigenvalues()(i), zero_threshold, out);
  }
  return out;
}

}  // namespace catenoid
