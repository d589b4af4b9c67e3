#pragma once

// Exact 2^N construction of the Curie-Weiss Hamiltonian
//   h = -(1/2N) (sum_x s3(x))^2 - B sum_x s1(x)
// on the full tensor-product space, the orbit (symmetric subspace) maps, and
// structural Perron-Frobenius checks. Oracle scale only: N <= 14.
//
// Basis: bit x of the index is the spin at site x, 0 = up, 1 = down, so
// popcount(index) = n- and the orbit label is k = n-. Tridiagonal vectors are
// indexed by n+ = N - k; use `orbit_from_tridiag` / `tridiag_from_orbit` to
// convert.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <cblas.h>
#include <lapacke.h>

#include "cwlab/eigensolve.hpp"
#include "cwlab/error.hpp"
#include "cwlab/model.hpp"

namespace cwlab {

inline constexpr int kMaxDenseN = 14;

/// Row-major dense real symmetric matrix of h_N.
struct DenseHamiltonian {
  std::size_t dim = 0;
  std::vector<double> entries;
  ModelParams params;

  double operator()(std::size_t i, std::size_t j) const noexcept { return entries[i * dim + j]; }
  double& at(std::size_t i, std::size_t j) noexcept { return entries[i * dim + j]; }
};

/// Ascending eigenvalues; eigenvector j is column j of the column-major `vectors`.
struct DenseSpectrum {
  std::size_t dim = 0;
  std::vector<double> values;
  std::vector<double> vectors;
  std::vector<double> residuals;

  std::span<const double> vector(std::size_t j) const {
    return {vectors.data() + j * dim, dim};
  }
  std::span<double> vector(std::size_t j) { return {vectors.data() + j * dim, dim}; }
};

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

class SymmetricSubspaceMap {
 public:
  explicit SymmetricSubspaceMap(int N) : N_(N) {
    if (N < 1 || N > kMaxDenseN)
      throw CapacityError("symmetric subspace map supports 1 <= N <= " + std::to_string(kMaxDenseN) +
                          ", got N=" + std::to_string(N));
    orbits_.resize(N + 1);
    const std::size_t dim = std::size_t{1} << N;
    for (std::size_t i = 0; i < dim; ++i) orbits_[std::popcount(i)].push_back(i);
    norms_.resize(N + 1);
    for (int k = 0; k <= N; ++k) norms_[k] = 1.0 / std::sqrt(binomial(N, k));
  }

  int N() const noexcept { return N_; }
  std::size_t dim() const noexcept { return std::size_t{1} << N_; }
  const std::vector<std::size_t>& orbit(int k) const { return orbits_.at(k); }
  double normalization(int k) const { return norms_.at(k); }

 private:
  int N_;
  std::vector<std::vector<std::size_t>> orbits_;
  std::vector<double> norms_;
};

/// Orbit-indexed coefficients (k = n-) to a vector of length 2^N.
inline std::vector<double> symmetrize_lift(std::span<const double> coeffs,
                                           const SymmetricSubspaceMap& map) {
  if (coeffs.size() != static_cast<std::size_t>(map.N()) + 1)
    throw DimensionError("symmetrize_lift: expected " + std::to_string(map.N() + 1) +
                         " coefficients, got " + std::to_string(coeffs.size()));
  std::vector<double> v(map.dim(), 0.0);
  for (int k = 0; k <= map.N(); ++k) {
    const double c = coeffs[k] * map.normalization(k);
    for (std::size_t i : map.orbit(k)) v[i] = c;
  }
  return v;
}

/// Adjoint of symmetrize_lift.
inline std::vector<double> project_symmetric(std::span<const double> v, const SymmetricSubspaceMap& map) {
  if (v.size() != map.dim())
    throw DimensionError("project_symmetric: expected length " + std::to_string(map.dim()) +
                         ", got " + std::to_string(v.size()));
  std::vector<double> c(map.N() + 1, 0.0);
  for (int k = 0; k <= map.N(); ++k) {
    double s = 0.0;
    for (std::size_t i : map.orbit(k)) s += v[i];
    c[k] = s * map.normalization(k);
  }
  return c;
}

/// n+-indexed (tridiagonal) vector to orbit order k = n-.
inline std::vector<double> orbit_from_tridiag(std::span<const double> c) {
  return {c.rbegin(), c.rend()};
}
inline std::vector<double> tridiag_from_orbit(std::span<const double> c) {
  return {c.rbegin(), c.rend()};
}

/// ||v - lift(project(v))||.
inline double symmetric_defect(std::span<const double> v, const SymmetricSubspaceMap& map) {
  auto back = symmetrize_lift(project_symmetric(v, map), map);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += (v[i] - back[i]) * (v[i] - back[i]);
  return std::sqrt(s);
}

inline DenseHamiltonian build_dense_cw(const ModelParams& params) {
  if (params.N < 1 || params.N > kMaxDenseN)
    throw CapacityError("dense construction supports 1 <= N <= " + std::to_string(kMaxDenseN) +
                        ", got N=" + std::to_string(params.N));
  params.validate();
  const int N = params.N;
  DenseHamiltonian h;
  h.params = params;
  h.dim = std::size_t{1} << N;
  h.entries.assign(h.dim * h.dim, 0.0);
  for (std::size_t i = 0; i < h.dim; ++i) {
    const int nplus = N - std::popcount(i);
    const double m = 2.0 * nplus - N;
    double diag = -m * m / (2.0 * N);
    if (params.flea) diag += flea_bump(static_cast<double>(nplus) / N, *params.flea);
    h.at(i, i) = diag;
    if (params.B != 0.0)
      for (int x = 0; x < N; ++x) h.at(i, i ^ (std::size_t{1} << x)) = -params.B;
  }
  return h;
}

struct NonnegativityResult {
  bool ok = true;
  std::optional<std::pair<std::size_t, std::size_t>> first_violation;
  double value = 0.0;  // entry of -h at the violation
};

/// Entrywise check that -h >= 0.
inline NonnegativityResult check_nonnegative(const DenseHamiltonian& m) {
  NonnegativityResult r;
  for (std::size_t i = 0; i < m.dim; ++i)
    for (std::size_t j = 0; j < m.dim; ++j)
      if (-m(i, j) < 0.0) {
        r.ok = false;
        r.first_violation = {i, j};
        r.value = -m(i, j);
        return r;
      }
  return r;
}

/// Off-diagonal part of -h non-negative (the diagonal can be shifted away).
inline NonnegativityResult check_offdiag_nonnegative(const DenseHamiltonian& m) {
  NonnegativityResult r;
  for (std::size_t i = 0; i < m.dim; ++i)
    for (std::size_t j = 0; j < m.dim; ++j)
      if (i != j && -m(i, j) < 0.0) {
        r.ok = false;
        r.first_violation = {i, j};
        r.value = -m(i, j);
        return r;
      }
  return r;
}

/// Connectivity of the non-zero pattern (symmetric, so reachability from 0 suffices).
inline bool check_irreducible(const DenseHamiltonian& m) {
  if (m.dim <= 1) return true;
  std::vector<char> seen(m.dim, 0);
  std::queue<std::size_t> q;
  q.push(0);
  seen[0] = 1;
  std::size_t reached = 1;
  while (!q.empty()) {
    const std::size_t i = q.front();
    q.pop();
    for (std::size_t j = 0; j < m.dim; ++j)
      if (!seen[j] && (m(i, j) != 0.0 || m(j, i) != 0.0)) {
        seen[j] = 1;
        ++reached;
        q.push(j);
      }
  }
  return reached == m.dim;
}

namespace detail {

inline void dense_residuals(std::span<const double> a, std::size_t n, DenseSpectrum& s,
                            std::size_t count) {
  // R = A V - V diag(lambda)
  std::vector<double> av(n * count);
  cblas_dgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, static_cast<int>(n), static_cast<int>(count),
              static_cast<int>(n), 1.0, a.data(), static_cast<int>(n), s.vectors.data(),
              static_cast<int>(n), 0.0, av.data(), static_cast<int>(n));
  s.residuals.assign(count, 0.0);
  for (std::size_t j = 0; j < count; ++j) {
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = av[j * n + i] - s.values[j] * s.vectors[j * n + i];
      r += t * t;
    }
    s.residuals[j] = std::sqrt(r);
  }
}

/// Full eigendecomposition of a symmetric n x n matrix (row- or column-major, same thing).
inline DenseSpectrum syevd(std::vector<double> a, std::size_t n) {
  DenseSpectrum s;
  s.dim = n;
  s.values.assign(n, 0.0);
  const std::vector<double> orig = a;
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', static_cast<lapack_int>(n), a.data(),
                                         static_cast<lapack_int>(n), s.values.data());
  if (info != 0)
    throw SolverError("dense eigensolver (dsyevd) failed, info=" + std::to_string(info) +
                      " for dimension " + std::to_string(n));
  s.vectors = std::move(a);
  dense_residuals(orig, n, s, n);
  return s;
}

inline bool flip_invariant(const DenseHamiltonian& m) {
  const std::size_t mask = m.dim - 1;
  for (std::size_t i = 0; i < m.dim; ++i)
    for (std::size_t j = 0; j < m.dim; ++j)
      if (m(i, j) != m(~i & mask, ~j & mask)) return false;
  return true;
}

}  // namespace detail

/// Full eigendecomposition, eigenvalues ascending, largest entry of each
/// eigenvector positive. If h commutes with the global spin flip the two flip
/// sectors are diagonalized separately (same result, about 4x faster).
inline DenseSpectrum dense_eig(const DenseHamiltonian& m) {
  if (m.dim == 0) throw DimensionError("dense_eig: empty matrix");
  if (m.dim > (std::size_t{1} << kMaxDenseN)) throw CapacityError("dense_eig: dimension too large");
  DenseSpectrum out;
  if (m.dim >= 4 && detail::flip_invariant(m)) {
    // sector basis: (e_i +/- e_{~i})/sqrt2 for the representatives i < dim/2
    const std::size_t n = m.dim, h = n / 2, mask = n - 1;
    struct Entry {
      double value;
      std::size_t sector, col;
    };
    std::vector<DenseSpectrum> sectors;
    for (int sign : {+1, -1}) {
      std::vector<double> blk(h * h);
      for (std::size_t a = 0; a < h; ++a)
        for (std::size_t b = 0; b < h; ++b)
          blk[a * h + b] = m(a, b) + sign * m(a, ~b & mask);
      sectors.push_back(detail::syevd(std::move(blk), h));
    }
    std::vector<Entry> order;
    for (std::size_t s = 0; s < 2; ++s)
      for (std::size_t j = 0; j < h; ++j) order.push_back({sectors[s].values[j], s, j});
    std::stable_sort(order.begin(), order.end(),
                     [](const Entry& x, const Entry& y) { return x.value < y.value; });
    out.dim = n;
    out.values.resize(n);
    out.vectors.assign(n * n, 0.0);
    out.residuals.resize(n);
    const double r2 = 1.0 / std::sqrt(2.0);
    for (std::size_t j = 0; j < n; ++j) {
      const auto& e = order[j];
      const auto u = sectors[e.sector].vector(e.col);
      const double sign = e.sector == 0 ? 1.0 : -1.0;
      auto v = out.vector(j);
      for (std::size_t a = 0; a < h; ++a) {
        v[a] = u[a] * r2;
        v[~a & mask] = sign * u[a] * r2;
      }
      out.values[j] = e.value;
      out.residuals[j] = sectors[e.sector].residuals[e.col];
    }
  } else {
    out = detail::syevd(m.entries, m.dim);
  }
  for (std::size_t j = 0; j < out.dim; ++j) apply_sign_convention(out.vector(j));
  return out;
}

/// Lowest `count` eigenpairs only (dsyevr); used for matrices without flip symmetry.
inline DenseSpectrum dense_eig_lowest(const DenseHamiltonian& m, std::size_t count) {
  if (count < 1 || count > m.dim) throw ParameterError("dense_eig_lowest: count out of range");
  std::vector<double> a = m.entries;
  const lapack_int n = static_cast<lapack_int>(m.dim);
  lapack_int found = 0;
  DenseSpectrum s;
  s.dim = m.dim;
  s.values.assign(m.dim, 0.0);
  s.vectors.assign(m.dim * count, 0.0);
  std::vector<lapack_int> isuppz(2 * count);
  const lapack_int info =
      LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'U', n, a.data(), n, 0.0, 0.0, 1,
                     static_cast<lapack_int>(count), 0.0, &found, s.values.data(), s.vectors.data(), n,
                     isuppz.data());
  if (info != 0 || static_cast<std::size_t>(found) != count)
    throw SolverError("dense eigensolver (dsyevr) failed, info=" + std::to_string(info));
  s.values.resize(count);
  detail::dense_residuals(m.entries, m.dim, s, count);
  for (std::size_t j = 0; j < count; ++j) apply_sign_convention(s.vector(j));
  return s;
}

struct PerronFrobeniusReport {
  bool offdiag_nonnegative = false;  // precondition: -h + c*I >= 0 for some c
  bool entrywise_nonnegative = false;
  bool irreducible = false;
  bool preconditions_met = false;
  double relative_gap = 0.0;
  bool simple = false;
  double min_component = 0.0;  // of the sign-fixed ground vector
  bool positive = false;
  double symmetric_defect = 0.0;
  bool symmetric = false;
  bool pass = false;
  std::string message;
};

inline constexpr double kSimplicityTol = 1e-9;
inline constexpr double kSymmetryTol = 1e-9;

/// Checks that the ground state is simple, strictly positive and in the
/// symmetric subspace. `spec` needs at least two eigenpairs.
inline PerronFrobeniusReport perron_frobenius_verify(const DenseHamiltonian& m, const DenseSpectrum& spec) {
  PerronFrobeniusReport r;
  r.offdiag_nonnegative = check_offdiag_nonnegative(m).ok;
  r.entrywise_nonnegative = check_nonnegative(m).ok;
  r.irreducible = check_irreducible(m);
  r.preconditions_met = r.offdiag_nonnegative && r.irreducible;
  if (!r.preconditions_met) {
    r.message = !r.offdiag_nonnegative ? "precondition failed: -h has a negative off-diagonal entry"
                                       : "precondition failed: h is reducible";
    return r;
  }
  if (spec.values.size() < 2 || spec.dim != m.dim) {
    r.message = "need at least two eigenpairs of matching dimension";
    return r;
  }
  double hnorm = 0.0;
  for (std::size_t i = 0; i < m.dim; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < m.dim; ++j) row += std::abs(m(i, j));
    hnorm = std::max(hnorm, row);
  }
  r.relative_gap = (spec.values[1] - spec.values[0]) / std::max(hnorm, 1e-300);
  r.simple = r.relative_gap > kSimplicityTol;
  std::vector<double> g(spec.vector(0).begin(), spec.vector(0).end());
  apply_sign_convention(g);
  r.min_component = *std::min_element(g.begin(), g.end());
  r.positive = r.min_component > 0.0;
  SymmetricSubspaceMap map(m.params.N);
  r.symmetric_defect = symmetric_defect(g, map);
  r.symmetric = r.symmetric_defect <= kSymmetryTol;
  r.pass = r.simple && r.positive && r.symmetric;
  if (!r.pass) {
    r.message = !r.simple ? "ground state not simple" : !r.positive ? "ground vector not strictly positive"
                                                                     : "ground vector not symmetric";
  } else {
    r.message = "ok";
  }
  return r;
}

struct SymmetricSpectrum {
  std::vector<double> values;      // ascending, one per symmetric eigenvector
  double weight_deviation = 0.0;   // max distance of a cluster weight from {0, 1}
};

/// Eigenvalues of the dense spectrum whose eigenspaces meet the symmetric
/// subspace. Eigenvalues are grouped into clusters (gap <= cluster_tol); in
/// each cluster the projected vectors p_i give W = sum p p^T and
/// G = sum lambda p p^T, and the symmetric eigenvalues are those of G on the
/// range of W.
inline SymmetricSpectrum symmetric_sector_spectrum(const DenseSpectrum& spec, const SymmetricSubspaceMap& map,
                                                   double cluster_tol) {
  SymmetricSpectrum out;
  const std::size_t nvals = spec.values.size();
  const int M = map.N() + 1;
  std::size_t i = 0;
  while (i < nvals) {
    std::size_t j = i;
    while (j + 1 < nvals && spec.values[j + 1] - spec.values[j] <= cluster_tol) ++j;
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(M, M);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(M, M);
    for (std::size_t c = i; c <= j; ++c) {
      const auto p = project_symmetric(spec.vector(c), map);
      const Eigen::Map<const Eigen::VectorXd> pv(p.data(), M);
      W += pv * pv.transpose();
      G += spec.values[c] * pv * pv.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ws(W);
    std::vector<int> keep;
    for (int a = 0; a < M; ++a) {
      const double w = ws.eigenvalues()[a];
      out.weight_deviation = std::max(out.weight_deviation, std::min(std::abs(w), std::abs(w - 1.0)));
      if (w > 0.5) keep.push_back(a);
    }
    if (!keep.empty()) {
      Eigen::MatrixXd U(M, static_cast<Eigen::Index>(keep.size()));
      for (std::size_t a = 0; a < keep.size(); ++a) U.col(static_cast<Eigen::Index>(a)) = ws.eigenvectors().col(keep[a]);
      Eigen::MatrixXd R = U.transpose() * G * U;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> rs(R, Eigen::EigenvaluesOnly);
      for (Eigen::Index a = 0; a < rs.eigenvalues().size(); ++a) out.values.push_back(rs.eigenvalues()[a]);
    }
    i = j + 1;
  }
  std::sort(out.values.begin(), out.values.end());
  return out;
}

}  // namespace cwlab
