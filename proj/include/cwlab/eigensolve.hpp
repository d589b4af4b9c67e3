#pragma once

// Symmetric tridiagonal eigensolver: Sturm-sequence bisection for the
// eigenvalues, inverse iteration with Gram-Schmidt inside close groups for the
// eigenvectors.
//
// For matrices that are exactly invariant under index reversal (the
// unperturbed Curie-Weiss matrix) the `symmetrized` policy solves the even and
// odd sectors separately, so every eigenvector is exactly symmetric or
// antisymmetric even when the two lowest levels agree to machine precision.
// The `raw` policy works on the full matrix and returns whatever orthonormal
// basis inverse iteration lands on inside a numerically degenerate pair.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "cwlab/error.hpp"
#include "cwlab/model.hpp"

namespace cwlab {

enum class ClusterPolicy { raw, symmetrized };

inline const char* to_string(ClusterPolicy p) {
  return p == ClusterPolicy::raw ? "raw" : "symmetrized";
}

inline ClusterPolicy parse_policy(const std::string& s) {
  if (s == "raw") return ClusterPolicy::raw;
  if (s == "symmetrized") return ClusterPolicy::symmetrized;
  throw ParameterError("unknown cluster policy '" + s + "' (expected raw|symmetrized)");
}

struct Spectrum {
  std::vector<double> values;                // ascending
  std::vector<std::vector<double>> vectors;  // empty unless requested
  std::vector<double> residuals;             // ||T v - lambda v||, one per vector

  std::size_t size() const noexcept { return values.size(); }
  bool has_vectors() const noexcept { return !vectors.empty(); }
};

/// Residual bound used by the solver: ||Tv - lambda v|| <= kResidualTol * (|lambda| + ||T||).
inline constexpr double kResidualTol = 1e-11;

/// Two eigenvalues closer than this multiple of eps*||T|| are reported as a
/// numerically degenerate cluster.
inline constexpr double kClusterFactor = 1e3;

/// Flip the sign so the largest-magnitude entry is positive. Ties (within a
/// relative 1e-9) go to the smallest index.
inline void apply_sign_convention(std::span<double> v) {
  double amax = 0.0;
  for (double x : v) amax = std::max(amax, std::abs(x));
  if (amax == 0.0) return;
  for (double x : v) {
    if (std::abs(x) >= amax * (1.0 - 1e-9)) {
      if (x < 0.0)
        for (double& y : v) y = -y;
      return;
    }
  }
}

namespace detail {

inline double safe_min() { return std::numeric_limits<double>::min(); }
inline double eps() { return std::numeric_limits<double>::epsilon(); }

struct SturmData {
  std::vector<double> d;
  std::vector<double> e2;
  double pivmin = 0.0;
  double lo = 0.0;  // Gershgorin interval, padded
  double hi = 0.0;

  explicit SturmData(const TridiagonalMatrix& m) : d(m.diag().begin(), m.diag().end()) {
    const auto off = m.off();
    e2.resize(off.size());
    double emax = 1.0;
    for (std::size_t i = 0; i < off.size(); ++i) {
      e2[i] = off[i] * off[i];
      emax = std::max(emax, e2[i]);
    }
    pivmin = safe_min() * emax;
    const std::size_t n = d.size();
    lo = std::numeric_limits<double>::max();
    hi = std::numeric_limits<double>::lowest();
    for (std::size_t i = 0; i < n; ++i) {
      double r = 0.0;
      if (i > 0) r += std::abs(off[i - 1]);
      if (i + 1 < n) r += std::abs(off[i]);
      lo = std::min(lo, d[i] - r);
      hi = std::max(hi, d[i] + r);
    }
    const double pad = 2.0 * eps() * std::max(std::abs(lo), std::abs(hi)) * static_cast<double>(n) + 2.0 * pivmin;
    lo -= pad;
    hi += pad;
  }

  /// Number of eigenvalues strictly below mu.
  std::size_t count(double mu) const noexcept {
    std::size_t neg = 0;
    double q = d[0] - mu;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++neg;
    for (std::size_t i = 1; i < d.size(); ++i) {
      q = (d[i] - mu) - e2[i - 1] / q;
      if (std::abs(q) < pivmin) q = -pivmin;
      if (q < 0.0) ++neg;
    }
    return neg;
  }

  /// j-th eigenvalue (0-based), bisected until the bracket cannot shrink further.
  double bisect(std::size_t j, double lower, double upper) const noexcept {
    double a = lower, b = upper;
    for (int it = 0; it < 4000; ++it) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) return b;  // adjacent doubles; a zero pivot counts as negative, so lambda_j is in (a, b]
      if (b - a <= pivmin) break;
      if (count(mid) > j)
        b = mid;
      else
        a = mid;
    }
    return 0.5 * (a + b);
  }
};

/// LU factorization with partial pivoting of (T - shift*I), used for inverse iteration.
class ShiftedLU {
 public:
  ShiftedLU(const TridiagonalMatrix& m, double shift, double tiny) {
    const std::size_t n = m.size();
    a_.assign(n, 0.0);
    b_.assign(n, 0.0);
    c_.assign(n, 0.0);
    mult_.assign(n, 0.0);
    swap_.assign(n, false);
    const auto d = m.diag();
    const auto e = m.off();
    for (std::size_t i = 0; i < n; ++i) a_[i] = d[i] - shift;
    for (std::size_t i = 0; i + 1 < n; ++i) b_[i] = e[i];
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const double sub = e[k];
      if (std::abs(a_[k]) >= std::abs(sub)) {
        if (a_[k] == 0.0) a_[k] = tiny;
        mult_[k] = sub / a_[k];
        a_[k + 1] -= mult_[k] * b_[k];
      } else {
        // rows k and k+1 exchanged
        swap_[k] = true;
        mult_[k] = a_[k] / sub;
        const double next_diag = a_[k + 1];
        const double next_super = (k + 2 < n) ? b_[k + 1] : 0.0;
        a_[k] = sub;
        const double old_super = b_[k];
        b_[k] = next_diag;
        c_[k] = next_super;
        a_[k + 1] = old_super - mult_[k] * next_diag;
        if (k + 2 < n) b_[k + 1] = -mult_[k] * next_super;
      }
    }
    for (double& v : a_)
      if (std::abs(v) < tiny) v = std::copysign(tiny, v == 0.0 ? 1.0 : v);
  }

  void solve(std::span<double> y) const noexcept {
    const std::size_t n = a_.size();
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (swap_[k]) std::swap(y[k], y[k + 1]);
      y[k + 1] -= mult_[k] * y[k];
    }
    for (std::size_t kk = n; kk-- > 0;) {
      double s = y[kk];
      if (kk + 1 < n) s -= b_[kk] * y[kk + 1];
      if (kk + 2 < n) s -= c_[kk] * y[kk + 2];
      y[kk] = s / a_[kk];
    }
  }

 private:
  std::vector<double> a_, b_, c_, mult_;
  std::vector<bool> swap_;
};

inline double dot(std::span<const double> x, std::span<const double> y) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm2(std::span<const double> x) noexcept { return std::sqrt(dot(x, x)); }

inline double residual(const TridiagonalMatrix& m, double lambda, std::span<const double> v) {
  auto tv = m.apply(v);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double r = tv[i] - lambda * v[i];
    s += r * r;
  }
  return std::sqrt(s);
}

inline std::vector<double> bisect_lowest(const TridiagonalMatrix& m, std::size_t k) {
  SturmData s(m);
  std::vector<double> vals(k);
  double lower = s.lo;
  for (std::size_t j = 0; j < k; ++j) {
    vals[j] = s.bisect(j, lower, s.hi);
    // the (j+1)-th eigenvalue cannot lie below a point with count <= j
    lower = std::nextafter(vals[j], s.lo);
    if (s.count(lower) > j + 1) lower = s.lo;
  }
  return vals;
}

/// Inverse iteration for given eigenvalues (ascending). Vectors whose
/// eigenvalues chain together with gaps <= 1e-3*||T|| are orthogonalized
/// against each other.
inline std::vector<std::vector<double>> inverse_iteration(const TridiagonalMatrix& m,
                                                          std::span<const double> values,
                                                          std::uint64_t seed) {
  const std::size_t n = m.size();
  const double tnorm = std::max(m.norm(), safe_min());
  const double ortol = 1e-3 * tnorm;
  const double tiny = eps() * tnorm;
  std::vector<std::vector<double>> vecs;
  vecs.reserve(values.size());
  std::size_t group_start = 0;
  double prev_shift = 0.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);

  if (n == 1) {
    for (std::size_t j = 0; j < values.size(); ++j) vecs.push_back({1.0});
    return vecs;
  }

  for (std::size_t j = 0; j < values.size(); ++j) {
    const double lambda = values[j];
    double shift = lambda;
    if (j > 0 && lambda - values[j - 1] > ortol) group_start = j;
    if (j > group_start) {
      // keep successive shifts distinct so the factorizations differ
      const double pertol = 10.0 * std::abs(eps() * lambda) + 10.0 * tiny * 1e-3;
      if (shift - prev_shift < pertol) shift = prev_shift + pertol;
    }
    prev_shift = shift;

    ShiftedLU lu(m, shift, tiny);
    std::vector<double> x(n);
    for (double& v : x) v = unif(rng);

    auto orthonormalize = [&](std::vector<double>& v) {
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t g = group_start; g < j; ++g) {
          const double p = dot(vecs[g], v);
          for (std::size_t i = 0; i < n; ++i) v[i] -= p * vecs[g][i];
        }
      const double nv = norm2(v);
      if (nv == 0.0 || !std::isfinite(nv)) return false;
      for (double& vi : v) vi /= nv;
      return true;
    };

    if (!orthonormalize(x)) throw SolverError("inverse iteration: degenerate start vector");
    const double target = kResidualTol * (std::abs(lambda) + tnorm);
    bool converged = false;
    int extra = 0;
    for (int it = 0; it < 12; ++it) {
      lu.solve(x);
      if (!orthonormalize(x))
        throw SolverError("inverse iteration lost its vector for eigenvalue #" + std::to_string(j));
      if (!converged && residual(m, lambda, x) <= target * 1e-2) converged = true;
      if (converged && ++extra >= 2) break;
    }
    if (residual(m, lambda, x) > target) {
      throw SolverError("inverse iteration stagnated for eigenvalue #" + std::to_string(j) + " (" +
                        std::to_string(lambda) + ") in cluster starting at #" +
                        std::to_string(group_start));
    }
    vecs.push_back(std::move(x));
  }
  return vecs;
}

/// Even/odd sector matrices of a mirror-symmetric tridiagonal matrix.
struct MirrorSectors {
  TridiagonalMatrix even;
  TridiagonalMatrix odd;  // size 0 (default) when the full size is 1
  bool has_odd = false;
};

inline MirrorSectors split_mirror_sectors(const TridiagonalMatrix& m) {
  const std::size_t M = m.size();
  const std::size_t h = M / 2;
  const auto d = m.diag();
  const auto e = m.off();
  MirrorSectors s;
  if (M == 1) {
    s.even = m;
    return s;
  }
  if (M % 2 == 1) {
    std::vector<double> de(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(h) + 1);
    std::vector<double> ee(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(h));
    ee[h - 1] *= std::sqrt(2.0);
    std::vector<double> dodd(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(h));
    std::vector<double> eodd(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(h) - 1);
    s.even = TridiagonalMatrix(std::move(de), std::move(ee));
    s.odd = TridiagonalMatrix(std::move(dodd), std::move(eodd));
  } else {
    std::vector<double> de(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(h));
    std::vector<double> dodd = de;
    de[h - 1] += e[h - 1];
    dodd[h - 1] -= e[h - 1];
    std::vector<double> ee(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(h) - 1);
    s.even = TridiagonalMatrix(std::move(de), ee);
    s.odd = TridiagonalMatrix(std::move(dodd), std::move(ee));
  }
  s.has_odd = true;
  return s;
}

inline std::vector<double> expand_sector_vector(std::span<const double> u, std::size_t M, bool odd) {
  std::vector<double> v(M, 0.0);
  const double r = 1.0 / std::sqrt(2.0);
  const std::size_t h = M / 2;
  for (std::size_t i = 0; i < h; ++i) {
    v[i] = u[i] * r;
    v[M - 1 - i] = (odd ? -u[i] : u[i]) * r;
  }
  if (M % 2 == 1 && !odd) v[h] = u[h];
  return v;
}

}  // namespace detail

/// Number of eigenvalues strictly below mu (Sturm sign-change count).
inline std::size_t sturm_count(const TridiagonalMatrix& m, double mu) {
  return detail::SturmData(m).count(mu);
}

/// Lowest k eigenvalues by bisection, ascending.
inline std::vector<double> eigenvalues_lowest(const TridiagonalMatrix& m, std::size_t k) {
  if (k < 1 || k > m.size())
    throw ParameterError("eigenvalue count k=" + std::to_string(k) + " out of range [1, " +
                         std::to_string(m.size()) + "]");
  return detail::bisect_lowest(m, k);
}

/// Lowest k eigenpairs. With `symmetrized` and an exactly mirror-symmetric
/// matrix the vectors are computed per sector; otherwise the policy falls back
/// to `raw`.
inline Spectrum eig_lowest(const TridiagonalMatrix& m, std::size_t k, bool want_vectors,
                           ClusterPolicy policy = ClusterPolicy::symmetrized) {
  if (k < 1 || k > m.size())
    throw ParameterError("eigenpair count k=" + std::to_string(k) + " out of range [1, " +
                         std::to_string(m.size()) + "]");
  Spectrum out;
  if (!want_vectors) {
    out.values = detail::bisect_lowest(m, k);
    return out;
  }

  if (policy == ClusterPolicy::symmetrized && m.size() > 1 && is_mirror_symmetric(m)) {
    const std::size_t M = m.size();
    auto sectors = detail::split_mirror_sectors(m);
    struct Pair {
      double value;
      std::vector<double> vec;
      bool odd;
    };
    std::vector<Pair> pairs;
    auto solve_sector = [&](const TridiagonalMatrix& t, bool odd) {
      const std::size_t ks = std::min(k, t.size());
      auto vals = detail::bisect_lowest(t, ks);
      auto vecs = detail::inverse_iteration(t, vals, odd ? 0x0ddULL : 0xe7e7ULL);
      for (std::size_t i = 0; i < ks; ++i)
        pairs.push_back({vals[i], detail::expand_sector_vector(vecs[i], M, odd), odd});
    };
    solve_sector(sectors.even, false);
    if (sectors.has_odd) solve_sector(sectors.odd, true);
    std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
      if (a.value != b.value) return a.value < b.value;
      return !a.odd && b.odd;
    });
    pairs.resize(k);
    for (auto& p : pairs) {
      apply_sign_convention(p.vec);
      out.residuals.push_back(detail::residual(m, p.value, p.vec));
      out.values.push_back(p.value);
      out.vectors.push_back(std::move(p.vec));
    }
    return out;
  }

  out.values = detail::bisect_lowest(m, k);
  out.vectors = detail::inverse_iteration(m, out.values, 0x5eedULL);
  for (std::size_t j = 0; j < k; ++j) {
    apply_sign_convention(out.vectors[j]);
    out.residuals.push_back(detail::residual(m, out.values[j], out.vectors[j]));
  }
  return out;
}

inline Spectrum eig_full(const TridiagonalMatrix& m, bool want_vectors = true,
                         ClusterPolicy policy = ClusterPolicy::symmetrized) {
  return eig_lowest(m, m.size(), want_vectors, policy);
}

/// |lambda_1 - lambda_0| from bisection.
inline double splitting(const TridiagonalMatrix& m) {
  if (m.size() < 2) throw ParameterError("splitting needs a matrix of size >= 2");
  auto v = detail::bisect_lowest(m, 2);
  return std::abs(v[1] - v[0]);
}

/// Width below which two eigenvalues count as numerically degenerate.
inline double degeneracy_threshold(const TridiagonalMatrix& m) {
  return kClusterFactor * std::numeric_limits<double>::epsilon() * m.norm();
}

/// Index ranges [first, last] of eigenvalues that are numerically degenerate.
inline std::vector<std::pair<std::size_t, std::size_t>> degenerate_clusters(
    std::span<const double> values, double threshold) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t i = 0;
  while (i < values.size()) {
    std::size_t j = i;
    while (j + 1 < values.size() && values[j + 1] - values[j] <= threshold) ++j;
    if (j > i) out.emplace_back(i, j);
    i = j + 1;
  }
  return out;
}

}  // namespace cwlab
