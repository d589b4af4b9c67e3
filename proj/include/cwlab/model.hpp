#pragma once

// Curie-Weiss Hamiltonian restricted to the symmetric subspace: the
// (N+1)x(N+1) tridiagonal matrix indexed by the number of up spins n+,
// its 1/N scaling, and the compactly supported "flea" bump added on the
// diagonal.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cwlab/error.hpp"

namespace cwlab {

struct FleaParams {
  double b = 0.0;  // center
  double c = 0.0;  // half-width
  double d = 0.0;  // height

  void validate() const {
    if (!std::isfinite(b) || !std::isfinite(c) || !std::isfinite(d))
      throw ParameterError("flea parameters must be finite");
    if (c <= 0.0) throw ParameterError("flea half-width c must be > 0");
    if (!(b - c < 1.0 && b + c > 0.0))
      throw ParameterError("flea support [b-c, b+c] does not meet [0,1]");
  }
};

struct ModelParams {
  int N = 1;
  double B = 0.5;
  double J = 1.0;  // coupling; the model is dimensionless with J = 1
  std::optional<FleaParams> flea;

  void validate() const {
    if (N < 1) throw ParameterError("N must be >= 1, got " + std::to_string(N));
    if (!std::isfinite(B)) throw ParameterError("B must be finite");
    if (J != 1.0) throw ParameterError("only J = 1 is supported");
    if (flea) flea->validate();
  }
};

/// Real symmetric tridiagonal matrix; off[i] couples rows i and i+1.
class TridiagonalMatrix {
 public:
  TridiagonalMatrix() = default;

  TridiagonalMatrix(std::vector<double> diag, std::vector<double> off)
      : diag_(std::move(diag)), off_(std::move(off)) {
    if (diag_.empty()) throw DimensionError("tridiagonal matrix must have size >= 1");
    if (off_.size() + 1 != diag_.size())
      throw DimensionError("off-diagonal length must be size-1 (got " +
                           std::to_string(off_.size()) + " for size " +
                           std::to_string(diag_.size()) + ")");
    for (double v : diag_)
      if (!std::isfinite(v)) throw ParameterError("non-finite diagonal entry");
    for (double v : off_)
      if (!std::isfinite(v)) throw ParameterError("non-finite off-diagonal entry");
  }

  std::size_t size() const noexcept { return diag_.size(); }
  std::span<const double> diag() const noexcept { return diag_; }
  std::span<const double> off() const noexcept { return off_; }
  std::vector<double>& mutable_diag() noexcept { return diag_; }
  std::vector<double>& mutable_off() noexcept { return off_; }

  double operator()(std::size_t i, std::size_t j) const {
    if (i == j) return diag_[i];
    if (i + 1 == j) return off_[i];
    if (j + 1 == i) return off_[j];
    return 0.0;
  }

  /// Infinity norm (max absolute row sum); equals the 1-norm by symmetry.
  double norm() const noexcept {
    double best = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
      double row = std::abs(diag_[i]);
      if (i > 0) row += std::abs(off_[i - 1]);
      if (i + 1 < size()) row += std::abs(off_[i]);
      best = std::max(best, row);
    }
    return best;
  }

  double row_sum(std::size_t i) const noexcept {
    double s = diag_[i];
    if (i > 0) s += off_[i - 1];
    if (i + 1 < size()) s += off_[i];
    return s;
  }

  std::vector<double> apply(std::span<const double> x) const {
    if (x.size() != size()) throw DimensionError("matvec: vector length mismatch");
    const std::size_t n = size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = diag_[i] * x[i];
      if (i > 0) s += off_[i - 1] * x[i - 1];
      if (i + 1 < n) s += off_[i] * x[i + 1];
      y[i] = s;
    }
    return y;
  }

  friend bool operator==(const TridiagonalMatrix&, const TridiagonalMatrix&) = default;

 private:
  std::vector<double> diag_;
  std::vector<double> off_;
};

inline TridiagonalMatrix scale(const TridiagonalMatrix& m, double factor) {
  if (!std::isfinite(factor) || factor == 0.0)
    throw ParameterError("scale factor must be finite and non-zero");
  std::vector<double> d(m.diag().begin(), m.diag().end());
  std::vector<double> o(m.off().begin(), m.off().end());
  for (double& v : d) v *= factor;
  for (double& v : o) v *= factor;
  return TridiagonalMatrix(std::move(d), std::move(o));
}

/// Smooth bump d*exp(1/c^2 - 1/(c^2-(x-b)^2)) on |x-b| < c, zero elsewhere.
/// Points outside [0,1] are outside the spin grid and evaluate to zero.
/// Near the support edge the value underflows to 0.
inline double flea_bump(double x, const FleaParams& flea) {
  if (x < 0.0 || x > 1.0) return 0.0;
  const double dx = x - flea.b;
  if (!(std::abs(dx) < flea.c)) return 0.0;
  const double c2 = flea.c * flea.c;
  return flea.d * std::exp(1.0 / c2 - 1.0 / (c2 - dx * dx));
}

/// Grid indices k with |k/N - b| < c, i.e. the support of the bump on the spin grid.
inline std::vector<int> flea_support_indices(int N, const FleaParams& flea) {
  std::vector<int> ks;
  for (int k = 0; k <= N; ++k)
    if (std::abs(static_cast<double>(k) / N - flea.b) < flea.c) ks.push_back(k);
  return ks;
}

/// diag[k] += flea_bump(k/N); the off-diagonal is untouched.
inline TridiagonalMatrix apply_flea(const TridiagonalMatrix& m, const FleaParams& flea, int N) {
  flea.validate();
  if (N < 1 || m.size() != static_cast<std::size_t>(N) + 1)
    throw DimensionError("apply_flea: matrix size " + std::to_string(m.size()) +
                         " does not match N+1 = " + std::to_string(N + 1));
  TridiagonalMatrix out = m;
  for (int k = 0; k <= N; ++k) out.mutable_diag()[k] += flea_bump(static_cast<double>(k) / N, flea);
  return out;
}

/// J_{N+1}: diag[n] = -(2n-N)^2/(2N), off[n] = -B sqrt((N-n)(n+1)).
inline TridiagonalMatrix build_tridiag_cw(const ModelParams& params) {
  params.validate();
  const int N = params.N;
  const double inv2N = 1.0 / (2.0 * N);
  std::vector<double> diag(N + 1), off(N);
  for (int n = 0; n <= N; ++n) {
    const double m = 2.0 * n - N;
    diag[n] = -params.J * m * m * inv2N;
  }
  for (int n = 0; n < N; ++n)
    off[n] = -params.B * std::sqrt(static_cast<double>(N - n) * static_cast<double>(n + 1));
  TridiagonalMatrix out(std::move(diag), std::move(off));
  if (params.flea) return apply_flea(out, *params.flea, N);
  return out;
}

/// Uniform longitudinal field eps * sum_x sigma3(x), which is eps*(2n-N) on the
/// symmetric basis. Only used for comparison with the flea.
inline TridiagonalMatrix apply_uniform_field(const TridiagonalMatrix& m, double eps, int N) {
  if (N < 1 || m.size() != static_cast<std::size_t>(N) + 1)
    throw DimensionError("apply_uniform_field: matrix size does not match N+1");
  TridiagonalMatrix out = m;
  for (int k = 0; k <= N; ++k) out.mutable_diag()[k] += eps * (2.0 * k - N);
  return out;
}

/// Index reversal n -> M-1-n.
inline TridiagonalMatrix mirrored(const TridiagonalMatrix& m) {
  std::vector<double> d(m.diag().rbegin(), m.diag().rend());
  std::vector<double> o(m.off().rbegin(), m.off().rend());
  return TridiagonalMatrix(std::move(d), std::move(o));
}

/// Exact (bitwise) invariance under index reversal.
inline bool is_mirror_symmetric(const TridiagonalMatrix& m) {
  const auto d = m.diag();
  const auto o = m.off();
  return std::equal(d.begin(), d.end(), d.rbegin()) && std::equal(o.begin(), o.end(), o.rbegin());
}

inline FleaParams mirrored(const FleaParams& flea) { return {1.0 - flea.b, flea.c, flea.d}; }

}  // namespace cwlab
