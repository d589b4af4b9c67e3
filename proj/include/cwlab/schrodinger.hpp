#pragma once

// Schrodinger-side objects: the non-uniform grid spacing d(x), the interval
// coordinate D(x) on [0, L], the Curie-Weiss double-well potential, the
// uniform-grid discretization of -(1/L^2 N^2) d^2/dy^2 + V(y), Agmon
// distances and the 2x2 tunneling model.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cwlab/eigensolve.hpp"
#include "cwlab/error.hpp"
#include "cwlab/model.hpp"

namespace cwlab {

namespace detail {

template <class F>
double integrate(F f, double a, double b, double tol) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, tol);
}

inline void require_positive_field(double B) {
  if (!(B > 0.0) || !std::isfinite(B)) throw DomainError("field B must be finite and > 0, got " + std::to_string(B));
}

}  // namespace detail

/// d(x) = 1 / (sqrt(B) (x(1-x))^{1/4}) on the open interval (0,1).
inline double grid_spacing(double x, double B) {
  detail::require_positive_field(B);
  if (!(x > 0.0 && x < 1.0)) throw DomainError("grid_spacing: x must lie in (0,1), got " + std::to_string(x));
  return 1.0 / (std::sqrt(B) * std::pow(x * (1.0 - x), 0.25));
}

class GridMap {
 public:
  explicit GridMap(double B) : B_(B) {
    detail::require_positive_field(B);
    half_ = half_coordinate(std::pow(0.5, 0.25));
    L_ = 2.0 * half_;
  }

  double field() const noexcept { return B_; }
  double length() const noexcept { return L_; }

  /// 2 Gamma(3/4)^2 / (sqrt(B) sqrt(pi)).
  static double closed_form_length(double B) {
    detail::require_positive_field(B);
    const double g = std::tgamma(0.75);
    return 2.0 * g * g / (std::sqrt(B) * std::sqrt(std::numbers::pi));
  }

  double spacing(double x) const { return grid_spacing(x, B_); }

  /// D(x) = int_0^x d(t) dt.
  double coordinate(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("interval coordinate: x must lie in [0,1], got " + std::to_string(x));
    if (x <= 0.5) return half_coordinate(std::pow(x, 0.25));
    return L_ - half_coordinate(std::pow(1.0 - x, 0.25));
  }

  /// x with D(x) = z.
  double inverse(double z) const {
    const double slack = 1e-12 * L_;
    if (!(z >= -slack && z <= L_ + slack))
      throw DomainError("inverse interval coordinate: z must lie in [0, L], got " + std::to_string(z));
    z = std::clamp(z, 0.0, L_);
    if (z <= half_) return std::pow(solve_half(z), 4);
    return 1.0 - std::pow(solve_half(L_ - z), 4);
  }

 private:
  // With t = s^4: int_0^{s^4} d(t) dt = (4/sqrt(B)) int_0^s u^2 (1-u^4)^{-1/4} du, valid for s^4 <= 1/2.
  double integrand(double u) const { return 4.0 / std::sqrt(B_) * u * u / std::pow(1.0 - u * u * u * u, 0.25); }

  double half_coordinate(double s) const {
    return detail::integrate([this](double u) { return integrand(u); }, 0.0, s, 1e-14);
  }

  // s in [0, 2^{-1/4}] with half_coordinate(s) = z; safeguarded Newton.
  double solve_half(double z) const {
    const double smax = std::pow(0.5, 0.25);
    if (z <= 0.0) return 0.0;
    if (z >= half_) return smax;
    double lo = 0.0, hi = smax;
    double s = std::min(std::cbrt(0.75 * z * std::sqrt(B_)), smax);
    for (int it = 0; it < 100; ++it) {
      const double f = half_coordinate(s) - z;
      if (std::abs(f) <= 1e-13 * std::max(1.0, L_)) return s;
      if (f > 0.0)
        hi = s;
      else
        lo = s;
      const double df = integrand(s);
      double next = s - f / df;
      if (!(next > lo && next < hi) || df == 0.0) next = 0.5 * (lo + hi);
      if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon()) return next;
      s = next;
    }
    return s;
  }

  double B_;
  double half_ = 0.0;
  double L_ = 0.0;
};

/// V_N(x) = -(1/2)(2x-1)^2 - B (sqrt((1-x)(x+1/N)) + sqrt((1-x+1/N) x)).
inline double potential_vn(double x, int N, double B) {
  if (N < 1) throw ParameterError("potential_vn: N must be >= 1");
  const double h = 1.0 / N;
  const double a = std::max(0.0, (1.0 - x) * (x + h));
  const double b = std::max(0.0, (1.0 - x + h) * x);
  const double m = 2.0 * x - 1.0;
  return -0.5 * m * m - B * (std::sqrt(a) + std::sqrt(b));
}

/// N -> infinity form V(x) = -(1/2)(2x-1)^2 - 2B sqrt(x(1-x)).
inline double potential_limit(double x, double B) {
  const double m = 2.0 * x - 1.0;
  return -0.5 * m * m - 2.0 * B * std::sqrt(std::max(0.0, x * (1.0 - x)));
}

/// Minima of the limit potential: x = (1 -/+ sqrt(1-B^2))/2 for 0 <= B < 1, x = 1/2 otherwise.
inline std::vector<double> potential_limit_minima(double B) {
  if (B < 0.0) throw DomainError("potential minima: B must be >= 0");
  if (B >= 1.0) return {0.5};
  const double r = std::sqrt(1.0 - B * B);
  return {0.5 * (1.0 - r), 0.5 * (1.0 + r)};
}

/// Minimum value of the limit potential: -(1+B^2)/2 for B < 1, -B for B >= 1.
inline double potential_limit_min_value(double B) { return B < 1.0 ? -0.5 * (1.0 + B * B) : -B; }

/// Row sums of a tridiagonal matrix; for J/N these are V_N(k/N).
inline std::vector<double> potential_from_matrix(const TridiagonalMatrix& m) {
  std::vector<double> v(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) v[i] = m.row_sum(i);
  return v;
}

struct PotentialProfile {
  int N = 0;
  double B = 0.0;
  std::vector<double> y;        // j/N
  std::vector<double> x;        // D^{-1}(yL)
  std::vector<double> v;        // unshifted V_N(x)
  double shift = 0.0;           // min_j v[j]; plots use v - shift

  std::vector<double> shifted() const {
    std::vector<double> s(v);
    for (double& t : s) t -= shift;
    return s;
  }
};

inline PotentialProfile potential_profile(int N, double B, const GridMap& map) {
  if (N < 1) throw ParameterError("potential_profile: N must be >= 1");
  if (map.field() != B) throw ParameterError("potential_profile: grid map built for a different B");
  PotentialProfile p;
  p.N = N;
  p.B = B;
  p.y.resize(N + 1);
  p.x.resize(N + 1);
  p.v.resize(N + 1);
  for (int j = 0; j <= N; ++j) {
    p.y[j] = static_cast<double>(j) / N;
    p.x[j] = j == 0 ? 0.0 : j == N ? 1.0 : map.inverse(p.y[j] * map.length());
    p.v[j] = potential_vn(p.x[j], N, B);
  }
  p.shift = *std::min_element(p.v.begin(), p.v.end());
  return p;
}

inline PotentialProfile potential_profile(int N, double B) { return potential_profile(N, B, GridMap(B)); }

/// H~_N: diagonal 2/L^2 + V~_N(j/N), off-diagonal -1/L^2, Dirichlet ends.
/// A flea, if given, is added as flea_bump(x_j) at the mapped points x_j.
inline TridiagonalMatrix build_schrodinger_tridiag(int N, double B, const std::optional<FleaParams>& flea = std::nullopt) {
  if (N < 2) throw ParameterError("build_schrodinger_tridiag: N must be >= 2");
  if (flea) flea->validate();
  GridMap map(B);
  const auto prof = potential_profile(N, B, map);
  const double invL2 = 1.0 / (map.length() * map.length());
  std::vector<double> d(N + 1), e(N, -invL2);
  for (int j = 0; j <= N; ++j) d[j] = 2.0 * invL2 + prof.v[j] + (flea ? flea_bump(prof.x[j], *flea) : 0.0);
  return TridiagonalMatrix(std::move(d), std::move(e));
}

struct GridSpacingRecovery {
  std::vector<std::size_t> index;  // interior rows 1..M-2
  std::vector<double> rho;         // |T(j,j+1)| / |T(j,j-1)|
  std::vector<double> h;
};

/// Reads the matrix as -(hbar^2/2) times a non-uniform central second
/// difference and recovers the local spacings:
///   rho_j = T(j,j+1)/T(j,j-1),  h_j^2 = 2 hbar^2 / (|T(j,j+1)| (1 + rho_j)).
inline GridSpacingRecovery recover_grid_spacing(const TridiagonalMatrix& m, double hbar = 1.0) {
  if (m.size() < 3) throw DimensionError("recover_grid_spacing: need at least 3 rows");
  if (!(hbar > 0.0)) throw ParameterError("recover_grid_spacing: hbar must be > 0");
  const auto off = m.off();
  for (std::size_t i = 0; i < off.size(); ++i)
    if (off[i] == 0.0) throw DomainError("recover_grid_spacing: zero off-diagonal at row " + std::to_string(i));
  GridSpacingRecovery r;
  for (std::size_t j = 1; j + 1 < m.size(); ++j) {
    const double up = std::abs(off[j]);
    const double rho = up / std::abs(off[j - 1]);
    r.index.push_back(j);
    r.rho.push_back(rho);
    r.h.push_back(std::sqrt(2.0 * hbar * hbar / (up * (1.0 + rho))));
  }
  return r;
}

inline constexpr double kNegativePotentialTol = 1e-12;

/// int_x^y sqrt(V(s)) ds for a potential already shifted to be >= 0.
inline double agmon_distance(const std::function<double(double)>& V, double x, double y) {
  if (x == y) return 0.0;
  if (x > y) std::swap(x, y);
  std::optional<double> bad;
  auto f = [&](double s) {
    const double v = V(s);
    if (v < -kNegativePotentialTol) {
      if (!bad) bad = s;
      return 0.0;
    }
    return std::sqrt(std::max(0.0, v));
  };
  const double r = detail::integrate(f, x, y, 1e-10);
  if (bad)
    throw DomainError("agmon_distance: potential negative at s=" + std::to_string(*bad) + " (shift it first)");
  return r;
}

/// Agmon distance for the Curie-Weiss double well, measured in the interval
/// coordinate z = D(x): int sqrt(V(x) - Vmin) d(x) dx, limit potential.
inline double cw_agmon_distance(double B, double x, double y) {
  detail::require_positive_field(B);
  if (!(x > 0.0 && x < 1.0 && y > 0.0 && y < 1.0))
    throw DomainError("cw_agmon_distance: endpoints must lie in (0,1)");
  const double vmin = potential_limit_min_value(B);
  return agmon_distance([&](double s) { return (potential_limit(s, B) - vmin) * grid_spacing(s, B) * grid_spacing(s, B); },
                        x, y);
}

enum class FleaRegime { no_localization, localize_far_minimum, localize_far_minimum_strong };

inline const char* to_string(FleaRegime r) {
  switch (r) {
    case FleaRegime::no_localization: return "no-localization";
    case FleaRegime::localize_far_minimum: return "localize-far-minimum";
    case FleaRegime::localize_far_minimum_strong: return "localize-far-minimum-strong";
  }
  return "?";
}

enum class WellSide { none, first, second };  // first = m1 (left), second = m2 (right)

inline const char* to_string(WellSide s) {
  return s == WellSide::none ? "none" : s == WellSide::first ? "left" : "right";
}

struct AgmonReport {
  double d0 = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  FleaRegime regime = FleaRegime::no_localization;
  WellSide predicted_side = WellSide::none;
};

using AgmonMetric = std::function<double(double, double)>;

/// Regime from the ordering of d0 = d(m1,m2) against d1 = 2 min_i d(m_i, supp)
/// and d2 = 2 max_i d(m_i, supp). A positive bump pushes the state to the
/// minimum farther from the support; a negative one pulls it to the nearer.
inline AgmonReport classify_flea_regime(const AgmonMetric& dist, double support_lo, double support_hi, double m1,
                                        double m2, double bump_sign = 1.0) {
  if (support_lo > support_hi) std::swap(support_lo, support_hi);
  if (m1 > m2) throw ParameterError("classify_flea_regime: expected m1 <= m2");
  for (double m : {m1, m2})
    if (m >= support_lo && m <= support_hi)
      throw DomainError("flea must vanish near minima: support [" + std::to_string(support_lo) + ", " +
                        std::to_string(support_hi) + "] contains minimum " + std::to_string(m));
  auto dist_to_support = [&](double m) { return m < support_lo ? dist(m, support_lo) : dist(support_hi, m); };
  const double a1 = dist_to_support(m1);
  const double a2 = dist_to_support(m2);
  AgmonReport r;
  r.d0 = dist(m1, m2);
  r.d1 = 2.0 * std::min(a1, a2);
  r.d2 = 2.0 * std::max(a1, a2);
  const double tol = 1e-9 * std::max({r.d0, r.d2, 1e-300});
  auto lt = [tol](double a, double b) { return a < b - tol; };
  if (lt(r.d1, r.d0) && lt(r.d2, r.d0))
    r.regime = FleaRegime::localize_far_minimum_strong;
  else if (lt(r.d1, r.d0))
    r.regime = FleaRegime::localize_far_minimum;
  if (r.regime != FleaRegime::no_localization && a1 != a2) {
    const bool first_is_far = a1 > a2;
    const bool go_far = bump_sign >= 0.0;
    r.predicted_side = (first_is_far == go_far) ? WellSide::first : WellSide::second;
  }
  return r;
}

/// Same, with the flat-space Agmon metric of a shifted potential V.
inline AgmonReport classify_flea_regime(const std::function<double(double)>& V, double support_lo, double support_hi,
                                        double m1, double m2, double bump_sign = 1.0) {
  return classify_flea_regime([&](double a, double b) { return agmon_distance(V, a, b); }, support_lo, support_hi, m1,
                              m2, bump_sign);
}

/// Curie-Weiss double well (0 < B < 1) with a flea bump; support clipped to [0,1].
inline AgmonReport classify_cw_flea(double B, const FleaParams& flea) {
  flea.validate();
  if (!(B > 0.0 && B < 1.0)) throw ParameterError("flea classification needs a double well, 0 < B < 1");
  const auto mins = potential_limit_minima(B);
  const double lo = std::max(flea.b - flea.c, std::numeric_limits<double>::min());
  const double hi = std::min(flea.b + flea.c, 1.0 - std::numeric_limits<double>::epsilon());
  return classify_flea_regime([B](double a, double b) { return cw_agmon_distance(B, a, b); }, lo, hi, mins[0], mins[1],
                              flea.d >= 0.0 ? 1.0 : -1.0);
}

struct TwoLevelResult {
  double e_minus = 0.0;
  double e_plus = 0.0;
  std::array<double, 2> psi_minus{};
  std::array<double, 2> psi_plus{};
};

/// Eigenpairs of (1/2)[[0, -Delta], [-Delta, 0]] + diag(0, delta).
inline TwoLevelResult two_level(double Delta, double delta) {
  if (!(Delta >= 0.0) || !(delta >= 0.0) || !std::isfinite(Delta) || !std::isfinite(delta))
    throw ParameterError("two_level: Delta and delta must be finite and >= 0");
  TwoLevelResult t;
  const double r = std::hypot(delta, Delta);
  if (r == 0.0) {
    const double s = 1.0 / std::sqrt(2.0);
    t.psi_minus = {s, s};
    t.psi_plus = {s, -s};
    return t;
  }
  t.e_plus = 0.5 * (delta + r);
  t.e_minus = -0.25 * Delta * Delta / t.e_plus;  // = (delta - r)/2 without cancellation
  const double s = delta + r;
  const double n = std::hypot(s, Delta);
  t.psi_minus = {s / n, Delta / n};
  t.psi_plus = {-Delta / n, s / n};
  apply_sign_convention(t.psi_minus);
  apply_sign_convention(t.psi_plus);
  return t;
}

}  // namespace cwlab
