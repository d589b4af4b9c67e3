#pragma once

// Measurements on eigensolutions: tunneling splittings over N, peak widths,
// left/right masses and magnetization, the harmonic fit of the low spectrum,
// spectrum differences and Gaussian fits of eigenvectors.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/LevenbergMarquardt>

#include "cwlab/eigensolve.hpp"
#include "cwlab/error.hpp"
#include "cwlab/model.hpp"
#include "cwlab/parallel.hpp"
#include "cwlab/schrodinger.hpp"

namespace cwlab {

/// Scaled Curie-Weiss matrix J_{N+1}/N, optionally with a flea.
inline TridiagonalMatrix build_scaled_cw(const ModelParams& p) {
  return scale(build_tridiag_cw(p), 1.0 / p.N);
}

struct SplittingPoint {
  int N = 0;
  double splitting = 0.0;         // of J_{N+1}
  double splitting_scaled = 0.0;  // of J_{N+1}/N
};

struct SplittingCurve {
  double B = 0.0;
  std::vector<SplittingPoint> points;
};

inline SplittingCurve splitting_curve(double B, const std::vector<int>& Ns) {
  if (Ns.empty()) throw ParameterError("splitting_curve: empty N list");
  SplittingCurve c;
  c.B = B;
  c.points = parallel_map(Ns, [B](int N) {
    if (N < 1) throw ParameterError("splitting_curve: N must be >= 1");
    const auto m = build_tridiag_cw({N, B});
    SplittingPoint p;
    p.N = N;
    p.splitting = splitting(m);
    p.splitting_scaled = splitting(scale(m, 1.0 / N));
    return p;
  });
  return c;
}

/// Indices of local maxima of |v| that reach half of the global maximum.
inline std::vector<std::size_t> half_height_peaks(std::span<const double> v) {
  double amax = 0.0;
  for (double x : v) amax = std::max(amax, std::abs(x));
  std::vector<std::size_t> peaks;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::abs(v[i]);
    if (a < 0.5 * amax) continue;
    const bool left_ok = i == 0 || a >= std::abs(v[i - 1]);
    const bool right_ok = i + 1 == n || a > std::abs(v[i + 1]);
    if (left_ok && right_ok) peaks.push_back(i);
  }
  return peaks;
}

/// Full width at half maximum of |v| in index units, with linear
/// interpolation at both crossings. A single sample above half height gives 0.
inline double width_half_height(std::span<const double> v) {
  if (v.empty()) throw DimensionError("width_half_height: empty vector");
  double amax = 0.0;
  for (double x : v) amax = std::max(amax, std::abs(x));
  if (amax == 0.0) throw ParameterError("width_half_height: zero vector");
  const double half = 0.5 * amax;
  std::size_t first = v.size(), last = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) >= half) {
      first = std::min(first, i);
      last = i;
    }
  for (std::size_t i = first; i <= last; ++i)
    if (std::abs(v[i]) < half) {
      std::string list;
      for (std::size_t p : half_height_peaks(v)) list += (list.empty() ? "" : ", ") + std::to_string(p);
      throw AmbiguityError("width_half_height: several peaks above half height at indices {" + list +
                           "}; pick a localized combination first");
    }
  if (first == last) return 0.0;
  double left = static_cast<double>(first);
  if (first > 0) {
    const double a = std::abs(v[first - 1]), b = std::abs(v[first]);
    left = static_cast<double>(first - 1) + (half - a) / (b - a);
  }
  double right = static_cast<double>(last);
  if (last + 1 < v.size()) {
    const double a = std::abs(v[last]), b = std::abs(v[last + 1]);
    right = static_cast<double>(last) + (a - half) / (a - b);
  }
  return right - left;
}

/// chi_+/- = (psi_0 +/- psi_1)/sqrt2 from the two lowest eigenvectors.
inline std::pair<std::vector<double>, std::vector<double>> localized_pair(const Spectrum& s) {
  if (s.vectors.size() < 2) throw ParameterError("localized_pair: need two eigenvectors");
  const auto& a = s.vectors[0];
  const auto& b = s.vectors[1];
  std::vector<double> plus(a.size()), minus(a.size());
  const double r = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    plus[i] = (a[i] + b[i]) * r;
    minus[i] = (a[i] - b[i]) * r;
  }
  return {plus, minus};
}

struct WidthPoint {
  int N = 0;
  double width = 0.0;  // grid indices
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
};

inline LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ParameterError("linear_fit: need >= 2 matching points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw ParameterError("linear_fit: degenerate abscissae");
  LinearFit f;
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  double r = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (f.slope * x[i] + f.intercept);
    r += e * e;
  }
  f.rms = std::sqrt(r / n);
  return f;
}

struct WidthCurve {
  double B = 0.0;
  std::vector<WidthPoint> points;
  LinearFit loglog;  // log(width) against log(N)
};

/// Half-height width of the localized combination chi_+ of the two lowest
/// eigenvectors of J_{N+1}/N, for each N.
inline WidthCurve width_curve(double B, const std::vector<int>& Ns) {
  if (Ns.size() < 2) throw ParameterError("width_curve: need at least two values of N");
  WidthCurve c;
  c.B = B;
  c.points = parallel_map(Ns, [B](int N) {
    const auto s = eig_lowest(build_scaled_cw({N, B}), 2, true, ClusterPolicy::symmetrized);
    return WidthPoint{N, width_half_height(localized_pair(s).first)};
  });
  std::vector<double> lx, ly;
  for (const auto& p : c.points) {
    lx.push_back(std::log(static_cast<double>(p.N)));
    ly.push_back(std::log(p.width));
  }
  c.loglog = linear_fit(lx, ly);
  return c;
}

struct LocalizationReport {
  double left_mass = 0.0;   // k/N < 1/2
  double right_mass = 0.0;  // k/N > 1/2
  double mid_mass = 0.0;    // k = N/2 (N even)
  std::size_t peak_index = 0;
  double magnetization = 0.0;  // sum c_k^2 (2k-N)/N
};

inline LocalizationReport localization_report(std::span<const double> v, int N) {
  if (N < 1 || v.size() != static_cast<std::size_t>(N) + 1)
    throw DimensionError("localization_report: vector length must be N+1");
  LocalizationReport r;
  double total = 0.0, mag = 0.0, amax = -1.0;
  for (int k = 0; k <= N; ++k) {
    const double w = v[k] * v[k];
    total += w;
    if (2 * k < N)
      r.left_mass += w;
    else if (2 * k > N)
      r.right_mass += w;
    else
      r.mid_mass += w;
    mag += w * (2.0 * k - N) / N;
    if (std::abs(v[k]) > amax) {
      amax = std::abs(v[k]);
      r.peak_index = static_cast<std::size_t>(k);
    }
  }
  if (total == 0.0) throw ParameterError("localization_report: zero vector");
  r.left_mass /= total;
  r.right_mass /= total;
  r.mid_mass /= total;
  r.magnetization = mag / total;
  return r;
}

/// min_k V_N(k/N): the offset subtracted from J_{N+1}/N to get the shifted spectrum.
inline double cw_potential_shift(int N, double B) {
  double m = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= N; ++k) m = std::min(m, potential_vn(static_cast<double>(k) / N, N, B));
  return m;
}

/// Levels with consecutive gaps below pair_tol are averaged into one.
inline std::vector<double> collapse_pairs(std::span<const double> values, double pair_tol) {
  std::vector<double> out;
  std::size_t i = 0;
  while (i < values.size()) {
    std::size_t j = i;
    double sum = values[i];
    while (j + 1 < values.size() && values[j + 1] - values[j] < pair_tol) sum += values[++j];
    out.push_back(sum / static_cast<double>(j - i + 1));
    i = j + 1;
  }
  return out;
}

struct HarmonicFit {
  std::vector<double> levels;     // collapsed shifted levels E_n
  double spacing = 0.0;           // least squares of E_n = (n+1/2) spacing
  double spacing_times_N = 0.0;
  std::vector<double> residuals;  // E_n - (n+1/2) spacing
};

inline constexpr double kDefaultPairTol = 1e-6;

inline HarmonicFit harmonic_fit(std::span<const double> shifted, int N, double pair_tol = kDefaultPairTol) {
  if (N < 1) throw ParameterError("harmonic_fit: N must be >= 1");
  HarmonicFit f;
  f.levels = collapse_pairs(shifted, pair_tol);
  if (f.levels.size() < 2) throw ParameterError("harmonic_fit: need at least two distinct levels");
  double num = 0.0, den = 0.0;
  for (std::size_t n = 0; n < f.levels.size(); ++n) {
    const double q = static_cast<double>(n) + 0.5;
    num += q * f.levels[n];
    den += q * q;
  }
  f.spacing = num / den;
  f.spacing_times_N = f.spacing * N;
  for (std::size_t n = 0; n < f.levels.size(); ++n)
    f.residuals.push_back(f.levels[n] - (static_cast<double>(n) + 0.5) * f.spacing);
  return f;
}

/// Shifted lowest `levels` eigenvalues of J_{N+1}/N.
inline std::vector<double> shifted_cw_spectrum(int N, double B, std::size_t levels) {
  auto s = eig_lowest(build_scaled_cw({N, B}), levels, false);
  const double shift = cw_potential_shift(N, B);
  for (double& v : s.values) v -= shift;
  return s.values;
}

struct GroundEnergyRow {
  int N = 0;
  double eps0 = 0.0;           // lowest eigenvalue of J_{N+1}/N
  double shift = 0.0;          // min_k V_N(k/N)
  double n_eps0_shifted = 0.0; // N (eps0 - shift)
  double n_eps0 = 0.0;         // N eps0
};

inline std::vector<GroundEnergyRow> ground_energy_table(double B, const std::vector<int>& Ns) {
  return parallel_map(Ns, [B](int N) {
    GroundEnergyRow r;
    r.N = N;
    r.eps0 = eig_lowest(build_scaled_cw({N, B}), 1, false).values[0];
    r.shift = cw_potential_shift(N, B);
    r.n_eps0_shifted = N * (r.eps0 - r.shift);
    r.n_eps0 = N * r.eps0;
    return r;
  });
}

struct SpectrumComparison {
  std::vector<double> diffs;
  double max_diff = 0.0;
};

inline SpectrumComparison spectrum_compare(std::span<const double> a, std::span<const double> b, std::size_t k) {
  if (a.size() < k || b.size() < k)
    throw DimensionError("spectrum_compare: both spectra need at least " + std::to_string(k) + " levels");
  SpectrumComparison c;
  for (std::size_t n = 0; n < k; ++n) {
    c.diffs.push_back(std::abs(a[n] - b[n]));
    c.max_diff = std::max(c.max_diff, c.diffs.back());
  }
  return c;
}

struct GaussianComponent {
  double weight = 0.0;
  double center = 0.0;  // grid index
  double sigma = 0.0;   // grid indices
};

struct GaussianFit {
  std::vector<GaussianComponent> components;  // sorted by center
  double residual = 0.0;                      // ||v - model||
  bool converged = false;
  int iterations = 0;
  std::string diagnostics;
};

namespace detail {

struct GaussianFunctor {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  using QRSolver = Eigen::ColPivHouseholderQR<JacobianType>;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  std::span<const double> data;
  int ngauss = 1;

  Eigen::Index inputs() const { return 3 * ngauss; }
  Eigen::Index values() const { return static_cast<Eigen::Index>(data.size()); }

  int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& f) const {
    for (Eigen::Index i = 0; i < values(); ++i) {
      double m = 0.0;
      for (int g = 0; g < ngauss; ++g) {
        const double t = (static_cast<double>(i) - p[3 * g + 1]) / p[3 * g + 2];
        m += p[3 * g] * std::exp(-0.5 * t * t);
      }
      f[i] = m - data[i];
    }
    return 0;
  }

  int df(const Eigen::VectorXd& p, Eigen::MatrixXd& J) const {
    for (Eigen::Index i = 0; i < values(); ++i)
      for (int g = 0; g < ngauss; ++g) {
        const double a = p[3 * g], mu = p[3 * g + 1], s = p[3 * g + 2];
        const double t = (static_cast<double>(i) - mu) / s;
        const double e = std::exp(-0.5 * t * t);
        J(i, 3 * g) = e;
        J(i, 3 * g + 1) = a * e * t / s;
        J(i, 3 * g + 2) = a * e * t * t / s;
      }
    return 0;
  }
};

}  // namespace detail

/// Least-squares fit of one or two Gaussians a exp(-(i-mu)^2/(2 s^2)) to v.
inline GaussianFit gaussian_compare(std::span<const double> v, int ngauss) {
  if (ngauss != 1 && ngauss != 2) throw ParameterError("gaussian_compare: 1 or 2 components");
  if (v.size() < static_cast<std::size_t>(3 * ngauss + 1)) throw DimensionError("gaussian_compare: vector too short");
  const std::size_t n = v.size();
  // initial guess from the largest entry in each segment
  Eigen::VectorXd p(3 * ngauss);
  for (int g = 0; g < ngauss; ++g) {
    const std::size_t lo = g * n / ngauss, hi = (g + 1) * n / ngauss;
    std::size_t best = lo;
    for (std::size_t i = lo; i < hi; ++i)
      if (std::abs(v[i]) > std::abs(v[best])) best = i;
    std::size_t a = best, b = best;
    while (a > lo && std::abs(v[a - 1]) >= 0.5 * std::abs(v[best])) --a;
    while (b + 1 < hi && std::abs(v[b + 1]) >= 0.5 * std::abs(v[best])) ++b;
    p[3 * g] = v[best];
    p[3 * g + 1] = static_cast<double>(best);
    p[3 * g + 2] = std::max(1.0, static_cast<double>(b - a + 1) / (2.0 * std::sqrt(2.0 * std::log(2.0))));
  }
  detail::GaussianFunctor fn{v, ngauss};
  Eigen::LevenbergMarquardt<detail::GaussianFunctor> lm(fn);
  lm.setMaxfev(2000);
  const auto status = lm.minimize(p);
  GaussianFit fit;
  fit.iterations = static_cast<int>(lm.iterations());
  fit.converged = status == Eigen::LevenbergMarquardtSpace::RelativeReductionTooSmall ||
                  status == Eigen::LevenbergMarquardtSpace::RelativeErrorTooSmall ||
                  status == Eigen::LevenbergMarquardtSpace::RelativeErrorAndReductionTooSmall ||
                  status == Eigen::LevenbergMarquardtSpace::CosinusTooSmall ||
                  status == Eigen::LevenbergMarquardtSpace::FtolTooSmall ||
                  status == Eigen::LevenbergMarquardtSpace::XtolTooSmall ||
                  status == Eigen::LevenbergMarquardtSpace::GtolTooSmall;
  fit.diagnostics = "status=" + std::to_string(static_cast<int>(status)) + " iterations=" + std::to_string(fit.iterations);
  Eigen::VectorXd f(static_cast<Eigen::Index>(n));
  fn(p, f);
  fit.residual = f.norm();
  for (int g = 0; g < ngauss; ++g) fit.components.push_back({p[3 * g], p[3 * g + 1], std::abs(p[3 * g + 2])});
  std::sort(fit.components.begin(), fit.components.end(),
            [](const GaussianComponent& a, const GaussianComponent& b) { return a.center < b.center; });
  return fit;
}

}  // namespace cwlab
