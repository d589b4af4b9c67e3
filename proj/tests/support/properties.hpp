#pragma once

// Randomized invariant checks. Each property runs a fixed number of cases
// from its own seeded generator; the GTest suite and the acceptance binary
// both run this list.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cwlab/analysis.hpp"
#include "cwlab/eigensolve.hpp"
#include "cwlab/model.hpp"
#include "cwlab/schrodinger.hpp"
#include "cwlab/spin_exact.hpp"

#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace props {

struct Outcome {
  std::string module;
  std::string name;
  int cases = 0;
  int failures = 0;
  std::string first_failure;
};

class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failed_.empty()) failed_ = what;
    ok_ = ok_ && ok;
  }
  template <class T>
  static std::string str(const T& v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  }
  bool ok() const { return ok_; }
  const std::string& message() const { return failed_; }

 private:
  bool ok_ = true;
  std::string failed_;
};

struct Property {
  std::string module;
  std::string name;
  int cases;
  std::function<void(gen::Rng&, Checker&)> one_case;
};

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

inline std::vector<Property> all_properties() {
  using namespace cwlab;
  using C = Checker;
  std::vector<Property> ps;

  // ---- tridiagonal model
  ps.push_back({"tridiag-model", "unperturbed matrix is mirror symmetric", 150, [](gen::Rng& r, C& c) {
                  const int N = r.integer(1, 300);
                  const double B = r.uniform(-2.0, 2.0);
                  c.expect(is_mirror_symmetric(build_tridiag_cw({N, B})), "N=" + C::str(N) + " B=" + C::str(B));
                }});
  ps.push_back({"tridiag-model", "flea breaks mirror symmetry", 100, [](gen::Rng& r, C& c) {
                  const int N = r.integer(100, 300);
                  ModelParams p{N, r.uniform(0.1, 1.5)};
                  p.flea = r.flea();
                  c.expect(!is_mirror_symmetric(build_tridiag_cw(p)), "N=" + C::str(N) + " b=" + C::str(p.flea->b));
                }});
  ps.push_back({"tridiag-model", "row sums of J/N equal V_N(k/N)", 100, [](gen::Rng& r, C& c) {
                  const int N = r.integer(1, 500);
                  const double B = r.uniform(0.0, 2.0);
                  const auto m = scale(build_tridiag_cw({N, B}), 1.0 / N);
                  for (int k = 0; k <= N; ++k) {
                    const double want = potential_vn(static_cast<double>(k) / N, N, B);
                    c.expect(std::abs(m.row_sum(k) - want) <= 1e-12 * (1.0 + std::abs(want)),
                             "N=" + C::str(N) + " k=" + C::str(k));
                  }
                }});
  ps.push_back({"tridiag-model", "flea changes only diagonal entries inside its support", 100, [](gen::Rng& r, C& c) {
                  const int N = r.integer(10, 400);
                  const auto base = build_tridiag_cw({N, r.uniform(0.0, 1.5)});
                  const auto f = r.flea();
                  const auto m = apply_flea(base, f, N);
                  c.expect(std::equal(m.off().begin(), m.off().end(), base.off().begin()), "off-diagonal changed");
                  for (int k = 0; k <= N; ++k) {
                    const bool inside = std::abs(static_cast<double>(k) / N - f.b) < f.c;
                    if (!inside) c.expect(m.diag()[k] == base.diag()[k], "k=" + C::str(k) + " outside support changed");
                    else c.expect(m.diag()[k] >= base.diag()[k], "k=" + C::str(k) + " decreased");
                  }
                }});
  ps.push_back({"tridiag-model", "negated off-diagonal is non-negative for B >= 0", 50, [](gen::Rng& r, C& c) {
                  const auto m = build_tridiag_cw({r.integer(1, 300), r.uniform(0.0, 3.0)});
                  for (double e : m.off()) c.expect(-e >= 0.0, "positive off-diagonal");
                }});

  // ---- eigensolver
  ps.push_back({"eigensolve", "Sturm count matches the number of eigenvalues below the probe", 150,
                [](gen::Rng& r, C& c) {
                  const auto m = r.tridiagonal(r.integer(1, 60));
                  const auto ref = oracle::jacobi(oracle::tridiag_dense({m.diag().begin(), m.diag().end()},
                                                                         {m.off().begin(), m.off().end()}));
                  for (int t = 0; t < 5; ++t) {
                    const double mu = r.uniform(-4.5, 4.5);
                    bool near = false;
                    std::size_t below = 0;
                    for (double l : ref.values) {
                      near = near || std::abs(l - mu) < 1e-8;
                      below += l < mu;
                    }
                    if (near) continue;
                    c.expect(sturm_count(m, mu) == below, "mu=" + C::str(mu));
                  }
                }});
  ps.push_back({"eigensolve", "eigenvalues agree with a Jacobi reference", 60, [](gen::Rng& r, C& c) {
                  const int n = r.coin() ? r.integer(1, 40) : r.integer(40, 200);
                  const auto m = r.tridiagonal(n);
                  const auto ref = oracle::jacobi(oracle::tridiag_dense({m.diag().begin(), m.diag().end()},
                                                                         {m.off().begin(), m.off().end()}));
                  const auto s = eig_full(m, false);
                  for (int i = 0; i < n; ++i)
                    c.expect(std::abs(s.values[i] - ref.values[i]) <= 1e-11,
                             "n=" + C::str(n) + " i=" + C::str(i) + " diff=" + C::str(s.values[i] - ref.values[i]));
                }});
  ps.push_back({"eigensolve", "eigenvectors are orthonormal with small residuals", 100, [](gen::Rng& r, C& c) {
                  const int n = r.integer(2, 120);
                  const auto m = r.tridiagonal(n);
                  const auto k = static_cast<std::size_t>(r.integer(1, n));
                  const auto s = eig_lowest(m, k, true, r.coin() ? ClusterPolicy::raw : ClusterPolicy::symmetrized);
                  for (std::size_t i = 0; i < k; ++i) {
                    c.expect(std::abs(norm(s.vectors[i]) - 1.0) <= 1e-12, "norm");
                    c.expect(s.residuals[i] <= kResidualTol * (std::abs(s.values[i]) + m.norm()),
                             "residual " + C::str(s.residuals[i]));
                    for (std::size_t j = 0; j < i; ++j)
                      c.expect(std::abs(dot(s.vectors[i], s.vectors[j])) <= 1e-10,
                               "overlap " + C::str(dot(s.vectors[i], s.vectors[j])));
                  }
                }});
  ps.push_back({"eigensolve", "symmetrized eigenvectors of J are even or odd", 60, [](gen::Rng& r, C& c) {
                  const int N = r.integer(2, 400);
                  const auto m = scale(build_tridiag_cw({N, r.uniform(0.1, 1.5)}), 1.0 / N);
                  const auto s = eig_lowest(m, std::min<std::size_t>(6, m.size()), true, ClusterPolicy::symmetrized);
                  for (const auto& v : s.vectors) {
                    double even = 0.0, odd = 0.0;
                    for (std::size_t i = 0; i < v.size(); ++i) {
                      even = std::max(even, std::abs(v[i] - v[v.size() - 1 - i]));
                      odd = std::max(odd, std::abs(v[i] + v[v.size() - 1 - i]));
                    }
                    c.expect(std::min(even, odd) <= 1e-12, "N=" + C::str(N) + " parity defect " + C::str(std::min(even, odd)));
                  }
                }});
  ps.push_back({"eigensolve", "scaling the matrix scales the spectrum", 60, [](gen::Rng& r, C& c) {
                  const auto m = r.tridiagonal(r.integer(1, 80));
                  const double f = r.uniform(0.01, 100.0) * (r.coin() ? 1.0 : -1.0);
                  auto a = eig_full(m, false).values;
                  auto b = eig_full(scale(m, f), false).values;
                  for (double& x : a) x *= f;
                  std::sort(a.begin(), a.end());
                  for (std::size_t i = 0; i < a.size(); ++i)
                    c.expect(std::abs(a[i] - b[i]) <= 1e-12 * std::abs(f) * std::max(1.0, m.norm()), "f=" + C::str(f));
                }});

  // ---- dense spin space
  ps.push_back({"spin-exact", "orbits partition the basis", 40, [](gen::Rng& r, C& c) {
                  const int N = r.integer(1, kMaxDenseN);
                  SymmetricSubspaceMap map(N);
                  std::size_t total = 0;
                  for (int k = 0; k <= N; ++k) {
                    total += map.orbit(k).size();
                    c.expect(map.orbit(k).size() == static_cast<std::size_t>(binomial(N, k)), "orbit size");
                    for (auto i : map.orbit(k)) c.expect(std::popcount(i) == k, "orbit label");
                  }
                  c.expect(total == (std::size_t{1} << N), "N=" + C::str(N));
                }});
  ps.push_back({"spin-exact", "lift is an isometry and project is its adjoint", 100, [](gen::Rng& r, C& c) {
                  const int N = r.integer(1, 12);
                  SymmetricSubspaceMap map(N);
                  const auto coeffs = r.vector(N + 1);
                  const auto lifted = symmetrize_lift(coeffs, map);
                  c.expect(std::abs(norm(lifted) - norm(coeffs)) <= 1e-12, "isometry");
                  const auto back = project_symmetric(lifted, map);
                  for (int k = 0; k <= N; ++k) c.expect(std::abs(back[k] - coeffs[k]) <= 1e-12, "project o lift");
                  const auto v = r.vector(map.dim());
                  c.expect(std::abs(dot(lifted, v) - dot(coeffs, project_symmetric(v, map))) <= 1e-10, "adjoint");
                }});
  ps.push_back({"spin-exact", "dense h acts on lifted vectors like J", 60, [](gen::Rng& r, C& c) {
                  const int N = r.integer(1, 10);
                  ModelParams p{N, r.uniform(-1.0, 2.0)};
                  if (r.coin()) p.flea = FleaParams{r.uniform(0.2, 0.8), r.uniform(0.1, 0.4), r.uniform(-0.5, 0.5)};
                  const auto h = build_dense_cw(p);
                  const auto J = build_tridiag_cw(p);
                  SymmetricSubspaceMap map(N);
                  const auto cvec = r.vector(N + 1);  // n+-indexed
                  const auto lifted = symmetrize_lift(orbit_from_tridiag(cvec), map);
                  std::vector<double> hv(h.dim, 0.0);
                  for (std::size_t i = 0; i < h.dim; ++i)
                    for (std::size_t j = 0; j < h.dim; ++j) hv[i] += h(i, j) * lifted[j];
                  const auto want = symmetrize_lift(orbit_from_tridiag(J.apply(cvec)), map);
                  double err = 0.0;
                  for (std::size_t i = 0; i < h.dim; ++i) err = std::max(err, std::abs(hv[i] - want[i]));
                  c.expect(err <= 1e-11 * (1.0 + N), "N=" + C::str(N) + " err=" + C::str(err));
                }});
  ps.push_back({"spin-exact", "flea commutes with the symmetrizer", 60, [](gen::Rng& r, C& c) {
                  const int N = r.integer(1, 12);
                  const auto f = r.flea();
                  SymmetricSubspaceMap map(N);
                  const auto cvec = r.vector(N + 1);
                  auto scaled = cvec;
                  for (int n = 0; n <= N; ++n) scaled[n] *= flea_bump(static_cast<double>(n) / N, f);
                  const auto lhs = symmetrize_lift(orbit_from_tridiag(scaled), map);
                  auto rhs = symmetrize_lift(orbit_from_tridiag(cvec), map);
                  for (std::size_t i = 0; i < rhs.size(); ++i)
                    rhs[i] *= flea_bump(static_cast<double>(N - std::popcount(i)) / N, f);
                  for (std::size_t i = 0; i < rhs.size(); ++i) c.expect(std::abs(lhs[i] - rhs[i]) <= 1e-14, "entry");
                }});
  ps.push_back({"spin-exact", "dense Hamiltonian is symmetric", 30, [](gen::Rng& r, C& c) {
                  ModelParams p{r.integer(1, 8), r.uniform(-2.0, 2.0)};
                  const auto h = build_dense_cw(p);
                  for (std::size_t i = 0; i < h.dim; ++i)
                    for (std::size_t j = 0; j < i; ++j) c.expect(h(i, j) == h(j, i), "asymmetric entry");
                }});

  // ---- Schrodinger side
  ps.push_back({"schrodinger", "interval coordinate round trips", 150, [](gen::Rng& r, C& c) {
                  const GridMap g(r.uniform(0.1, 3.0));
                  const double x = r.uniform(0.0, 1.0);
                  c.expect(std::abs(g.inverse(g.coordinate(x)) - x) <= 1e-8, "x=" + C::str(x));
                  const double z = r.uniform(0.0, g.length());
                  c.expect(std::abs(g.coordinate(g.inverse(z)) - z) <= 1e-8, "z=" + C::str(z));
                }});
  ps.push_back({"schrodinger", "grid spacing is symmetric about 1/2", 100, [](gen::Rng& r, C& c) {
                  const double B = r.uniform(0.05, 4.0), x = r.uniform(1e-6, 1.0 - 1e-6);
                  c.expect(std::abs(grid_spacing(x, B) / grid_spacing(1.0 - x, B) - 1.0) <= 1e-12, "x=" + C::str(x));
                }});
  ps.push_back({"schrodinger", "interval coordinate is increasing and antisymmetric", 100, [](gen::Rng& r, C& c) {
                  const GridMap g(r.uniform(0.1, 3.0));
                  double a = r.uniform(0.0, 1.0), b = r.uniform(0.0, 1.0);
                  if (a > b) std::swap(a, b);
                  if (a < b) c.expect(g.coordinate(a) < g.coordinate(b), "monotone");
                  c.expect(std::abs(g.coordinate(1.0 - a) - (g.length() - g.coordinate(a))) <= 1e-10, "antisymmetry");
                }});
  ps.push_back({"schrodinger", "limit potential is mirror symmetric", 100, [](gen::Rng& r, C& c) {
                  const double B = r.uniform(0.0, 3.0), x = r.uniform(0.0, 1.0);
                  c.expect(std::abs(potential_limit(x, B) - potential_limit(1.0 - x, B)) <= 1e-14, "x=" + C::str(x));
                }});
  ps.push_back({"schrodinger", "two-level trace, determinant and orthonormality", 200, [](gen::Rng& r, C& c) {
                  const double D = std::pow(10.0, r.uniform(-8.0, 2.0)), d = std::pow(10.0, r.uniform(-8.0, 2.0));
                  const auto t = two_level(r.coin() ? D : 0.0, d);
                  const double trace = t.e_minus + t.e_plus;
                  c.expect(std::abs(trace - d) <= 4e-16 * (std::abs(t.e_plus) + std::abs(t.e_minus)),
                           "trace " + C::str(trace - d));
                  const double n1 = std::hypot(t.psi_minus[0], t.psi_minus[1]), n2 = std::hypot(t.psi_plus[0], t.psi_plus[1]);
                  c.expect(std::abs(n1 - 1.0) <= 1e-15 && std::abs(n2 - 1.0) <= 1e-15, "normalization");
                  c.expect(std::abs(t.psi_minus[0] * t.psi_plus[0] + t.psi_minus[1] * t.psi_plus[1]) <= 1e-15, "orthogonality");
                }});
  ps.push_back({"schrodinger", "two-level determinant", 100, [](gen::Rng& r, C& c) {
                  const double D = std::pow(10.0, r.uniform(-6.0, 2.0)), d = std::pow(10.0, r.uniform(-6.0, 2.0));
                  const auto t = two_level(D, d);
                  const double det = t.e_minus * t.e_plus;
                  c.expect(std::abs(det + 0.25 * D * D) <= 4e-16 * 0.25 * D * D, "det " + C::str(det + 0.25 * D * D));
                }});
  ps.push_back({"schrodinger", "Agmon distance to the barrier top is the same from both wells", 30,
                [](gen::Rng& r, C& c) {
                  const double B = r.uniform(0.1, 0.95);
                  const auto m = potential_limit_minima(B);
                  const double a = cw_agmon_distance(B, m[0], 0.5), b = cw_agmon_distance(B, 0.5, m[1]);
                  c.expect(std::abs(a - b) <= 1e-8 * std::max(1.0, a), "B=" + C::str(B));
                }});

  // ---- analysis
  ps.push_back({"analysis", "left, right and middle masses sum to one", 150, [](gen::Rng& r, C& c) {
                  const int N = r.integer(1, 400);
                  const auto rep = localization_report(r.vector(N + 1), N);
                  c.expect(std::abs(rep.left_mass + rep.right_mass + rep.mid_mass - 1.0) <= 1e-14, "N=" + C::str(N));
                }});
  ps.push_back({"analysis", "reversing a vector swaps left and right", 100, [](gen::Rng& r, C& c) {
                  const int N = r.integer(1, 400);
                  const auto v = r.vector(N + 1);
                  const std::vector<double> w(v.rbegin(), v.rend());
                  const auto a = localization_report(v, N), b = localization_report(w, N);
                  c.expect(std::abs(a.left_mass - b.right_mass) <= 1e-13 && std::abs(a.right_mass - b.left_mass) <= 1e-13, "masses");
                  c.expect(std::abs(a.magnetization + b.magnetization) <= 1e-13, "magnetization");
                }});
  ps.push_back({"analysis", "half-height width of a sampled Gaussian", 100, [](gen::Rng& r, C& c) {
                  const double s = r.uniform(4.0, 40.0);
                  const int n = static_cast<int>(12 * s) + 20;
                  const double mu = r.uniform(n * 0.4, n * 0.6);
                  std::vector<double> v(n);
                  for (int i = 0; i < n; ++i) v[i] = std::exp(-(i - mu) * (i - mu) / (2 * s * s));
                  const double want = 2.0 * s * std::sqrt(2.0 * std::log(2.0));
                  c.expect(std::abs(width_half_height(v) / want - 1.0) <= 0.01, "s=" + C::str(s));
                }});
  ps.push_back({"analysis", "mirroring the flea mirrors the localization report", 50, [](gen::Rng& r, C& c) {
                  for (int attempt = 0; attempt < 50; ++attempt) {
                    const int N = r.integer(30, 90);
                    const double B = r.uniform(0.3, 0.8);
                    const int k0 = r.coin() ? r.integer(N / 2 + 3, N - 3) : r.integer(3, N / 2 - 3);
                    const double cw = r.uniform(1.5, 4.0) / N;
                    const double d = r.uniform(0.1, 0.6);
                    ModelParams p{N, B}, q{N, B};
                    p.flea = FleaParams{static_cast<double>(k0) / N, cw, d};
                    q.flea = FleaParams{static_cast<double>(N - k0) / N, cw, d};
                    const auto s1 = eig_lowest(build_scaled_cw(p), 2, true);
                    if (s1.values[1] - s1.values[0] < 1e-6) continue;
                    const auto s2 = eig_lowest(build_scaled_cw(q), 2, true);
                    const auto a = localization_report(s1.vectors[0], N), b = localization_report(s2.vectors[0], N);
                    c.expect(std::abs(a.left_mass - b.right_mass) <= 1e-8 && std::abs(a.right_mass - b.left_mass) <= 1e-8,
                             "N=" + C::str(N) + " k0=" + C::str(k0));
                    c.expect(std::abs(a.magnetization + b.magnetization) <= 1e-8, "magnetization");
                    return;
                  }
                  c.expect(false, "no non-degenerate case generated");
                }});
  ps.push_back({"analysis", "harmonic fit recovers the spacing of synthetic paired levels", 100, [](gen::Rng& r, C& c) {
                  const double sp = r.uniform(1e-4, 1e-1);
                  const int levels = r.integer(2, 8);
                  std::vector<double> v;
                  for (int n = 0; n < levels; ++n) {
                    const double e = (n + 0.5) * sp;
                    v.push_back(e - r.uniform(0.0, 1e-9));
                    v.push_back(e + r.uniform(0.0, 1e-9));
                  }
                  const auto f = harmonic_fit(v, 1);
                  c.expect(f.levels.size() == static_cast<std::size_t>(levels), "collapsed count");
                  c.expect(std::abs(f.spacing / sp - 1.0) <= 1e-7, "spacing");
                }});
  return ps;
}

inline std::uint64_t seed_for(const std::string& name) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char ch : name) h = (h ^ ch) * 1099511628211ULL;
  return h;
}

inline Outcome run(const Property& p) {
  Outcome o{p.module, p.name, 0, 0, {}};
  gen::Rng rng(seed_for(p.module + "/" + p.name));
  for (int i = 0; i < p.cases; ++i) {
    Checker c;
    try {
      p.one_case(rng, c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    ++o.cases;
    if (!c.ok()) {
      if (o.failures == 0) o.first_failure = "case " + std::to_string(i) + ": " + c.message();
      ++o.failures;
    }
  }
  return o;
}

}  // namespace props
