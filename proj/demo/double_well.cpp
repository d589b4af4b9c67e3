// Lowest levels of J_{N+1}/N next to the Schrodinger discretization, and the
// tunneling gap shrinking with N.

#include <cstdio>

#include "cwlab/cwlab.hpp"

int main() {
  const int N = 1000;
  const double B = 0.5;
  const auto J = cwlab::build_scaled_cw({N, B});
  const auto H = cwlab::build_schrodinger_tridiag(N, B);
  const auto eps = cwlab::eigenvalues_lowest(J, 6);
  const auto lam = cwlab::eigenvalues_lowest(H, 6);
  std::printf("N=%d B=%g  L=%.12f\n", N, B, cwlab::GridMap(B).length());
  std::printf("%3s %18s %18s %12s\n", "n", "eps_n", "lambda_n", "|diff|");
  for (int n = 0; n < 6; ++n) std::printf("%3d %18.12f %18.12f %12.4e\n", n, eps[n], lam[n], std::abs(eps[n] - lam[n]));

  std::printf("\n%5s %14s\n", "N", "gap of J");
  for (const auto& p : cwlab::splitting_curve(B, {10, 20, 40, 60, 80, 100}).points)
    std::printf("%5d %14.6e\n", p.N, p.splitting);
}
