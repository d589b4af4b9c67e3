// A small bump near the right minimum pushes the ground state into the left well.

#include <cstdio>

#include "cwlab/cwlab.hpp"

int main() {
  const int N = 65;
  const double B = 0.5;
  const cwlab::FleaParams flea{(N - 9.0) / N, 1.0 / 45.0, 0.4};
  for (const auto& f : {flea, cwlab::mirrored(flea)}) {
    cwlab::ModelParams p{N, B};
    p.flea = f;
    const auto s = cwlab::eig_lowest(cwlab::build_scaled_cw(p), 2, true);
    const auto rep = cwlab::localization_report(s.vectors[0], N);
    const auto agmon = cwlab::classify_cw_flea(B, f);
    std::printf("b=%.4f  gap=%.3e  left=%.4f right=%.4f  m=%+.4f  agmon: %s (%s)\n", f.b, s.values[1] - s.values[0],
                rep.left_mass, rep.right_mass, rep.magnetization, cwlab::to_string(agmon.regime),
                cwlab::to_string(agmon.predicted_side));
  }
}
