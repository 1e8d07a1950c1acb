// Builds V_- from a generator, then compares the closed-form levels with the
// finite-difference oracle.
//   qes_levels [k] [epsilon]

#include <cstdio>
#include <cstdlib>

#include "susyqes/susyqes.hpp"

int main(int argc, char** argv) {
  using namespace susyqes;
  const int k = argc > 1 ? std::atoi(argv[1]) : 1;
  const double eps = argc > 2 ? std::atof(argv[2]) : 2.0;

  const auto g = GeneratorFunction::hermite_odd(k);
  const auto pp = partner_potentials(superpotentials_from_phi(g, eps));
  const EigenPair states(g, eps);
  const Grid grid(12.0, 4001);

  const auto res = solve_spectrum([&](double x) { return pp.minus(x); }, grid, {.levels = 4});
  std::printf("%s, eps = %g\n", g.name().c_str(), eps);
  for (int n = 0; n < 4; ++n) {
    std::printf("  E_%d = %.10f", n, res.eigenvalues[n]);
    if (n < 2) {
      const double ov = overlap_sampled(states.sample(grid, n), res.eigenvectors[n], grid);
      std::printf("   closed form %.1f, overlap %.8f", states.energy(n), ov);
    }
    std::printf("\n");
  }
  return 0;
}
