#pragma once

#include <vector>

namespace besov {

// One quadrature offset h = r * omega with its polar weight. The weight of
// node (k, m) is the exact polar measure of its radial band times the
// angular share, so band sums telescope exactly.
struct HOffset {
  double hx = 0.0, hy = 0.0;
  double r = 0.0;
  double weight = 0.0;
  int ring = 0;
  int dir = 0;
};

struct HSample {
  int n = 1;
  double h_min = 0.0, h_max = 0.0;
  int K = 0, M = 0;
  std::vector<double> radii;    // K log-uniform nodes, radii[0]=h_min, radii[K-1]=h_max
  std::vector<double> band_lo;  // per-node band edges (geometric midpoints)
  std::vector<double> band_hi;
  std::vector<HOffset> offsets;  // K*M

  // total dh-measure of the annulus {band_lo[a] <= |h| <= band_hi[b]}
  double band_measure(int a, int b) const;
  double weight_sum(int a, int b) const;
};

// n = 1: M must be 2 (the two half-lines). n = 2: M >= 16 equi-angular
// directions. K >= 16 log-uniform radii in [h_min, h_max].
HSample make_h_sample(int n, double h_min, double h_max, int K, int M);

// surface measure of S^{n-1}: 2 for n=1, 2*pi for n=2
double sphere_measure(int n);

}  // namespace besov
