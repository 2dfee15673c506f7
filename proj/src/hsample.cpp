#include "besov/hsample.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace besov {

double sphere_measure(int n) {
  if (n == 1) return 2.0;
  if (n == 2) return 2.0 * std::numbers::pi;
  throw std::invalid_argument("sphere_measure: n must be 1 or 2");
}

double HSample::band_measure(int a, int b) const {
  const double lo = band_lo[static_cast<std::size_t>(a)];
  const double hi = band_hi[static_cast<std::size_t>(b)];
  if (n == 1) return 2.0 * (hi - lo);
  return std::numbers::pi * (hi * hi - lo * lo);
}

double HSample::weight_sum(int a, int b) const {
  double s = 0.0;
  for (const HOffset& o : offsets)
    if (o.ring >= a && o.ring <= b) s += o.weight;
  return s;
}

HSample make_h_sample(int n, double h_min, double h_max, int K, int M) {
  if (n != 1 && n != 2) throw std::invalid_argument("make_h_sample: n must be 1 or 2");
  if (!(h_min > 0.0) || !(h_max > h_min)) throw std::invalid_argument("make_h_sample: need 0 < h_min < h_max");
  if (K < 16) throw std::invalid_argument("make_h_sample: K must be >= 16");
  if (n == 1 && M != 2) throw std::invalid_argument("make_h_sample: M must be exactly 2 in 1D");
  if (n == 2 && M < 16) throw std::invalid_argument("make_h_sample: M must be >= 16 in 2D");

  HSample hs;
  hs.n = n;
  hs.h_min = h_min;
  hs.h_max = h_max;
  hs.K = K;
  hs.M = M;
  hs.radii.resize(static_cast<std::size_t>(K));
  hs.band_lo.resize(static_cast<std::size_t>(K));
  hs.band_hi.resize(static_cast<std::size_t>(K));
  const double ratio = std::log(h_max / h_min) / (K - 1);
  for (int k = 0; k < K; ++k)
    hs.radii[static_cast<std::size_t>(k)] = h_min * std::exp(ratio * k);
  hs.radii.front() = h_min;
  hs.radii.back() = h_max;
  for (int k = 0; k < K; ++k) {
    hs.band_lo[static_cast<std::size_t>(k)] =
        k == 0 ? h_min : std::sqrt(hs.radii[static_cast<std::size_t>(k - 1)] * hs.radii[static_cast<std::size_t>(k)]);
    hs.band_hi[static_cast<std::size_t>(k)] =
        k == K - 1 ? h_max : std::sqrt(hs.radii[static_cast<std::size_t>(k)] * hs.radii[static_cast<std::size_t>(k + 1)]);
  }

  hs.offsets.reserve(static_cast<std::size_t>(K) * M);
  for (int k = 0; k < K; ++k) {
    const double r = hs.radii[static_cast<std::size_t>(k)];
    const double lo = hs.band_lo[static_cast<std::size_t>(k)];
    const double hi = hs.band_hi[static_cast<std::size_t>(k)];
    // exact band measure, split evenly across directions
    const double band = n == 1 ? (hi - lo) : 0.5 * (hi * hi - lo * lo) * (2.0 * std::numbers::pi / M);
    for (int m = 0; m < M; ++m) {
      HOffset o;
      o.r = r;
      o.ring = k;
      o.dir = m;
      o.weight = band;
      if (n == 1) {
        o.hx = m == 0 ? r : -r;
        o.hy = 0.0;
      } else {
        const double th = 2.0 * std::numbers::pi * m / M;
        o.hx = r * std::cos(th);
        o.hy = r * std::sin(th);
      }
      hs.offsets.push_back(o);
    }
  }
  return hs;
}

}  // namespace besov
