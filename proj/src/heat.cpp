#include "besov/heat.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "besov/kernels.hpp"
#include "besov/parallel.hpp"

namespace besov {

std::vector<double> geometric_levels(double t_lo, double t_hi, int count) {
  if (!(t_lo > 0.0 && t_hi > t_lo) || count < 2)
    throw std::invalid_argument("levels: need 0 < t_lo < t_hi and count >= 2");
  std::vector<double> t(static_cast<std::size_t>(count));
  const double lr = std::log(t_hi / t_lo) / (count - 1);
  for (int j = 0; j < count; ++j) t[static_cast<std::size_t>(j)] = t_lo * std::exp(lr * j);
  return t;
}

GridFunction heat_convolve(const GridFunction& f, double s) {
  const Grid& g = f.grid;
  const bool tiny = std::sqrt(2.0 * s) < 0.5 * g.dx;
  int rad = 0;
  const std::vector<double> w = kernels::gaussian_kernel(s, g.dx, tiny, rad);
  GridFunction out = zeros(g);
  out.family = "derived:heat";
  if (g.n == 1) {
    kernels::convolve_axis(f.v, out.v, g.N, 1, 0, w);
  } else {
    std::vector<double> tmp;
    kernels::convolve_axis(f.v, tmp, g.N, g.N, 0, w);
    kernels::convolve_axis(tmp, out.v, g.N, g.N, 1, w);
  }
  out.rescan_support();
  return out;
}

HalfSpaceField heat_extend(const GridFunction& f, const std::vector<double>& t_levels) {
  if (t_levels.empty()) throw std::invalid_argument("heat_extend: no levels");
  const Grid& g = f.grid;
  for (std::size_t j = 0; j < t_levels.size(); ++j) {
    if (!(t_levels[j] > 0.0)) throw std::invalid_argument("heat_extend: levels must be positive");
    if (t_levels[j] * t_levels[j] >= g.L * g.L)
      throw std::invalid_argument("heat_extend: level time exceeds L^2");
    if (j > 0 && !(t_levels[j] > t_levels[j - 1]))
      throw std::invalid_argument("heat_extend: levels must increase");
  }
  HalfSpaceField field;
  field.base = g;
  field.t_levels = t_levels;
  field.w.resize(t_levels.size());
  field.tiny_kernel.assign(t_levels.size(), 0);
  for (std::size_t j = 0; j < t_levels.size(); ++j) {
    const double t = t_levels[j];
    const double s = t * t;
    field.tiny_kernel[j] = std::sqrt(2.0 * s) < 0.5 * g.dx ? 1 : 0;
    field.w[j] = heat_convolve(f, s).v;
  }
  return field;
}

double gaussian_heat_closed_form(int n, double sigma, double s, double x, double y) {
  const double v = sigma * sigma + 4.0 * s;
  const double rho2 = n == 2 ? x * x + y * y : x * x;
  return std::pow(sigma * sigma / v, 0.5 * n) * std::exp(-rho2 / v);
}

std::vector<std::vector<std::uint8_t>> tent_indicator(const Region& O,
                                                      const HalfSpaceField& geom) {
  const Grid& g = geom.base;
  const int N = g.N;
  const int rows = g.n == 1 ? 1 : N;
  std::vector<std::vector<std::uint8_t>> masks(geom.t_levels.size());
  for (std::size_t j = 0; j < geom.t_levels.size(); ++j) {
    const double t = geom.t_levels[j];
    auto& mask = masks[j];
    mask.assign(static_cast<std::size_t>(g.cells()), 0);
    par_for(rows, [&](std::int64_t iy) {
      const double y = g.n == 2 ? g.center(static_cast<int>(iy)) : 0.0;
      for (int ix = 0; ix < N; ++ix) {
        const double x = g.center(ix);
        // B(x,t) inside O <=> x in O and dist(x, boundary of O) >= t;
        // analytic per part: erosion of balls/boxes
        bool inside = false;
        for (const Region::Part& p : O.parts) {
          if (p.kind == Region::Part::Ball) {
            const double d = g.n == 1 ? std::abs(x - p.c[0]) : std::hypot(x - p.c[0], y - p.c[1]);
            if (d + t <= p.r) { inside = true; break; }
          } else {
            const bool okx = x - p.lo[0] >= t && p.hi[0] - x >= t;
            const bool oky = g.n == 1 || (y - p.lo[1] >= t && p.hi[1] - y >= t);
            if (okx && oky) { inside = true; break; }
          }
        }
        if (inside) mask[static_cast<std::size_t>(ix) + static_cast<std::size_t>(iy) * N] = 1;
      }
    });
  }
  return masks;
}

GridFunction nontangential_maximal(const HalfSpaceField& field) {
  const Grid& g = field.base;
  const int N = g.N;
  const int rows = g.n == 1 ? 1 : N;
  GridFunction out = zeros(g);
  out.family = "derived:nontangential-maximal";

  // per level, precompute strict row extents of |y - x| < t
  struct Extent {
    int rad;
    std::vector<int> half;
  };
  std::vector<Extent> ext(field.t_levels.size());
  for (std::size_t j = 0; j < field.t_levels.size(); ++j) {
    const double tc = field.t_levels[j] / g.dx;
    int rad = static_cast<int>(std::ceil(tc)) - 1;
    if (static_cast<double>(rad + 1) < tc) rad = static_cast<int>(std::floor(tc));
    rad = std::max(rad, 0);
    ext[j].rad = rad;
    if (g.n == 2) {
      ext[j].half.resize(static_cast<std::size_t>(2 * rad + 1));
      for (int dy = -rad; dy <= rad; ++dy) {
        const double w2 = tc * tc - static_cast<double>(dy) * dy;
        int hw = w2 > 0.0 ? static_cast<int>(std::ceil(std::sqrt(w2))) - 1 : -1;
        ext[j].half[static_cast<std::size_t>(dy + rad)] = hw;
      }
    }
  }

  par_for(rows, [&](std::int64_t iy) {
    for (int ix = 0; ix < N; ++ix) {
      double m = 0.0;
      for (std::size_t j = 0; j < field.t_levels.size(); ++j) {
        const auto& lvl = field.w[j];
        if (g.n == 1) {
          const int rad = ext[j].rad;
          const int lo = std::max(0, ix - rad), hi = std::min(N - 1, ix + rad);
          for (int jx = lo; jx <= hi; ++jx) m = std::max(m, std::abs(lvl[static_cast<std::size_t>(jx)]));
        } else {
          const int rad = ext[j].rad;
          for (int dy = -rad; dy <= rad; ++dy) {
            const int jy = static_cast<int>(iy) + dy;
            if (jy < 0 || jy >= N) continue;
            const int hw = ext[j].half[static_cast<std::size_t>(dy + rad)];
            if (hw < 0) continue;
            const int lo = std::max(0, ix - hw), hi = std::min(N - 1, ix + hw);
            const double* row = lvl.data() + static_cast<std::size_t>(jy) * N;
            for (int jx = lo; jx <= hi; ++jx) m = std::max(m, std::abs(row[jx]));
          }
        }
      }
      out.v[static_cast<std::size_t>(ix) + static_cast<std::size_t>(iy) * N] = m;
    }
  });
  out.rescan_support();
  return out;
}

std::vector<double> dyadic_radii(const Grid& g) {
  std::vector<double> r;
  for (double x = g.dx; x <= 2.0 * g.L; x *= 2.0) r.push_back(x);
  return r;
}

GridFunction hardy_littlewood_maximal(const GridFunction& f, const std::vector<double>& radii) {
  if (radii.empty()) throw std::invalid_argument("maximal: empty radius set");
  const Grid& g = f.grid;
  const int N = g.N;
  const int rows = g.n == 1 ? 1 : N;
  GridFunction out = zeros(g);
  out.family = "derived:hl-maximal";

  // row prefix sums of |f|
  std::vector<double> prefix(static_cast<std::size_t>(rows) * (N + 1), 0.0);
  for (int iy = 0; iy < rows; ++iy) {
    const double* row = f.v.data() + static_cast<std::size_t>(iy) * N;
    double* pre = prefix.data() + static_cast<std::size_t>(iy) * (N + 1);
    for (int ix = 0; ix < N; ++ix) pre[ix + 1] = pre[ix] + std::abs(row[ix]);
  }

  struct Extent {
    int rad;
    std::vector<int> half;
  };
  std::vector<Extent> ext(radii.size());
  for (std::size_t m = 0; m < radii.size(); ++m) {
    const double rc = radii[m] / g.dx;
    ext[m].rad = static_cast<int>(std::floor(rc));
    if (g.n == 2) {
      ext[m].half.resize(static_cast<std::size_t>(2 * ext[m].rad + 1));
      for (int dy = -ext[m].rad; dy <= ext[m].rad; ++dy) {
        const double w2 = rc * rc - static_cast<double>(dy) * dy;
        ext[m].half[static_cast<std::size_t>(dy + ext[m].rad)] =
            w2 >= 0.0 ? static_cast<int>(std::floor(std::sqrt(w2))) : -1;
      }
    }
  }

  par_for(rows, [&](std::int64_t iy) {
    for (int ix = 0; ix < N; ++ix) {
      double best = 0.0;
      for (std::size_t m = 0; m < radii.size(); ++m) {
        const int rad = ext[m].rad;
        double sum = 0.0;
        std::int64_t cnt = 0;
        if (g.n == 1) {
          const int lo = std::max(0, ix - rad), hi = std::min(N - 1, ix + rad);
          const double* pre = prefix.data();
          sum = pre[hi + 1] - pre[lo];
          cnt = hi - lo + 1;
        } else {
          for (int dy = -rad; dy <= rad; ++dy) {
            const int jy = static_cast<int>(iy) + dy;
            if (jy < 0 || jy >= N) continue;
            const int hw = ext[m].half[static_cast<std::size_t>(dy + rad)];
            if (hw < 0) continue;
            const int lo = std::max(0, ix - hw), hi = std::min(N - 1, ix + hw);
            const double* pre = prefix.data() + static_cast<std::size_t>(jy) * (N + 1);
            sum += pre[hi + 1] - pre[lo];
            cnt += hi - lo + 1;
          }
        }
        if (cnt > 0) best = std::max(best, sum / static_cast<double>(cnt));
      }
      out.v[static_cast<std::size_t>(ix) + static_cast<std::size_t>(iy) * N] = best;
    }
  });
  out.rescan_support();
  return out;
}

namespace {

// |{x : B(x,t) subset O}| analytically (erosion measure)
double slice_measure(const Region& O, double t) {
  double total = 0.0;
  // parts are assumed pairwise disjoint for suite regions; erosions of
  // disjoint parts stay disjoint
  for (const Region::Part& p : O.parts) {
    if (p.kind == Region::Part::Ball) {
      const double r = p.r - t;
      if (r <= 0.0) continue;
      total += O.n == 1 ? 2.0 * r : std::numbers::pi * r * r;
    } else {
      const double wx = (p.hi[0] - p.lo[0]) - 2.0 * t;
      if (wx <= 0.0) continue;
      if (O.n == 1) total += wx;
      else {
        const double wy = (p.hi[1] - p.lo[1]) - 2.0 * t;
        if (wy > 0.0) total += wx * wy;
      }
    }
  }
  return total;
}

}  // namespace

double tent_measure_analytic(const HalfSpaceMeasure& nu, const Region& O, double t_lo,
                             int slabs) {
  if (!(nu.s > 0.0)) throw std::invalid_argument("half-space measure: s must be positive");
  double t_hi = 0.0;
  for (const Region::Part& p : O.parts) {
    if (p.kind == Region::Part::Ball) t_hi = std::max(t_hi, p.r);
    else {
      double m = 0.5 * (p.hi[0] - p.lo[0]);
      if (O.n == 2) m = std::min(m, 0.5 * (p.hi[1] - p.lo[1]));
      t_hi = std::max(t_hi, m);
    }
  }
  if (!(t_lo > 0.0) || t_lo >= t_hi) t_lo = 1e-6 * t_hi;

  // exact per-slab integral of t^{s-1}, slice evaluated at the slab's
  // geometric node; plus the exact [0, t_lo) head with the slice frozen at 0
  double acc = slice_measure(O, 0.0) * std::pow(t_lo, nu.s) / nu.s;
  const double lr = std::log(t_hi / t_lo) / slabs;
  for (int j = 0; j < slabs; ++j) {
    const double a = t_lo * std::exp(lr * j);
    const double b = t_lo * std::exp(lr * (j + 1));
    const double node = std::sqrt(a * b);
    acc += slice_measure(O, node) * (std::pow(b, nu.s) - std::pow(a, nu.s)) / nu.s;
  }
  return acc;
}

double tent_measure_ball_oracle(const HalfSpaceMeasure& nu, int n, double r) {
  const double s = nu.s;
  if (n == 1) return 2.0 * std::pow(r, s + 1.0) / (s * (s + 1.0));
  return 2.0 * std::numbers::pi * std::pow(r, s + 2.0) / (s * (s + 1.0) * (s + 2.0));
}

double tent_measure_grid(const HalfSpaceMeasure& nu, const Region& O,
                         const HalfSpaceField& geom) {
  const Grid& g = geom.base;
  const double cell = g.n == 1 ? g.dx : g.dx * g.dx;
  const auto masks = tent_indicator(O, geom);
  const auto& t = geom.t_levels;
  double acc = 0.0;
  for (std::size_t j = 0; j < t.size(); ++j) {
    // slab [geometric midpoints]; end slabs extend to t_0 / t_last
    const double a = j == 0 ? t[0] : std::sqrt(t[j - 1] * t[j]);
    const double b = j + 1 == t.size() ? t[j] : std::sqrt(t[j] * t[j + 1]);
    const double wj = (std::pow(b, nu.s) - std::pow(a, nu.s)) / nu.s;
    std::int64_t cnt = 0;
    for (std::uint8_t m : masks[j]) cnt += m;
    acc += wj * static_cast<double>(cnt) * cell;
  }
  return acc;
}

double superlevel_measure(const HalfSpaceMeasure& nu, const HalfSpaceField& field,
                          double lambda) {
  const Grid& g = field.base;
  const double cell = g.n == 1 ? g.dx : g.dx * g.dx;
  const auto& t = field.t_levels;
  double acc = 0.0;
  for (std::size_t j = 0; j < t.size(); ++j) {
    const double a = j == 0 ? t[0] : std::sqrt(t[j - 1] * t[j]);
    const double b = j + 1 == t.size() ? t[j] : std::sqrt(t[j] * t[j + 1]);
    const double wj = (std::pow(b, nu.s) - std::pow(a, nu.s)) / nu.s;
    const auto& lvl = field.w[j];
    const double cnt = det_sum(static_cast<std::int64_t>(lvl.size()), [&](std::int64_t k) {
      return std::abs(lvl[static_cast<std::size_t>(k)]) > lambda ? 1.0 : 0.0;
    });
    acc += wj * cnt * cell;
  }
  return acc;
}

CarlesonReport carleson_check(const HalfSpaceMeasure& nu, const std::vector<Region>& tents_of,
                              const std::vector<FunctionSpec>& funcs, const BesovParams& bp,
                              double q, const Grid& g, const HSample& hs,
                              const CarlesonOpts& opts) {
  if (!(bp.p > 1.0 && bp.alpha * bp.p < g.n))
    throw std::invalid_argument("carleson: requires p in (1, n/alpha)");
  CarlesonReport rep;
  rep.s = nu.s;
  rep.q = q;

  SolverOpts sopts;
  sopts.max_iter = opts.solver_iters;
  sopts.seed = opts.seed;

  double rmin = inf(), rmax = 0.0;
  for (const Region& O : tents_of) {
    CarlesonGeometryRow row;
    row.r = O.single_ball() ? O.parts.front().r : O.diameter() / 2.0;
    row.nu_tent = tent_measure_analytic(nu, O, g.dx / 8.0);
    const auto est = capacity_minimize(O, bp, g, hs, sopts);
    row.capacity_qp = std::pow(est.upper, q / bp.p);
    row.ratio = row.capacity_qp > 0.0 ? row.nu_tent / row.capacity_qp : 0.0;
    rep.geometry.push_back(row);
    if (row.ratio > 0.0) {
      rmin = std::min(rmin, row.ratio);
      rmax = std::max(rmax, row.ratio);
    }
  }
  rep.geometry_ratio_spread = rmin < rmax && rmin > 0.0 ? rmax / rmin : 1.0;

  const double t_hi = 0.5 * g.L;
  const double t_lo = 2.0 * g.dx;
  const auto levels = geometric_levels(t_lo, t_hi, opts.levels);

  for (const FunctionSpec& spec : funcs) {
    const GridFunction f = sample_function(spec, g);
    const auto field = heat_extend(f, levels);
    const double fmax = lp_norm(f, inf());
    double lhs = 0.0;
    for (int i = 0; i < 48; ++i) {
      const double lam = 1e-3 * fmax * std::pow(1000.0, static_cast<double>(i) / 47);
      lhs = std::max(lhs, std::pow(lam, q) * superlevel_measure(nu, field, lam));
    }
    CarlesonWeakTypeRow row;
    row.family = spec.family;
    row.lhs = lhs;
    row.rhs = std::pow(besov_seminorm(f, bp, hs).value, q);
    row.ratio = row.rhs > 0.0 ? row.lhs / row.rhs : 0.0;
    rep.weak_type.push_back(row);

    const GridFunction mn = nontangential_maximal(field);
    const GridFunction mf = hardy_littlewood_maximal(f, dyadic_radii(g));
    double c0 = 0.0;
    for (std::size_t k = 0; k < mn.v.size(); ++k)
      if (mf.v[k] > 0.0) c0 = std::max(c0, mn.v[k] / mf.v[k]);
    rep.maximal.push_back({spec.family, c0});
    rep.c0_suite = std::max(rep.c0_suite, c0);
  }
  return rep;
}

}  // namespace besov
