#include "besov/regions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "besov/grid.hpp"
#include "besov/parallel.hpp"

namespace besov {

namespace {

double part_volume(int n, const Region::Part& p) {
  if (p.kind == Region::Part::Ball) {
    if (n == 1) return 2.0 * p.r;
    return std::numbers::pi * p.r * p.r;
  }
  double v = p.hi[0] - p.lo[0];
  if (n == 2) v *= p.hi[1] - p.lo[1];
  return v;
}

double part_dist(int n, const Region::Part& p, double x, double y) {
  if (p.kind == Region::Part::Ball) {
    const double d = n == 1 ? std::abs(x - p.c[0]) : std::hypot(x - p.c[0], y - p.c[1]);
    return std::max(0.0, d - p.r);
  }
  const double dx = std::max({p.lo[0] - x, 0.0, x - p.hi[0]});
  if (n == 1) return dx;
  const double dy = std::max({p.lo[1] - y, 0.0, y - p.hi[1]});
  return std::hypot(dx, dy);
}

bool part_contains(int n, const Region::Part& p, double x, double y) {
  if (p.kind == Region::Part::Ball) {
    const double d = n == 1 ? std::abs(x - p.c[0]) : std::hypot(x - p.c[0], y - p.c[1]);
    return d <= p.r;
  }
  if (x < p.lo[0] || x > p.hi[0]) return false;
  if (n == 2 && (y < p.lo[1] || y > p.hi[1])) return false;
  return true;
}

void part_bbox(int n, const Region::Part& p, std::array<double, 2>& lo, std::array<double, 2>& hi) {
  if (p.kind == Region::Part::Ball) {
    lo = {p.c[0] - p.r, n == 2 ? p.c[1] - p.r : 0.0};
    hi = {p.c[0] + p.r, n == 2 ? p.c[1] + p.r : 0.0};
  } else {
    lo = p.lo;
    hi = p.hi;
  }
}

// area of the intersection of two disks
double lens_area(double r1, double r2, double d) {
  if (d >= r1 + r2) return 0.0;
  if (d <= std::abs(r1 - r2)) {
    const double r = std::min(r1, r2);
    return std::numbers::pi * r * r;
  }
  const double a1 = std::acos(std::clamp((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1), -1.0, 1.0));
  const double a2 = std::acos(std::clamp((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2), -1.0, 1.0));
  const double s = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
  return r1 * r1 * a1 + r2 * r2 * a2 - 0.5 * std::sqrt(std::max(0.0, s));
}

// |A cap (B - h)| for two parts of matching kind (exact); negative if unsupported
double part_pair_overlap(int n, const Region::Part& a, const Region::Part& b,
                         double hx, double hy) {
  if (a.kind == Region::Part::Ball && b.kind == Region::Part::Ball) {
    if (n == 1) {
      const double lo = std::max(a.c[0] - a.r, b.c[0] - hx - b.r);
      const double hi = std::min(a.c[0] + a.r, b.c[0] - hx + b.r);
      return std::max(0.0, hi - lo);
    }
    const double d = std::hypot(a.c[0] - (b.c[0] - hx), a.c[1] - (b.c[1] - hy));
    return lens_area(a.r, b.r, d);
  }
  if (a.kind == Region::Part::Box && b.kind == Region::Part::Box) {
    const double lx = std::max(a.lo[0], b.lo[0] - hx);
    const double hx2 = std::min(a.hi[0], b.hi[0] - hx);
    double v = std::max(0.0, hx2 - lx);
    if (n == 2) {
      const double ly = std::max(a.lo[1], b.lo[1] - hy);
      const double hy2 = std::min(a.hi[1], b.hi[1] - hy);
      v *= std::max(0.0, hy2 - ly);
    }
    return v;
  }
  return -1.0;
}

bool parts_disjoint(int n, const Region& E) {
  for (std::size_t i = 0; i < E.parts.size(); ++i)
    for (std::size_t j = i + 1; j < E.parts.size(); ++j) {
      const double ov = part_pair_overlap(n, E.parts[i], E.parts[j], 0.0, 0.0);
      if (ov < 0.0 || ov > 1e-14) return false;
    }
  return true;
}

// rasterized measure of {x in E : x - h in E} over the bbox union
MeasureValue raster_overlap(const Region& E, double hx, double hy) {
  std::array<double, 2> lo, hi;
  E.bbox(lo, hi);
  const int n = E.n;
  const int M = n == 1 ? (1 << 20) : 1200;
  const double sx = (hi[0] - lo[0]) / M;
  const double sy = n == 2 ? (hi[1] - lo[1]) / M : 1.0;
  const double cell = n == 1 ? sx : sx * sy;
  const std::int64_t rows = n == 1 ? 1 : M;

  std::vector<std::int64_t> counts(static_cast<std::size_t>(rows), 0);
  std::vector<std::int64_t> boundary(static_cast<std::size_t>(rows), 0);
  par_for(rows, [&](std::int64_t iy) {
    const double y = n == 2 ? lo[1] + (iy + 0.5) * sy : 0.0;
    std::int64_t c = 0, b = 0;
    auto member = [&](double px, double py) {
      return E.contains(px, py) && E.contains(px - hx, py - hy);
    };
    for (int ix = 0; ix < M; ++ix) {
      const double x = lo[0] + (ix + 0.5) * sx;
      const bool in = member(x, y);
      if (in) ++c;
      // cells whose corner memberships disagree with the center straddle the
      // boundary; they bound the raster error
      bool mixed = false;
      for (int cx = -1; cx <= 1 && !mixed; cx += 2)
        for (int cy = -1; cy <= 1 && !mixed; cy += n == 2 ? 2 : 3)
          if (member(x + 0.5 * cx * sx, n == 2 ? y + 0.5 * cy * sy : 0.0) != in) mixed = true;
      if (mixed) ++b;
    }
    counts[static_cast<std::size_t>(iy)] = c;
    boundary[static_cast<std::size_t>(iy)] = b;
  });
  std::int64_t c = 0, b = 0;
  for (std::int64_t v : counts) c += v;
  for (std::int64_t v : boundary) b += v;
  MeasureValue mv;
  mv.value = static_cast<double>(c) * cell;
  mv.error_bound = static_cast<double>(b) * cell;
  return mv;
}

}  // namespace

Region Region::ball(int n, std::array<double, 2> c, double r) {
  Region e;
  e.n = n;
  Part p;
  p.kind = Part::Ball;
  p.c = c;
  p.r = r;
  e.parts.push_back(p);
  e.validate();
  return e;
}

Region Region::interval(double a, double b) {
  Region e;
  e.n = 1;
  Part p;
  p.kind = Part::Box;
  p.lo = {a, 0};
  p.hi = {b, 0};
  e.parts.push_back(p);
  e.validate();
  return e;
}

Region Region::box(std::array<double, 2> lo, std::array<double, 2> hi) {
  Region e;
  e.n = 2;
  Part p;
  p.kind = Part::Box;
  p.lo = lo;
  p.hi = hi;
  e.parts.push_back(p);
  e.validate();
  return e;
}

Region Region::union_of(const std::vector<Region>& rs) {
  if (rs.empty()) throw std::invalid_argument("region union: empty list");
  Region e;
  e.n = rs.front().n;
  for (const Region& r : rs) {
    if (r.n != e.n) throw std::invalid_argument("region union: dimension mismatch");
    for (const Part& p : r.parts) e.parts.push_back(p);
  }
  e.validate();
  return e;
}

void Region::validate() const {
  if (n != 1 && n != 2) throw std::invalid_argument("region: n must be 1 or 2");
  if (parts.empty()) throw std::invalid_argument("region: no parts");
  for (const Part& p : parts) {
    if (p.kind == Part::Ball) {
      if (!(p.r > 0.0)) throw std::invalid_argument("region: ball radius must be positive");
    } else {
      if (!(p.hi[0] > p.lo[0])) throw std::invalid_argument("region: degenerate box");
      if (n == 2 && !(p.hi[1] > p.lo[1])) throw std::invalid_argument("region: degenerate box");
    }
  }
}

bool Region::contains(double x, double y) const {
  for (const Part& p : parts)
    if (part_contains(n, p, x, y)) return true;
  return false;
}

double Region::dist(double x, double y) const {
  double d = part_dist(n, parts.front(), x, y);
  for (std::size_t i = 1; i < parts.size(); ++i) d = std::min(d, part_dist(n, parts[i], x, y));
  return d;
}

void Region::bbox(std::array<double, 2>& lo, std::array<double, 2>& hi) const {
  lo = {1e300, 1e300};
  hi = {-1e300, -1e300};
  for (const Part& p : parts) {
    std::array<double, 2> plo, phi;
    part_bbox(n, p, plo, phi);
    lo[0] = std::min(lo[0], plo[0]);
    hi[0] = std::max(hi[0], phi[0]);
    lo[1] = std::min(lo[1], plo[1]);
    hi[1] = std::max(hi[1], phi[1]);
  }
  if (n == 1) { lo[1] = 0; hi[1] = 0; }
}

double Region::diameter() const {
  std::array<double, 2> lo, hi;
  bbox(lo, hi);
  const double ex = hi[0] - lo[0];
  if (n == 1) return ex;
  return std::hypot(ex, hi[1] - lo[1]);
}

MeasureValue volume(const Region& E) {
  // single part or pairwise-disjoint union: exact
  double total = 0.0;
  for (const Region::Part& p : E.parts) total += part_volume(E.n, p);
  if (E.parts.size() == 1 || parts_disjoint(E.n, E)) return {total, 0.0};

  // overlapping pair of matching kind: inclusion-exclusion
  if (E.parts.size() == 2) {
    const double ov = part_pair_overlap(E.n, E.parts[0], E.parts[1], 0.0, 0.0);
    if (ov >= 0.0) return {total - ov, 0.0};
  }
  return raster_overlap(E, 0.0, 0.0);
}

MeasureValue overlap_volume(const Region& E, double hx, double hy) {
  if (E.n == 1) hy = 0.0;
  if (E.parts.size() == 1) {
    const double ov = part_pair_overlap(E.n, E.parts[0], E.parts[0], hx, hy);
    if (ov >= 0.0) return {ov, 0.0};
  }
  // disjoint parts: the pieces A_i cap (A_j - h) are pairwise disjoint
  if (parts_disjoint(E.n, E)) {
    double s = 0.0;
    bool exact = true;
    for (const Region::Part& a : E.parts)
      for (const Region::Part& b : E.parts) {
        const double ov = part_pair_overlap(E.n, a, b, hx, hy);
        if (ov < 0.0) { exact = false; break; }
        s += ov;
      }
    if (exact) return {s, 0.0};
  }
  return raster_overlap(E, hx, hy);
}

double surface_measure(const Region& E) {
  if (E.parts.size() != 1) throw std::invalid_argument("surface_measure: single parts only");
  const Region::Part& p = E.parts.front();
  if (E.n == 1) return 2.0;  // counting measure of the two endpoints
  if (p.kind == Region::Part::Ball) return 2.0 * std::numbers::pi * p.r;
  return 2.0 * ((p.hi[0] - p.lo[0]) + (p.hi[1] - p.lo[1]));
}

namespace {

double perimeter_objective(const Region& E, double vol, double alpha, double p,
                           double hx, double hy) {
  const double ov = overlap_volume(E, hx, hy).value;
  const double sym = std::max(0.0, 2.0 * (vol - ov));
  const double r = E.n == 2 ? std::hypot(hx, hy) : std::abs(hx);
  return std::pow(r, -alpha) * std::pow(sym, 1.0 / p);
}

}  // namespace

PerimeterResult perimeter(const Region& E, double alpha, double p, PerimeterSearch search) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("perimeter: alpha must be in (0,1)");
  if (!(p >= 1.0) || std::isinf(p)) throw std::invalid_argument("perimeter: p must be in [1, inf)");
  E.validate();
  const double diam = E.diameter();
  if (search.h_lo <= 0.0) search.h_lo = 1e-4 * diam;
  if (search.h_hi <= 0.0) search.h_hi = 3.0 * diam;
  if (!(search.h_lo < search.h_hi)) throw std::invalid_argument("perimeter: bad search range");

  PerimeterResult res;
  res.search = search;
  const double vol = volume(E).value;

  const int n_dir = E.n == 1 || E.single_ball() ? 1 : std::max(1, search.directions);
  const int n_rad = std::max(8, search.radial);

  // divergence probe: log-log slope over the smallest decade
  {
    std::vector<double> hs(6), vals(6);
    for (int i = 0; i < 6; ++i) {
      hs[static_cast<std::size_t>(i)] = search.h_lo * std::pow(10.0, i / 5.0);
      double best = 0.0;
      for (int m = 0; m < n_dir; ++m) {
        const double th = std::numbers::pi * m / n_dir;
        const double hx = hs[static_cast<std::size_t>(i)] * std::cos(th);
        const double hy = E.n == 2 ? hs[static_cast<std::size_t>(i)] * std::sin(th) : 0.0;
        best = std::max(best, perimeter_objective(E, vol, alpha, p, hx, hy));
      }
      vals[static_cast<std::size_t>(i)] = best;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int i = 0; i < 6; ++i)
      if (vals[static_cast<std::size_t>(i)] > 0.0) {
        const double lx = std::log(hs[static_cast<std::size_t>(i)]);
        const double ly = std::log(vals[static_cast<std::size_t>(i)]);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        ++m;
      }
    if (m >= 3) res.small_h_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    if (m >= 3 && res.small_h_slope < -0.01) {
      res.diverged = true;
      res.value = inf();
      return res;
    }
  }

  const double lr = std::log(search.h_hi / search.h_lo) / (n_rad - 1);
  double best = -1.0;
  for (int m = 0; m < n_dir; ++m) {
    const double th = E.n == 2 ? std::numbers::pi * m / n_dir : 0.0;
    const double ux = std::cos(th), uy = E.n == 2 ? std::sin(th) : 0.0;
    auto fn = [&](double r) { return perimeter_objective(E, vol, alpha, p, r * ux, r * uy); };

    std::vector<double> vals(static_cast<std::size_t>(n_rad));
    par_for(n_rad, [&](std::int64_t k) {
      vals[static_cast<std::size_t>(k)] = fn(search.h_lo * std::exp(lr * k));
    });
    int k_best = 0;
    for (int k = 1; k < n_rad; ++k)
      if (vals[static_cast<std::size_t>(k)] > vals[static_cast<std::size_t>(k_best)]) k_best = k;
    const double a = search.h_lo * std::exp(lr * std::max(0, k_best - 1));
    const double b = search.h_lo * std::exp(lr * std::min(n_rad - 1, k_best + 1));
    double arg = search.h_lo * std::exp(lr * k_best);
    double val = vals[static_cast<std::size_t>(k_best)];
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = a, hi = b;
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double fc = fn(c), fd = fn(d);
    for (int it = 0; it < search.golden_iters; ++it) {
      if (fc < fd) { lo = c; c = d; fc = fd; d = lo + gr * (hi - lo); fd = fn(d); }
      else { hi = d; d = c; fd = fc; c = hi - gr * (hi - lo); fc = fn(c); }
    }
    if (fc > val) { val = fc; arg = c; }
    if (fd > val) { val = fd; arg = d; }
    if (val > best) {
      best = val;
      res.value = val;
      res.argmax_r = arg;
      res.argmax_h = {arg * ux, arg * uy};
    }
  }
  return res;
}

DivergenceScan perimeter_divergence_scan(const Region& E, double alpha, double p,
                                         const std::vector<double>& h_sequence) {
  if (h_sequence.size() < 4)
    throw std::invalid_argument("divergence scan: need at least 4 points");
  DivergenceScan scan;
  scan.h = h_sequence;
  const double vol = volume(E).value;
  for (double h : h_sequence)
    scan.value.push_back(perimeter_objective(E, vol, alpha, p, h, 0.0));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < scan.h.size(); ++i) {
    if (!(scan.value[i] > 0.0)) continue;
    const double lx = std::log(scan.h[i]);
    const double ly = std::log(scan.value[i]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    ++m;
  }
  if (m < 3) throw std::invalid_argument("divergence scan: degenerate values");
  scan.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return scan;
}

double hausdorff_normalization(double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("hausdorff: beta must be positive");
  return std::pow(std::numbers::pi, 0.5 * beta) / std::tgamma(1.0 + 0.5 * beta);
}

BallCover self_cover(const Region& E) {
  BallCover c;
  for (const Region::Part& p : E.parts) {
    if (p.kind != Region::Part::Ball)
      throw std::invalid_argument("self_cover: region has non-ball parts");
    c.balls.push_back(p);
  }
  return c;
}

namespace {

bool cover_contains(const Region& E, const BallCover& cover) {
  const int n = E.n;
  // single-ball covers of single-part regions: analytic containment
  if (cover.balls.size() == 1 && E.parts.size() == 1) {
    const Region::Part& c = cover.balls.front();
    const Region::Part& p = E.parts.front();
    if (p.kind == Region::Part::Ball) {
      const double d = n == 1 ? std::abs(p.c[0] - c.c[0]) : std::hypot(p.c[0] - c.c[0], p.c[1] - c.c[1]);
      return d + p.r <= c.r + 1e-12;
    }
    double worst = 0.0;
    for (int cx = 0; cx < 2; ++cx)
      for (int cy = 0; cy < (n == 2 ? 2 : 1); ++cy) {
        const double x = cx ? p.hi[0] : p.lo[0];
        const double y = n == 2 ? (cy ? p.hi[1] : p.lo[1]) : 0.0;
        const double d = n == 1 ? std::abs(x - c.c[0]) : std::hypot(x - c.c[0], y - c.c[1]);
        worst = std::max(worst, d);
      }
    return worst <= c.r + 1e-12;
  }
  // rasterized containment: every sampled point of E must be covered
  std::array<double, 2> lo, hi;
  E.bbox(lo, hi);
  const int M = n == 1 ? (1 << 16) : 512;
  const double sx = (hi[0] - lo[0]) / M;
  const double sy = n == 2 ? (hi[1] - lo[1]) / M : 1.0;
  const std::int64_t rows = n == 1 ? 1 : M;
  double violations = par_max(rows, [&](std::int64_t iy) {
    const double y = n == 2 ? lo[1] + (iy + 0.5) * sy : 0.0;
    double bad = 0.0;
    for (int ix = 0; ix < M; ++ix) {
      const double x = lo[0] + (ix + 0.5) * sx;
      if (!E.contains(x, y)) continue;
      bool covered = false;
      for (const Region::Part& c : cover.balls) {
        const double d = n == 1 ? std::abs(x - c.c[0]) : std::hypot(x - c.c[0], y - c.c[1]);
        if (d <= c.r + 1e-12) { covered = true; break; }
      }
      if (!covered) bad = 1.0;
    }
    return bad;
  });
  return violations == 0.0;
}

}  // namespace

double hausdorff_content_upper(const Region& E, double beta,
                               const std::vector<BallCover>& covers) {
  if (!(beta > 0.0 && beta <= E.n)) throw std::invalid_argument("hausdorff: beta must be in (0, n]");
  if (covers.empty()) throw std::invalid_argument("hausdorff: no covers supplied");
  const double ob = hausdorff_normalization(beta);
  double best = inf();
  bool any = false;
  for (const BallCover& c : covers) {
    if (c.balls.empty()) throw std::invalid_argument("hausdorff: empty cover");
    if (!cover_contains(E, c)) throw std::invalid_argument("hausdorff: a supplied cover does not contain the region");
    double s = 0.0;
    for (const Region::Part& b : c.balls) s += ob * std::pow(b.r, beta);
    best = std::min(best, s);
    any = true;
  }
  if (!any) throw std::invalid_argument("hausdorff: no valid cover");
  return best;
}

}  // namespace besov
