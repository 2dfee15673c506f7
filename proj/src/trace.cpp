#include "besov/trace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "besov/parallel.hpp"

namespace besov {

std::string OuterMeasure::id() const {
  switch (kind) {
    case Lebesgue: return "lebesgue" + std::to_string(n);
    case Slice: return "slice1@y=" + std::to_string(anchor_y);
    default: return "weighted|x|^" + std::to_string(gamma);
  }
}

namespace {

// 1D Lebesgue measure of { x : (x, y0) in S } for axis-aligned slices
double chord_measure(const Region& S, double y0) {
  // suite regions have pairwise-disjoint parts; chords stay disjoint
  double total = 0.0;
  for (const Region::Part& p : S.parts) {
    if (p.kind == Region::Part::Ball) {
      const double d2 = p.r * p.r - (y0 - p.c[1]) * (y0 - p.c[1]);
      if (d2 > 0.0) total += 2.0 * std::sqrt(d2);
    } else {
      if (y0 >= p.lo[1] && y0 <= p.hi[1]) total += p.hi[0] - p.lo[0];
    }
  }
  return total;
}

double weighted_ball_origin(double r, double gamma, int n) {
  // int_{B(0,r)} |x|^gamma dx
  if (n == 1) return 2.0 * std::pow(r, gamma + 1.0) / (gamma + 1.0);
  return 2.0 * std::numbers::pi * std::pow(r, gamma + 2.0) / (gamma + 2.0);
}

}  // namespace

double OuterMeasure::eval_ball(std::array<double, 2> c, double r) const {
  switch (kind) {
    case Lebesgue:
      return n == 1 ? 2.0 * r : std::numbers::pi * r * r;
    case Slice: {
      const double d2 = r * r - (anchor_y - c[1]) * (anchor_y - c[1]);
      return d2 > 0.0 ? 2.0 * std::sqrt(d2) : 0.0;
    }
    case Weighted:
    default: {
      const double cr = n == 1 ? std::abs(c[0]) : std::hypot(c[0], c[1]);
      if (cr < 1e-14) return weighted_ball_origin(r, gamma, n);
      // raster fallback over the ball bounding box
      const int M = 400;
      const double step = 2.0 * r / M;
      double acc = 0.0;
      for (int iy = 0; iy < (n == 2 ? M : 1); ++iy) {
        const double y = n == 2 ? c[1] - r + (iy + 0.5) * step : 0.0;
        for (int ix = 0; ix < M; ++ix) {
          const double x = c[0] - r + (ix + 0.5) * step;
          const double d = n == 1 ? std::abs(x - c[0]) : std::hypot(x - c[0], y - c[1]);
          if (d <= r) acc += std::pow(n == 1 ? std::abs(x) : std::hypot(x, y), gamma);
        }
      }
      return acc * (n == 1 ? step : step * step);
    }
  }
}

double OuterMeasure::eval_region(const Region& S) const {
  switch (kind) {
    case Lebesgue:
      return volume(S).value;
    case Slice:
      return chord_measure(S, anchor_y);
    case Weighted:
    default: {
      if (S.single_ball()) {
        const auto& p = S.parts.front();
        return eval_ball(p.c, p.r);
      }
      std::array<double, 2> lo, hi;
      S.bbox(lo, hi);
      const int M = n == 1 ? (1 << 18) : 800;
      const double sx = (hi[0] - lo[0]) / M;
      const double sy = n == 2 ? (hi[1] - lo[1]) / M : 1.0;
      const std::int64_t rows = n == 1 ? 1 : M;
      const double acc = det_sum(rows * M, [&](std::int64_t k) {
        const int ix = static_cast<int>(k % M);
        const int iy = static_cast<int>(k / M);
        const double x = lo[0] + (ix + 0.5) * sx;
        const double y = n == 2 ? lo[1] + (iy + 0.5) * sy : 0.0;
        if (!S.contains(x, y)) return 0.0;
        return std::pow(n == 1 ? std::abs(x) : std::hypot(x, y), gamma);
      });
      return acc * (n == 1 ? sx : sx * sy);
    }
  }
}

double OuterMeasure::eval_levelset(const GridFunction& f, double t) const {
  const Grid& g = f.grid;
  const int N = g.N;
  switch (kind) {
    case Lebesgue: {
      const double cell = g.n == 1 ? g.dx : g.dx * g.dx;
      return det_sum(static_cast<std::int64_t>(f.v.size()), [&](std::int64_t k) {
               return std::abs(f.v[static_cast<std::size_t>(k)]) > t ? 1.0 : 0.0;
             }) * cell;
    }
    case Slice: {
      // nearest row to the line
      int iy = static_cast<int>(std::floor((anchor_y + g.L) / g.dx));
      iy = std::clamp(iy, 0, N - 1);
      double acc = 0.0;
      const double* row = f.v.data() + static_cast<std::size_t>(iy) * N;
      for (int ix = 0; ix < N; ++ix)
        if (std::abs(row[ix]) > t) acc += g.dx;
      return acc;
    }
    case Weighted:
    default: {
      const double cell = g.n == 1 ? g.dx : g.dx * g.dx;
      return det_sum(static_cast<std::int64_t>(f.v.size()), [&](std::int64_t k) {
               if (std::abs(f.v[static_cast<std::size_t>(k)]) <= t) return 0.0;
               const int ix = static_cast<int>(k % N);
               const int iy = static_cast<int>(k / N);
               const double x = g.center(ix);
               const double y = g.n == 2 ? g.center(iy) : 0.0;
               return std::pow(g.n == 1 ? std::abs(x) : std::hypot(x, y), gamma);
             }) * cell;
    }
  }
}

double OuterMeasure::eval_levelset_in_ball(const GridFunction& f, double t,
                                           std::array<double, 2> c, double r) const {
  const Grid& g = f.grid;
  const int N = g.N;
  switch (kind) {
    case Slice: {
      if (std::abs(anchor_y - c[1]) > r && g.n == 2) return 0.0;
      int iy = g.n == 2 ? std::clamp(static_cast<int>(std::floor((anchor_y + g.L) / g.dx)), 0, N - 1) : 0;
      double acc = 0.0;
      const double* row = f.v.data() + static_cast<std::size_t>(iy) * N;
      for (int ix = 0; ix < N; ++ix) {
        const double x = g.center(ix);
        const double y = g.n == 2 ? anchor_y : 0.0;
        const double d = g.n == 1 ? std::abs(x - c[0]) : std::hypot(x - c[0], y - c[1]);
        if (d <= r && std::abs(row[ix]) > t) acc += g.dx;
      }
      return acc;
    }
    default: {
      const double cell = g.n == 1 ? g.dx : g.dx * g.dx;
      return det_sum(static_cast<std::int64_t>(f.v.size()), [&](std::int64_t k) {
               if (std::abs(f.v[static_cast<std::size_t>(k)]) <= t) return 0.0;
               const int ix = static_cast<int>(k % N);
               const int iy = static_cast<int>(k / N);
               const double x = g.center(ix);
               const double y = g.n == 2 ? g.center(iy) : 0.0;
               const double d = g.n == 1 ? std::abs(x - c[0]) : std::hypot(x - c[0], y - c[1]);
               if (d > r) return 0.0;
               if (kind == Lebesgue) return 1.0;
               return std::pow(g.n == 1 ? std::abs(x) : std::hypot(x, y), gamma);
             }) * cell;
    }
  }
}

double weak_lorentz_norm(const GridFunction& f, double q, const OuterMeasure& mu) {
  if (!(q >= 1.0) || std::isinf(q)) throw std::invalid_argument("weak lorentz: q in [1, inf)");
  const double fmax = lp_norm(f, inf());
  if (fmax == 0.0) return 0.0;
  double best = 0.0;
  const int T = 64;
  for (int i = 0; i < T; ++i) {
    const double t = 1e-3 * fmax * std::pow(1000.0, static_cast<double>(i) / (T - 1));
    best = std::max(best, t * std::pow(mu.eval_levelset(f, t), 1.0 / q));
  }
  return best;
}

GrowthReport ball_growth_check(const OuterMeasure& mu, double target,
                               const std::vector<std::array<double, 2>>& centers,
                               const std::vector<double>& radii, double tol) {
  GrowthReport rep;
  rep.target = target;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const auto& c : centers) {
    for (double r : radii) {
      const double v = mu.eval_ball(c, r);
      if (v <= 0.0) continue;  // balls missing the support are trivially fine
      const double ratio = v / std::pow(r, target);
      if (ratio > rep.sup_ratio) {
        rep.sup_ratio = ratio;
        rep.worst_r = r;
        rep.worst_center = c;
      }
      sx += std::log(r);
      sy += std::log(v);
      sxx += std::log(r) * std::log(r);
      sxy += std::log(r) * std::log(v);
      ++m;
    }
  }
  if (m >= 3) rep.fitted_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  // the small-radius end is what binds mu(B) <~ r^target
  rep.pass = m >= 3 && rep.fitted_slope >= target - tol;
  return rep;
}

namespace {

std::vector<double> default_ball_radii(const Grid& g) {
  std::vector<double> r;
  for (double x = 8.0 * g.dx; x <= 0.9 * g.L; x *= 2.0) r.push_back(x);
  return r;
}

}  // namespace

TraceReport trace_inequality_check(const std::vector<FunctionSpec>& funcs,
                                   const OuterMeasure& mu, const BesovParams& bp,
                                   double q, const Grid& g, const HSample& hs,
                                   const std::string& mode, const TraceOpts& opts) {
  if (!(bp.alpha * bp.p < g.n)) throw std::invalid_argument("trace check: requires alpha p < n");
  if (!(q >= 1.0) || std::isinf(q)) throw std::invalid_argument("trace check: q in [1, inf)");
  if (mode != "global" && mode != "localized") throw std::invalid_argument("trace check: unknown mode");

  TraceReport rep;
  rep.mode = mode;
  rep.measure_id = mu.id();
  const double target = q * (g.n - bp.alpha * bp.p) / bp.p;

  std::vector<double> radii = opts.ball_radii.empty() ? default_ball_radii(g) : opts.ball_radii;
  std::vector<std::array<double, 2>> centers{{0.0, mu.kind == OuterMeasure::Slice ? mu.anchor_y : 0.0}};
  rep.growth = ball_growth_check(mu, target, centers, radii);

  auto localized_sup = [&](const GridFunction& f) {
    const double fmax = lp_norm(f, inf());
    double best = 0.0;
    for (int i = 0; i < 32; ++i) {
      const double t = 1e-2 * fmax * std::pow(100.0, static_cast<double>(i) / 31);
      for (const auto& c : centers)
        for (double r : radii)
          best = std::max(best, t * std::pow(mu.eval_levelset_in_ball(f, t, c, r), 1.0 / q));
    }
    return best;
  };

  for (const FunctionSpec& spec : funcs) {
    const GridFunction f = sample_function(spec, g);
    TraceRow row;
    row.family = spec.family;
    row.rhs = besov_seminorm(f, bp, hs).value;
    row.lhs = mode == "global" ? weak_lorentz_norm(f, q, mu) : localized_sup(f);
    row.ratio = row.rhs > 0.0 ? row.lhs / row.rhs : 0.0;
    rep.rows.push_back(row);
    rep.max_ratio = std::max(rep.max_ratio, row.ratio);
  }
  rep.suite_cap = opts.cap_factor * rep.max_ratio;

  if (!rep.growth.pass && opts.build_witness) {
    // bump at the worst ball, width at the violation scale
    const double w = std::max(4.0 * g.dx, radii.front());
    FunctionSpec bump;
    bump.family = "smooth-bump";
    bump.params = {{"radius", w},
                   {"x0", rep.growth.worst_center[0]},
                   {"y0", rep.growth.worst_center[1]}};
    const GridFunction f = sample_function(bump, g);
    const double rhs = besov_seminorm(f, bp, hs).value;
    const double lhs = mode == "global" ? weak_lorentz_norm(f, q, mu) : localized_sup(f);
    rep.witness_built = true;
    rep.witness_ratio = rhs > 0.0 ? lhs / rhs : 0.0;
    rep.witness_exceeds_cap = rep.witness_ratio > rep.suite_cap;
  }
  return rep;
}

MultiplierReport multiplier_check(const GridFunction& m, const OuterMeasure& mu,
                                  const std::vector<FunctionSpec>& funcs,
                                  const BesovParams& bp, double q, const Grid& g,
                                  const HSample& hs, const MultiplierOpts& opts) {
  MultiplierReport rep;
  // mu-essential sup on the grid: cells carrying mu weight
  if (mu.kind == OuterMeasure::Slice && g.n == 2) {
    const int iy = std::clamp(static_cast<int>(std::floor((mu.anchor_y + g.L) / g.dx)), 0, g.N - 1);
    for (int ix = 0; ix < g.N; ++ix) rep.m_sup = std::max(rep.m_sup, std::abs(m.at(ix, iy)));
  } else {
    rep.m_sup = lp_norm(m, inf());
  }
  if (!std::isfinite(rep.m_sup)) throw std::invalid_argument("multiplier: m must be bounded");

  SolverOpts sopts;
  sopts.max_iter = opts.solver_iters;
  sopts.seed = opts.seed;

  // stage (i): mu(E) <= c_trace * capacity^{q/p} over the suite regions
  MultiplierStage s1;
  s1.name = "measure-vs-capacity";
  double c_trace = 0.0;
  std::vector<double> caps;
  for (const Region& E : opts.regions) {
    const double cap = capacity_minimize(E, bp, g, hs, sopts).upper;
    caps.push_back(cap);
    const double muE = mu.eval_region(E);
    if (cap > 0.0) c_trace = std::max(c_trace, muE / std::pow(cap, q / bp.p));
  }
  s1.lhs = c_trace;
  s1.rhs = c_trace;
  s1.ratio = 1.0;
  s1.pass = std::isfinite(c_trace);
  rep.stages.push_back(s1);

  // measured trace constant over the function suite
  double k_trace = 0.0;
  std::vector<GridFunction> fs;
  std::vector<double> sems;
  for (const FunctionSpec& spec : funcs) {
    fs.push_back(sample_function(spec, g));
    sems.push_back(besov_seminorm(fs.back(), bp, hs).value);
    if (sems.back() > 0.0)
      k_trace = std::max(k_trace, weak_lorentz_norm(fs.back(), q, mu) / sems.back());
  }

  // stage (ii): ||m f||_{q,inf;mu} <= ||m||_inf * k_trace * seminorm(f)
  MultiplierStage s2;
  s2.name = "weak-type-product";
  s2.pass = true;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const GridFunction mf = multiply(m, fs[i]);
    const double lhs = weak_lorentz_norm(mf, q, mu);
    const double rhs = rep.m_sup * k_trace * sems[i];
    s2.lhs = std::max(s2.lhs, lhs);
    s2.rhs = std::max(s2.rhs, rhs);
    if (lhs > rhs * (1.0 + opts.tol)) s2.pass = false;
  }
  s2.ratio = s2.rhs > 0.0 ? s2.lhs / s2.rhs : 0.0;
  rep.stages.push_back(s2);

  // stage (iii): sup_t t^q mu({x in E : |m| > t}) <= ||m||^q c_trace cap^{q/p}
  MultiplierStage s3;
  s3.name = "multiplier-level-sets";
  s3.pass = true;
  for (std::size_t e = 0; e < opts.regions.size(); ++e) {
    const Region& E = opts.regions[e];
    double lhs = 0.0;
    for (int i = 0; i < 32; ++i) {
      const double t = rep.m_sup * (i + 1) / 33.0;
      // restrict the level set to E by masking m with the region
      GridFunction mE = m;
      const int N = g.N;
      const int rows = g.n == 1 ? 1 : N;
      for (int iy = 0; iy < rows; ++iy)
        for (int ix = 0; ix < N; ++ix)
          if (!E.contains(g.center(ix), g.n == 2 ? g.center(iy) : 0.0)) mE.at(ix, iy) = 0.0;
      lhs = std::max(lhs, std::pow(t, q) * mu.eval_levelset(mE, t));
    }
    const double rhs = std::pow(rep.m_sup, q) * c_trace * std::pow(caps[e], q / bp.p);
    s3.lhs = std::max(s3.lhs, lhs);
    s3.rhs = std::max(s3.rhs, rhs);
    if (lhs > rhs * (1.0 + opts.tol) && rhs > 0.0) s3.pass = false;
  }
  s3.ratio = s3.rhs > 0.0 ? s3.lhs / s3.rhs : 0.0;
  rep.stages.push_back(s3);

  rep.pass = s1.pass && s2.pass && s3.pass;
  return rep;
}

AffineMap AffineMap::identity(int) { return AffineMap{}; }

AffineMap AffineMap::scaling(double a) {
  AffineMap m;
  m.A = {{{a, 0}, {0, a}}};
  return m;
}

AffineMap AffineMap::axis_projection() {
  AffineMap m;
  m.A = {{{1, 0}, {0, 0}}};
  return m;
}

std::array<double, 2> AffineMap::apply(double x, double y) const {
  return {A[0][0] * x + A[0][1] * y + b[0], A[1][0] * x + A[1][1] * y + b[1]};
}

bool AffineMap::is_identity() const {
  return A[0][0] == 1 && A[0][1] == 0 && A[1][0] == 0 && A[1][1] == 1 && b[0] == 0 && b[1] == 0;
}

namespace {

// analytic preimage of a ball under the modeled affine maps: a ball for
// positive diagonal scaling, a vertical slab for the axis projection
Region affine_ball_preimage(const AffineMap& phi, const Grid& g,
                            std::array<double, 2> c, double r) {
  const double a = phi.A[0][0];
  const bool diag = phi.A[0][1] == 0 && phi.A[1][0] == 0 && phi.b[0] == 0 && phi.b[1] == 0;
  if (diag && phi.A[1][1] == a && a > 0.0)
    return Region::ball(g.n, {c[0] / a, g.n == 2 ? c[1] / a : 0.0}, r / a);
  if (diag && a == 1.0 && phi.A[1][1] == 0.0 && g.n == 2) {
    // projection (x, y) -> (x, 0): preimage is {|x - c0| <= w} x R, clipped
    // to the box; empty when the ball misses the axis
    const double d2 = r * r - c[1] * c[1];
    if (d2 <= 0.0) return Region::box({c[0], -g.L}, {c[0] + 1e-12, g.L});
    const double w = std::sqrt(d2);
    return Region::box({c[0] - w, -g.L}, {c[0] + w, g.L});
  }
  throw std::invalid_argument("pushforward: unsupported affine map for analytic preimages");
}

}  // namespace

PushforwardReport pushforward_check(const AffineMap& phi, const OuterMeasure& mu,
                                    const std::vector<FunctionSpec>& funcs,
                                    const BesovParams& bp, double q, const Grid& g,
                                    const HSample& hs, const TraceOpts& opts) {
  PushforwardReport rep;

  // exact preimage identity for scaling: mu(phi^{-1}(B(c,r))) = mu(B(c/a, r/a))
  {
    const double a = phi.A[0][0];
    const bool scaling = phi.A[0][1] == 0 && phi.A[1][0] == 0 && phi.A[1][1] == a && a > 0 &&
                         phi.b[0] == 0 && phi.b[1] == 0;
    if (scaling) {
      for (double r : {0.5, 1.0, 1.5}) {
        const std::array<double, 2> c{0.3, g.n == 2 ? 0.1 : 0.0};
        const Region pre = affine_ball_preimage(phi, g, c, r);
        const double lhs = mu.eval_region(pre);
        const double rhs = mu.eval_ball({c[0] / a, g.n == 2 ? c[1] / a : 0.0}, r / a);
        rep.preimage_checks_max_err = std::max(rep.preimage_checks_max_err, std::abs(lhs - rhs));
      }
    }
  }

  // trace machinery with f ∘ phi on the left and the push-forward measure's
  // ball growth computed on analytic preimages
  TraceReport tr;
  tr.mode = "global";
  tr.measure_id = mu.id() + "*phi";
  const double target = q * (g.n - bp.alpha * bp.p) / bp.p;
  std::vector<double> radii = opts.ball_radii.empty() ? std::vector<double>{0.25, 0.5, 1.0}
                                                      : opts.ball_radii;
  GrowthReport growth;
  growth.target = target;
  {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (double r : radii) {
      const Region pre = affine_ball_preimage(phi, g, {0.0, 0.0}, r);
      const double v = mu.eval_region(pre);
      if (v <= 0.0) continue;
      if (v / std::pow(r, target) > growth.sup_ratio) {
        growth.sup_ratio = v / std::pow(r, target);
        growth.worst_r = r;
      }
      sx += std::log(r);
      sy += std::log(v);
      sxx += std::log(r) * std::log(r);
      sxy += std::log(r) * std::log(v);
      ++cnt;
    }
    if (cnt >= 3) growth.fitted_slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    growth.pass = cnt >= 3 && growth.fitted_slope >= target - 0.05;
  }
  tr.growth = growth;

  for (const FunctionSpec& spec : funcs) {
    // sample f ∘ phi
    GridFunction fphi = zeros(g);
    fphi.family = spec.family + "∘phi";
    const int N = g.N;
    const int rows = g.n == 1 ? 1 : N;
    for (int iy = 0; iy < rows; ++iy)
      for (int ix = 0; ix < N; ++ix) {
        const auto im = phi.apply(g.center(ix), g.n == 2 ? g.center(iy) : 0.0);
        fphi.at(ix, iy) = spec.eval(g.n, im[0], im[1]);
      }
    fphi.rescan_support();

    const GridFunction f = sample_function(spec, g);
    TraceRow row;
    row.family = spec.family;
    row.rhs = besov_seminorm(f, bp, hs).value;
    row.lhs = weak_lorentz_norm(fphi, q, mu);
    row.ratio = row.rhs > 0.0 ? row.lhs / row.rhs : 0.0;
    tr.rows.push_back(row);
    tr.max_ratio = std::max(tr.max_ratio, row.ratio);
  }
  tr.suite_cap = opts.cap_factor * tr.max_ratio;
  rep.trace = tr;

  if (phi.is_identity()) {
    const TraceReport direct =
        trace_inequality_check(funcs, mu, bp, q, g, hs, "global", opts);
    rep.consistent_with_identity = true;
    for (std::size_t i = 0; i < direct.rows.size(); ++i) {
      if (direct.rows[i].lhs != tr.rows[i].lhs || direct.rows[i].rhs != tr.rows[i].rhs)
        rep.consistent_with_identity = false;
    }
  }
  return rep;
}

}  // namespace besov
