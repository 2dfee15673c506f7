#include "besov/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "besov/kernels.hpp"
#include "besov/parallel.hpp"

namespace besov {

void AdmissibleConstraint::project(std::vector<double>& v) const {
  par_for(static_cast<std::int64_t>(v.size()), [&](std::int64_t i) {
    const std::size_t k = static_cast<std::size_t>(i);
    if (band[k]) v[k] = 0.0;
    else if (mask[k] && v[k] < 1.0) v[k] = 1.0;
  });
}

bool AdmissibleConstraint::feasible(const std::vector<double>& v, double tol) const {
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (band[k] && std::abs(v[k]) > tol) return false;
    if (mask[k] && v[k] < 1.0 - tol) return false;
  }
  return true;
}

AdmissibleConstraint constraint_from_distance(const Grid& g,
                                              const std::function<double(double, double)>& dist,
                                              double delta_N) {
  if (!(delta_N >= g.dx)) throw std::invalid_argument("constraint: dilation must be at least one cell");
  AdmissibleConstraint con;
  con.grid = g;
  con.delta_N = delta_N;
  const std::int64_t total = g.cells();
  con.mask.assign(static_cast<std::size_t>(total), 0);
  con.band.assign(static_cast<std::size_t>(total), 0);
  const int N = g.N;
  const int rows = g.n == 1 ? 1 : N;
  for (int iy = 0; iy < rows; ++iy) {
    for (int ix = 0; ix < N; ++ix) {
      const std::size_t k = static_cast<std::size_t>(ix) + static_cast<std::size_t>(iy) * N;
      const bool edge = ix < 2 || ix >= N - 2 || (g.n == 2 && (iy < 2 || iy >= N - 2));
      if (edge) {
        con.band[k] = 1;
        continue;
      }
      const double x = g.center(ix);
      const double y = g.n == 2 ? g.center(iy) : 0.0;
      if (dist(x, y) <= delta_N) {
        con.mask[k] = 1;
        ++con.mask_count;
      }
    }
  }
  // a mask cell adjacent to the band means the box cannot hold the
  // neighbourhood; ask for a larger L
  for (int iy = 0; iy < rows; ++iy) {
    for (int ix = 0; ix < N; ++ix) {
      const std::size_t k = static_cast<std::size_t>(ix) + static_cast<std::size_t>(iy) * N;
      if (!con.mask[k]) continue;
      const bool near_edge = ix < 4 || ix >= N - 4 || (g.n == 2 && (iy < 4 || iy >= N - 4));
      if (near_edge)
        throw std::invalid_argument("constraint: neighbourhood touches the boundary band; enlarge the box half-width L");
    }
  }
  return con;
}

AdmissibleConstraint rasterize_constraint(const Region& E, const Grid& g, double delta_N) {
  E.validate();
  if (E.n != g.n) throw std::invalid_argument("constraint: region dimension mismatch");
  auto con = constraint_from_distance(g, [&](double x, double y) { return E.dist(x, y); }, delta_N);
  if (con.mask_count == 0) throw std::invalid_argument("constraint: empty mask (region outside the grid?)");
  return con;
}

GridFunction initial_admissible(const Region& E, const Grid& g, double w) {
  if (!(w > 0.0)) throw std::invalid_argument("initial_admissible: width must be positive");
  GridFunction f = zeros(g);
  f.family = "derived:ramp";
  const int N = g.N;
  const int rows = g.n == 1 ? 1 : N;
  par_for(rows, [&](std::int64_t iy) {
    const double y = g.n == 2 ? g.center(static_cast<int>(iy)) : 0.0;
    double* row = f.v.data() + static_cast<std::size_t>(iy) * N;
    for (int ix = 0; ix < N; ++ix)
      row[ix] = std::clamp(1.0 - E.dist(g.center(ix), y) / w, 0.0, 1.0);
  });
  f.rescan_support();
  return f;
}

double capacity_lower_bound_from_volume(double vol, int n, double alpha, double p) {
  if (!(alpha * p < n)) throw std::invalid_argument("capacity lower bound: requires alpha p < n");
  if (vol <= 0.0) return 0.0;
  const double c = std::pow(2.0, 1.0 / p) * p * n / (n - alpha * p);
  return std::pow(std::pow(vol, (n - alpha * p) / (p * n)) / c, p);
}

double capacity_lower_bound(const Region& E, double alpha, double p) {
  return capacity_lower_bound_from_volume(volume(E).value, E.n, alpha, p);
}

namespace {

struct Objective {
  const AdmissibleConstraint* con;
  const HSample* hs;
  double alpha, p;
  GridFunction work;  // support marked full; values swapped per evaluation

  explicit Objective(const AdmissibleConstraint& c, const HSample& h, double a, double pp)
      : con(&c), hs(&h), alpha(a), p(pp) {
    work = zeros(c.grid);
    work.mark_full_support();
  }

  // values of |h|^{-alpha} ||Delta_h v||_p for the given offsets
  void eval_subset(const std::vector<double>& v, const std::vector<int>& idx,
                   std::vector<double>& out) {
    work.v = v;
    work.mark_full_support();
    out.resize(idx.size());
    const std::int64_t m = static_cast<std::int64_t>(idx.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t j = 0; j < m; ++j) {
      const HOffset& o = hs->offsets[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
      out[static_cast<std::size_t>(j)] =
          std::pow(o.r, -alpha) * kernels::diff_norm(work, o.hx, o.hy, p);
    }
  }

  void subgradient(const std::vector<double>& v, const std::vector<int>& active,
                   std::vector<double>& g) {
    work.v = v;
    work.mark_full_support();
    g.assign(v.size(), 0.0);
    const double share = 1.0 / static_cast<double>(active.size());
    for (int id : active) {
      const HOffset& o = hs->offsets[static_cast<std::size_t>(id)];
      kernels::diff_norm_subgrad(work, o.hx, o.hy, p, g, share * std::pow(o.r, -alpha));
    }
  }
};

double norm2(const std::vector<double>& v) {
  return std::sqrt(det_sum(static_cast<std::int64_t>(v.size()),
                           [&](std::int64_t i) { return v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)]; }));
}

}  // namespace

CapacityEstimate capacity_minimize_constrained(const AdmissibleConstraint& con,
                                               const BesovParams& bp, const HSample& hs,
                                               const SolverOpts& opts) {
  bp.validate();
  if (!std::isinf(bp.q)) throw std::invalid_argument("capacity: q must be inf");
  if (std::isinf(bp.p)) throw std::invalid_argument("capacity: p must be finite (the p = inf capacity is identically zero)");
  if (!(bp.alpha * bp.p < con.grid.n))
    throw std::invalid_argument("capacity: alpha p < n required; for p >= n/alpha the capacity degenerates to zero");

  CapacityEstimate est;
  est.delta_N = con.delta_N;
  est.seed = opts.seed;
  est.minimizer = zeros(con.grid);

  if (con.mask_count == 0) {  // the empty set: f = 0 is admissible
    est.upper = 0.0;
    est.converged = true;
    est.objective = 0.0;
    return est;
  }

  Objective obj(con, hs, bp.alpha, bp.p);
  const int n_off = static_cast<int>(hs.offsets.size());
  std::vector<int> all_idx(static_cast<std::size_t>(n_off));
  std::iota(all_idx.begin(), all_idx.end(), 0);

  // fixed seeds: mask indicator plus two ramp widths; then perturbed restarts
  std::vector<std::vector<double>> seeds;
  {
    std::vector<double> ind(static_cast<std::size_t>(con.grid.cells()), 0.0);
    for (std::size_t k = 0; k < ind.size(); ++k) ind[k] = con.mask[k] ? 1.0 : 0.0;
    seeds.push_back(std::move(ind));
  }
  for (const GridFunction& s : opts.extra_seeds) {
    if (s.grid == con.grid) seeds.push_back(s.v);
  }

  auto ramp_seed = [&](double w) {
    std::vector<double> v(static_cast<std::size_t>(con.grid.cells()), 0.0);
    // distance to the mask set approximated by a sweep over mask cells is
    // costly; reuse the indicator smoothed by repeated neighbour averaging
    const int N = con.grid.N;
    const int rows = con.grid.n == 1 ? 1 : N;
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = con.mask[k] ? 1.0 : 0.0;
    const int sweeps = std::max(1, static_cast<int>(std::lround(w / con.grid.dx)));
    std::vector<double> tmp(v.size());
    for (int s = 0; s < sweeps; ++s) {
      par_for(rows, [&](std::int64_t iy) {
        for (int ix = 0; ix < N; ++ix) {
          const std::size_t k = static_cast<std::size_t>(ix) + static_cast<std::size_t>(iy) * N;
          double acc = v[k], cnt = 1.0;
          if (ix > 0) { acc += v[k - 1]; cnt += 1.0; }
          if (ix < N - 1) { acc += v[k + 1]; cnt += 1.0; }
          if (con.grid.n == 2) {
            if (iy > 0) { acc += v[k - static_cast<std::size_t>(N)]; cnt += 1.0; }
            if (iy < rows - 1) { acc += v[k + static_cast<std::size_t>(N)]; cnt += 1.0; }
          }
          tmp[k] = acc / cnt;
        }
      });
      std::swap(v, tmp);
    }
    return v;
  };
  seeds.push_back(ramp_seed(4.0 * con.grid.dx));
  seeds.push_back(ramp_seed(16.0 * con.grid.dx));

  double best_G = inf();
  std::vector<double> best_v;
  std::vector<double> history;
  std::mt19937_64 rng(opts.seed);

  const int total_starts = static_cast<int>(seeds.size()) + std::max(0, opts.restarts - 1);
  int iterations = 0;

  for (int start = 0; start < total_starts; ++start) {
    std::vector<double> v;
    if (start < static_cast<int>(seeds.size())) {
      v = seeds[static_cast<std::size_t>(start)];
    } else {
      v = best_v.empty() ? seeds.front() : best_v;
      std::uniform_real_distribution<double> u(-0.05, 0.05);
      for (double& x : v) x = std::clamp(x + u(rng), 0.0, 1.5);
    }
    con.project(v);

    std::vector<double> vals;
    obj.eval_subset(v, all_idx, vals);
    int arg = static_cast<int>(std::max_element(vals.begin(), vals.end()) - vals.begin());
    double G = vals[static_cast<std::size_t>(arg)];
    if (G < best_G) { best_G = G; best_v = v; }
    history.push_back(best_G);
    if (G == 0.0) continue;

    // top candidates by value, re-scanned on every full evaluation
    auto top_of = [&](const std::vector<double>& all_vals) {
      std::vector<int> order(all_idx.begin(), all_idx.end());
      std::partial_sort(order.begin(),
                        order.begin() + std::min<std::size_t>(order.size(), static_cast<std::size_t>(opts.top_candidates)),
                        order.end(), [&](int a, int b) {
                          return all_vals[static_cast<std::size_t>(a)] > all_vals[static_cast<std::size_t>(b)];
                        });
      order.resize(std::min<std::size_t>(order.size(), static_cast<std::size_t>(opts.top_candidates)));
      return order;
    };
    std::vector<int> cand = top_of(vals);

    std::vector<double> g;
    {
      std::vector<int> active{cand.front()};
      obj.subgradient(v, active, g);
    }
    const double gn0 = norm2(g);
    if (gn0 == 0.0) continue;
    const double s0 = opts.s0_factor * G / gn0;

    std::vector<double> cand_vals;
    std::vector<double> best_cand_v;  // best seen through candidate-only eyes
    double best_cand_val = G;

    for (int k = 1; k <= opts.max_iter; ++k) {
      ++iterations;
      double cur;
      int cur_arg;
      if (k % opts.full_eval_every == 0) {
        obj.eval_subset(v, all_idx, vals);
        cand = top_of(vals);
        cur_arg = cand.front();
        cur = vals[static_cast<std::size_t>(cur_arg)];
        if (cur < best_G) { best_G = cur; best_v = v; }
        history.push_back(best_G);
      } else {
        obj.eval_subset(v, cand, cand_vals);
        int j = static_cast<int>(std::max_element(cand_vals.begin(), cand_vals.end()) - cand_vals.begin());
        cur_arg = cand[static_cast<std::size_t>(j)];
        cur = cand_vals[static_cast<std::size_t>(j)];
        if (cur < best_cand_val) { best_cand_val = cur; best_cand_v = v; }
      }

      // offsets within 1e-9 of the max share the subgradient
      std::vector<int> active;
      if (k % opts.full_eval_every == 0) {
        for (int i = 0; i < n_off; ++i)
          if (vals[static_cast<std::size_t>(i)] >= cur * (1.0 - 1e-9)) active.push_back(i);
      } else {
        for (std::size_t j = 0; j < cand.size(); ++j)
          if (cand_vals[j] >= cur * (1.0 - 1e-9)) active.push_back(cand[j]);
      }
      obj.subgradient(v, active, g);
      const double gn = norm2(g);
      if (gn == 0.0) break;
      const double step = s0 / std::sqrt(static_cast<double>(k));
      par_for(static_cast<std::int64_t>(v.size()), [&](std::int64_t i) {
        const std::size_t kk = static_cast<std::size_t>(i);
        v[kk] -= step * g[kk] / gn;
      });
      con.project(v);
    }
    // candidate-phase best is only trusted after a full evaluation
    if (!best_cand_v.empty()) {
      obj.eval_subset(best_cand_v, all_idx, vals);
      const double full = *std::max_element(vals.begin(), vals.end());
      if (full < best_G) { best_G = full; best_v = best_cand_v; }
      history.push_back(best_G);
    }
  }

  est.minimizer.v = best_v;
  est.minimizer.family = "derived:capacity-minimizer";
  est.minimizer.rescan_support();
  est.objective = best_G;
  est.upper = std::pow(best_G, bp.p);
  est.iterations = iterations;
  est.best_history = history;
  const std::size_t w = std::min<std::size_t>(history.size(), 5);
  if (history.size() >= 2 && best_G > 0.0) {
    const double past = history[history.size() - w];
    est.gap_proxy = (past - best_G) / best_G;
  }
  est.converged = est.gap_proxy <= opts.tol;
  if (!con.feasible(best_v))
    throw std::runtime_error("capacity: minimizer failed the feasibility invariant");
  return est;
}

CapacityEstimate capacity_minimize(const Region& E, const BesovParams& bp, const Grid& g,
                                   const HSample& hs, const SolverOpts& opts) {
  SolverOpts o = opts;
  if (o.delta_N <= 0.0) o.delta_N = 2.0 * g.dx;
  auto con = rasterize_constraint(E, g, o.delta_N);
  auto est = capacity_minimize_constrained(con, bp, hs, o);
  est.lower = capacity_lower_bound(E, bp.alpha, bp.p);
  return est;
}

ScalingReport scaling_ratio_check(int n, double r1, double r2, const BesovParams& bp,
                                  int N, double tol, SolverOpts opts) {
  if (r1 == r2) throw std::invalid_argument("scaling check: radii must differ");
  auto run = [&](double r) {
    const Grid g = build_grid(n, 1.25 * r, N);
    const HSample hs = make_h_sample(n, 2.0 * g.dx, 3.0 * r, 32, n == 1 ? 2 : 16);
    return capacity_minimize(Region::ball(n, {0, 0}, r), bp, g, hs, opts);
  };
  ScalingReport rep;
  rep.upper1 = run(r1).upper;
  rep.upper2 = run(r2).upper;
  rep.measured_ratio = rep.upper1 / rep.upper2;
  rep.target_ratio = std::pow(r1 / r2, n - bp.alpha * bp.p);
  rep.rel_err = std::abs(rep.measured_ratio - rep.target_ratio) / rep.target_ratio;
  rep.pass = rep.rel_err <= tol;
  return rep;
}

BoundaryReport boundary_capacity_check(const Region& ball, const BesovParams& bp,
                                       const Grid& g, const HSample& hs, double tol,
                                       SolverOpts opts) {
  if (!ball.single_ball()) throw std::invalid_argument("boundary check: single ball required");
  if (!(bp.alpha * bp.p < g.n)) throw std::invalid_argument("boundary check: requires p < n/alpha");
  const auto& part = ball.parts.front();
  const double thick = 3.0 * g.dx;
  if (part.r < 4.0 * g.dx)
    throw std::invalid_argument("boundary check: shell unresolvable at this grid resolution");

  if (opts.delta_N <= 0.0) opts.delta_N = 2.0 * g.dx;
  BoundaryReport rep;
  rep.thickness = thick;
  rep.ball_upper = capacity_minimize(ball, bp, g, hs, opts).upper;
  auto shell = constraint_from_distance(
      g,
      [&](double x, double y) {
        const double d = g.n == 1 ? std::abs(x - part.c[0]) : std::hypot(x - part.c[0], y - part.c[1]);
        return std::max(0.0, std::abs(d - part.r) - 0.5 * thick);
      },
      opts.delta_N);
  rep.shell_upper = capacity_minimize_constrained(shell, bp, hs, opts).upper;
  rep.pass = rep.ball_upper <= rep.shell_upper * (1.0 + tol);
  return rep;
}

OpenPerimeterReport open_perimeter_comparison(const Region& ball, double alpha,
                                              const Grid& g, const HSample& hs,
                                              const std::vector<double>& deltas,
                                              double tol, SolverOpts opts) {
  if (!ball.single_ball()) throw std::invalid_argument("open perimeter comparison: single ball required");
  OpenPerimeterReport rep;
  const auto& part = ball.parts.front();
  double prev = -1.0;
  rep.monotone_in_delta = true;
  rep.min_perimeter = inf();
  for (double d : deltas) {
    const double val = perimeter(Region::ball(g.n, part.c, part.r + d), alpha, 1.0).value;
    if (prev >= 0.0 && val < prev) rep.monotone_in_delta = false;
    prev = val;
    if (val < rep.min_perimeter) {
      rep.min_perimeter = val;
      rep.argmin_delta = d;
    }
  }
  rep.capacity_upper = capacity_minimize(ball, {alpha, 1.0, inf()}, g, hs, opts).upper;
  rep.rel_err = std::abs(rep.capacity_upper - rep.min_perimeter) / rep.min_perimeter;
  rep.pass = rep.rel_err <= tol;
  return rep;
}

DegeneracyReport constant_degeneracy_check(const Grid& g, double alpha, double q) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("degeneracy check: alpha in (0,1)");
  if (!(q >= 1.0)) throw std::invalid_argument("degeneracy check: q >= 1");
  GridFunction f = zeros(g);
  for (double& x : f.v) x = 1.0;
  f.mark_full_support();
  // sup_h |h|^{-alpha} ||Delta_h f||_inf restricted to cells with both ends
  // in the box: exact lattice shifts of a constant vanish identically
  double sup = 0.0;
  const int N = g.N;
  for (int shift : {1, 5, std::max(1, N / 8)}) {
    double m = 0.0;
    const int rows = g.n == 1 ? 1 : N;
    for (int iy = 0; iy < rows; ++iy)
      for (int ix = 0; ix + shift < N; ++ix)
        m = std::max(m, std::abs(f.at(ix + shift, iy) - f.at(ix, iy)));
    sup = std::max(sup, std::pow(shift * g.dx, -alpha) * m);
  }
  DegeneracyReport rep;
  rep.seminorm_interior = sup;
  rep.capacity_witnessed = std::pow(sup, std::isinf(q) ? 1.0 : q);
  rep.pass = sup == 0.0;
  return rep;
}

}  // namespace besov
