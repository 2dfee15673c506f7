#include "besov/grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "besov/kernels.hpp"
#include "besov/parallel.hpp"

namespace besov {

double inf() { return std::numeric_limits<double>::infinity(); }

namespace {
std::int64_t g_cell_cap = std::int64_t{1} << 24;
}

std::int64_t grid_cell_cap() { return g_cell_cap; }
void set_grid_cell_cap(std::int64_t cap) { g_cell_cap = cap; }

Grid build_grid(int n, double L, int N) {
  if (n != 1 && n != 2) throw std::invalid_argument("build_grid: unsupported dimension (n must be 1 or 2)");
  if (!(L > 0.0)) throw std::invalid_argument("build_grid: half-width L must be positive");
  if (N < 8) throw std::invalid_argument("build_grid: N must be at least 8");
  if (N % 2 != 0) throw std::invalid_argument("build_grid: N must be even for symmetric sampling");
  const std::int64_t cells = n == 1 ? N : static_cast<std::int64_t>(N) * N;
  if (cells > g_cell_cap) throw std::invalid_argument("build_grid: N^n exceeds the configured cell cap");
  Grid g;
  g.n = n;
  g.L = L;
  g.N = N;
  g.dx = 2.0 * L / N;
  return g;
}

double FunctionSpec::param(const std::string& key, double fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

double FunctionSpec::require(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end())
    throw std::invalid_argument("function family '" + family + "' needs parameter '" + key + "'");
  return it->second;
}

namespace {

// C^1 ramp: 0 for u <= -1, 1 for u >= 1
double ramp(double u) {
  if (u <= -1.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return 0.5 * (1.0 + std::sin(0.5 * std::numbers::pi * u));
}

}  // namespace

void FunctionSpec::validate(int n) const {
  if (family == "gaussian") {
    if (!(require("sigma") > 0)) throw std::invalid_argument("gaussian: sigma must be positive");
  } else if (family == "smooth-bump") {
    if (!(require("radius") > 0)) throw std::invalid_argument("smooth-bump: radius must be positive");
  } else if (family == "radial-power-cutoff") {
    if (!(require("radius") > 0)) throw std::invalid_argument("radial-power-cutoff: radius must be positive");
    if (!(require("beta") > 0)) throw std::invalid_argument("radial-power-cutoff: beta must be positive");
  } else if (family == "tensor-product") {
    if (!(require("sigma_x") > 0)) throw std::invalid_argument("tensor-product: sigma_x must be positive");
    if (n == 2 && !(param("sigma_y", 1.0) > 0)) throw std::invalid_argument("tensor-product: sigma_y must be positive");
  } else if (family == "indicator-mollified") {
    const double eps = require("eps");
    if (!(eps > 0)) throw std::invalid_argument("indicator-mollified: eps must be positive");
    if (n == 1) {
      if (!(require("b") > require("a"))) throw std::invalid_argument("indicator-mollified: need b > a");
    } else {
      if (!(require("radius") > 0)) throw std::invalid_argument("indicator-mollified: radius must be positive");
    }
  } else if (family == "constant") {
    // any value
  } else {
    throw std::invalid_argument("unknown function family '" + family + "'");
  }
}

double FunctionSpec::eval(int n, double x, double y) const {
  const double x0 = param("x0", 0.0), y0 = param("y0", 0.0);
  const double ux = x - x0, uy = n == 2 ? y - y0 : 0.0;
  const double rho = n == 2 ? std::hypot(ux, uy) : std::abs(ux);
  if (family == "gaussian") {
    const double s = require("sigma");
    return std::exp(-(rho * rho) / (s * s));
  }
  if (family == "smooth-bump") {
    const double R = require("radius");
    if (rho >= R) return 0.0;
    const double u = rho / R;
    return std::exp(1.0 - 1.0 / (1.0 - u * u));
  }
  if (family == "radial-power-cutoff") {
    const double R = require("radius");
    const double beta = require("beta");
    const double u = 1.0 - rho / R;
    return u > 0.0 ? std::pow(u, beta) : 0.0;
  }
  if (family == "tensor-product") {
    const double sx = require("sigma_x");
    double val = std::exp(-(ux * ux) / (sx * sx));
    if (n == 2) {
      const double sy = param("sigma_y", sx);
      val *= std::exp(-(uy * uy) / (sy * sy));
    }
    return val;
  }
  if (family == "indicator-mollified") {
    const double eps = require("eps");
    if (n == 1) {
      const double a = require("a"), b = require("b");
      return ramp((x - a) / eps) * ramp((b - x) / eps);
    }
    const double R = require("radius");
    return ramp((R - rho) / eps);
  }
  if (family == "constant") return param("value", 1.0);
  throw std::invalid_argument("unknown function family '" + family + "'");
}

double GridFunction::support_diameter() const {
  if (empty_support()) return 0.0;
  const double ex = (shi[0] - slo[0] + 1) * grid.dx;
  if (grid.n == 1) return ex;
  const double ey = (shi[1] - slo[1] + 1) * grid.dx;
  return std::hypot(ex, ey);
}

void GridFunction::rescan_support(double tol) {
  const int N = grid.N;
  const int rows = grid.n == 1 ? 1 : N;
  int xlo = N, xhi = -1, ylo = rows, yhi = -1;
  for (int iy = 0; iy < rows; ++iy) {
    const double* row = v.data() + static_cast<std::size_t>(iy) * N;
    for (int ix = 0; ix < N; ++ix) {
      if (std::abs(row[ix]) > tol) {
        if (ix < xlo) xlo = ix;
        if (ix > xhi) xhi = ix;
        if (iy < ylo) ylo = iy;
        if (iy > yhi) yhi = iy;
      }
    }
  }
  slo = {xlo, ylo};
  shi = {xhi, yhi};
}

void GridFunction::mark_full_support() {
  slo = {0, 0};
  shi = {grid.N - 1, grid.n == 1 ? 0 : grid.N - 1};
}

GridFunction zeros(const Grid& g) {
  GridFunction f;
  f.grid = g;
  f.v.assign(static_cast<std::size_t>(g.cells()), 0.0);
  f.family = "zero";
  return f;
}

GridFunction sample_function(const FunctionSpec& spec, const Grid& g) {
  spec.validate(g.n);
  GridFunction f = zeros(g);
  f.family = spec.family;
  f.params = spec.params;
  const int N = g.N;
  const int rows = g.n == 1 ? 1 : N;
  par_for(rows, [&](std::int64_t iy) {
    const double y = g.n == 2 ? g.center(static_cast<int>(iy)) : 0.0;
    double* row = f.v.data() + static_cast<std::size_t>(iy) * N;
    for (int ix = 0; ix < N; ++ix) row[ix] = spec.eval(g.n, g.center(ix), y);
  });
  for (double val : f.v)
    if (!std::isfinite(val)) throw std::invalid_argument("sample_function: non-finite value");
  f.rescan_support();

  // support must fit in the box up to the tail tolerance; check the
  // outermost cell layer
  double edge = 0.0;
  if (g.n == 1) {
    edge = std::max(std::abs(f.v.front()), std::abs(f.v.back()));
  } else {
    for (int i = 0; i < N; ++i) {
      edge = std::max(edge, std::abs(f.at(i, 0)));
      edge = std::max(edge, std::abs(f.at(i, N - 1)));
      edge = std::max(edge, std::abs(f.at(0, i)));
      edge = std::max(edge, std::abs(f.at(N - 1, i)));
    }
  }
  f.support_warning = edge > 1e-12;
  return f;
}

double lp_norm(const GridFunction& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be in [1, inf]");
  const std::int64_t n = static_cast<std::int64_t>(f.v.size());
  if (std::isinf(p)) return par_max(n, [&](std::int64_t i) { return std::abs(f.v[i]); });
  const double cell = f.grid.n == 1 ? f.grid.dx : f.grid.dx * f.grid.dx;
  double s;
  if (p == 1.0)
    s = det_sum(n, [&](std::int64_t i) { return std::abs(f.v[i]); });
  else if (p == 2.0)
    s = det_sum(n, [&](std::int64_t i) { return f.v[i] * f.v[i]; });
  else
    s = det_sum(n, [&](std::int64_t i) { return std::pow(std::abs(f.v[i]), p); });
  return std::pow(s * cell, 1.0 / p);
}

GridFunction difference(const GridFunction& f, double hx, double hy) {
  const Grid& g = f.grid;
  const double h2 = g.n == 2 ? hy : 0.0;
  if (std::hypot(hx, h2) == 0.0) throw std::invalid_argument("difference: |h| must be positive");
  GridFunction out = zeros(g);
  out.family = "derived:difference";
  const int N = g.N;
  const int rows = g.n == 1 ? 1 : N;

  const double sx = hx / g.dx;
  const double sy = h2 / g.dx;
  long bx = std::lround(std::floor(sx)), by = std::lround(std::floor(sy));
  double lx = sx - bx, ly = sy - by;
  if (std::abs(sx - std::lround(sx)) < 1e-12) { bx = std::lround(sx); lx = 0.0; }
  if (std::abs(sy - std::lround(sy)) < 1e-12) { by = std::lround(sy); ly = 0.0; }

  auto sample = [&](long ix, long iy) -> double {
    if (ix < 0 || ix >= N) return 0.0;
    if (g.n == 2 && (iy < 0 || iy >= N)) return 0.0;
    return f.v[static_cast<std::size_t>(ix) + static_cast<std::size_t>(g.n == 2 ? iy : 0) * N];
  };

  par_for(rows, [&](std::int64_t iy) {
    double* row = out.v.data() + static_cast<std::size_t>(iy) * N;
    const double* src = f.v.data() + static_cast<std::size_t>(iy) * N;
    for (int ix = 0; ix < N; ++ix) {
      const long jx = ix + bx, jy = iy + by;
      double b;
      if (g.n == 1) {
        b = lx == 0.0 ? sample(jx, 0) : (1.0 - lx) * sample(jx, 0) + lx * sample(jx + 1, 0);
      } else {
        b = (1.0 - lx) * (1.0 - ly) * sample(jx, jy) + lx * (1.0 - ly) * sample(jx + 1, jy) +
            (1.0 - lx) * ly * sample(jx, jy + 1) + lx * ly * sample(jx + 1, jy + 1);
      }
      row[ix] = b - src[ix];
    }
  });
  out.rescan_support();
  return out;
}

double gradient_lp(const GridFunction& f, double p) {
  const Grid& g = f.grid;
  const int N = g.N;
  const int rows = g.n == 1 ? 1 : N;
  const double cell = g.n == 1 ? g.dx : g.dx * g.dx;
  const double inv2 = 1.0 / (2.0 * g.dx), inv1 = 1.0 / g.dx;

  auto mag = [&](std::int64_t idx) -> double {
    const int ix = static_cast<int>(idx % N);
    const int iy = static_cast<int>(idx / N);
    const double* v = f.v.data();
    auto val = [&](int jx, int jy) { return v[static_cast<std::size_t>(jx) + static_cast<std::size_t>(jy) * N]; };
    double gx;
    if (ix == 0) gx = (val(1, iy) - val(0, iy)) * inv1;
    else if (ix == N - 1) gx = (val(N - 1, iy) - val(N - 2, iy)) * inv1;
    else gx = (val(ix + 1, iy) - val(ix - 1, iy)) * inv2;
    if (g.n == 1) return std::abs(gx);
    double gy;
    if (iy == 0) gy = (val(ix, 1) - val(ix, 0)) * inv1;
    else if (iy == N - 1) gy = (val(ix, N - 1) - val(ix, N - 2)) * inv1;
    else gy = (val(ix, iy + 1) - val(ix, iy - 1)) * inv2;
    return std::hypot(gx, gy);
  };

  const std::int64_t total = static_cast<std::int64_t>(rows) * N;
  if (std::isinf(p)) return par_max(total, mag);
  double s;
  if (p == 1.0)
    s = det_sum(total, mag);
  else if (p == 2.0)
    s = det_sum(total, [&](std::int64_t i) { double m = mag(i); return m * m; });
  else
    s = det_sum(total, [&](std::int64_t i) { return std::pow(mag(i), p); });
  return std::pow(s * cell, 1.0 / p);
}

BallFamily dyadic_ball_family(const Grid& g, int stride_cells, double r_min, double r_max) {
  if (stride_cells < 1) throw std::invalid_argument("ball family: stride must be >= 1");
  if (!(r_min > 0 && r_max >= r_min)) throw std::invalid_argument("ball family: bad radius range");
  if (r_max > 2.0 * g.L) throw std::invalid_argument("ball family: radii must be <= 2L");
  BallFamily fam;
  fam.stride_cells = stride_cells;
  for (double r = r_min; r <= r_max * (1.0 + 1e-12); r *= 2.0) fam.radii.push_back(r);
  return fam;
}

namespace {

struct BallRows {
  int rad_cells;                 // floor(r/dx)
  std::vector<int> half_width;   // per dy in [-rad, rad]
  std::int64_t count;
};

BallRows ball_rows(const Grid& g, double r) {
  BallRows b;
  const double rc = r / g.dx;
  b.rad_cells = static_cast<int>(std::floor(rc));
  b.count = 0;
  if (g.n == 1) {
    b.half_width = {b.rad_cells};
    b.count = 2 * b.rad_cells + 1;
    return b;
  }
  b.half_width.resize(2 * b.rad_cells + 1);
  for (int dy = -b.rad_cells; dy <= b.rad_cells; ++dy) {
    const double w = std::sqrt(std::max(0.0, rc * rc - static_cast<double>(dy) * dy));
    const int hw = static_cast<int>(std::floor(w));
    b.half_width[dy + b.rad_cells] = hw;
    b.count += 2 * hw + 1;
  }
  return b;
}

template <class PerBall>
OscillationResult scan_family(const GridFunction& f, const BallFamily& balls, PerBall&& per_ball) {
  const Grid& g = f.grid;
  const int N = g.N;
  OscillationResult res;
  for (double r : balls.radii) {
    const BallRows rows = ball_rows(g, r);
    const int R = rows.rad_cells;
    std::vector<int> centers;
    for (int c = 0; c < N; c += balls.stride_cells)
      if (c - R >= 0 && c + R < N) centers.push_back(c);
    if (centers.empty()) {
      ++res.balls_skipped;
      continue;
    }
    if (g.n == 1) {
      const std::int64_t count = static_cast<std::int64_t>(centers.size());
      double best = par_max(count, [&](std::int64_t ci) {
        return per_ball(centers[static_cast<std::size_t>(ci)], 0, rows, r);
      });
      res.value = std::max(res.value, best);
      res.balls_used += static_cast<int>(centers.size());
    } else {
      const std::int64_t count = static_cast<std::int64_t>(centers.size()) * centers.size();
      double best = par_max(count, [&](std::int64_t ci) {
        const int cx = centers[static_cast<std::size_t>(ci % centers.size())];
        const int cy = centers[static_cast<std::size_t>(ci / centers.size())];
        return per_ball(cx, cy, rows, r);
      });
      res.value = std::max(res.value, best);
      res.balls_used += static_cast<int>(count);
    }
  }
  return res;
}

}  // namespace

OscillationResult bmo_norm(const GridFunction& f, const BallFamily& balls) {
  if (balls.radii.empty()) throw std::invalid_argument("bmo_norm: empty ball family");
  const Grid& g = f.grid;
  const int N = g.N;
  return scan_family(f, balls, [&](int cx, int cy, const BallRows& rows, double) {
    const int R = rows.rad_cells;
    double sum = 0.0;
    std::int64_t cnt = 0;
    if (g.n == 1) {
      for (int j = cx - R; j <= cx + R; ++j) sum += f.v[static_cast<std::size_t>(j)];
      cnt = 2 * R + 1;
    } else {
      for (int dy = -R; dy <= R; ++dy) {
        const int hw = rows.half_width[static_cast<std::size_t>(dy + R)];
        const double* row = f.v.data() + static_cast<std::size_t>(cy + dy) * N;
        for (int j = cx - hw; j <= cx + hw; ++j) sum += row[j];
        cnt += 2 * hw + 1;
      }
    }
    const double mean = sum / static_cast<double>(cnt);
    double osc = 0.0;
    if (g.n == 1) {
      for (int j = cx - R; j <= cx + R; ++j) osc += std::abs(f.v[static_cast<std::size_t>(j)] - mean);
    } else {
      for (int dy = -R; dy <= R; ++dy) {
        const int hw = rows.half_width[static_cast<std::size_t>(dy + R)];
        const double* row = f.v.data() + static_cast<std::size_t>(cy + dy) * N;
        for (int j = cx - hw; j <= cx + hw; ++j) osc += std::abs(row[j] - mean);
      }
    }
    return osc / static_cast<double>(cnt);
  });
}

OscillationResult campanato_norm(const GridFunction& f, double p, double alpha,
                                 const BallFamily& balls) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("campanato_norm: alpha must be in (0,1)");
  if (!(p >= 1.0) || std::isinf(p)) throw std::invalid_argument("campanato_norm: p must be in [1, inf)");
  if (balls.radii.empty()) throw std::invalid_argument("campanato_norm: empty ball family");
  const Grid& g = f.grid;
  const int N = g.N;
  const double cell = g.n == 1 ? g.dx : g.dx * g.dx;
  return scan_family(f, balls, [&](int cx, int cy, const BallRows& rows, double r) {
    const int R = rows.rad_cells;
    double sum = 0.0;
    std::int64_t cnt = 0;
    if (g.n == 1) {
      for (int j = cx - R; j <= cx + R; ++j) sum += f.v[static_cast<std::size_t>(j)];
      cnt = 2 * R + 1;
    } else {
      for (int dy = -R; dy <= R; ++dy) {
        const int hw = rows.half_width[static_cast<std::size_t>(dy + R)];
        const double* row = f.v.data() + static_cast<std::size_t>(cy + dy) * N;
        for (int j = cx - hw; j <= cx + hw; ++j) sum += row[j];
        cnt += 2 * hw + 1;
      }
    }
    const double mean = sum / static_cast<double>(cnt);
    double acc = 0.0;
    auto add = [&](double val) {
      const double d = std::abs(val - mean);
      acc += p == 1.0 ? d : (p == 2.0 ? d * d : std::pow(d, p));
    };
    if (g.n == 1) {
      for (int j = cx - R; j <= cx + R; ++j) add(f.v[static_cast<std::size_t>(j)]);
    } else {
      for (int dy = -R; dy <= R; ++dy) {
        const int hw = rows.half_width[static_cast<std::size_t>(dy + R)];
        const double* row = f.v.data() + static_cast<std::size_t>(cy + dy) * N;
        for (int j = cx - hw; j <= cx + hw; ++j) add(row[j]);
      }
    }
    return std::pow(r, -alpha) * std::pow(acc * cell, 1.0 / p);
  });
}

GridFunction multiply(const GridFunction& a, const GridFunction& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("multiply: grid mismatch");
  GridFunction out = zeros(a.grid);
  out.family = "derived:product";
  par_for(static_cast<std::int64_t>(out.v.size()),
          [&](std::int64_t i) { out.v[static_cast<std::size_t>(i)] = a.v[static_cast<std::size_t>(i)] * b.v[static_cast<std::size_t>(i)]; });
  out.rescan_support();
  return out;
}

GridFunction scale(const GridFunction& a, double c) {
  GridFunction out = a;
  for (double& x : out.v) x *= c;
  out.family = "derived:scale";
  return out;
}

}  // namespace besov
