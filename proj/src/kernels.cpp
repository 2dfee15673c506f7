#include "besov/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "besov/parallel.hpp"

namespace besov::kernels {

namespace {

struct ShiftGeom {
  long bx = 0, by = 0;
  double lx = 0.0, ly = 0.0;
  // output window, inclusive, index space (cell centers at integers)
  long wx_lo = 0, wx_hi = -1, wy_lo = 0, wy_hi = -1;
  bool empty = false;
};

ShiftGeom shift_geometry(const GridFunction& f, double hx, double hy) {
  ShiftGeom sg;
  if (f.empty_support()) {
    sg.empty = true;
    return sg;
  }
  const Grid& g = f.grid;
  const double sx = hx / g.dx;
  const double sy = (g.n == 2 ? hy : 0.0) / g.dx;
  sg.bx = std::lround(std::floor(sx));
  sg.by = std::lround(std::floor(sy));
  sg.lx = sx - sg.bx;
  sg.ly = sy - sg.by;
  if (std::abs(sx - std::lround(sx)) < 1e-12) { sg.bx = std::lround(sx); sg.lx = 0.0; }
  if (std::abs(sy - std::lround(sy)) < 1e-12) { sg.by = std::lround(sy); sg.ly = 0.0; }

  // window covers supp f union (supp f - h), padded one cell for interpolation
  sg.wx_lo = std::min<long>(f.slo[0], static_cast<long>(std::floor(f.slo[0] - sx)) - 1);
  sg.wx_hi = std::max<long>(f.shi[0], static_cast<long>(std::ceil(f.shi[0] - sx)) + 1);
  if (g.n == 2) {
    sg.wy_lo = std::min<long>(f.slo[1], static_cast<long>(std::floor(f.slo[1] - sy)) - 1);
    sg.wy_hi = std::max<long>(f.shi[1], static_cast<long>(std::ceil(f.shi[1] - sy)) + 1);
  } else {
    sg.wy_lo = sg.wy_hi = 0;
  }
  return sg;
}

enum class PKind { one, two, infty, general };

PKind classify_p(double p) {
  if (p == 1.0) return PKind::one;
  if (p == 2.0) return PKind::two;
  if (std::isinf(p)) return PKind::infty;
  return PKind::general;
}

// per-row accumulation of |b - a|^p (or running max)
template <PKind PK>
double row_accumulate(const double* rowA, const double* rowB0, const double* rowB1,
                      const ShiftGeom& sg, int N, double p) {
  const double w00 = (1.0 - sg.lx) * (1.0 - sg.ly);
  const double w10 = sg.lx * (1.0 - sg.ly);
  const double w01 = (1.0 - sg.lx) * sg.ly;
  const double w11 = sg.lx * sg.ly;

  auto tap = [&](const double* row, long col) -> double {
    return (row && col >= 0 && col < N) ? row[col] : 0.0;
  };

  double acc = 0.0;
  auto push = [&](double a, double b) {
    const double t = std::abs(b - a);
    if constexpr (PK == PKind::one) acc += t;
    else if constexpr (PK == PKind::two) acc += t * t;
    else if constexpr (PK == PKind::infty) acc = std::max(acc, t);
    else acc += std::pow(t, p);
  };

  // branch-free middle: every index involved stays in [0, N)
  long fast_lo = std::max<long>({sg.wx_lo, 0, -sg.bx});
  long fast_hi = std::min<long>({sg.wx_hi, N - 1, N - 2 - sg.bx});

  for (long wx = sg.wx_lo; wx < std::min(fast_lo, sg.wx_hi + 1); ++wx) {
    const double a = tap(rowA, wx);
    const long cx = wx + sg.bx;
    const double b = w00 * tap(rowB0, cx) + w10 * tap(rowB0, cx + 1) +
                     w01 * tap(rowB1, cx) + w11 * tap(rowB1, cx + 1);
    push(a, b);
  }
  if (rowA && rowB0 && rowB1 && fast_lo <= fast_hi) {
    for (long wx = fast_lo; wx <= fast_hi; ++wx) {
      const long cx = wx + sg.bx;
      const double b = w00 * rowB0[cx] + w10 * rowB0[cx + 1] +
                       w01 * rowB1[cx] + w11 * rowB1[cx + 1];
      push(rowA[wx], b);
    }
  } else if (fast_lo <= fast_hi) {
    for (long wx = fast_lo; wx <= fast_hi; ++wx) {
      const double a = tap(rowA, wx);
      const long cx = wx + sg.bx;
      const double b = w00 * tap(rowB0, cx) + w10 * tap(rowB0, cx + 1) +
                       w01 * tap(rowB1, cx) + w11 * tap(rowB1, cx + 1);
      push(a, b);
    }
  }
  for (long wx = std::max(fast_hi + 1, fast_lo); wx <= sg.wx_hi; ++wx) {
    const double a = tap(rowA, wx);
    const long cx = wx + sg.bx;
    const double b = w00 * tap(rowB0, cx) + w10 * tap(rowB0, cx + 1) +
                     w01 * tap(rowB1, cx) + w11 * tap(rowB1, cx + 1);
    push(a, b);
  }
  return acc;
}

template <PKind PK>
double diff_norm_impl(const GridFunction& f, const ShiftGeom& sg, double p) {
  const Grid& g = f.grid;
  const int N = g.N;
  const long nrows = sg.wy_hi - sg.wy_lo + 1;
  std::vector<double> partial(static_cast<std::size_t>(nrows), 0.0);

  par_for(nrows, [&](std::int64_t ri) {
    const long wy = sg.wy_lo + ri;
    const double* base = f.v.data();
    const double* rowA = nullptr;
    const double* rowB0 = nullptr;
    const double* rowB1 = nullptr;
    if (g.n == 1) {
      rowA = base;
      rowB0 = base;
      rowB1 = nullptr;  // ly = 0 in 1D; w01 = w11 = 0
    } else {
      if (wy >= 0 && wy < N) rowA = base + static_cast<std::size_t>(wy) * N;
      const long ry0 = wy + sg.by, ry1 = wy + sg.by + 1;
      if (ry0 >= 0 && ry0 < N) rowB0 = base + static_cast<std::size_t>(ry0) * N;
      if (ry1 >= 0 && ry1 < N) rowB1 = base + static_cast<std::size_t>(ry1) * N;
    }
    partial[static_cast<std::size_t>(ri)] = row_accumulate<PK>(rowA, rowB0, rowB1, sg, N, p);
  });

  if constexpr (PK == PKind::infty) {
    double m = 0.0;
    for (double v : partial) m = std::max(m, v);
    return m;
  } else {
    KahanAcc acc;
    for (double v : partial) acc.add(v);
    const double cell = g.n == 1 ? g.dx : g.dx * g.dx;
    return std::pow(acc.s * cell, 1.0 / p);
  }
}

}  // namespace

double diff_norm(const GridFunction& f, double hx, double hy, double p, double lp_cached) {
  if (!(p >= 1.0)) throw std::invalid_argument("diff_norm: p must be in [1, inf]");
  const double hlen = f.grid.n == 2 ? std::hypot(hx, hy) : std::abs(hx);
  if (hlen == 0.0) throw std::invalid_argument("diff_norm: |h| must be positive");
  if (f.empty_support()) return 0.0;

  // disjoint supports: ||Delta_h f||_p = 2^{1/p} ||f||_p exactly
  if (hlen >= f.support_diameter() + 2.0 * f.grid.dx) {
    const double base = lp_cached >= 0.0 ? lp_cached : lp_norm(f, p);
    return std::isinf(p) ? base : std::pow(2.0, 1.0 / p) * base;
  }

  const ShiftGeom sg = shift_geometry(f, hx, hy);
  switch (classify_p(p)) {
    case PKind::one: return diff_norm_impl<PKind::one>(f, sg, p);
    case PKind::two: return diff_norm_impl<PKind::two>(f, sg, p);
    case PKind::infty: return diff_norm_impl<PKind::infty>(f, sg, p);
    default: return diff_norm_impl<PKind::general>(f, sg, p);
  }
}

void diff_norm_subgrad(const GridFunction& f, double hx, double hy, double p,
                       std::vector<double>& g, double coef) {
  if (!(p >= 1.0) || std::isinf(p)) throw std::invalid_argument("diff_norm_subgrad: p must be in [1, inf)");
  const Grid& gr = f.grid;
  const int N = gr.N;
  if (g.size() != f.v.size()) throw std::invalid_argument("diff_norm_subgrad: output size mismatch");
  if (f.empty_support()) return;

  const ShiftGeom sg = shift_geometry(f, hx, hy);
  if (sg.empty) return;
  const long W = sg.wx_hi - sg.wx_lo + 1;
  const long H = sg.wy_hi - sg.wy_lo + 1;
  std::vector<double> d(static_cast<std::size_t>(W) * H);

  const double w00 = (1.0 - sg.lx) * (1.0 - sg.ly);
  const double w10 = sg.lx * (1.0 - sg.ly);
  const double w01 = (1.0 - sg.lx) * sg.ly;
  const double w11 = sg.lx * sg.ly;

  auto sample = [&](long ix, long iy) -> double {
    if (ix < 0 || ix >= N) return 0.0;
    if (gr.n == 2 && (iy < 0 || iy >= N)) return 0.0;
    return f.v[static_cast<std::size_t>(ix) + static_cast<std::size_t>(gr.n == 2 ? iy : 0) * N];
  };

  par_for(H, [&](std::int64_t ri) {
    const long wy = sg.wy_lo + ri;
    double* drow = d.data() + static_cast<std::size_t>(ri) * W;
    for (long wx = sg.wx_lo; wx <= sg.wx_hi; ++wx) {
      const long cx = wx + sg.bx, cy = wy + sg.by;
      const double b = w00 * sample(cx, cy) + w10 * sample(cx + 1, cy) +
                       w01 * sample(cx, cy + 1) + w11 * sample(cx + 1, cy + 1);
      drow[wx - sg.wx_lo] = b - sample(wx, wy);
    }
  });

  const double cell = gr.n == 1 ? gr.dx : gr.dx * gr.dx;
  double denom = 1.0;
  if (p > 1.0) {
    const double s = det_sum(static_cast<std::int64_t>(d.size()), [&](std::int64_t i) {
      const double t = std::abs(d[static_cast<std::size_t>(i)]);
      return p == 2.0 ? t * t : std::pow(t, p);
    });
    const double norm = std::pow(s * cell, 1.0 / p);
    if (norm == 0.0) return;
    denom = std::pow(norm, p - 1.0);
  }

  // psi(t) = |t|^{p-1} sgn(t) applied in place (sign for p = 1, sign(0) = 0)
  par_for(static_cast<std::int64_t>(d.size()), [&](std::int64_t i) {
    double& t = d[static_cast<std::size_t>(i)];
    if (p == 1.0) t = t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0);
    else if (p == 2.0) { /* psi(t) = t */ }
    else t = std::copysign(std::pow(std::abs(t), p - 1.0), t);
  });

  auto dval = [&](long wx, long wy) -> double {
    if (wx < sg.wx_lo || wx > sg.wx_hi || wy < sg.wy_lo || wy > sg.wy_hi) return 0.0;
    return d[static_cast<std::size_t>(wx - sg.wx_lo) + static_cast<std::size_t>(wy - sg.wy_lo) * W];
  };

  const double scl = coef * cell / denom;
  const int rows = gr.n == 1 ? 1 : N;
  par_for(rows, [&](std::int64_t iy) {
    double* grow = g.data() + static_cast<std::size_t>(iy) * N;
    for (int ix = 0; ix < N; ++ix) {
      const long jx = ix - sg.bx, jy = iy - sg.by;
      const double gathered = w00 * dval(jx, jy) + w10 * dval(jx - 1, jy) +
                              w01 * dval(jx, jy - 1) + w11 * dval(jx - 1, jy - 1);
      grow[ix] += scl * (gathered - dval(ix, iy));
    }
  });
}

void convolve_axis(const std::vector<double>& in, std::vector<double>& out,
                   int N, int rows, int axis, const std::vector<double>& w) {
  const int rad = (static_cast<int>(w.size()) - 1) / 2;
  out.assign(in.size(), 0.0);
  if (axis == 0) {
    par_for(rows, [&](std::int64_t r) {
      const double* src = in.data() + static_cast<std::size_t>(r) * N;
      double* dst = out.data() + static_cast<std::size_t>(r) * N;
      for (int i = 0; i < N; ++i) {
        const int k_lo = std::max(-rad, -i);
        const int k_hi = std::min(rad, N - 1 - i);
        double s = 0.0;
        for (int k = k_lo; k <= k_hi; ++k) s += w[static_cast<std::size_t>(k + rad)] * src[i + k];
        dst[i] = s;
      }
    });
  } else {
    par_for(rows, [&](std::int64_t iy) {
      double* dst = out.data() + static_cast<std::size_t>(iy) * N;
      const int k_lo = std::max(-rad, -static_cast<int>(iy));
      const int k_hi = std::min(rad, rows - 1 - static_cast<int>(iy));
      for (int ix = 0; ix < N; ++ix) dst[ix] = 0.0;
      for (int k = k_lo; k <= k_hi; ++k) {
        const double wk = w[static_cast<std::size_t>(k + rad)];
        const double* src = in.data() + static_cast<std::size_t>(iy + k) * N;
        for (int ix = 0; ix < N; ++ix) dst[ix] += wk * src[ix];
      }
    });
  }
}

std::vector<double> gaussian_kernel(double s, double dx, bool cell_integrated, int& rad) {
  if (!(s > 0.0)) throw std::invalid_argument("gaussian_kernel: time must be positive");
  // cut where exp(-u^2/4s) < 1e-18
  rad = static_cast<int>(std::ceil(std::sqrt(4.0 * s * 41.5) / dx)) + 1;
  std::vector<double> w(static_cast<std::size_t>(2 * rad + 1));
  if (!cell_integrated) {
    const double amp = dx / std::sqrt(4.0 * std::numbers::pi * s);
    for (int k = -rad; k <= rad; ++k) {
      const double u = k * dx;
      w[static_cast<std::size_t>(k + rad)] = amp * std::exp(-u * u / (4.0 * s));
    }
  } else {
    const double inv = 1.0 / (2.0 * std::sqrt(s));
    for (int k = -rad; k <= rad; ++k) {
      const double a = (k - 0.5) * dx * inv;
      const double b = (k + 0.5) * dx * inv;
      w[static_cast<std::size_t>(k + rad)] = 0.5 * (std::erf(b) - std::erf(a));
    }
  }
  return w;
}

namespace serial_ref {

double diff_norm(const GridFunction& f, double hx, double hy, double p) {
  const Grid& g = f.grid;
  const int N = g.N;
  const double sx = hx / g.dx;
  const double sy = (g.n == 2 ? hy : 0.0) / g.dx;
  auto sample = [&](double px, double py) -> double {
    // multilinear interpolation of the zero-extended samples
    const long jx = static_cast<long>(std::floor(px));
    const double lx = px - jx;
    auto get = [&](long ix, long iy) -> double {
      if (ix < 0 || ix >= N) return 0.0;
      if (g.n == 2 && (iy < 0 || iy >= N)) return 0.0;
      return f.v[static_cast<std::size_t>(ix) + static_cast<std::size_t>(g.n == 2 ? iy : 0) * N];
    };
    if (g.n == 1) return (1.0 - lx) * get(jx, 0) + lx * get(jx + 1, 0);
    const long jy = static_cast<long>(std::floor(py));
    const double ly = py - jy;
    return (1.0 - lx) * (1.0 - ly) * get(jx, jy) + lx * (1.0 - ly) * get(jx + 1, jy) +
           (1.0 - lx) * ly * get(jx, jy + 1) + lx * ly * get(jx + 1, jy + 1);
  };

  const long pad_x = static_cast<long>(std::ceil(std::abs(sx))) + 2;
  const long pad_y = static_cast<long>(std::ceil(std::abs(sy))) + 2;
  const long ylo = g.n == 2 ? -pad_y : 0, yhi = g.n == 2 ? N - 1 + pad_y : 0;
  double acc = 0.0, mx = 0.0;
  for (long iy = ylo; iy <= yhi; ++iy) {
    for (long ix = -pad_x; ix <= N - 1 + pad_x; ++ix) {
      const double a = sample(static_cast<double>(ix), static_cast<double>(iy));
      const double b = sample(ix + sx, iy + sy);
      const double t = std::abs(b - a);
      if (std::isinf(p)) mx = std::max(mx, t);
      else acc += std::pow(t, p);
    }
  }
  if (std::isinf(p)) return mx;
  const double cell = g.n == 1 ? g.dx : g.dx * g.dx;
  return std::pow(acc * cell, 1.0 / p);
}

double lp_norm(const GridFunction& f, double p) {
  double acc = 0.0, mx = 0.0;
  for (double v : f.v) {
    if (std::isinf(p)) mx = std::max(mx, std::abs(v));
    else acc += std::pow(std::abs(v), p);
  }
  if (std::isinf(p)) return mx;
  const double cell = f.grid.n == 1 ? f.grid.dx : f.grid.dx * f.grid.dx;
  return std::pow(acc * cell, 1.0 / p);
}

void convolve_axis(const std::vector<double>& in, std::vector<double>& out,
                   int N, int rows, int axis, const std::vector<double>& w) {
  const int rad = (static_cast<int>(w.size()) - 1) / 2;
  out.assign(in.size(), 0.0);
  for (int r = 0; r < rows; ++r) {
    for (int i = 0; i < N; ++i) {
      double s = 0.0;
      for (int k = -rad; k <= rad; ++k) {
        int jx = axis == 0 ? i + k : i;
        int jy = axis == 0 ? r : r + k;
        if (jx < 0 || jx >= N || jy < 0 || jy >= rows) continue;
        s += w[static_cast<std::size_t>(k + rad)] * in[static_cast<std::size_t>(jx) + static_cast<std::size_t>(jy) * N];
      }
      out[static_cast<std::size_t>(i) + static_cast<std::size_t>(r) * N] = s;
    }
  }
}

}  // namespace serial_ref

}  // namespace besov::kernels
