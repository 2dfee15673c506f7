#pragma once

#include <vector>

#include "besov/grid.hpp"

namespace besov::kernels {

// ||f(.+h) - f||_{L^p} over R^n, f zero-extended and multilinearly
// interpolated, evaluated on the cell lattice extended to cover
// supp f  union  (supp f - h). p in [1, inf].
//
// lp_cached: pass ||f||_p if already known; used by the exact
// disjoint-support shortcut ||Delta_h f||_p = 2^{1/p} ||f||_p for
// |h| >= diam supp f. Pass a negative value to compute on demand.
double diff_norm(const GridFunction& f, double hx, double hy, double p,
                 double lp_cached = -1.0);

// Accumulates coef * d/dv ||Delta_h v||_p into g (box layout). p in [1, inf).
// For p = 1 the sign subgradient is used with sign(0) = 0.
void diff_norm_subgrad(const GridFunction& f, double hx, double hy, double p,
                       std::vector<double>& g, double coef);

// out[i] = sum_j w[j] * in[i + j - rad] along one axis with zero extension;
// rows = number of lines (1 for n = 1, N for the other axis in 2D).
void convolve_axis(const std::vector<double>& in, std::vector<double>& out,
                   int N, int rows, int axis, const std::vector<double>& w);

// Discrete Gaussian kernel for the heat solution at time s (kernel
// exp(-u^2/4s)/sqrt(4 pi s)). Point-sampled by default; cell-integrated
// (erf differences) when cell_integrated is set. Returns weights of length
// 2*rad+1 centered at zero.
std::vector<double> gaussian_kernel(double s, double dx, bool cell_integrated, int& rad);

// Serial reference implementations, kept for correctness tests and the
// kernel benchmark.
namespace serial_ref {
double diff_norm(const GridFunction& f, double hx, double hy, double p);
double lp_norm(const GridFunction& f, double p);
void convolve_axis(const std::vector<double>& in, std::vector<double>& out,
                   int N, int rows, int axis, const std::vector<double>& w);
}  // namespace serial_ref

}  // namespace besov::kernels
