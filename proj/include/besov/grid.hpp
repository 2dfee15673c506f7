#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace besov {

inline constexpr double kInf = 1e308 * 10;  // std::numeric_limits has no constexpr inf pre-C++23 idiom; use HUGE_VAL semantics

double inf();  // canonical infinity used for p = q = inf

// Uniform grid over the box [-L, L]^n with cell centers at -L + (i + 1/2) dx.
struct Grid {
  int n = 1;
  double L = 1.0;
  int N = 8;
  double dx = 0.25;

  std::int64_t cells() const { return n == 1 ? N : static_cast<std::int64_t>(N) * N; }
  double center(int i) const { return -L + (i + 0.5) * dx; }
  bool operator==(const Grid&) const = default;
};

// Grid cell cap; build_grid rejects N^n above this.
std::int64_t grid_cell_cap();
void set_grid_cell_cap(std::int64_t cap);

Grid build_grid(int n, double L, int N);

// Analytic function family: gaussian | smooth-bump | radial-power-cutoff |
// tensor-product | indicator-mollified. Parameters are by name; radial
// families accept optional x0/y0 centers.
struct FunctionSpec {
  std::string family;
  std::map<std::string, double> params;

  double eval(int n, double x, double y = 0.0) const;
  double param(const std::string& key, double fallback) const;
  double require(const std::string& key) const;
  void validate(int n) const;
};

struct GridFunction {
  Grid grid;
  std::vector<double> v;

  // metadata
  std::string family = "raw";
  std::map<std::string, double> params;
  bool support_warning = false;

  // support bounding box in index space, inclusive; empty if hi < lo
  std::array<int, 2> slo{0, 0};
  std::array<int, 2> shi{-1, -1};

  double& at(int ix, int iy = 0) { return v[static_cast<std::size_t>(ix) + static_cast<std::size_t>(grid.N) * iy]; }
  double at(int ix, int iy = 0) const { return v[static_cast<std::size_t>(ix) + static_cast<std::size_t>(grid.N) * iy]; }

  bool empty_support() const { return shi[0] < slo[0]; }
  // support extent in length units, per axis and diagonal
  double support_diameter() const;
  void rescan_support(double tol = 1e-14);
  void mark_full_support();
};

GridFunction zeros(const Grid& g);
GridFunction sample_function(const FunctionSpec& spec, const Grid& g);

// L^p norm over R^n of the zero-extended cell-sampled function.
// p in [1, inf]; p = inf gives max |f_i|.
double lp_norm(const GridFunction& f, double p);

// Delta_h f restricted to the box, with f(x+h) evaluated by multilinear
// interpolation of the zero extension; lattice-aligned h uses exact shifts.
GridFunction difference(const GridFunction& f, double hx, double hy = 0.0);

// || |grad f| ||_{L^p}: central differences inside, one-sided at the box edge.
double gradient_lp(const GridFunction& f, double p);

// Finite dyadic ball family for oscillation norms. Centers sit on the cell
// lattice with the given stride; balls that do not fit inside the box are
// skipped (counted in the result).
struct BallFamily {
  int stride_cells = 8;
  std::vector<double> radii;
};

BallFamily dyadic_ball_family(const Grid& g, int stride_cells, double r_min, double r_max);

struct OscillationResult {
  double value = 0.0;
  int balls_used = 0;
  int balls_skipped = 0;
};

// sup over the family of mean_B |f - mean_B f|  (L^1 oscillation convention).
OscillationResult bmo_norm(const GridFunction& f, const BallFamily& balls);

// sup over the family of r^{-alpha} || f - mean_B f ||_{L^p(B)} (non-averaged).
OscillationResult campanato_norm(const GridFunction& f, double p, double alpha,
                                 const BallFamily& balls);

GridFunction multiply(const GridFunction& a, const GridFunction& b);
GridFunction scale(const GridFunction& a, double c);

// serialization: <basename>.json header plus <basename>.bin (float64 LE) or
// <basename>.csv values
void write_grid_function(const GridFunction& f, const std::string& basename, bool csv = false);
GridFunction read_grid_function(const std::string& basename);

}  // namespace besov
