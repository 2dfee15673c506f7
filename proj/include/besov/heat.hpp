#pragma once

#include <cstdint>
#include <vector>

#include "besov/grid.hpp"
#include "besov/hsample.hpp"
#include "besov/regions.hpp"
#include "besov/seminorm.hpp"

namespace besov {

// Heat extension sampled at heights t_j: level j stores w(t_j^2, x).
struct HalfSpaceField {
  Grid base;
  std::vector<double> t_levels;           // increasing heights
  std::vector<std::vector<double>> w;     // one grid per level
  std::vector<std::uint8_t> tiny_kernel;  // level used the cell-integrated fallback
};

std::vector<double> geometric_levels(double t_lo, double t_hi, int count);

// Gaussian convolution per level (separable in 2D). Levels with kernel std
// below dx/2 fall back to cell-integrated weights and are flagged.
HalfSpaceField heat_extend(const GridFunction& f, const std::vector<double>& t_levels);

// convolution at a single time s (not squared), used for semigroup checks
GridFunction heat_convolve(const GridFunction& f, double s);

// closed form for the gaussian family: w(s,x) = (sigma^2/(sigma^2+4s))^{n/2}
// * exp(-|x|^2/(sigma^2+4s))
double gaussian_heat_closed_form(int n, double sigma, double s, double x, double y = 0.0);

// tent mask per level: true where B(x, t_j) lies inside O
std::vector<std::vector<std::uint8_t>> tent_indicator(const Region& O,
                                                      const HalfSpaceField& geom);

// M_N f(x) = max over levels j and cells y with |y - x| < t_j of |w(t_j^2, y)|
GridFunction nontangential_maximal(const HalfSpaceField& field);

// Mf(x) = max over radii of the discrete cell average of |f| over B(x, r)
GridFunction hardy_littlewood_maximal(const GridFunction& f, const std::vector<double>& radii);

std::vector<double> dyadic_radii(const Grid& g);

// density t^{s-1} dt dx on the upper half space
struct HalfSpaceMeasure {
  double s = 1.0;
};

// nu(T(O)) with analytic slice measures |{x : B(x,t) in O}| and exact
// per-slab integrals of t^{s-1}; slabs geometric over [t_lo, diam-ish].
double tent_measure_analytic(const HalfSpaceMeasure& nu, const Region& O,
                             double t_lo, int slabs = 400);

// closed forms for balls: n=1: 2 r^{s+1}/(s(s+1)); n=2: 2 pi r^{s+2}/(s(s+1)(s+2))
double tent_measure_ball_oracle(const HalfSpaceMeasure& nu, int n, double r);

// grid version: slice measure by cell counting on the field's levels
double tent_measure_grid(const HalfSpaceMeasure& nu, const Region& O,
                         const HalfSpaceField& geom);

// nu({ (t,x) : |w(t^2,x)| > lambda }) using the field's level slabs
double superlevel_measure(const HalfSpaceMeasure& nu, const HalfSpaceField& field,
                          double lambda);

struct CarlesonGeometryRow {
  double r = 0.0;
  double nu_tent = 0.0;
  double capacity_qp = 0.0;  // capacity upper ^ {q/p}
  double ratio = 0.0;
};

struct CarlesonWeakTypeRow {
  std::string family;
  double lhs = 0.0;  // sup_lambda lambda^q nu({|w|>lambda})
  double rhs = 0.0;  // seminorm^q
  double ratio = 0.0;
};

struct MaximalDominationRow {
  std::string family;
  double c0 = 0.0;  // per-cell max of M_N f / M f
};

struct CarlesonReport {
  double s = 0.0, q = 0.0;
  std::vector<CarlesonGeometryRow> geometry;
  std::vector<CarlesonWeakTypeRow> weak_type;
  std::vector<MaximalDominationRow> maximal;
  double geometry_ratio_spread = 0.0;  // max/min of tent-vs-capacity ratios
  double c0_suite = 0.0;
};

struct CarlesonOpts {
  int levels = 24;
  std::uint64_t seed = 1;
  int solver_iters = 200;
};

// s must match q(n - alpha p)/p - n so nu(T(B(x,r))) ~ r^{q(n-alpha p)/p}.
CarlesonReport carleson_check(const HalfSpaceMeasure& nu,
                              const std::vector<Region>& tents_of,
                              const std::vector<FunctionSpec>& funcs,
                              const BesovParams& bp, double q, const Grid& g,
                              const HSample& hs, const CarlesonOpts& opts = {});

}  // namespace besov
