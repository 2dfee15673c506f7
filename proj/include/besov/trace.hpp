#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "besov/capacity.hpp"
#include "besov/grid.hpp"
#include "besov/hsample.hpp"
#include "besov/regions.hpp"
#include "besov/seminorm.hpp"

namespace besov {

// Outer measures on R^n with closed forms on the suite regions:
//   Lebesgue  : n-dimensional volume
//   Slice     : d=1 Lebesgue on the axis-aligned line y = anchor (n=2)
//   Weighted  : |x|^gamma dx (radial closed form on balls centered at 0)
struct OuterMeasure {
  enum Kind { Lebesgue, Slice, Weighted } kind = Lebesgue;
  int n = 1;
  double anchor_y = 0.0;  // Slice: height of the line
  double gamma = 0.0;     // Weighted exponent, > -n

  std::string id() const;
  double eval_region(const Region& S) const;  // closed form or raster fallback
  double eval_ball(std::array<double, 2> c, double r) const;  // closed form
  // mu of the rasterized level set {|f| > t}
  double eval_levelset(const GridFunction& f, double t) const;
  // level set intersected with a ball
  double eval_levelset_in_ball(const GridFunction& f, double t,
                               std::array<double, 2> c, double r) const;
};

// sup over a 64-point geometric t-grid of t * mu({|f| > t})^{1/q}
double weak_lorentz_norm(const GridFunction& f, double q, const OuterMeasure& mu);

struct GrowthReport {
  double target = 0.0;           // q(n - alpha p)/p
  double fitted_slope = 0.0;     // log mu(B) vs log r over on-support balls
  double sup_ratio = 0.0;        // max mu(B)/r^target over the sample
  double worst_r = 0.0;          // radius attaining the sup ratio
  std::array<double, 2> worst_center{0, 0};
  bool pass = false;             // fitted_slope >= target - tol
};

// mu(B(x,r)) <= C r^{q(n-alpha p)/p}. Small radii bind: a d-dimensional
// measure passes iff d >= target, i.e. q <= p d/(n - alpha p).
GrowthReport ball_growth_check(const OuterMeasure& mu, double target,
                               const std::vector<std::array<double, 2>>& centers,
                               const std::vector<double>& radii, double tol = 0.05);

struct TraceRow {
  std::string family;
  double lhs = 0.0, rhs = 0.0, ratio = 0.0;
};

struct TraceReport {
  std::string mode;  // global | localized
  std::string measure_id;
  std::vector<TraceRow> rows;
  double max_ratio = 0.0;
  GrowthReport growth;
  // contrapositive branch: small bump at the worst ball
  bool witness_built = false;
  double witness_ratio = 0.0;
  double suite_cap = 0.0;  // 1.5 x max benign ratio
  bool witness_exceeds_cap = false;
};

struct TraceOpts {
  std::vector<double> ball_radii;  // localized mode; empty -> dyadic defaults
  bool build_witness = true;       // only when growth fails
  double cap_factor = 1.5;
};

TraceReport trace_inequality_check(const std::vector<FunctionSpec>& funcs,
                                   const OuterMeasure& mu, const BesovParams& bp,
                                   double q, const Grid& g, const HSample& hs,
                                   const std::string& mode, const TraceOpts& opts = {});

struct MultiplierStage {
  std::string name;
  double lhs = 0.0, rhs = 0.0, ratio = 0.0;
  bool pass = false;
};

struct MultiplierReport {
  double m_sup = 0.0;  // ||m||_{L^inf_mu} on the grid
  std::vector<MultiplierStage> stages;
  bool pass = false;
};

struct MultiplierOpts {
  std::vector<Region> regions;  // suite regions for the capacity stages
  int solver_iters = 150;
  std::uint64_t seed = 1;
  double tol = 0.05;
};

// Mirrors the implication chain: (i) hypothesis constants, (ii) weak-type
// bound for mf with C = trace constant x ||m||, (iii) capacity bound for
// the multiplier level sets.
MultiplierReport multiplier_check(const GridFunction& m, const OuterMeasure& mu,
                                  const std::vector<FunctionSpec>& funcs,
                                  const BesovParams& bp, double q, const Grid& g,
                                  const HSample& hs, const MultiplierOpts& opts);

// affine map x -> A x + b; rank-deficient allowed
struct AffineMap {
  std::array<std::array<double, 2>, 2> A{{{1, 0}, {0, 1}}};
  std::array<double, 2> b{0, 0};

  static AffineMap identity(int n);
  static AffineMap scaling(double a);
  static AffineMap axis_projection();  // (x,y) -> (x,0)
  std::array<double, 2> apply(double x, double y) const;
  bool is_identity() const;
};

struct PushforwardReport {
  TraceReport trace;                  // with f ∘ phi on the left
  double preimage_checks_max_err = 0.0;  // exact affine preimage identities
  bool consistent_with_identity = false; // only set for phi = identity
};

PushforwardReport pushforward_check(const AffineMap& phi, const OuterMeasure& mu,
                                    const std::vector<FunctionSpec>& funcs,
                                    const BesovParams& bp, double q, const Grid& g,
                                    const HSample& hs, const TraceOpts& opts = {});

}  // namespace besov
