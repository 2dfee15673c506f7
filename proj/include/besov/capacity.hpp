#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "besov/grid.hpp"
#include "besov/hsample.hpp"
#include "besov/regions.hpp"
#include "besov/seminorm.hpp"

namespace besov {

// f >= 1 is enforced on mask cells, f = 0 on the outer band (2 cell layers).
struct AdmissibleConstraint {
  Grid grid;
  std::vector<std::uint8_t> mask;
  std::vector<std::uint8_t> band;
  double delta_N = 0.0;
  std::int64_t mask_count = 0;

  void project(std::vector<double>& v) const;
  bool feasible(const std::vector<double>& v, double tol = 1e-9) const;
};

// mask = cells whose centers lie within delta_N of E. Throws if the mask
// touches the boundary band (box too small).
AdmissibleConstraint rasterize_constraint(const Region& E, const Grid& g, double delta_N);

// Same from an arbitrary distance function (used for boundary shells).
AdmissibleConstraint constraint_from_distance(const Grid& g,
                                              const std::function<double(double, double)>& dist,
                                              double delta_N);

// f0 = clamp(1 - dist(x, E)/w, 0, 1)
GridFunction initial_admissible(const Region& E, const Grid& g, double w);

struct SolverOpts {
  int max_iter = 300;
  int restarts = 3;           // perturbed-start count beyond the fixed seeds
  double tol = 1e-3;          // window-decrease convergence proxy
  double s0_factor = 0.1;
  double delta_N = 0.0;       // 0 -> 2 dx
  std::uint64_t seed = 1;
  int full_eval_every = 10;   // full objective scans between candidate-set steps
  int top_candidates = 16;
  std::vector<GridFunction> extra_seeds;
};

struct CapacityEstimate {
  double upper = 0.0;  // best feasible objective^p (true upper bound for the discrete problem)
  double lower = 0.0;  // isocapacitary bound from |E|
  GridFunction minimizer;
  int iterations = 0;
  bool converged = false;
  double gap_proxy = 0.0;  // relative best-objective decrease over the last window
  double objective = 0.0;  // upper^{1/p}
  std::vector<double> best_history;  // best objective after each full eval
  double delta_N = 0.0;
  std::uint64_t seed = 0;
};

// Projected subgradient descent on G(f) = max_h |h|^{-alpha} ||Delta_h f||_p
// over {f >= 1 on mask, f = 0 on band}. Requires q = inf, p < inf,
// alpha p < n (otherwise the capacity degenerates to zero and the request
// is rejected).
CapacityEstimate capacity_minimize(const Region& E, const BesovParams& bp,
                                   const Grid& g, const HSample& hs,
                                   const SolverOpts& opts = {});

// Same solver on a prebuilt constraint (empty mask allowed: returns 0).
CapacityEstimate capacity_minimize_constrained(const AdmissibleConstraint& con,
                                               const BesovParams& bp, const HSample& hs,
                                               const SolverOpts& opts = {});

// (|E|^{(n-alpha p)/(pn)} / (2^{1/p} pn/(n-alpha p)))^p ; requires alpha p < n.
double capacity_lower_bound(const Region& E, double alpha, double p);
double capacity_lower_bound_from_volume(double vol, int n, double alpha, double p);

struct ScalingReport {
  double upper1 = 0.0, upper2 = 0.0;
  double measured_ratio = 0.0, target_ratio = 0.0;
  double rel_err = 0.0;
  bool pass = false;
};

// capacity uppers of B(0,r1) vs B(0,r2) on radius-proportional grids
// against (r1/r2)^{n - alpha p}.
ScalingReport scaling_ratio_check(int n, double r1, double r2, const BesovParams& bp,
                                  int N, double tol = 0.10, SolverOpts opts = {});

struct BoundaryReport {
  double ball_upper = 0.0, shell_upper = 0.0;
  double thickness = 0.0;
  bool pass = false;  // ball_upper <= shell_upper * (1 + tol)
};

BoundaryReport boundary_capacity_check(const Region& ball, const BesovParams& bp,
                                       const Grid& g, const HSample& hs,
                                       double tol = 0.05, SolverOpts opts = {});

struct OpenPerimeterReport {
  double capacity_upper = 0.0;
  double min_perimeter = 0.0;
  double argmin_delta = 0.0;
  double rel_err = 0.0;
  bool monotone_in_delta = false;
  bool pass = false;
};

// p = 1: capacity upper vs min over dilated open balls of the perimeter.
OpenPerimeterReport open_perimeter_comparison(const Region& ball, double alpha,
                                              const Grid& g, const HSample& hs,
                                              const std::vector<double>& deltas,
                                              double tol = 0.15, SolverOpts opts = {});

struct DegeneracyReport {
  double seminorm_interior = 0.0;  // sup over interior-restricted lattice shifts
  double capacity_witnessed = 0.0;
  bool pass = false;
};

// p = inf: the constant witness makes every capacity zero. The sup is
// restricted to cells with x and x+h both inside the box, where the zero
// extension cannot fake a jump.
DegeneracyReport constant_degeneracy_check(const Grid& g, double alpha, double q);

}  // namespace besov
