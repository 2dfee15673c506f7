#pragma once

#include <string>

#include "besov/grid.hpp"
#include "besov/hsample.hpp"

namespace besov {

struct BesovParams {
  double alpha = 0.5;
  double p = 1.0;  // [1, inf]
  double q = 0.0;  // [1, inf]; besov::inf() for the sup form

  void validate() const;
};

struct HSampleInfo {
  int n = 0;
  double h_min = 0.0, h_max = 0.0;
  int K = 0, M = 0;
};

struct SeminormResult {
  double value = 0.0;
  // additive contributions to value^q (q < inf only)
  double tail_correction = 0.0;
  double small_h_correction = 0.0;
  // q = inf only
  double argmax_h = 0.0;
  int argmax_dir = 0;
  bool argmax_interior = true;
  bool coverage_gap = false;  // h_max < supp diameter: [h_max, diam] not covered
  HSampleInfo hs;
};

struct SeminormOpts {
  bool golden_refine = true;     // q = inf: refine the sup in radius
  bool tail_correction = true;   // q < inf: exact closed-form tail beyond h_max
  bool small_h_correction = true;  // q < inf: |h| < h_min gradient model
};

// Def-2.1-style seminorm on the h-sample: weighted sum for q < inf,
// sup of |h|^{-alpha} ||Delta_h f||_p for q = inf.
SeminormResult besov_seminorm(const GridFunction& f, const BesovParams& bp,
                              const HSample& hs, const SeminormOpts& opts = {});

// Same structure with the BMO oscillation norm inside.
SeminormResult besov_bmo_seminorm(const GridFunction& f, double alpha, double q,
                                  const HSample& hs, const BallFamily& balls);

struct LyapunovReport {
  double lhs = 0.0, rhs = 0.0;
  double p = 0.0, p0 = 0.0, p1 = 0.0, theta = 0.0;
  bool pass = false;
};

// ||f||_{p,inf} <= ||f||_{p0,inf}^{1-theta} ||f||_{p1,inf}^theta  with
// 1/p = (1-theta)/p0 + theta/p1. Holds per offset by scalar interpolation,
// so the shared discrete h-set inherits it exactly.
LyapunovReport lyapunov_interpolation_check(const GridFunction& f, double alpha,
                                            double p0, double p1, double theta,
                                            const HSample& hs);

struct LeibnizReport {
  double lhs = 0.0, rhs = 0.0, ratio = 0.0;
  double fg_seminorm = 0.0;
};

// lhs = ||fg||; rhs = (||f|| + ||f||_p)(||g||_BMO + ||g||_BMO-seminorm) + sym.
// p = 1 is rejected.
LeibnizReport leibniz_ratio(const GridFunction& f, const GridFunction& g,
                            const BesovParams& bp, const HSample& hs,
                            const BallFamily& balls);

}  // namespace besov
