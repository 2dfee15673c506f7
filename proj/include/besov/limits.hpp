#pragma once

#include <vector>

#include "besov/grid.hpp"
#include "besov/hsample.hpp"
#include "besov/seminorm.hpp"

namespace besov {

struct LimitScan {
  std::vector<double> alphas;
  std::vector<double> raw;       // seminorm value per alpha
  std::vector<double> weighted;  // (1-alpha) or alpha times value^p
  double extrapolated = 0.0;     // Richardson on the last 3 points
  double target = 0.0;
  double rel_err = 0.0;
  // same limit against target/p; the measured constant of the alpha -> 1
  // display carries the extra 1/p (see README notes on reported data)
  double target_over_p = 0.0;
  double rel_err_over_p = 0.0;
};

// c(n,p) = int_{S^{n-1}} |cos theta|^p dsigma: 2 for n=1,
// 2 sqrt(pi) Gamma((p+1)/2)/Gamma(p/2+1) for n=2.
double bbm_angular_constant(int n, double p);

// quadratic Lagrange extrapolation to 0 of the last three (eps, value) pairs
double richardson3(const std::vector<double>& eps, const std::vector<double>& val);

// (1-alpha) ||f||^p_{p,p} against c(n,p) ||grad f||_p^p for alpha near 1.
LimitScan bbm_scan(const GridFunction& f, double p, const std::vector<double>& alphas,
                   const HSample& hs);

// alpha ||f||^p_{p,p} against 2 p^{-1} sigma_{n-1} ||f||_p^p for alpha near 0.
LimitScan ms_scan(const GridFunction& f, double p, const std::vector<double>& alphas,
                  const HSample& hs);

struct BvReport {
  std::vector<double> alphas;
  std::vector<double> seminorm;     // ||f||_{1,inf;alpha}
  std::vector<double> sup_small_h;  // sup over |h| <= 1
  std::vector<double> sup_large_h;  // sup over |h| > 1
  double bv_norm = 0.0;             // ||grad f||_1 + ||f||_1
  double max_ratio = 0.0;           // max seminorm / bv_norm (the suite constant)
  bool large_h_bound_pass = false;  // sup_{|h|>1} <= 2||f||_1 at the top alpha
  bool bounded_pass = false;        // consecutive ratio < 1.5
};

BvReport bv_limsup_scan(const GridFunction& f, const std::vector<double>& alphas,
                        const HSample& hs);

struct WeakSobolevReport {
  double lhs = 0.0;  // sup_t t |{|f|>t}|^{(n-alpha p)/(pn)} on a 64-point t-grid
  double rhs = 0.0;  // 2^{1/p} (pn/(n-alpha p)) ||f||_{p,inf;alpha}
  double exponent = 0.0;
  bool pass = false;
};

WeakSobolevReport weak_sobolev_check(const GridFunction& f, double alpha, double p,
                                     const HSample& hs);

struct StrongRatioReport {
  double lhs = 0.0;    // ||f||_{pn/(n-alpha p)}
  double scale = 0.0;  // (alpha (1-alpha) (n-alpha p)^{1-p})^{1/p} ||f||_{p,p;alpha}
  double ratio = 0.0;
};

StrongRatioReport sobolev_strong_ratio(const GridFunction& f, double alpha, double p,
                                       const HSample& hs);

}  // namespace besov
