#pragma once

#include <array>
#include <string>
#include <vector>

namespace besov {

// Analytic set: a ball, a box, or a finite union of those. Volumes and
// translate overlaps are closed-form wherever the descriptor allows;
// otherwise a rasterized count with an attached cell error is used.
struct Region {
  struct Part {
    enum Kind { Ball, Box } kind = Ball;
    std::array<double, 2> c{0, 0};        // ball center
    double r = 1.0;                       // ball radius
    std::array<double, 2> lo{0, 0}, hi{0, 0};  // box corners
  };

  int n = 1;
  std::vector<Part> parts;

  static Region ball(int n, std::array<double, 2> c, double r);
  static Region interval(double a, double b);  // 1D box
  static Region box(std::array<double, 2> lo, std::array<double, 2> hi);  // 2D
  static Region union_of(const std::vector<Region>& rs);

  bool contains(double x, double y = 0.0) const;
  double dist(double x, double y = 0.0) const;  // 0 inside
  // loose bounding box
  void bbox(std::array<double, 2>& lo, std::array<double, 2>& hi) const;
  double diameter() const;
  bool single_ball() const { return parts.size() == 1 && parts[0].kind == Part::Ball; }

  void validate() const;
};

struct MeasureValue {
  double value = 0.0;
  double error_bound = 0.0;  // 0 when closed-form
};

MeasureValue volume(const Region& E);
MeasureValue overlap_volume(const Region& E, double hx, double hy = 0.0);

// closed-form (n-1)-dimensional boundary measure for single balls/boxes
// (interval endpoints count 2, circle length, box perimeter)
double surface_measure(const Region& E);

struct PerimeterSearch {
  double h_lo = 0.0, h_hi = 0.0;  // 0 -> defaults from the region diameter
  int radial = 96;
  int directions = 32;  // 2D scan over [0, pi); symmetric in h -> -h
  int golden_iters = 40;
};

struct PerimeterResult {
  double value = 0.0;
  std::array<double, 2> argmax_h{0, 0};
  double argmax_r = 0.0;
  bool diverged = false;       // objective grows as h -> 0 (alpha p > 1)
  double small_h_slope = 0.0;  // log-log slope near h_lo
  PerimeterSearch search;
};

// P_{alpha,p,inf}(E) = sup_h |h|^{-alpha} (2(|E| - |E cap (E-h)|))^{1/p}
PerimeterResult perimeter(const Region& E, double alpha, double p,
                          PerimeterSearch search = {});

struct DivergenceScan {
  std::vector<double> h;
  std::vector<double> value;
  double slope = 0.0;  // least-squares log-log slope; 1/p - alpha in the h->0 limit
};

DivergenceScan perimeter_divergence_scan(const Region& E, double alpha, double p,
                                         const std::vector<double>& h_sequence);

// omega_beta = pi^{beta/2} / Gamma(1 + beta/2)
double hausdorff_normalization(double beta);

struct BallCover {
  std::vector<Region::Part> balls;  // Kind::Ball entries
};

// min over supplied covers of sum omega_beta r_j^beta. Covers that fail to
// contain E are rejected (analytically for a single ball, by rasterized
// point containment otherwise).
double hausdorff_content_upper(const Region& E, double beta,
                               const std::vector<BallCover>& covers);

BallCover self_cover(const Region& E);  // one ball per part (balls only)

}  // namespace besov
