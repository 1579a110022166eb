#pragma once

#include "nsub/numeric_poly.hpp"
#include "nsub/puiseux.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nsub {

enum class MeasureMethod { MC, GRID, EXACT };

const char* to_string(MeasureMethod m);

struct MeasureSample {
  double epsilon = 0.0;
  double estimate = 0.0;
  double stderr_ = 0.0;
  long n_samples = 0;
  MeasureMethod method = MeasureMethod::MC;
};

/// Integration region: a disk centred at the origin, a curved triangle
/// {0 < x < x_max, lower(x) < y < upper(x)}, or an axis-parallel rectangle.
struct Region {
  enum class Kind { Disk, CurvedTriangle, SectorProduct };
  Kind kind = Kind::Disk;
  double radius = 1.0;
  PuiseuxPoly lower, upper;
  double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;

  static Region disk(double r);
  static Region curved_triangle(const PuiseuxPoly& lower, const PuiseuxPoly& upper, double x_max);
  static Region sector_product(double x0, double x1, double y0, double y1);

  double area() const;
  bool contains(double x, double y) const;
  /// y-interval of the slice at x (empty when lo >= hi).
  std::pair<double, double> slice(double x) const;
  std::string describe() const;
};

struct MeasureBudget {
  MeasureMethod method = MeasureMethod::MC;
  long n = 1000000;       // MC samples
  int grid_depth = 40;       // GRID maximal bisection depth
  long grid_splits = 20000;  // GRID bisection budget
  double grid_tol = 1e-9;    // GRID relative tolerance
  unsigned threads = 0;   // 0 = default
};

/// Roots of a real polynomial (coefficients low to high) in [lo, hi], ascending.
std::vector<double> real_roots_in(const std::vector<double>& coeffs, double lo, double hi);

/// Length of {y in (lo, hi): |q(y)| < eps} for q given by its coefficients.
double sublevel_length(const std::vector<double>& coeffs, double lo, double hi, double eps);

/// |{(x, y) in region: |p| < eps}|. MC draws x from a uniform / log-uniform
/// mixture and integrates each y-slice exactly; results depend only on
/// (seed, budget), never on the worker count.
MeasureSample sublevel_measure(const PuiseuxPoly& p, const Region& region, double eps, const MeasureBudget& budget,
                               std::uint64_t seed);

}  // namespace nsub
