#pragma once

#include "nsub/newton.hpp"
#include "nsub/numeric_poly.hpp"
#include "nsub/roots.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nsub {

/// Irrational branch data met while resolving in exact mode.
class ExactModeError : public std::runtime_error {
 public:
  ExactModeError() : std::runtime_error("irrational branch data: switch to certified-numeric mode") {}
};

/// A broken internal invariant (e.g. the recursion failed to lower the root order).
class ResolveInvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class ResolveMode { Exact, Numeric };

struct BranchOptions {
  Rational truncation_order{40};
  ResolveMode mode = ResolveMode::Exact;
  unsigned precision_bits = 200;
};

/// x^m t(x) with t(0) = r solving d^{o-1}/du^{o-1} s(x, t(x)) = 0, s(x,u) = p(x, x^m u)/x^alpha.
struct BranchCurve {
  PuiseuxPoly t;
  PuiseuxPoly curve;
  bool exact = false;      // the defining equation holds identically
  bool truncated = false;  // lifting stopped at the truncation order
  Rational coeff_radius{0};  // numeric mode: bound on snapped residual coefficients
};

BranchCurve branch_curve(const PuiseuxPoly& p, const CompactEdge& edge, const IsolatedRoot& root,
                         const BranchOptions& opt = {});

enum class ChartMode { B, C };

struct ChartMonomial {
  Rational coeff;  // b_i (exact, or a dyadic approximation in numeric mode)
  Rational alpha;
  long beta = 0;
};

/// Curved-triangle chart: (x, y) = (sign_x u0, sign_y v0 - g(x)) with
/// (u0, v0) = swap ? (y0, x0) : (x0, y0) for an original point (x0, y0);
/// domain 0 < x < x_max, lower(x) < y < upper(x).
struct Chart {
  int sign_x = 1;
  int sign_y = 1;
  bool swap = false;
  PuiseuxPoly g;
  PuiseuxPoly lower;
  PuiseuxPoly upper;
  ChartMonomial monomial;
  ChartMode mode = ChartMode::C;
  Rational x_max;
  Rational delta;
  /// Mode B: |S o phi^-1| / (|b| x^alpha) lies in [band_lo, band_hi].
  double band_lo = 1.0;
  double band_hi = 1.0;
  Rational coeff_radius{0};
  PuiseuxPoly phase;  // S o phi^-1 in chart coordinates
  std::string label;
  int depth = 0;
  bool beyond_truncation = false;
  bool verified = false;

  /// Rebuilds the cached double images of g, lower and upper; call after editing them.
  void refresh_numeric();
  double g_at(double x) const { return g_num_.eval(x, 0.0); }
  double lower_at(double x) const { return lower_num_.eval(x, 0.0); }
  double upper_at(double x) const { return upper_num_.eval(x, 0.0); }

  std::pair<double, double> apply(double x0, double y0) const;
  std::pair<double, double> inverse(double x, double y) const;
  /// True when the original point lies in the chart domain.
  bool contains(double x0, double y0) const;

 private:
  NumericPoly g_num_, lower_num_, upper_num_;
};

struct TraceNode {
  Rational m;
  IsolatedRoot root;
  long order = 0;
  PuiseuxPoly curve;
  bool curve_exact = false;
  std::string label;
  std::vector<TraceNode> children;  // the two sides of the branch (y > 0, then reflected y < 0)
};

struct SectorDescriptor {
  int sign_x = 1;
  int sign_y = 1;
  bool swap = false;
  Rational eta;
};

struct ResolveParams {
  std::optional<Rational> eta;  // default min(1/2, m_min/2)
  Rational xi{1, 8};
  Rational delta{1, 4};
  Rational x_max{1, 2};
  int max_depth = 12;
  Rational truncation_order{40};
  ResolveMode mode = ResolveMode::Exact;
  int verify_samples = 512;
  std::uint64_t seed = 1;
};

struct Decomposition {
  SectorDescriptor sector;
  std::vector<Chart> charts;
  std::vector<TraceNode> trace;
  Rational truncation_order;
  Rational xi;  // realized global xi after halving
  std::vector<std::pair<std::string, Rational>> xi_levels;  // per edge strip
  bool verified = false;
  Rational x_max() const;  // minimum over charts
};

/// Resolves p on the sector 0 < y < x^eta, x > 0 (p already reflected there).
Decomposition resolve(const PuiseuxPoly& p, const ResolveParams& params = {});

/// Resolves the original phase on the sector with the given frame.
Decomposition resolve_sector(const PuiseuxPoly& p, const SectorDescriptor& sector, const ResolveParams& params);

/// All quadrants, each split by y = x^eta into the lower sector and the swapped one.
/// Frames needing fractional powers of negative numbers are skipped.
std::vector<Decomposition> resolve_disk(const PuiseuxPoly& p, const ResolveParams& params = {});

/// Default roof exponent for p.
Rational default_eta(const PuiseuxPoly& p);

/// Structural chart-count cap 8 (2 M)^(M+1), M the b-span of the polygon.
Integer chart_count_cap(const PuiseuxPoly& p);

/// Frame function of a chart: S(x0, y0) written in (x, v0-frame) coordinates.
PuiseuxPoly chart_phase(const PuiseuxPoly& p, const Chart& c);

struct VerifyReport {
  double max_ratio_violation = 0.0;    // worst |ratio - 1| (mode C) or band excess (mode B)
  double max_derivative_violation = 0.0;  // worst derivative-comparability ratio
  bool sign_constant = true;
  bool ratio_ok = true;
  bool derivative_ok = true;
  long samples = 0;
  bool ok() const { return ratio_ok && derivative_ok && sign_constant; }
};

/// Samples the chart domain (quasi-random, seeded) and checks comparability.
/// Throws std::domain_error("shrink x_max") when the domain is empty at x_max.
VerifyReport verify_chart(const PuiseuxPoly& p, const Chart& c, int samples, std::uint64_t seed);

}  // namespace nsub
