#include "nsub/sublevel.hpp"

#include "nsub/lemmas.hpp"
#include "nsub/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace nsub {

const char* to_string(MeasureMethod m) {
  switch (m) {
    case MeasureMethod::MC: return "MC";
    case MeasureMethod::GRID: return "GRID";
    case MeasureMethod::EXACT: return "EXACT";
  }
  return "?";
}

Region Region::disk(double r) {
  if (!(r > 0)) throw std::invalid_argument("disk radius must be positive");
  Region g;
  g.kind = Kind::Disk;
  g.radius = r;
  g.x_lo = g.y_lo = -r;
  g.x_hi = g.y_hi = r;
  return g;
}

Region Region::curved_triangle(const PuiseuxPoly& lower, const PuiseuxPoly& upper, double x_max) {
  if (!lower.is_x_only() || !upper.is_x_only()) throw std::invalid_argument("curved triangle boundaries depend on x only");
  if (!(x_max > 0)) throw std::invalid_argument("x_max must be positive");
  Region g;
  g.kind = Kind::CurvedTriangle;
  g.lower = lower;
  g.upper = upper;
  g.x_lo = 0.0;
  g.x_hi = x_max;
  return g;
}

Region Region::sector_product(double x0, double x1, double y0, double y1) {
  if (!(x1 > x0) || !(y1 > y0)) throw std::invalid_argument("empty product region");
  Region g;
  g.kind = Kind::SectorProduct;
  g.x_lo = x0;
  g.x_hi = x1;
  g.y_lo = y0;
  g.y_hi = y1;
  return g;
}

std::pair<double, double> Region::slice(double x) const {
  switch (kind) {
    case Kind::Disk: {
      double h = std::sqrt(std::max(0.0, radius * radius - x * x));
      return {-h, h};
    }
    case Kind::CurvedTriangle:
      if (!(x > 0)) return {0.0, 0.0};
      return {eval_real(lower, x, 0.0), eval_real(upper, x, 0.0)};
    case Kind::SectorProduct:
      return {y_lo, y_hi};
  }
  return {0.0, 0.0};
}

double Region::area() const {
  switch (kind) {
    case Kind::Disk: return M_PI * radius * radius;
    case Kind::SectorProduct: return (x_hi - x_lo) * (y_hi - y_lo);
    case Kind::CurvedTriangle: {
      double s = 0.0;
      for (const auto* poly : {&upper, &lower}) {
        double sign = poly == &upper ? 1.0 : -1.0;
        for (const auto& [e, c] : poly->terms()) {
          double a = to_double(e.a) + 1.0;
          s += sign * to_double(c) * std::pow(x_hi, a) / a;
        }
      }
      return s;
    }
  }
  return 0.0;
}

bool Region::contains(double x, double y) const {
  if (x <= x_lo || x >= x_hi) return false;
  auto [lo, hi] = slice(x);
  return y > lo && y < hi;
}

std::string Region::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Disk: os << "disk(r=" << radius << ")"; break;
    case Kind::SectorProduct: os << "sector_product([" << x_lo << "," << x_hi << "]x[" << y_lo << "," << y_hi << "])"; break;
    case Kind::CurvedTriangle:
      os << "curved_triangle(" << lower.to_string() << " < y < " << upper.to_string() << ", 0 < x < " << x_hi << ")";
      break;
  }
  return os.str();
}

namespace {

double horner(const std::vector<double>& c, double t) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
  return acc;
}

std::vector<double> trimmed(const std::vector<double>& c) {
  std::vector<double> out = c;
  double scale = 0.0;
  for (double v : out) scale = std::max(scale, std::fabs(v));
  while (!out.empty() && std::fabs(out.back()) <= scale * 1e-300) out.pop_back();
  return out;
}

// Root of a monotone piece with f(a), f(b) of opposite signs.
double bisect_root(const std::vector<double>& c, double a, double b, double fa) {
  for (int it = 0; it < 200; ++it) {
    double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    double fm = horner(c, m);
    if (fm == 0.0) return m;
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

std::vector<double> real_roots_in(const std::vector<double>& coeffs, double lo, double hi) {
  std::vector<double> c = trimmed(coeffs);
  std::vector<double> out;
  if (c.size() <= 1 || !(hi > lo)) return out;
  if (c.size() == 2) {
    double r = -c[0] / c[1];
    if (r >= lo && r <= hi) out.push_back(r);
    return out;
  }
  std::vector<double> d(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
  std::vector<double> pts{lo};
  for (double t : real_roots_in(d, lo, hi))
    if (t > pts.back()) pts.push_back(t);
  if (hi > pts.back()) pts.push_back(hi);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double a = pts[i], b = pts[i + 1];
    double fa = horner(c, a), fb = horner(c, b);
    if (fa == 0.0) {
      if (out.empty() || out.back() != a) out.push_back(a);
      continue;
    }
    if (fb == 0.0) continue;  // picked up as the left end of the next piece or below
    if ((fa > 0) != (fb > 0)) out.push_back(bisect_root(c, a, b, fa));
  }
  if (horner(c, hi) == 0.0 && (out.empty() || out.back() != hi)) out.push_back(hi);
  return out;
}

double sublevel_length(const std::vector<double>& coeffs, double lo, double hi, double eps) {
  if (!(hi > lo)) return 0.0;
  std::vector<double> up = coeffs, dn = coeffs;
  if (up.empty()) up.push_back(0.0), dn.push_back(0.0);
  up[0] -= eps;
  dn[0] += eps;
  std::vector<double> pts{lo, hi};
  for (double t : real_roots_in(up, lo, hi)) pts.push_back(t);
  for (double t : real_roots_in(dn, lo, hi)) pts.push_back(t);
  std::sort(pts.begin(), pts.end());
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double a = pts[i], b = pts[i + 1];
    if (!(b > a)) continue;
    if (std::fabs(horner(coeffs, 0.5 * (a + b))) < eps) len += b - a;
  }
  return len;
}

namespace {

constexpr std::size_t kChunk = 8192;

struct Moments {
  long double sum = 0.0L;
  long double sum2 = 0.0L;
};

double slice_measure(const NumericPoly& np, const Region& region, double x, double eps) {
  auto [lo, hi] = region.slice(x);
  if (!(hi > lo)) return 0.0;
  return sublevel_length(np.y_coeffs(x), lo, hi, eps);
}

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1].
const double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
const double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
const double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
std::pair<double, double> gk15(F f, double a, double b) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double fc = f(c);
  double resk = fc * kWgk[7], resg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    double x = h * kXgk[j];
    double f1 = f(c - x), f2 = f(c + x);
    resk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  return {resk * h, std::fabs((resk - resg) * h)};
}

struct Panel {
  double a, b, v, e;
  int depth;
  bool operator<(const Panel& o) const { return e < o.e; }
};

// Global adaptive GK15: always bisects the panel with the largest error estimate.
// Stops at tol, at max_splits, or when every remaining panel is at max depth.
template <class F>
std::pair<double, double> adaptive(F f, const std::vector<std::pair<double, double>>& start, double rel_tol,
                                   int max_depth, long max_splits) {
  std::priority_queue<Panel> heap;
  std::vector<Panel> done;
  double v = 0.0, e = 0.0;
  for (const auto& [a, b] : start) {
    auto [pv, pe] = gk15(f, a, b);
    heap.push({a, b, pv, pe, 0});
    v += pv;
    e += pe;
  }
  for (long splits = 0; splits < max_splits && !heap.empty(); ++splits) {
    double tol = rel_tol * std::fabs(v);
    if (e <= tol) break;
    Panel p = heap.top();
    heap.pop();
    if (p.depth >= max_depth || p.e <= 64 * std::numeric_limits<double>::epsilon() * std::fabs(p.v)) {
      done.push_back(p);
      continue;
    }
    double m = 0.5 * (p.a + p.b);
    auto [lv, le] = gk15(f, p.a, m);
    auto [rv, re] = gk15(f, m, p.b);
    heap.push({p.a, m, lv, le, p.depth + 1});
    heap.push({m, p.b, rv, re, p.depth + 1});
    v += lv + rv - p.v;
    e += le + re - p.e;
  }
  // re-sum in a fixed order so the result does not depend on heap round-off history
  for (; !heap.empty(); heap.pop()) done.push_back(heap.top());
  std::sort(done.begin(), done.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  v = 0.0;
  e = 0.0;
  for (const auto& p : done) {
    v += p.v;
    e += p.e;
  }
  return {v, e};
}

}  // namespace

MeasureSample sublevel_measure(const PuiseuxPoly& p, const Region& region, double eps, const MeasureBudget& budget,
                               std::uint64_t seed) {
  if (!(eps > 0)) throw std::invalid_argument("epsilon must be positive");
  if (region.kind == Region::Kind::Disk && !p.has_integer_x_exponents())
    throw std::domain_error("fractional x-exponents need a region inside x > 0");
  MeasureSample out;
  out.epsilon = eps;
  out.method = budget.method;

  if (budget.method == MeasureMethod::EXACT) {
    if (p.size() != 1 || region.kind != Region::Kind::CurvedTriangle || !region.lower.is_zero() ||
        region.upper.size() != 1)
      throw std::invalid_argument("EXACT needs a monomial phase on a region 0 < y < N x^m");
    const auto& [e, c] = *p.terms().begin();
    const auto& [ue, uc] = *region.upper.terms().begin();
    MonomialMeasure mm = monomial_measure_exact(std::fabs(to_double(c)), e.a, Rational(e.b), ue.a, to_double(uc),
                                                region.x_hi, eps);
    out.estimate = mm.value;
    return out;
  }

  NumericPoly np(p);
  const double xa = region.x_lo, xb = region.x_hi;
  const double width = xb - xa;

  if (budget.method == MeasureMethod::GRID) {
    auto f = [&](double x) { return slice_measure(np, region, x, eps); };
    double total = 0.0, err = 0.0;
    // Panels split at x = 0 where most sublevel sets pinch.
    std::vector<double> cuts{xa};
    if (xa < 0 && xb > 0) cuts.push_back(0.0);
    cuts.push_back(xb);
    std::vector<std::pair<double, double>> panels;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      double a = cuts[i], b = cuts[i + 1];
      // Geometric grading towards x = 0.
      std::vector<double> pts;
      bool toward_left = std::fabs(a) < std::fabs(b);
      double near = toward_left ? a : b, far = toward_left ? b : a;
      pts.push_back(near);
      for (int k = 60; k >= 0; --k) {
        double t = near + (far - near) * std::ldexp(1.0, -k);
        if (t != pts.back()) pts.push_back(t);
      }
      for (std::size_t k = 0; k + 1 < pts.size(); ++k)
        panels.emplace_back(std::min(pts[k], pts[k + 1]), std::max(pts[k], pts[k + 1]));
    }
    auto [v, e] = adaptive(f, panels, budget.grid_tol, budget.grid_depth, budget.grid_splits);
    total = v;
    err = e;
    out.estimate = total;
    out.stderr_ = std::max(err, std::numeric_limits<double>::min());
    out.n_samples = 0;
    return out;
  }

  // Defensive mixture: half uniform on [xa, xb], half log-uniform in the distance to x = 0.
  const bool two_sided = xa < 0 && xb > 0;
  const double span = std::max(std::fabs(xa), std::fabs(xb));
  const double lmin = span * 1e-12;
  const double log_range = std::log(span / lmin);
  auto density = [&](double x) {
    double ax = std::fabs(x);
    double q = 0.5 / width;
    if (ax >= lmin && ax <= span) {
      double side = two_sided ? 0.5 : 1.0;
      q += 0.5 * side / (ax * log_range);
    }
    return q;
  };
  auto chunks = chunked<Moments>(
      static_cast<std::size_t>(budget.n), kChunk,
      [&](std::size_t begin, std::size_t end) {
        Moments m;
        for (std::size_t i = begin; i < end; ++i) {
          double u = hashed_uniform(seed, 1, i);
          double v = hashed_uniform(seed, 2, i);
          double x;
          if (u < 0.5) {
            x = xa + width * v;
          } else {
            double w = hashed_uniform(seed, 3, i);
            double ax = lmin * std::exp(log_range * v);
            x = two_sided ? (w < 0.5 ? -ax : ax) : (xa >= 0 ? ax : -ax);
          }
          double val = 0.0;
          if (x > xa && x < xb) val = slice_measure(np, region, x, eps) / density(x);
          m.sum += val;
          m.sum2 += static_cast<long double>(val) * val;
        }
        return m;
      },
      budget.threads);
  Moments tot;
  for (const auto& m : chunks) {
    tot.sum += m.sum;
    tot.sum2 += m.sum2;
  }
  long double n = static_cast<long double>(budget.n);
  long double mean = tot.sum / n;
  long double var = std::max(0.0L, tot.sum2 / n - mean * mean);
  out.estimate = static_cast<double>(mean);
  out.stderr_ = static_cast<double>(std::sqrt(var / (n - 1)));
  out.n_samples = budget.n;
  return out;
}

}  // namespace nsub
