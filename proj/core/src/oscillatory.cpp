#include "nsub/oscillatory.hpp"

#include "nsub/numeric_poly.hpp"
#include "nsub/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <vector>

namespace nsub {

double Cutoff::operator()(double x, double y) const {
  double t = 1.0 - (x * x + y * y) / (radius * radius);
  if (t <= 0) return 0.0;
  double v = 1.0;
  for (int i = 0; i < order; ++i) v *= t;
  return v;
}

double oscillatory_coefficient_cap(double j, double sup_ratio, double phi_sup) {
  return j * std::tgamma(j) * sup_ratio * phi_sup;
}

namespace {

using cplx = std::complex<double>;

const double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                        0.207784955007898467600689403773245, 0.0};
const double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
const double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Est {
  cplx v;
  double err;
  bool converged = true;
};

template <class F>
Est gk15(const F& f, double a, double b) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  cplx fc = f(c);
  cplx k = fc * kWgk[7], g = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    double x = h * kXgk[j];
    cplx s = f(c - x) + f(c + x);
    k += kWgk[j] * s;
    if (j % 2 == 1) g += kWg[j / 2] * s;
  }
  return {k * h, std::abs((k - g) * h)};
}

template <class F>
Est adapt(const F& f, double a, double b, double tol, int depth, Est whole) {
  if (whole.err <= tol) return whole;
  if (depth <= 0) {
    whole.converged = false;
    return whole;
  }
  double m = 0.5 * (a + b);
  Est l = gk15(f, a, m), r = gk15(f, m, b);
  // Accept when the refined pair agrees with the parent and is itself accurate.
  Est L = adapt(f, a, m, tol / 2, depth - 1, l);
  Est R = adapt(f, m, b, tol / 2, depth - 1, r);
  return {L.v + R.v, L.err + R.err, L.converged && R.converged};
}

// Number of initial panels so that lambda * phase changes by at most ~pi per panel.
int panel_count(const std::vector<double>& phase_samples, double lambda) {
  double tv = 0.0;
  for (std::size_t i = 1; i < phase_samples.size(); ++i) tv += std::fabs(phase_samples[i] - phase_samples[i - 1]);
  double n = std::ceil(1.25 * lambda * tv / M_PI) + 1.0;
  return static_cast<int>(std::min(n, 1e6));
}

double horner(const std::vector<double>& c, double t) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
  return acc;
}

struct Engine {
  NumericPoly np;
  Cutoff cut;
  double lambda;
  const QuadratureOptions& opts;
  bool adaptive = true;
  std::atomic<long>* evals;
  std::atomic<bool>* failed;

  // Inner y-integral at fixed x.
  Est inner(double x, double tol) const {
    double r2 = cut.radius * cut.radius - x * x;
    if (r2 <= 0) return {0.0, 0.0};
    double h = std::sqrt(r2);
    std::vector<double> c = np.y_coeffs(x);
    auto f = [&](double y) -> cplx {
      double w = cut(x, y);
      if (w == 0.0) return 0.0;
      double ph = lambda * horner(c, y);
      return cplx(std::cos(ph), std::sin(ph)) * w;
    };
    std::vector<double> samples;
    const int S = 64;
    for (int i = 0; i <= S; ++i) samples.push_back(horner(c, -h + 2 * h * i / S));
    int n = panel_count(samples, lambda);
    Est tot{0.0, 0.0};
    double w = 2 * h / n;
    for (int i = 0; i < n; ++i) {
      double a = -h + w * i, b = (i + 1 == n) ? h : a + w;
      Est e = gk15(f, a, b);
      if (adaptive) e = adapt(f, a, b, tol * (b - a) / (2 * h), opts.depth, e);
      tot.v += e.v;
      tot.err += e.err;
      tot.converged = tot.converged && e.converged;
    }
    evals->fetch_add(15L * n, std::memory_order_relaxed);
    if (!tot.converged) failed->store(true);
    return tot;
  }
};

OscillatoryValue run(const Engine& eng, double tol) {
  const double R = eng.cut.radius;
  // Outer panels from the phase variation along a few horizontal lines.
  int n = 1;
  for (double fy : {0.0, 0.25, 0.5, -0.25, -0.5}) {
    std::vector<double> samples;
    const int S = 256;
    for (int i = 0; i <= S; ++i) {
      double x = -R + 2 * R * i / S;
      samples.push_back(eng.np.eval(x, fy * R));
    }
    n = std::max(n, panel_count(samples, eng.lambda));
  }
  double w = 2 * R / n;
  std::vector<Est> parts(static_cast<std::size_t>(n));
  double inner_tol = tol / (4 * R);
  parallel_for(
      static_cast<std::size_t>(n),
      [&](std::size_t i) {
        double a = -R + w * static_cast<double>(i), b = (i + 1 == static_cast<std::size_t>(n)) ? R : a + w;
        auto F = [&](double x) { return eng.inner(x, inner_tol).v; };
        Est e = gk15(F, a, b);
        if (eng.adaptive) e = adapt(F, a, b, tol * (b - a) / (4 * R), eng.opts.depth, e);
        parts[i] = e;
      },
      eng.opts.threads);
  OscillatoryValue out;
  bool conv = true;
  for (const auto& e : parts) {
    out.value += e.v;
    out.error += e.err;
    conv = conv && e.converged;
  }
  out.error += tol / 2;  // inner contribution bound
  if (!conv) eng.failed->store(true);
  return out;
}

}  // namespace

OscillatoryValue oscillatory_integral(const PuiseuxPoly& p, const Cutoff& cutoff, double lambda,
                                      const QuadratureOptions& opts) {
  if (!(lambda > 0)) throw std::invalid_argument("lambda must be positive");
  if (!(cutoff.radius > 0)) throw std::invalid_argument("cutoff radius must be positive");
  if (!p.has_integer_x_exponents()) throw std::domain_error("the cutoff disk needs integer x-exponents");
  std::atomic<long> evals{0};
  std::atomic<bool> failed{false};
  Engine eng{NumericPoly(p), cutoff, lambda, opts, false, &evals, &failed};
  // Coarse pass on the initial panels fixes the absolute tolerance.
  OscillatoryValue coarse = run(eng, 1.0);
  double tol = std::max(opts.rel_tol * std::abs(coarse.value), opts.abs_floor);
  eng.adaptive = true;
  failed = false;
  OscillatoryValue out = run(eng, tol);
  out.evaluations = evals.load();
  if (failed.load()) throw QuadratureError("quadrature did not converge at the requested depth", out.value, out.error);
  return out;
}

}  // namespace nsub
