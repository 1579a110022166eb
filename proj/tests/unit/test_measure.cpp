#include "helpers.hpp"

#include "nsub/fit.hpp"
#include "nsub/lemmas.hpp"
#include "nsub/oscillatory.hpp"
#include "nsub/sublevel.hpp"

#include <doctest.h>

#include <cmath>

using namespace nsub;
using nsub::test::P;
using nsub::test::Q;

namespace {

MeasureSample mc(const PuiseuxPoly& p, const Region& r, double eps, long n, std::uint64_t seed = 1,
                 unsigned threads = 0) {
  MeasureBudget b;
  b.n = n;
  b.threads = threads;
  return sublevel_measure(p, r, eps, b, seed);
}

std::vector<MeasureSample> synthetic(const std::vector<double>& eps, double j, double p) {
  std::vector<MeasureSample> out;
  for (double e : eps) {
    MeasureSample m;
    m.epsilon = e;
    m.estimate = 2.5 * std::pow(e, j) * std::pow(std::fabs(std::log(e)), p);
    m.method = MeasureMethod::EXACT;
    out.push_back(m);
  }
  return out;
}

}  // namespace

TEST_SUITE("measure_lab") {

TEST_CASE("sublevel_measure examples") {
  MeasureSample a = mc(P("x^2 + y^2"), Region::disk(1), 0.01, 200000);
  CHECK(std::abs(a.estimate - M_PI * 0.01) <= 3 * a.stderr_);
  CHECK(a.stderr_ > 0);
  CHECK(a.estimate <= Region::disk(1).area());

  MeasureSample b = mc(P("x*y"), Region::sector_product(0, 1, 0, 1), 1e-3, 200000);
  double want = 1e-3 * (1 + std::log(1e3));
  CHECK(std::abs(b.estimate - want) <= 3 * b.stderr_);

  MeasureBudget grid;
  grid.method = MeasureMethod::GRID;
  std::vector<MeasureSample> s;
  for (double e : geometric_schedule(1e-8, 1e-4, 5)) s.push_back(sublevel_measure(P("(y - x^2)^2"), Region::disk(1), e, grid, 1));
  FitResult f = fit_growth_with_p(s, 0);
  CHECK(std::abs(f.j_hat - 0.5) <= 0.05);
  // strip-width oracle: |y - x^2| < sqrt(eps) has width 2 sqrt(eps) while the parabola stays in the disk,
  // i.e. for x^2 + x^4 < 1
  const double x0 = std::sqrt((std::sqrt(5.0) - 1) / 2);
  for (const auto& m : s) CHECK(m.estimate / (4 * x0 * std::sqrt(m.epsilon)) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("EXACT method matches the closed form") {
  MeasureBudget b;
  b.method = MeasureMethod::EXACT;
  Region r = Region::curved_triangle(PuiseuxPoly(), P("x"), 1.0);
  MeasureSample m = sublevel_measure(P("x*y"), r, 1e-3, b, 1);
  CHECK(m.stderr_ == 0.0);
  CHECK(m.method == MeasureMethod::EXACT);
  CHECK(m.estimate == doctest::Approx(5e-4 + 5e-4 * std::log(1e3)).epsilon(1e-12));
  CHECK_THROWS_AS(sublevel_measure(P("x*y + y^3"), r, 1e-3, b, 1), std::invalid_argument);
}

TEST_CASE("fit_growth synthetic") {
  std::vector<double> eps = geometric_schedule(1e-9, 1e-3, 7);
  FitResult a = fit_growth(synthetic(eps, 1.0, 1.0));
  CHECK(std::abs(a.j_hat - 1.0) < 1e-6);
  CHECK(std::abs(a.p_hat - 1.0) < 1e-6);
  CHECK(a.p_rounded == 1);
  FitResult b = fit_growth(synthetic(eps, 0.5, 0.0));
  CHECK(std::abs(b.j_hat - 0.5) < 1e-6);
  CHECK(b.p_rounded == 0);
  CHECK(b.C_hat == doctest::Approx(2.5).epsilon(1e-6));
  CHECK_THROWS_AS(fit_growth(synthetic(geometric_schedule(1e-3, 1e-2, 5), 1, 0)), FitError);
  CHECK_THROWS_AS(fit_growth(synthetic({1e-3, 1e-6, 1e-9}, 1, 0)), FitError);
}

TEST_CASE("log_presence separates the two cases") {
  std::vector<double> eps = geometric_schedule(1e-6, 1e-2, 8);
  CHECK(log_presence(synthetic(eps, 1.0, 1.0), 1.0).p_decision == 1);
  CHECK(log_presence(synthetic(eps, 1.0, 0.0), 1.0).p_decision == 0);
  CHECK(log_presence(synthetic(eps, 1.0, 1.0), 1.0).slope == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("fit_decay synthetic") {
  std::vector<std::pair<double, double>> pairs;
  for (double l : {10.0, 30.0, 100.0, 300.0, 1000.0}) pairs.emplace_back(l, 3.0 / l);
  FitResult f = fit_decay(pairs);
  CHECK(std::abs(f.j_hat - 1.0) < 1e-6);
  CHECK(f.p_rounded == 0);
  std::vector<std::pair<double, double>> narrow = {{10, 1}, {12, 1}, {14, 1}, {16, 1}};
  CHECK_THROWS_AS(fit_decay(narrow), FitError);
}

TEST_CASE("monomial_measure_exact closed forms") {
  for (double e : {1e-2, 1e-5, 1e-9}) {
    MonomialMeasure a = monomial_measure_exact(1, Q(1), Q(1), Q(1), 1, 1, e);
    CHECK(a.value == doctest::Approx(e / 2 + e / 2 * std::fabs(std::log(e))).epsilon(1e-14));
    CHECK(a.regime == MonomialRegime::Balanced);
    CHECK(a.log_factor);

    MonomialMeasure b = monomial_measure_exact(1, Q(0), Q(2), Q(1), 1, 1, e);
    CHECK(b.value == doctest::Approx(std::sqrt(e) - e / 2).epsilon(1e-13));
    CHECK(b.regime == MonomialRegime::YDominant);
    CHECK(b.leading_exponent == Q(1, 2));

    MonomialMeasure c = monomial_measure_exact(1, Q(2), Q(0), Q(1), 1, 1, e);
    CHECK(c.value == doctest::Approx(e / 2).epsilon(1e-13));
    CHECK(c.regime == MonomialRegime::XDominant);
    CHECK(c.leading_exponent == 1);
  }
  MonomialMeasure full = monomial_measure_exact(0.5, Q(0), Q(0), Q(1), 2, 1, 1.0);
  CHECK(full.full_region);
  CHECK(full.value == doctest::Approx(1.0));
}

TEST_CASE("monomial_measure_exact agrees with MC") {
  struct Case {
    long alpha, beta, m;
  } cases[] = {{1, 2, 1}, {2, 2, 1}, {3, 1, 2}, {0, 3, 1}, {2, 1, 1}};
  for (const auto& c : cases) {
    CAPTURE(c.alpha);
    CAPTURE(c.beta);
    double eps = 1e-3;
    MonomialMeasure ex = monomial_measure_exact(1.5, Q(c.alpha), Q(c.beta), Q(c.m), 2, 0.5, eps);
    PuiseuxPoly p = PuiseuxPoly::monomial(Q(3, 2), Q(c.alpha), c.beta);
    Region r = Region::curved_triangle(PuiseuxPoly(), PuiseuxPoly::monomial(Q(2), Q(c.m), 0), 0.5);
    MeasureSample s = mc(p, r, eps, 100000, 3);
    CHECK(std::abs(s.estimate - ex.value) <= 3 * s.stderr_ + 1e-15);
  }
}

TEST_CASE("vdc_sublevel_bound") {
  CHECK(vdc_sublevel_bound(1, 1, 0.1, 1) == doctest::Approx(0.4));
  CHECK(vdc_sublevel_bound(2, 1, 1e-4, 1) == doctest::Approx(0.04));
  CHECK(vdc_sublevel_bound(3, 1, 1e6, 2.5) == 2.5);
}

TEST_CASE("vdc_check") {
  UPoly t2({Q(0), Q(0), Q(1)});
  for (long d : {100L, 10000L, 1000000L}) {
    VdcResult r = vdc_check(t2, Q(0), Q(1), 2, Q(1), Q(1, d));
    CHECK(r.measured == doctest::Approx(std::sqrt(1.0 / d)).epsilon(1e-12));
    CHECK(r.ok);
  }
  UPoly shifted({Q(-1, 4), Q(0), Q(1)});
  VdcResult s = vdc_check(shifted, Q(0), Q(1), 2, Q(1), Q(1, 10000));
  // independent: roots of t^2 - 1/4 -+ eps
  double want = std::sqrt(0.25 + 1e-4) - std::sqrt(0.25 - 1e-4);
  CHECK(s.measured == doctest::Approx(want).epsilon(1e-12));
  CHECK(s.bound == doctest::Approx(0.04));
  CHECK(s.ok);
  CHECK_THROWS_WITH_AS(vdc_check(t2, Q(0), Q(1), 2, Q(2), Q(1, 100)), "hypothesis violated", std::domain_error);
  // f' = 2t vanishes at 0: k = 1 hypothesis fails on [-1, 1]
  CHECK_THROWS_AS(vdc_check(t2, Q(-1), Q(1), 1, Q(1, 8), Q(1, 100)), std::domain_error);
}

TEST_CASE("vdc ensemble has no violations") {
  for (int k : {1, 2, 3}) {
    VdcEnsemble e = vdc_ensemble(k, 40, 7);
    CHECK(e.instances == 40);
    CHECK(e.violations == 0);
    CHECK(e.max_ratio <= 1.0);
  }
}

TEST_CASE("slice bound from a y-derivative lower bound") {
  // g = x^alpha y^beta + lower order in y, so d^beta g / dy^beta = beta! x^alpha exactly (a = 1).
  std::mt19937_64 rng(51);
  std::uniform_int_distribution<int> coef(-8, 8), xnum(1, 63);
  for (int trial = 0; trial < 40; ++trial) {
    long alpha = trial % 3, beta = 1 + trial % 3, m = 1 + trial % 2;
    Rational x = make_rational(xnum(rng), 64);
    Rational N(2), eps = make_rational(1, 1000 * (1 + trial % 7));
    std::vector<Rational> c(static_cast<std::size_t>(beta) + 1);
    Rational xa = pow(x, alpha);
    c[beta] = xa;
    for (long k = 0; k < beta; ++k) c[k] = make_rational(coef(rng), 16) * pow(x, 1 + k);
    UPoly g(c);
    Rational top = N * pow(x, m);
    double got = sublevel_length_exact(g, Q(0), top, eps);
    double mono = std::min(to_double(top), std::pow(to_double(eps / xa), 1.0 / beta));
    CHECK(got <= 4 * mono + 1e-15);
  }
}

TEST_CASE("monotone in eps and scaling") {
  PuiseuxPoly p = P("x^2*y^2 + x^5");
  Region r = Region::disk(0.8);
  double last = 0;
  std::vector<double> eps = geometric_schedule(1e-6, 1e-2, 6);
  std::sort(eps.begin(), eps.end());
  for (double e : eps) {
    MeasureSample m = mc(p, r, e, 20000, 5);
    CHECK(m.estimate >= last);
    last = m.estimate;
  }
  for (double c : {3.0, 0.25}) {
    MeasureSample a = mc(Rational(from_double(c)) * p, r, 1e-3, 40000, 6);
    MeasureSample b = mc(p, r, 1e-3 / c, 40000, 6);
    CHECK(std::abs(a.estimate - b.estimate) <= 3 * std::hypot(a.stderr_, b.stderr_) + 1e-15);
  }
  MeasureBudget ex;
  ex.method = MeasureMethod::EXACT;
  Region tri = Region::curved_triangle(PuiseuxPoly(), P("2*x"), 0.5);
  double s1 = sublevel_measure(P("4*x*y^2"), tri, 1e-3, ex, 1).estimate;
  double s2 = sublevel_measure(P("x*y^2"), tri, 1e-3 / 4, ex, 1).estimate;
  CHECK(s1 == doctest::Approx(s2).epsilon(1e-13));
}

TEST_CASE("measure determinism across seeds and threads") {
  PuiseuxPoly p = P("y^2 - x^3");
  Region r = Region::disk(1);
  MeasureSample a = mc(p, r, 1e-3, 50000, 42, 1);
  MeasureSample b = mc(p, r, 1e-3, 50000, 42, 4);
  MeasureSample c = mc(p, r, 1e-3, 50000, 42, 1);
  CHECK(a.estimate == b.estimate);
  CHECK(a.stderr_ == b.stderr_);
  CHECK(a.estimate == c.estimate);
  MeasureSample d = mc(p, r, 1e-3, 50000, 43, 1);
  CHECK(a.estimate != d.estimate);
}

TEST_CASE("oscillatory integral") {
  Cutoff phi;
  phi.radius = 1;
  QuadratureOptions q;
  OscillatoryValue a = oscillatory_integral(P("x^2 + y^2"), phi, 200, q);
  CHECK(std::abs(a.value) == doctest::Approx(M_PI / 200).epsilon(0.05));

  OscillatoryValue b = oscillatory_integral(P("x"), phi, 1000, q);
  CHECK(std::abs(b.value) < 1e-6);

  // J for -S at lambda equals J for S at -lambda, the conjugate
  OscillatoryValue c = oscillatory_integral(P("x^2*y^2 + x^5"), phi, 60, q);
  OscillatoryValue d = oscillatory_integral(P("-x^2*y^2 - x^5"), phi, 60, q);
  CHECK(std::abs(c.value - std::conj(d.value)) <= 1e-9 + 10 * (c.error + d.error));

  OscillatoryValue e = oscillatory_integral(P("x^2 + y^2"), phi, 200, {24, 1e-5, 1e-12, 1});
  CHECK(e.value == a.value);

  CHECK_THROWS_AS(oscillatory_integral(P("x"), phi, -1, q), std::invalid_argument);
  CHECK(oscillatory_coefficient_cap(1, 2, 1) == doctest::Approx(2.0));
  CHECK(oscillatory_coefficient_cap(0.5, 1, 1) == doctest::Approx(0.5 * std::sqrt(M_PI)));
}

}  // TEST_SUITE
