#include "helpers.hpp"

#include "nsub/puiseux.hpp"

#include <doctest.h>

#include <cmath>

using namespace nsub;
using nsub::test::P;
using nsub::test::Q;

TEST_SUITE("exact_poly") {

TEST_CASE("poly_add") {
  CHECK(poly_add(P("x^2"), P("y^2")) == P("x^2 + y^2"));
  CHECK(poly_add(P("x*y"), P("-x*y")).is_zero());
  PuiseuxPoly r = poly_add(P("x^(1/2)"), P("x^(1/3)"));
  CHECK(r.size() == 2);
  CHECK(r.ramification() == 6);
}

TEST_CASE("poly_mul") {
  CHECK(poly_mul(P("y - x^2"), P("y - x^2")) == P("y^2 - 2*x^2*y + x^4"));
  PuiseuxPoly p = P("x^3*y - 2/3*x^(1/2) + 7");
  CHECK(poly_mul(p, PuiseuxPoly::constant(1)) == p);
  PuiseuxPoly sq = poly_mul(P("x^(1/2)"), P("x^(1/2)"));
  CHECK(sq == P("x"));
  CHECK(sq.ramification() == 1);
}

TEST_CASE("deriv_y") {
  CHECK(deriv_y(P("y^2 - 2*x^2*y + x^4"), 1) == P("2*y - 2*x^2"));
  CHECK(deriv_y(P("x^3"), 1).is_zero());
  CHECK(deriv_y(P("x*y^3"), 2) == P("6*x*y"));
}

TEST_CASE("subst_shear") {
  CHECK(subst_shear(P("y^2 - 2*x^2*y + x^4"), 1, P("x^2")) == P("y^2"));
  CHECK(subst_shear(P("x^2 - y^2"), 1, P("-x")) == P("2*x*y - y^2"));
  PuiseuxPoly p = P("x^2*y^2 + x^5");
  CHECK(subst_shear(p, 1, PuiseuxPoly()) == p);
  CHECK_THROWS_AS(subst_shear(p, 1, P("y")), SubstitutionError);
  CHECK_THROWS_AS(subst_shear(p, 1, P("1 + x")), SubstitutionError);
}

TEST_CASE("subst_scale") {
  CHECK(subst_scale(P("y^2 - x^2"), Q(1)) == P("x^2*y^2 - x^2"));
  CHECK(subst_scale(P("x*y"), Q(3, 2)) == P("x^(5/2)*y"));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int i = 0; i < 20; ++i) {
    PuiseuxPoly p = test::random_poly(rng, 5, 4, 3, 2);
    Rational m = Q(1 + i % 5, 1 + i % 3);
    double x = u(rng), y = u(rng);
    double lhs = eval_real(subst_scale(p, m), x, y);
    double rhs = eval_real(p, x, std::pow(x, to_double(m)) * y);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("divide_out_x") {
  CHECK(divide_out_x(P("x^2*y^2 - x^2"), Q(2)) == P("y^2 - 1"));
  CHECK(divide_out_x(P("x^3"), Q(3)) == P("1"));
  CHECK_THROWS_AS(divide_out_x(P("x + y"), Q(1)), std::domain_error);
}

TEST_CASE("reflect_axes") {
  CHECK(reflect_axes(P("x^2 - y^2"), -1, 1) == P("x^2 - y^2"));
  CHECK(reflect_axes(P("x*y"), 1, -1) == P("-x*y"));
  CHECK(reflect_axes(P("y^2 - x^3"), 1, 1, true) == P("x^2 - y^3"));
  CHECK_THROWS_AS(reflect_axes(P("x^(1/2)"), -1, 1), std::domain_error);
}

TEST_CASE("eval_real") {
  CHECK(eval_real(P("x^2 + y^2"), 3, 4) == 25.0);
  CHECK(eval_real(P("x^(1/2)"), 4, 0) == 2.0);
  PuiseuxPoly z = P("y^2 - 2*x^2*y + x^4");
  for (double t : {0.0, 0.1, 0.37, 0.9, 1.3}) CHECK(std::abs(eval_real(z, t, t * t)) < 1e-14);
  CHECK_THROWS(eval_real(P("x^(1/2)"), -1, 0));
}

TEST_CASE("ring laws on random polynomials") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 60; ++i) {
    PuiseuxPoly a = test::random_poly(rng, 4, 3, 3, 1 + i % 3);
    PuiseuxPoly b = test::random_poly(rng, 4, 3, 3, 1 + i % 2);
    PuiseuxPoly c = test::random_poly(rng, 3, 3, 2);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a - a).is_zero());
  }
}

TEST_CASE("shear invertibility") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 40; ++i) {
    PuiseuxPoly p = test::random_poly(rng, 5, 4, 4);
    PuiseuxPoly g = test::random_poly(rng, 2, 3, 0);
    PuiseuxPoly gg;
    for (const auto& [e, c] : g.terms())
      if (e.a > 0) gg.add_term(c, e.a, 0);
    CHECK(subst_shear(subst_shear(p, 1, gg), 1, -gg) == p);
    // y -> -y + g, twice, is the identity when the second shear uses g as well
    CHECK(subst_shear(subst_shear(p, -1, gg), -1, gg) == p);
  }
}

TEST_CASE("truncation order propagates") {
  PuiseuxPoly p = P("x^2 + y^2 + x^9").truncated(Q(5));
  CHECK(p.truncation_order() == Q(5));
  CHECK(p == P("x^2 + y^2").truncated(Q(5)));
  PuiseuxPoly q = poly_mul(p, P("x^3"));
  CHECK(q.truncation_order().has_value());
  for (const auto& [e, c] : q.terms()) CHECK(e.a + e.b < *q.truncation_order());
}

TEST_CASE("eval_real commutes with symbolic operations") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(b)); };
  for (int i = 0; i < 50; ++i) {
    PuiseuxPoly a = test::random_poly(rng, 5, 3, 3, 1 + i % 2);
    PuiseuxPoly b = test::random_poly(rng, 5, 3, 3);
    PuiseuxPoly g = P("x - 2/3*x^2");
    double x = u(rng), y = u(rng);
    double ea = eval_real(a, x, y), eb = eval_real(b, x, y);
    CHECK(close(eval_real(a + b, x, y), ea + eb));
    CHECK(close(eval_real(a * b, x, y), ea * eb));
    CHECK(close(eval_real(subst_shear(b, 1, g), x, y), eval_real(b, x, y + eval_real(g, x, 0))));
    CHECK(close(eval_real(subst_shear(b, -1, g), x, y), eval_real(b, x, -y + eval_real(g, x, 0))));
    CHECK(close(eval_real(reflect_axes(b, -1, 1, true), x, y), eval_real(b, -y, x)));
  }
}

TEST_CASE("Leibniz rule for deriv_y") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 30; ++i) {
    PuiseuxPoly f = test::random_poly(rng, 4, 3, 3, 2);
    PuiseuxPoly g = test::random_poly(rng, 4, 3, 3);
    PuiseuxPoly h = test::random_poly(rng, 3, 2, 2);
    PuiseuxPoly lhs = deriv_y(f * g * h, 1);
    PuiseuxPoly rhs = deriv_y(f, 1) * g * h + f * deriv_y(g, 1) * h + f * g * deriv_y(h, 1);
    CHECK(lhs == rhs);
    // second order, two factors
    CHECK(deriv_y(f * g, 2) == deriv_y(f, 2) * g + Rational(2) * deriv_y(f, 1) * deriv_y(g, 1) + f * deriv_y(g, 2));
  }
}

TEST_CASE("canonical printing is stable") {
  PuiseuxPoly p = P("-2*x^(1/2) + x^2*y + 3/4");
  CHECK(p.to_string() == P(p.to_string()).to_string());
  CHECK(P(p.to_string()) == p);
}

}  // TEST_SUITE
