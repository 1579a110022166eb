#include "nsub/newton.hpp"

#include <algorithm>
#include <stdexcept>

namespace nsub {

const char* to_string(BisectrixTag tag) {
  switch (tag) {
    case BisectrixTag::EdgeInterior: return "EdgeInterior";
    case BisectrixTag::Vertex: return "Vertex";
    case BisectrixTag::HorizontalRayInterior: return "HorizontalRayInterior";
    case BisectrixTag::VerticalRayInterior: return "VerticalRayInterior";
  }
  return "?";
}

NewtonPolygon newton_polygon_of(const PuiseuxPoly& p) {
  if (p.is_zero()) throw std::domain_error("zero Taylor expansion");
  // Terms are ordered by (a, b), so a sweep with a running minimum of b keeps
  // exactly the nondominated support points.
  std::vector<Point> stair;
  for (const auto& [e, c] : p.terms()) {
    Rational b(e.b);
    if (stair.empty() || b < stair.back().b) {
      if (!stair.empty() && stair.back().a == e.a) continue;
      stair.push_back({e.a, b});
    }
  }
  std::vector<Point> hull;
  for (const auto& pt : stair) {
    while (hull.size() >= 2) {
      const Point& h0 = hull[hull.size() - 2];
      const Point& h1 = hull.back();
      Rational cross = (h1.a - h0.a) * (pt.b - h0.b) - (h1.b - h0.b) * (pt.a - h0.a);
      if (cross > 0) break;
      hull.pop_back();
    }
    hull.push_back(pt);
  }
  NewtonPolygon np;
  np.vertices = hull;
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    CompactEdge e{hull[i], hull[i + 1], Rational(0), Rational(0)};
    e.m = (e.hi.a - e.lo.a) / (e.lo.b - e.hi.b);
    e.alpha = e.lo.a + e.m * e.lo.b;
    np.edges.push_back(e);
  }
  return np;
}

BisectrixClass bisectrix_classify(const NewtonPolygon& np) {
  const Point& first = np.vertices.front();
  const Point& last = np.vertices.back();
  for (std::size_t i = 0; i < np.vertices.size(); ++i)
    if (np.vertices[i].a == np.vertices[i].b) return {BisectrixTag::Vertex, np.vertices[i].a, std::nullopt, i};
  if (first.a > first.b) return {BisectrixTag::VerticalRayInterior, first.a, std::nullopt, std::nullopt};
  if (last.b > last.a) return {BisectrixTag::HorizontalRayInterior, last.b, std::nullopt, std::nullopt};
  for (std::size_t i = 0; i < np.edges.size(); ++i) {
    const auto& e = np.edges[i];
    if (e.lo.a < e.lo.b && e.hi.a > e.hi.b)
      return {BisectrixTag::EdgeInterior, e.alpha / (1 + e.m), i, std::nullopt};
  }
  throw std::logic_error("bisectrix misses the Newton polygon");
}

Rational newton_distance(const NewtonPolygon& np) { return bisectrix_classify(np).d; }

UPoly edge_polynomial(const PuiseuxPoly& p, const CompactEdge& e, int x_sign) {
  std::vector<Rational> coeffs(static_cast<std::size_t>(e.lo.b.get_num().get_si()) + 1);
  for (const auto& [ex, c] : p.terms()) {
    if (ex.a + e.m * ex.b != e.alpha) continue;
    Rational v = c;
    if (x_sign == -1) {
      if (!is_integer(ex.a)) throw std::domain_error("edge polynomial at x = -1 needs integer x-exponents");
      if (ex.a.get_num().get_si() % 2 != 0) v = -v;
    }
    coeffs.at(static_cast<std::size_t>(ex.b)) += v;
  }
  return UPoly(std::move(coeffs));
}

bool point_in_polygon(const NewtonPolygon& np, const Point& pt) {
  if (pt.a < np.vertices.front().a || pt.b < np.vertices.back().b) return false;
  for (const auto& e : np.edges)
    if (pt.a + e.m * pt.b < e.alpha) return false;
  return true;
}

bool polygon_subset(const NewtonPolygon& np1, const NewtonPolygon& np2) {
  return std::all_of(np1.vertices.begin(), np1.vertices.end(),
                     [&](const Point& v) { return point_in_polygon(np2, v); });
}

}  // namespace nsub
