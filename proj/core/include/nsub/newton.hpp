#pragma once

#include "nsub/puiseux.hpp"
#include "nsub/upoly.hpp"

#include <optional>
#include <vector>

namespace nsub {

struct Point {
  Rational a;
  Rational b;
  friend bool operator==(const Point& l, const Point& r) { return l.a == r.a && l.b == r.b; }
};

/// Compact edge on the line a + m*b = alpha; lo has the smaller a.
struct CompactEdge {
  Point lo;
  Point hi;
  Rational m;
  Rational alpha;
};

/// Lower-left boundary of the quadrant-closed hull: vertices by increasing a
/// (decreasing b), the compact edges between them, a vertical ray above the
/// first vertex and a horizontal ray right of the last one.
struct NewtonPolygon {
  std::vector<Point> vertices;
  std::vector<CompactEdge> edges;
  bool has_vertical_ray = true;
  bool has_horizontal_ray = true;
};

enum class BisectrixTag { EdgeInterior, Vertex, HorizontalRayInterior, VerticalRayInterior };

const char* to_string(BisectrixTag tag);

struct BisectrixClass {
  BisectrixTag tag;
  Rational d;  // touch point is (d, d)
  std::optional<std::size_t> edge;    // set for EdgeInterior
  std::optional<std::size_t> vertex;  // set for Vertex
};

/// Throws std::domain_error("zero Taylor expansion") for the zero polynomial.
NewtonPolygon newton_polygon_of(const PuiseuxPoly& p);
Rational newton_distance(const NewtonPolygon& np);
BisectrixClass bisectrix_classify(const NewtonPolygon& np);

/// sum over a + m b = alpha of s_ab * x_sign^a * y^b.
UPoly edge_polynomial(const PuiseuxPoly& p, const CompactEdge& e, int x_sign);

bool point_in_polygon(const NewtonPolygon& np, const Point& pt);
/// Every vertex of np1 lies in np2.
bool polygon_subset(const NewtonPolygon& np1, const NewtonPolygon& np2);

}  // namespace nsub
