#include "nsub/adapt.hpp"

namespace nsub {

std::strong_ordering lex_compare(const GrowthIndex& g1, const GrowthIndex& g2) {
  Rational k1 = -g1.j, k2 = -g2.j;
  if (k1 != k2) return k1 < k2 ? std::strong_ordering::less : std::strong_ordering::greater;
  return g1.p <=> g2.p;
}

PuiseuxPoly Shear::curve() const {
  Rational c = r;
  if (x_sign == -1 && m.get_num().get_si() % 2 != 0) c = -c;
  return PuiseuxPoly::monomial(c, m, 0);
}

SuperadaptCheck is_superadapted(const PuiseuxPoly& p) {
  if (p.is_zero()) throw std::domain_error("zero Taylor expansion");
  if (!p.has_integer_x_exponents())
    throw std::domain_error("superadaptedness needs integer x-exponents");
  NewtonPolygon np = newton_polygon_of(p);
  BisectrixClass bc = bisectrix_classify(np);
  SuperadaptCheck out;
  if (bc.tag != BisectrixTag::EdgeInterior) return out;
  const CompactEdge& e = np.edges[*bc.edge];
  for (int xs : {1, -1}) {
    for (const auto& r : isolate_real_roots(edge_polynomial(p, e, xs), RootDomain::All)) {
      if (r.exact_value && *r.exact_value == 0) continue;
      if (Rational(r.multiplicity) >= bc.d) {
        out.superadapted = false;
        out.witness = Witness{*bc.edge, e, xs, r, r.multiplicity, bc.d};
        return out;
      }
    }
  }
  return out;
}

AdaptReport to_superadapted(const PuiseuxPoly& p, int max_iter) {
  AdaptReport rep;
  rep.result = p;
  for (int it = 0;; ++it) {
    SuperadaptCheck chk = is_superadapted(rep.result);
    if (chk.superadapted) {
      rep.superadapted = true;
      rep.violating_witness.reset();
      return rep;
    }
    rep.violating_witness = chk.witness;
    if (it >= max_iter) throw AdaptError("superadapted reduction exceeded max_iter", rep);
    const Witness& w = *chk.witness;
    if (!is_integer(w.edge.m))
      throw AdaptError("adapted coordinates require axis swap or are nonpolynomial", rep);
    if (!w.root.exact_value) throw AdaptError("algebraic shear required", rep);
    Shear s{w.edge.m, *w.root.exact_value, w.x_sign};
    rep.result = subst_shear(rep.result, 1, s.curve());
    rep.shears_applied.push_back(s);
  }
}

GrowthIndex growth_index(const PuiseuxPoly& p) {
  if (p.has_integer_x_exponents() && !is_superadapted(p).superadapted)
    throw std::invalid_argument("phase is not superadapted; call to_superadapted first");
  BisectrixClass bc = bisectrix_classify(newton_polygon_of(p));
  GrowthIndex g;
  g.j = Rational(1) / bc.d;
  g.p = bc.tag == BisectrixTag::Vertex ? 1 : 0;
  g.morse_hyperbolic = bc.d == 1 && g.p == 1;
  return g;
}

GrowthIndex oscillatory_index(const PuiseuxPoly& p) {
  GrowthIndex g = growth_index(p);
  if (g.morse_hyperbolic) g.p = 0;
  return g;
}

bool is_morse(const PuiseuxPoly& p) {
  for (const auto& [e, c] : p.terms())
    if (e.a + e.b < 2) return false;
  Rational s20 = p.coefficient(Rational(2), 0);
  Rational s02 = p.coefficient(Rational(0), 2);
  Rational s11 = p.coefficient(Rational(1), 1);
  return 4 * s20 * s02 - s11 * s11 != 0;
}

}  // namespace nsub
