#include "nsub/stability.hpp"

#include "nsub/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace nsub {

const char* to_string(RowStatus s) {
  switch (s) {
    case RowStatus::Pass: return "PASS";
    case RowStatus::Fail: return "FAIL";
    case RowStatus::Flagged: return "FLAGGED";
    case RowStatus::Undecided: return "UNDECIDED";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::NotApplicable: return "NOT_APPLICABLE";
  }
  return "?";
}

bool ExceptionalSet::contains_vertex(const Rational& t) const {
  return std::find(vertex_ts.begin(), vertex_ts.end(), t) != vertex_ts.end();
}

bool ExceptionalSet::contains_edge(const Rational& t) const {
  for (const auto& r : edge_ts) {
    if (r.exact_value ? *r.exact_value == t : (t > r.lo && t <= r.hi)) return true;
  }
  return false;
}

namespace {

// Polynomials in t, for the fraction-free determinant.
using TPoly = UPoly;

TPoly exact_div(const TPoly& a, const TPoly& b) {
  auto [q, r] = divmod(a, b);
  if (!r.is_zero()) throw std::logic_error("Bareiss division not exact");
  return q;
}

TPoly bareiss_det(std::vector<std::vector<TPoly>> M) {
  const std::size_t n = M.size();
  if (n == 0) return TPoly::constant(Rational(1));
  TPoly prev = TPoly::constant(Rational(1));
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (M[k][k].is_zero()) {
      std::size_t r = k + 1;
      while (r < n && M[r][k].is_zero()) ++r;
      if (r == n) return TPoly();
      std::swap(M[k], M[r]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) M[i][j] = exact_div(M[k][k] * M[i][j] - M[i][k] * M[k][j], prev);
    prev = M[k][k];
  }
  TPoly d = M[n - 1][n - 1];
  return negate ? -d : d;
}

// E_t restricted to nonzero roots: divide out the common power of y.
UPoly strip_y(const UPoly& q, long low) {
  if (low == 0) return q;
  std::vector<Rational> c(q.coeffs().begin() + std::min<long>(low, static_cast<long>(q.coeffs().size())),
                          q.coeffs().end());
  return UPoly(c);
}

struct EdgeSetup {
  bool any = false;
  Rational d;
  CompactEdge edge;
  std::vector<int> signs;
};

// Bisectrix edge of the generic polygon N(S + t f).
EdgeSetup generic_edge(const PuiseuxPoly& S, const PuiseuxPoly& f) {
  EdgeSetup out;
  PuiseuxPoly gen;
  for (const auto& [e, c] : S.terms()) gen.add_term(Rational(1), e.a, e.b);
  for (const auto& [e, c] : f.terms()) gen.add_term(Rational(1), e.a, e.b);
  // Coefficient 1 avoids accidental cancellation; only the support matters.
  PuiseuxPoly support;
  for (const auto& [e, c] : gen.terms()) support.add_term(Rational(1), e.a, e.b);
  NewtonPolygon np = newton_polygon_of(support);
  BisectrixClass bc = bisectrix_classify(np);
  out.d = bc.d;
  if (bc.tag != BisectrixTag::EdgeInterior) return out;
  out.any = true;
  out.edge = np.edges[*bc.edge];
  out.signs = {1};
  if (S.has_integer_x_exponents() && f.has_integer_x_exponents()) out.signs.push_back(-1);
  return out;
}

bool has_high_multiplicity_root(const UPoly& q, const Rational& d) {
  if (q.is_zero()) return true;
  for (const auto& r : isolate_real_roots(strip_y(q, q.low_degree()), RootDomain::All))
    if (Rational(r.multiplicity) >= d) return true;
  return false;
}

GrowthIndex index_of(const PuiseuxPoly& p, std::size_t& shears, bool& ok) {
  ok = true;
  return reduced_index(p, &shears);
}

bool worse_than(const GrowthIndex& a, const GrowthIndex& b) { return lex_compare(a, b) == std::strong_ordering::greater; }

}  // namespace

GrowthIndex reduced_index(const PuiseuxPoly& p, std::size_t* shears) {
  if (shears) *shears = 0;
  if (is_morse(p)) {
    // Nondegenerate quadratic part: the Morse lemma fixes the index.
    Rational disc = 4 * p.coefficient(Rational(2), 0) * p.coefficient(Rational(0), 2) -
                    p.coefficient(Rational(1), 1) * p.coefficient(Rational(1), 1);
    GrowthIndex g;
    g.j = 1;
    g.p = disc < 0 ? 1 : 0;
    g.morse_hyperbolic = g.p == 1;
    return g;
  }
  AdaptReport rep = to_superadapted(p);
  if (shears) *shears = rep.shears_applied.size();
  return growth_index(rep.result);
}

UPoly edge_resultant(const UPoly& A, const UPoly& B) {
  const long n = std::max(A.degree(), B.degree());
  if (n < 1) return UPoly();
  // Columns of E = A + tB and E' as polynomials in t.
  std::vector<TPoly> e(n + 1), de(n);
  for (long i = 0; i <= n; ++i) e[i] = UPoly({A.coeff(i), B.coeff(i)});
  for (long i = 1; i <= n; ++i) de[i - 1] = Rational(i) * e[i];
  const long size = 2 * n - 1;
  std::vector<std::vector<TPoly>> M(size, std::vector<TPoly>(size));
  // Sylvester rows: n-1 shifted copies of E, n shifted copies of E' (highest degree first).
  for (long r = 0; r < n - 1; ++r)
    for (long i = 0; i <= n; ++i) M[r][r + (n - i)] = e[i];
  for (long r = 0; r < n; ++r)
    for (long i = 0; i <= n - 1; ++i) M[n - 1 + r][r + (n - 1 - i)] = de[i];
  return bareiss_det(std::move(M));
}

ExceptionalSet exceptional_candidates(const PuiseuxPoly& S, const PuiseuxPoly& f) {
  if (S.is_zero()) throw std::invalid_argument("S must be nonzero");
  ExceptionalSet out;
  NewtonPolygon np = newton_polygon_of(S);
  std::set<Rational> vt;
  for (const auto& v : np.vertices) {
    Rational fv = f.coefficient(v.a, v.b.get_num().get_si());
    if (fv != 0) vt.insert(Rational(-S.coefficient(v.a, v.b.get_num().get_si()) / fv));
  }
  out.vertex_ts.assign(vt.begin(), vt.end());
  if (f.is_zero()) return out;

  EdgeSetup es = generic_edge(S, f);
  if (!es.any) return out;
  if (es.d <= 1) {
    out.edge_condition_open = true;
    return out;
  }
  std::vector<IsolatedRoot> roots;
  for (int xs : es.signs) {
    UPoly A = edge_polynomial(S, es.edge, xs), B = edge_polynomial(f, es.edge, xs);
    long low = std::min(A.is_zero() ? B.low_degree() : A.low_degree(), B.is_zero() ? A.low_degree() : B.low_degree());
    UPoly a = strip_y(A, low), b = strip_y(B, low);
    UPoly res = edge_resultant(a, b);
    if (res.is_zero()) {
      out.edge_condition_everywhere = true;
      continue;
    }
    for (const auto& r : isolate_real_roots(res, RootDomain::All)) {
      if (r.exact_value) {
        // Rational candidate: confirm exactly.
        UPoly E = a + (*r.exact_value) * b;
        if (!has_high_multiplicity_root(E, es.d)) continue;
      }
      roots.push_back(r);
    }
  }
  std::sort(roots.begin(), roots.end(), [](const IsolatedRoot& l, const IsolatedRoot& r) { return l.hi < r.hi; });
  for (const auto& r : roots) {
    bool dup = false;
    for (const auto& q : out.edge_ts)
      if (q.exact_value && r.exact_value && *q.exact_value == *r.exact_value) dup = true;
    if (!dup) out.edge_ts.push_back(r);
  }
  return out;
}

SweepReport stability_sweep(const PuiseuxPoly& S, const PuiseuxPoly& f, const std::vector<Rational>& t_grid,
                            unsigned threads) {
  SweepReport rep;
  AdaptReport base = to_superadapted(S);
  rep.S = base.result;
  rep.f = f;
  for (const auto& sh : base.shears_applied) rep.f = subst_shear(rep.f, 1, sh.curve());
  rep.base_shears = base.shears_applied;
  rep.base_index = growth_index(rep.S);
  rep.exceptional = exceptional_candidates(rep.S, rep.f);
  rep.morse_pair = is_morse(rep.S) && is_morse(rep.f);

  NewtonPolygon nS = newton_polygon_of(rep.S);
  Rational top(0);
  for (const auto& v : nS.vertices) top = std::max(top, Rational(v.a + v.b));
  rep.smooth_order = ceil(top).get_si();
  for (const auto& [e, c] : rep.f.terms())
    if (e.a + e.b <= rep.smooth_order) rep.perturbation_size = std::max(rep.perturbation_size, std::fabs(to_double(c)));

  EdgeSetup es = generic_edge(rep.S, rep.f);
  rep.rows.resize(t_grid.size());
  parallel_for(
      t_grid.size(),
      [&](std::size_t i) {
        SweepRow& row = rep.rows[i];
        row.t = t_grid[i];
        PuiseuxPoly R = rep.S + row.t * rep.f;
        row.vertex_cancel = rep.exceptional.contains_vertex(row.t);
        if (es.any && !R.is_zero()) {
          for (int xs : es.signs) {
            UPoly E = edge_polynomial(R, es.edge, xs);
            if (!E.is_zero() && has_high_multiplicity_root(E, es.d)) row.edge_degenerate = true;
          }
        }
        if (R.is_zero()) {
          row.note = "S + t f vanishes identically";
          row.status = RowStatus::Flagged;
          return;
        }
        row.polygon_contains_NS = polygon_subset(nS, newton_polygon_of(R));
        try {
          bool ok = false;
          row.index = index_of(R, row.shears, ok);
          row.superadapt_ok = ok;
        } catch (const std::exception& ex) {
          row.note = ex.what();
          row.status = RowStatus::Undecided;
          return;
        }
        if (row.vertex_cancel || row.edge_degenerate) {
          row.status = RowStatus::Flagged;
        } else {
          row.status = worse_than(*row.index, rep.base_index) ? RowStatus::Fail : RowStatus::Pass;
        }
      },
      threads);

  bool fail = false;
  for (const auto& r : rep.rows) fail = fail || r.status == RowStatus::Fail;
  if (rep.morse_pair)
    rep.verdict = Verdict::NotApplicable;
  else
    rep.verdict = fail ? Verdict::Fail : Verdict::Pass;
  return rep;
}

namespace {

void require_critical(const PuiseuxPoly& p, const char* name) {
  if (p.is_zero()) throw std::invalid_argument(std::string(name) + " must be nonzero");
  for (const auto& [e, c] : p.terms())
    if (e.a + e.b <= 1) throw std::invalid_argument(std::string(name) + " has no critical point at the origin");
}

}  // namespace

PairReport pair_sweep(const PuiseuxPoly& S1, const PuiseuxPoly& S2, const std::vector<Ratio>& ratios,
                      unsigned threads) {
  require_critical(S1, "S1");
  require_critical(S2, "S2");
  PairReport rep;
  rep.both_morse = is_morse(S1) && is_morse(S2);
  rep.oscillatory = rep.both_morse;
  auto idx = [&](const PuiseuxPoly& p) {
    GrowthIndex g = reduced_index(p);
    if (rep.oscillatory && g.morse_hyperbolic) g.p = 0;
    return g;
  };
  rep.index1 = idx(S1);
  rep.index2 = idx(S2);
  rep.bound = worse_than(rep.index1, rep.index2) ? rep.index2 : rep.index1;

  ExceptionalSet fwd = exceptional_candidates(S1, S2);
  ExceptionalSet bwd = exceptional_candidates(S2, S1);

  rep.rows.resize(ratios.size());
  parallel_for(
      ratios.size(),
      [&](std::size_t i) {
        RatioRow& row = rep.rows[i];
        row.ratio = ratios[i];
        PuiseuxPoly R = row.ratio ? S1 + (*row.ratio) * S2 : S2;
        std::vector<std::string> why;
        if (!row.ratio)
          why.push_back("endpoint");
        else if (*row.ratio == 0)
          why.push_back("endpoint");
        else {
          const Rational& r = *row.ratio;
          if (fwd.contains_vertex(r) || bwd.contains_vertex(Rational(1 / r))) why.push_back("vertex_cancel");
          if (fwd.contains_edge(r) || bwd.contains_edge(Rational(1 / r)) || fwd.edge_condition_everywhere)
            why.push_back("edge_degenerate");
          if (fwd.edge_condition_open && !rep.oscillatory) why.push_back("edge_open");
        }
        for (std::size_t k = 0; k < why.size(); ++k) row.candidate_reason += (k ? "," : "") + why[k];
        row.candidate = !why.empty();
        if (R.is_zero()) {
          row.note = "combination vanishes identically";
          row.status = RowStatus::Flagged;
          return;
        }
        try {
          row.index = idx(R);
        } catch (const std::exception& ex) {
          row.note = ex.what();
          row.status = RowStatus::Undecided;
          return;
        }
        row.bound_ok = !worse_than(*row.index, rep.bound);
        if (row.candidate)
          row.status = RowStatus::Flagged;
        else
          row.status = row.bound_ok ? RowStatus::Pass : RowStatus::Fail;
      },
      threads);
  bool fail = false;
  for (const auto& r : rep.rows) fail = fail || r.status == RowStatus::Fail;
  rep.verdict = fail ? Verdict::Fail : Verdict::Pass;
  return rep;
}

}  // namespace nsub
