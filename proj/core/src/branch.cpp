#include "nsub/resolve.hpp"

namespace nsub {

namespace {

// Value of d/du h(0, u) at u = r, from the x^0 part of h.
Rational du_at_zero(const PuiseuxPoly& h, const Rational& r) {
  std::vector<Rational> c(static_cast<std::size_t>(h.y_degree()) + 1);
  for (const auto& [e, v] : h.terms())
    if (e.a == 0) c[static_cast<std::size_t>(e.b)] += v;
  return UPoly(std::move(c)).derivative().eval(r);
}

Rational eval_at_zero(const PuiseuxPoly& h, const Rational& r) {
  std::vector<Rational> c(static_cast<std::size_t>(h.y_degree()) + 1);
  for (const auto& [e, v] : h.terms())
    if (e.a == 0) c[static_cast<std::size_t>(e.b)] += v;
  return UPoly(std::move(c)).eval(r);
}

}  // namespace

BranchCurve branch_curve(const PuiseuxPoly& p, const CompactEdge& edge, const IsolatedRoot& root,
                         const BranchOptions& opt) {
  const bool numeric = opt.mode == ResolveMode::Numeric;
  if (!root.exact_value && !numeric) throw ExactModeError();
  if (root.multiplicity < 1) throw std::invalid_argument("root multiplicity must be positive");

  PuiseuxPoly s = divide_out_x(subst_scale(p.without_truncation(), edge.m), edge.alpha);
  PuiseuxPoly h = deriv_y(s, root.multiplicity - 1);

  Rational r;
  Rational snap(0);
  if (root.exact_value) {
    r = *root.exact_value;
  } else {
    UPoly q = edge_polynomial(p, edge, 1);
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 2, opt.precision_bits + 10);
    IsolatedRoot fine = refine_root(root, q, Rational(1) / Rational(scale));
    r = round_dyadic((fine.lo + fine.hi) / 2, opt.precision_bits);
    for (int it = 0; it < 3; ++it) {
      Rational d = du_at_zero(h, r);
      if (d == 0) break;
      r = round_dyadic(r - eval_at_zero(h, r) / d, opt.precision_bits);
    }
    mpz_ui_pow_ui(scale.get_mpz_t(), 2, opt.precision_bits / 4 * 3);
    snap = Rational(1) / Rational(scale);
  }

  Rational hu = du_at_zero(h, r);
  if (numeric && abs(hu) < snap) hu = 0;
  if (hu == 0) throw ResolveInvariantError("branch lifting: d^o s/du^o vanishes at the root");

  BranchCurve out;
  out.t = PuiseuxPoly::constant(r);
  Rational cap = opt.truncation_order - edge.m;
  if (cap <= 0) cap = Rational(1);
  for (;;) {
    PuiseuxPoly res = subst_curve(h, out.t, cap);
    if (numeric) out.coeff_radius += snap_small(res, snap) / abs(hu);
    if (res.is_zero()) {
      if (numeric) {
        out.exact = false;
        out.truncated = false;
      } else if (out.t.size() <= 8) {
        out.exact = subst_curve(h, out.t).is_zero();
        out.truncated = !out.exact;
      } else {
        out.truncated = true;
      }
      break;
    }
    const auto& [e0, c0] = *res.terms().begin();
    if (e0.a >= cap) {
      out.truncated = true;
      break;
    }
    if (e0.a == 0) throw ResolveInvariantError("branch lifting: root is not a zero of the edge polynomial");
    Rational corr = -c0 / hu;
    if (numeric) corr = round_dyadic(corr, opt.precision_bits);
    if (corr == 0) {
      out.coeff_radius += abs(c0 / hu);
      out.truncated = true;
      break;
    }
    out.t.add_term(corr, e0.a, 0);
  }
  out.curve = out.t * PuiseuxPoly::x_power(edge.m);
  return out;
}

}  // namespace nsub
