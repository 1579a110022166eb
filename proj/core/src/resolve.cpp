#include "nsub/resolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nsub {

void Chart::refresh_numeric() {
  g_num_ = NumericPoly(g);
  lower_num_ = NumericPoly(lower);
  upper_num_ = NumericPoly(upper);
}

std::pair<double, double> Chart::apply(double x0, double y0) const {
  double u0 = swap ? y0 : x0;
  double v0 = swap ? x0 : y0;
  double x = sign_x * u0;
  double y = sign_y * v0 - (x > 0 ? g_at(x) : 0.0);
  return {x, y};
}

std::pair<double, double> Chart::inverse(double x, double y) const {
  double u0 = sign_x * x;
  double v0 = sign_y * (y + g_at(x));
  return swap ? std::pair{v0, u0} : std::pair{u0, v0};
}

bool Chart::contains(double x0, double y0) const {
  double u0 = swap ? y0 : x0;
  double x = sign_x * u0;
  if (!(x > 0) || x >= to_double(x_max)) return false;
  auto [cx, cy] = apply(x0, y0);
  return cy > lower_at(cx) && cy < upper_at(cx);
}

Rational Decomposition::x_max() const {
  Rational m(1);
  bool first = true;
  for (const auto& c : charts) {
    if (first || c.x_max < m) m = c.x_max;
    first = false;
  }
  return m;
}

Rational default_eta(const PuiseuxPoly& p) {
  NewtonPolygon np = newton_polygon_of(p);
  Rational eta(1, 2);
  for (const auto& e : np.edges) eta = std::min(eta, Rational(e.m / 2));
  return eta;
}

Integer chart_count_cap(const PuiseuxPoly& p) {
  NewtonPolygon np = newton_polygon_of(p);
  long span = Rational(np.vertices.front().b - np.vertices.back().b).get_num().get_si();
  Integer base(2 * span), out(8);
  if (span == 0) return out;
  Integer pw;
  mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(span + 1));
  return out * pw;
}

PuiseuxPoly chart_phase(const PuiseuxPoly& p, const Chart& c) {
  PuiseuxPoly frame = c.swap ? reflect_axes(p, c.sign_y, c.sign_x, true) : reflect_axes(p, c.sign_x, c.sign_y, false);
  return subst_shear(frame, 1, c.g);
}

namespace {

Rational falling(const Rational& a, long k) {
  Rational out(1);
  for (long i = 0; i < k; ++i) out *= (a - i);
  return out;
}

Rational pow2(long k) {
  Integer s;
  mpz_ui_pow_ui(s.get_mpz_t(), 2, static_cast<unsigned long>(k < 0 ? -k : k));
  return k < 0 ? Rational(1) / Rational(s) : Rational(s);
}

double powd(double x, const Rational& e) { return std::pow(x, to_double(e)); }

// Largest 2^-k (k = 0..80) at most `cap` with ok(x); zero when none qualifies.
template <class F>
Rational largest_dyadic(const Rational& cap, F ok) {
  for (long k = 0; k <= 80; ++k) {
    Rational x = pow2(-k);
    if (x > cap) continue;
    if (ok(to_double(x))) return x;
  }
  return Rational(0);
}

// y lies between lambda x^n (when present) and mu x^N.
struct Bounds {
  std::optional<Rational> lambda;
  Rational n;
  Rational mu;
  Rational N;
};

struct CertTerm {
  double weight;
  Rational excess;
};

// Domination certificate for a mode C chart: one weighted list per (k, l).
struct ModeCCert {
  std::vector<std::vector<CertTerm>> lists;
  double xi_part = 0.0;  // worst sum of zero-excess weights
};

ModeCCert mode_c_certificate(const PuiseuxPoly& R, const Point& v, const Bounds& bd, bool skip_negative) {
  Rational bv = R.coefficient(v.a, v.b.get_num().get_si());
  long beta = v.b.get_num().get_si();
  long kmax = ceil(v.a).get_si();
  ModeCCert cert;
  for (long k = 0; k <= kmax; ++k)
    for (long l = 0; l <= beta; ++l) {
      std::vector<CertTerm> list;
      double xi_part = 0.0;
      for (const auto& [e, c] : R.terms()) {
        if (e.a == v.a && e.b == beta) continue;
        Rational f = falling(e.a, k) * falling(Rational(e.b), l);
        if (f == 0) continue;
        double w = to_double(abs(c * f / bv));
        Rational excess;
        long db = e.b - beta;
        if (db > 0) {
          excess = e.a - v.a + bd.N * db;
          w *= std::pow(to_double(bd.mu), static_cast<double>(db));
        } else if (db < 0) {
          if (!bd.lambda) {
            if (skip_negative) continue;
            throw ResolveInvariantError("mode C chart: term below the vertex with no lower boundary");
          }
          excess = e.a - v.a - bd.n * (-db);
          w *= std::pow(to_double(*bd.lambda), static_cast<double>(db));
        } else {
          excess = e.a - v.a;
        }
        if (excess < 0) {
          if (skip_negative) continue;
          throw ResolveInvariantError("mode C chart: monomial is not dominant");
        }
        if (excess == 0) xi_part += w;
        list.push_back({w, excess});
      }
      cert.xi_part = std::max(cert.xi_part, xi_part);
      cert.lists.push_back(std::move(list));
    }
  return cert;
}

double cert_radius_part(const std::vector<CertTerm>& list, double x) {
  double s = 0.0;
  for (const auto& t : list)
    if (t.excess > 0) s += t.weight * powd(x, t.excess);
  return s;
}

// min and max of |q| on [lo, hi]; q must not vanish there.
std::pair<double, double> abs_range(const UPoly& q, const Rational& lo, const Rational& hi) {
  std::vector<double> pts{to_double(lo), to_double(hi)};
  UPoly dq = q.derivative();
  if (!dq.is_zero())
    for (const auto& r : isolate_real_roots(dq, RootDomain::All)) {
      IsolatedRoot f = refine_root(r, dq, Rational(1, 1 << 30));
      double v = f.approx();
      if (v > pts[0] && v < pts[1]) pts.push_back(v);
    }
  double mn = std::numeric_limits<double>::infinity(), mx = 0.0;
  for (double t : pts) {
    double v = std::fabs(q.eval(t));
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  return {mn, mx};
}

struct Ctx {
  const PuiseuxPoly& original;
  const ResolveParams& P;
  SectorDescriptor sector;
  Rational xi_global;
  BranchOptions bopt;
  std::vector<Chart> charts;
  std::vector<std::pair<std::string, Rational>> xi_levels;
  bool xi_too_large = false;
};

struct Frame {
  PuiseuxPoly R;
  PuiseuxPoly h;
  int s = 1;
  Rational eta;
  Rational c_roof;
  Rational x_cap;
  int depth = 0;
  std::string label;
  long parent_order = 0;  // 0 at the top level
  bool parent_exact = true;
};

Chart base_chart(const Ctx& ctx, const Frame& f) {
  Chart c;
  c.swap = ctx.sector.swap;
  int frame_x = ctx.sector.swap ? ctx.sector.sign_y : ctx.sector.sign_x;
  int frame_v = ctx.sector.swap ? ctx.sector.sign_x : ctx.sector.sign_y;
  c.sign_x = frame_x;
  c.sign_y = f.s * frame_v;
  c.g = f.s == 1 ? f.h : -f.h;
  c.delta = ctx.P.delta;
  c.depth = f.depth;
  return c;
}

void emit_t_chart(Ctx& ctx, const Frame& f, const Point& v, const Bounds& bd, const std::string& name,
                  bool beyond = false) {
  Chart c = base_chart(ctx, f);
  c.mode = ChartMode::C;
  c.label = f.label + name;
  c.beyond_truncation = beyond;
  long beta = v.b.get_num().get_si();
  c.monomial = {f.R.coefficient(v.a, beta), v.a, beta};
  c.lower = bd.lambda ? PuiseuxPoly::monomial(*bd.lambda, bd.n, 0) : PuiseuxPoly();
  c.upper = PuiseuxPoly::monomial(bd.mu, bd.N, 0);
  c.phase = f.R;

  ModeCCert cert = mode_c_certificate(f.R, v, bd, beyond);
  double half = to_double(ctx.P.delta) / 2;
  if (cert.xi_part > half) ctx.xi_too_large = true;
  c.x_max = largest_dyadic(std::min(f.x_cap, ctx.P.x_max), [&](double x) {
    if (bd.lambda && !(to_double(*bd.lambda) * powd(x, bd.n) < to_double(bd.mu) * powd(x, bd.N))) return false;
    for (const auto& list : cert.lists)
      if (cert_radius_part(list, x) > half) return false;
    return true;
  });
  if (c.x_max == 0) throw ResolveInvariantError("no admissible radius for chart " + c.label);
  c.refresh_numeric();
  ctx.charts.push_back(std::move(c));
}

void emit_u_chart(Ctx& ctx, const Frame& f, const CompactEdge& e, const UPoly& se, const Rational& xi,
                  const Rational& u_lo, const Rational& u_hi, const PuiseuxPoly& lower, const PuiseuxPoly& upper,
                  const Rational& x_cap, const std::string& name) {
  Chart c = base_chart(ctx, f);
  c.mode = ChartMode::B;
  c.label = f.label + name;
  c.g = (f.s == 1 ? f.h : -f.h) + lower;
  c.lower = PuiseuxPoly();
  c.upper = upper - lower;
  c.phase = subst_shear(f.R, 1, lower);
  Rational b = se.eval((u_lo + u_hi) / 2);
  c.monomial = {b, e.alpha, 0};
  Rational a_lo = u_lo - xi / 2, a_hi = u_hi + xi / 2;
  auto [c_lo, c_hi] = abs_range(se, a_lo, a_hi);
  if (!(c_lo > 0)) throw ResolveInvariantError("edge polynomial vanishes on strip " + c.label);
  double babs = std::fabs(to_double(b));
  c.band_lo = c_lo / (2 * babs);
  c.band_hi = 2 * c_hi / babs;
  double umax = to_double(a_hi);
  std::vector<CertTerm> tail;
  for (const auto& [ex, cf] : f.R.terms()) {
    Rational excess = ex.a + e.m * ex.b - e.alpha;
    if (excess == 0) continue;
    tail.push_back({std::fabs(to_double(cf)) * std::pow(umax, static_cast<double>(ex.b)), excess});
  }
  c.x_max = largest_dyadic(std::min(x_cap, ctx.P.x_max),
                           [&](double x) { return cert_radius_part(tail, x) <= c_lo / 2; });
  if (c.x_max == 0) throw ResolveInvariantError("no admissible radius for chart " + c.label);
  c.refresh_numeric();
  ctx.charts.push_back(std::move(c));
}

void solve(Ctx& ctx, const Frame& f, std::vector<TraceNode>& trace);
Rational root_lo(const IsolatedRoot& r);
Rational root_hi(const IsolatedRoot& r);

// Strip a + m b = alpha: U pieces between the branch curves, recursion at each root.
void edge_strip(Ctx& ctx, const Frame& f, const CompactEdge& e, std::size_t j, const Rational& xi,
                const std::vector<IsolatedRoot>& roots, std::vector<TraceNode>& trace) {
  UPoly se = edge_polynomial(f.R, e, 1);
  std::string tag = "E" + std::to_string(j + 1);
  Rational x_cap = f.x_cap;
  std::vector<BranchCurve> curves;
  for (const auto& r : roots) {
    BranchCurve bc = branch_curve(f.R, e, r, ctx.bopt);
    std::vector<CertTerm> dev;
    for (const auto& [ex, cf] : bc.t.terms())
      if (ex.a > 0) dev.push_back({std::fabs(to_double(cf)), ex.a});
    Rational rad = largest_dyadic(x_cap, [&](double x) { return cert_radius_part(dev, x) <= to_double(xi) / 4; });
    if (rad == 0) throw ResolveInvariantError("branch curve leaves its strip at every radius");
    x_cap = std::min(x_cap, rad);
    curves.push_back(std::move(bc));
  }
  PuiseuxPoly xm = PuiseuxPoly::x_power(e.m);
  Rational inv_xi = Rational(1) / xi;
  // U pieces bottom to top.
  for (std::size_t k = 0; k <= roots.size(); ++k) {
    Rational u_lo = k == 0 ? xi : Rational(root_hi(roots[k - 1]) + xi);
    Rational u_hi = k == roots.size() ? inv_xi : Rational(root_lo(roots[k]) - xi);
    PuiseuxPoly lower = k == 0 ? xi * xm : curves[k - 1].curve + xi * xm;
    PuiseuxPoly upper = k == roots.size() ? inv_xi * xm : curves[k].curve - xi * xm;
    emit_u_chart(ctx, f, e, se, xi, u_lo, u_hi, lower, upper, x_cap, "/" + tag + "U" + std::to_string(k));
  }
  for (std::size_t k = 0; k < roots.size(); ++k) {
    const auto& r = roots[k];
    const auto& bc = curves[k];
    if (f.parent_order > 0 && r.multiplicity >= f.parent_order && f.parent_exact)
      throw ResolveInvariantError("root order did not decrease along the recursion");
    if (f.depth + 1 > ctx.P.max_depth) throw ResolveInvariantError("resolution exceeded max_depth");
    TraceNode node;
    node.m = e.m;
    node.root = r;
    node.order = r.multiplicity;
    node.curve = bc.curve;
    node.curve_exact = bc.exact;
    node.label = f.label + "/" + tag + "V" + std::to_string(k);
    PuiseuxPoly Rk = subst_shear(f.R, 1, bc.curve);
    if (ctx.bopt.mode == ResolveMode::Numeric) {
      Rk = round_coefficients(Rk, ctx.bopt.precision_bits);
      Rational mx(0);
      for (const auto& [ex, cf] : Rk.terms()) mx = std::max(mx, abs(cf));
      snap_small(Rk, mx * pow2(-static_cast<long>(ctx.bopt.precision_bits) / 2));
    }
    for (int side : {1, -1}) {
      Frame child;
      child.R = side == 1 ? Rk : reflect_axes(Rk, 1, -1);
      child.h = f.h + (f.s == 1 ? bc.curve : -bc.curve);
      child.s = f.s * side;
      child.eta = e.m;
      child.c_roof = xi;
      child.x_cap = x_cap;
      child.depth = f.depth + 1;
      child.label = node.label + (side == 1 ? "+" : "-");
      child.parent_order = r.multiplicity;
      child.parent_exact = bc.exact;
      node.children.emplace_back();
      TraceNode& side_node = node.children.back();
      side_node.m = e.m;
      side_node.label = child.label;
      solve(ctx, child, side_node.children);
    }
    trace.push_back(std::move(node));
  }
}

Rational root_lo(const IsolatedRoot& r) { return r.exact_value ? *r.exact_value : r.lo; }
Rational root_hi(const IsolatedRoot& r) { return r.exact_value ? *r.exact_value : r.hi; }

Rational strip_xi(const Ctx& ctx, const std::vector<IsolatedRoot>& roots) {
  Rational xi = ctx.xi_global;
  if (roots.empty()) return xi;
  Rational bound = root_lo(roots.front()) / 4;
  bound = std::min(bound, Rational(Rational(1) / (4 * root_hi(roots.back()))));
  for (std::size_t k = 0; k + 1 < roots.size(); ++k)
    bound = std::min(bound, Rational((root_lo(roots[k + 1]) - root_hi(roots[k])) / 4));
  while (xi > bound) xi /= 2;
  return xi;
}

void solve(Ctx& ctx, const Frame& f, std::vector<TraceNode>& trace) {
  NewtonPolygon np = newton_polygon_of(f.R);
  std::vector<CompactEdge> rel;
  bool beyond = false;
  for (const auto& e : np.edges) {
    if (e.m <= f.eta) continue;
    if (e.m >= ctx.P.truncation_order) {
      beyond = true;
      break;
    }
    rel.push_back(e);
  }
  if (rel.empty()) {
    const Point* v = &np.vertices.back();
    for (const auto& e : np.edges)
      if (e.m > f.eta) {
        v = &e.lo;
        break;
      }
    emit_t_chart(ctx, f, *v, Bounds{std::nullopt, Rational(0), f.c_roof, f.eta}, "/T", beyond);
    return;
  }
  std::vector<std::vector<IsolatedRoot>> roots;
  std::vector<Rational> xis;
  for (std::size_t j = 0; j < rel.size(); ++j) {
    UPoly se = edge_polynomial(f.R, rel[j], 1);
    std::vector<IsolatedRoot> rs;
    for (auto& r : isolate_real_roots(se, RootDomain::Positive)) {
      if (!r.exact_value && ctx.bopt.mode == ResolveMode::Exact) throw ExactModeError();
      rs.push_back(refine_root(r, se, pow2(-48)));
    }
    roots.push_back(rs);
    xis.push_back(strip_xi(ctx, rs));
    ctx.xi_levels.emplace_back(f.label + "/E" + std::to_string(j + 1), xis.back());
  }
  emit_t_chart(ctx, f, rel.front().lo, Bounds{Rational(1) / xis.front(), rel.front().m, f.c_roof, f.eta}, "/T0");
  for (std::size_t j = 0; j < rel.size(); ++j) {
    edge_strip(ctx, f, rel[j], j, xis[j], roots[j], trace);
    if (j + 1 < rel.size())
      emit_t_chart(ctx, f, rel[j].hi, Bounds{Rational(1) / xis[j + 1], rel[j + 1].m, xis[j], rel[j].m},
                   "/T" + std::to_string(j + 1));
  }
  emit_t_chart(ctx, f, rel.back().hi, Bounds{std::nullopt, Rational(0), xis.back(), rel.back().m},
               "/T" + std::to_string(rel.size()), beyond);
}

}  // namespace

Decomposition resolve_sector(const PuiseuxPoly& p, const SectorDescriptor& sector, const ResolveParams& params) {
  if (p.is_zero()) throw std::domain_error("zero Taylor expansion");
  PuiseuxPoly frame = reflect_axes(p, sector.sign_x, sector.sign_y, sector.swap);
  for (const auto& e : newton_polygon_of(frame).edges)
    if (e.m == sector.eta) throw std::invalid_argument("eta coincides with an edge slope; choose another --eta");
  Rational xi = params.xi;
  for (int attempt = 0; attempt <= 20; ++attempt, xi /= 2) {
    Ctx ctx{p, params, sector, xi, BranchOptions{params.truncation_order, params.mode, 200}, {}, {}, false};
    Frame top;
    top.R = frame;
    top.eta = sector.eta;
    top.c_roof = Rational(1);
    top.x_cap = params.x_max;
    top.label = "";
    Decomposition d;
    d.sector = sector;
    d.truncation_order = params.truncation_order;
    solve(ctx, top, d.trace);
    if (ctx.xi_too_large && attempt < 20) continue;
    d.xi = xi;
    d.charts = std::move(ctx.charts);
    d.xi_levels = std::move(ctx.xi_levels);
    if (Integer(d.charts.size()) > chart_count_cap(p))
      throw ResolveInvariantError("chart count exceeds the structural cap");
    d.verified = true;
    for (std::size_t i = 0; i < d.charts.size(); ++i) {
      Chart& c = d.charts[i];
      for (int shrink = 0;; ++shrink) {
        VerifyReport rep;
        bool ok = false;
        try {
          rep = verify_chart(p, c, params.verify_samples, params.seed + i);
          ok = rep.ok();
        } catch (const std::domain_error&) {
          ok = false;
        }
        if (ok) {
          c.verified = true;
          break;
        }
        if (shrink >= 20) break;
        c.x_max /= 2;
      }
      d.verified = d.verified && c.verified;
    }
    return d;
  }
  throw ResolveInvariantError("xi halving did not converge");
}

Decomposition resolve(const PuiseuxPoly& p, const ResolveParams& params) {
  SectorDescriptor s;
  s.eta = params.eta ? *params.eta : default_eta(p);
  return resolve_sector(p, s, params);
}

std::vector<Decomposition> resolve_disk(const PuiseuxPoly& p, const ResolveParams& params) {
  Rational eta = params.eta ? *params.eta : default_eta(p);
  bool ramified = !p.has_integer_x_exponents();
  std::vector<Decomposition> out;
  for (int sx : {1, -1})
    for (int sy : {1, -1})
      for (bool swap : {false, true}) {
        if (ramified && (sx == -1 || swap)) continue;
        SectorDescriptor s{sx, sy, swap, swap ? Rational(1) / eta : eta};
        out.push_back(resolve_sector(p, s, params));
      }
  return out;
}

}  // namespace nsub
