#include "nsub/roots.hpp"

#include <algorithm>
#include <stdexcept>

namespace nsub {

double IsolatedRoot::approx() const {
  if (exact_value) return to_double(*exact_value);
  return to_double((lo + hi) / 2);
}

std::vector<std::pair<UPoly, long>> squarefree_factor(const UPoly& q) {
  if (q.is_zero()) throw std::domain_error("squarefree_factor of the zero polynomial");
  std::vector<std::pair<UPoly, long>> out;
  if (q.degree() == 0) return out;
  UPoly f = q.monic();
  UPoly fp = f.derivative();
  UPoly a = gcd(f, fp);
  UPoly b = divmod(f, a).first;
  UPoly c = divmod(fp, a).first;
  UPoly d = c - b.derivative();
  long k = 1;
  while (b.degree() > 0) {
    UPoly g = gcd(b, d);
    if (g.degree() > 0) out.emplace_back(g.monic(), k);
    b = divmod(b, g).first;
    c = divmod(d, g).first;
    d = c - b.derivative();
    ++k;
  }
  return out;
}

namespace {

// Rescales by a positive constant so the sign pattern survives.
UPoly positive_scaled(const UPoly& p) {
  UPoly q = p.primitive();
  return p.leading() < 0 ? -q : q;
}

}  // namespace

std::vector<UPoly> sturm_sequence(const UPoly& f) {
  std::vector<UPoly> seq{positive_scaled(f), positive_scaled(f.derivative())};
  while (seq.back().degree() > 0) {
    UPoly r = divmod(seq[seq.size() - 2], seq.back()).second;
    if (r.is_zero()) break;
    seq.push_back(positive_scaled(-r));
  }
  return seq;
}

namespace {

long variations(const std::vector<UPoly>& seq, const Rational& t) {
  long v = 0;
  int prev = 0;
  for (const auto& p : seq) {
    int s = p.sign_at(t);
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++v;
    prev = s;
  }
  return v;
}

struct Pending {
  Rational lo, hi;
  std::size_t factor;
};

void isolate_factor(const std::vector<UPoly>& seq, const Rational& lo, const Rational& hi, std::size_t factor,
                    std::vector<Pending>& out) {
  long n = sturm_count(seq, lo, hi);
  if (n == 0) return;
  if (n == 1) {
    out.push_back({lo, hi, factor});
    return;
  }
  Rational mid = (lo + hi) / 2;
  isolate_factor(seq, lo, mid, factor, out);
  isolate_factor(seq, mid, hi, factor, out);
}

// One bisection step on a squarefree factor, keeping the half with the root.
void bisect(const std::vector<UPoly>& seq, Rational& lo, Rational& hi) {
  Rational mid = (lo + hi) / 2;
  if (sturm_count(seq, lo, mid) == 1)
    hi = mid;
  else
    lo = mid;
}

}  // namespace

long sturm_count(const std::vector<UPoly>& seq, const Rational& lo, const Rational& hi) {
  return variations(seq, lo) - variations(seq, hi);
}

Rational root_bound(const UPoly& q) {
  Rational m(0);
  Rational l = abs(q.leading());
  for (long i = 0; i < q.degree(); ++i) m = std::max(m, Rational(abs(q.coeff(i)) / l));
  Rational b(1);
  while (b <= m + 1) b *= 2;
  return b;
}

std::vector<IsolatedRoot> isolate_real_roots(const UPoly& q, RootDomain domain) {
  auto factors = squarefree_factor(q);
  std::vector<std::vector<UPoly>> seqs;
  std::vector<Pending> found;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    seqs.push_back(sturm_sequence(factors[i].first));
    Rational b = root_bound(factors[i].first);
    Rational lo = domain == RootDomain::Positive ? Rational(0) : Rational(-b);
    isolate_factor(seqs.back(), lo, b, i, found);
  }
  // Intervals of coprime factors never share a root; refine until disjoint.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < found.size(); ++i)
      for (std::size_t j = i + 1; j < found.size(); ++j) {
        auto& u = found[i];
        auto& v = found[j];
        if (u.lo < v.hi && v.lo < u.hi) {
          bisect(seqs[u.factor], u.lo, u.hi);
          bisect(seqs[v.factor], v.lo, v.hi);
          changed = true;
        }
      }
  }
  std::vector<IsolatedRoot> out;
  for (auto& p : found) {
    IsolatedRoot r{p.lo, p.hi, factors[p.factor].second, std::nullopt};
    UPoly prim = factors[p.factor].first.primitive();
    Rational an = abs(prim.leading());
    Rational target = Rational(1) / (2 * an * an);
    Rational lo = p.lo, hi = p.hi;
    while (hi - lo >= target) bisect(seqs[p.factor], lo, hi);
    Rational cand = simplest_between(lo, hi);
    if (cand > lo && cand <= hi && cand.get_den() <= an.get_num() && prim.eval(cand) == 0) {
      r.exact_value = cand;
      r.lo = lo;
      r.hi = hi;
    }
    out.push_back(r);
  }
  std::sort(out.begin(), out.end(), [](const IsolatedRoot& a, const IsolatedRoot& b) { return a.lo < b.lo; });
  return out;
}

IsolatedRoot refine_root(const IsolatedRoot& r, const UPoly& q, const Rational& width) {
  if (r.exact_value || r.hi - r.lo <= width) return r;
  UPoly sq = divmod(q, gcd(q, q.derivative())).first;
  IsolatedRoot out = r;
  int s_hi = sq.sign_at(out.hi);
  while (out.hi - out.lo > width) {
    Rational mid = (out.lo + out.hi) / 2;
    int s = sq.sign_at(mid);
    if (s == 0) {
      out.exact_value = mid;
      out.lo = mid - width / 2;
      out.hi = mid;
      return out;
    }
    if (s == s_hi)
      out.hi = mid;
    else
      out.lo = mid;
  }
  return out;
}

}  // namespace nsub
