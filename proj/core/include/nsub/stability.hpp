#pragma once

#include "nsub/adapt.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nsub {

/// t-values at which S + t f may lose the polygon or superadaptedness of the generic member.
struct ExceptionalSet {
  std::vector<Rational> vertex_ts;
  /// Real roots in t of the discriminant-type condition on the bisectrix edge.
  std::vector<IsolatedRoot> edge_ts;
  /// The bisectrix edge has d <= 1, so any real nonzero root counts and the
  /// edge condition holds on a set of t with interior (Morse type); edge_ts is then empty.
  bool edge_condition_open = false;
  /// The resultant vanished identically: every t has a multiple root on the edge.
  bool edge_condition_everywhere = false;

  bool contains_vertex(const Rational& t) const;
  bool contains_edge(const Rational& t) const;
};

ExceptionalSet exceptional_candidates(const PuiseuxPoly& S, const PuiseuxPoly& f);

/// Res_y(A + tB, (A + tB)') as a polynomial in t.
UPoly edge_resultant(const UPoly& A, const UPoly& B);

/// Growth index after reduction to superadapted coordinates; Morse phases are
/// read off the quadratic part. Throws AdaptError when the reduction needs an
/// algebraic or fractional shear.
GrowthIndex reduced_index(const PuiseuxPoly& p, std::size_t* shears = nullptr);

enum class RowStatus { Pass, Fail, Flagged, Undecided };
const char* to_string(RowStatus s);

struct SweepRow {
  Rational t;
  std::optional<GrowthIndex> index;
  bool superadapt_ok = false;
  bool polygon_contains_NS = false;
  bool vertex_cancel = false;
  bool edge_degenerate = false;
  std::size_t shears = 0;
  RowStatus status = RowStatus::Undecided;
  std::string note;
};

enum class Verdict { Pass, Fail, NotApplicable };
const char* to_string(Verdict v);

struct SweepReport {
  PuiseuxPoly S;  // after reduction to superadapted coordinates
  PuiseuxPoly f;  // in the same coordinates
  std::vector<Shear> base_shears;
  GrowthIndex base_index;
  ExceptionalSet exceptional;
  std::vector<SweepRow> rows;
  bool morse_pair = false;
  /// Smallness diagnostic: derivative order l covering the polygon of S and the
  /// largest |coefficient| of f among terms with a + b <= l.
  long smooth_order = 0;
  double perturbation_size = 0.0;
  Verdict verdict = Verdict::Pass;
};

/// Index of S + t f for every t (rows in t_grid order); rows are evaluated in parallel.
SweepReport stability_sweep(const PuiseuxPoly& S, const PuiseuxPoly& f, const std::vector<Rational>& t_grid,
                            unsigned threads = 0);

/// Ratio beta/alpha; nullopt stands for infinity (S2 alone).
using Ratio = std::optional<Rational>;

struct RatioRow {
  Ratio ratio;
  std::optional<GrowthIndex> index;
  bool candidate = false;
  std::string candidate_reason;
  bool bound_ok = false;
  RowStatus status = RowStatus::Undecided;
  std::string note;
};

struct PairReport {
  GrowthIndex index1, index2;
  GrowthIndex bound;  // the better of the two under (-j, p)
  bool both_morse = false;
  bool oscillatory = false;  // indices use the oscillatory (Morse-neutral) multiplicity
  std::vector<RatioRow> rows;
  Verdict verdict = Verdict::Pass;
};

PairReport pair_sweep(const PuiseuxPoly& S1, const PuiseuxPoly& S2, const std::vector<Ratio>& ratios,
                      unsigned threads = 0);

}  // namespace nsub
