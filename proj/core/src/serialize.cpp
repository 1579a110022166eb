#include "nsub/serialize.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace nsub {

Json to_json(const Rational& q) { return to_string(q); }

Json to_json(const PuiseuxPoly& p) {
  Json terms = Json::array();
  for (const auto& [e, c] : p.terms()) terms.push_back({{"a", to_json(e.a)}, {"b", e.b}, {"c", to_json(c)}});
  Json j;
  j["text"] = p.to_string();
  j["ramification"] = p.ramification();
  j["truncation_order"] = p.truncation_order() ? to_json(*p.truncation_order()) : Json(nullptr);
  j["terms"] = terms;
  return j;
}

namespace {

Json point(const Point& p) { return Json::array({to_json(p.a), to_json(p.b)}); }

}  // namespace

Json to_json(const NewtonPolygon& np) {
  Json j;
  j["vertices"] = Json::array();
  for (const auto& v : np.vertices) j["vertices"].push_back(point(v));
  j["edges"] = Json::array();
  for (const auto& e : np.edges)
    j["edges"].push_back({{"lo", point(e.lo)}, {"hi", point(e.hi)}, {"m", to_json(e.m)}, {"alpha", to_json(e.alpha)}});
  j["vertical_ray"] = np.has_vertical_ray;
  j["horizontal_ray"] = np.has_horizontal_ray;
  return j;
}

Json to_json(const BisectrixClass& bc) {
  Json j;
  j["tag"] = to_string(bc.tag);
  j["d"] = to_json(bc.d);
  j["edge"] = bc.edge ? Json(*bc.edge) : Json(nullptr);
  j["vertex"] = bc.vertex ? Json(*bc.vertex) : Json(nullptr);
  return j;
}

Json to_json(const GrowthIndex& g) {
  return {{"j", to_json(g.j)}, {"p", g.p}, {"morse_hyperbolic", g.morse_hyperbolic}};
}

Json to_json(const IsolatedRoot& r) {
  Json j;
  j["lo"] = to_json(r.lo);
  j["hi"] = to_json(r.hi);
  j["multiplicity"] = r.multiplicity;
  j["exact"] = r.exact_value ? to_json(*r.exact_value) : Json(nullptr);
  j["approx"] = r.approx();
  return j;
}

Json to_json(const Shear& s) {
  return {{"m", to_json(s.m)}, {"r", to_json(s.r)}, {"x_sign", s.x_sign}, {"curve", s.curve().to_string()}};
}

Json to_json(const AdaptReport& r) {
  Json j;
  j["result"] = to_json(r.result);
  j["shears"] = Json::array();
  for (const auto& s : r.shears_applied) j["shears"].push_back(to_json(s));
  j["superadapted"] = r.superadapted;
  if (r.violating_witness) {
    const Witness& w = *r.violating_witness;
    j["witness"] = {{"edge_index", w.edge_index}, {"x_sign", w.x_sign}, {"root", to_json(w.root)},
                    {"order", w.order}, {"d", to_json(w.d)}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

Json to_json(const Chart& c) {
  Json j;
  j["label"] = c.label;
  j["depth"] = c.depth;
  j["frame"] = {{"sign_x", c.sign_x}, {"sign_y", c.sign_y}, {"swap", c.swap}};
  j["shear"] = c.g.to_string();
  j["lower"] = c.lower.to_string();
  j["upper"] = c.upper.to_string();
  j["x_max"] = to_json(c.x_max);
  j["mode"] = c.mode == ChartMode::C ? "C" : "B";
  j["monomial"] = {{"coeff", to_json(c.monomial.coeff)}, {"alpha", to_json(c.monomial.alpha)}, {"beta", c.monomial.beta}};
  j["delta"] = to_json(c.delta);
  if (c.mode == ChartMode::B) j["band"] = Json::array({c.band_lo, c.band_hi});
  j["coeff_radius"] = to_json(c.coeff_radius);
  j["beyond_truncation"] = c.beyond_truncation;
  j["verified"] = c.verified;
  j["phase"] = c.phase.to_string();
  return j;
}

Json to_json(const TraceNode& t) {
  Json j;
  j["label"] = t.label;
  j["m"] = to_json(t.m);
  j["root"] = to_json(t.root);
  j["order"] = t.order;
  j["curve"] = t.curve.to_string();
  j["curve_exact"] = t.curve_exact;
  j["children"] = Json::array();
  for (const auto& c : t.children) j["children"].push_back(to_json(c));
  return j;
}

Json to_json(const Decomposition& d) {
  Json j;
  j["sector"] = {{"sign_x", d.sector.sign_x}, {"sign_y", d.sector.sign_y}, {"swap", d.sector.swap},
                 {"eta", to_json(d.sector.eta)}};
  j["truncation_order"] = to_json(d.truncation_order);
  j["xi"] = to_json(d.xi);
  j["xi_levels"] = Json::array();
  for (const auto& [k, v] : d.xi_levels) j["xi_levels"].push_back({{"strip", k}, {"xi", to_json(v)}});
  j["verified"] = d.verified;
  j["charts"] = Json::array();
  for (const auto& c : d.charts) j["charts"].push_back(to_json(c));
  j["trace"] = Json::array();
  for (const auto& t : d.trace) j["trace"].push_back(to_json(t));
  return j;
}

Json to_json(const VerifyReport& v) {
  return {{"ok", v.ok()},
          {"samples", v.samples},
          {"max_ratio_violation", v.max_ratio_violation},
          {"max_derivative_violation", v.max_derivative_violation},
          {"sign_constant", v.sign_constant}};
}

Json to_json(const MeasureSample& m) {
  return {{"epsilon", m.epsilon},
          {"estimate", m.estimate},
          {"stderr", m.stderr_},
          {"n", m.n_samples},
          {"method", to_string(m.method)}};
}

Json to_json(const FitResult& f) {
  return {{"j_hat", f.j_hat},     {"p_hat", f.p_hat},     {"C_hat", f.C_hat},
          {"residual_rms", f.residual_rms}, {"p_rounded", f.p_rounded}, {"j_fixed", f.j_fixed},
          {"C_fixed", f.C_fixed}, {"n", f.n}};
}

Json to_json(const LogPresence& l) {
  return {{"slope", l.slope}, {"ratio_growth", l.ratio_growth}, {"p_decision", l.p_decision}};
}

Json to_json(const ExceptionalSet& e) {
  Json j;
  j["vertex_ts"] = Json::array();
  for (const auto& t : e.vertex_ts) j["vertex_ts"].push_back(to_json(t));
  j["edge_ts"] = Json::array();
  for (const auto& r : e.edge_ts) j["edge_ts"].push_back(to_json(r));
  j["edge_condition_open"] = e.edge_condition_open;
  j["edge_condition_everywhere"] = e.edge_condition_everywhere;
  return j;
}

Json to_json(const SweepRow& r) {
  Json j;
  j["t"] = to_json(r.t);
  j["index"] = r.index ? to_json(*r.index) : Json(nullptr);
  j["superadapt_ok"] = r.superadapt_ok;
  j["polygon_contains_NS"] = r.polygon_contains_NS;
  Json flags = Json::array();
  if (r.vertex_cancel) flags.push_back("vertex_cancel");
  if (r.edge_degenerate) flags.push_back("edge_degenerate");
  j["flags"] = flags;
  j["shears"] = r.shears;
  j["status"] = to_string(r.status);
  j["note"] = r.note;
  return j;
}

Json to_json(const SweepReport& r) {
  Json j;
  j["S"] = r.S.to_string();
  j["f"] = r.f.to_string();
  j["base_shears"] = Json::array();
  for (const auto& s : r.base_shears) j["base_shears"].push_back(to_json(s));
  j["base_index"] = to_json(r.base_index);
  j["exceptional"] = to_json(r.exceptional);
  j["morse_pair"] = r.morse_pair;
  j["smooth_order"] = r.smooth_order;
  j["perturbation_size"] = r.perturbation_size;
  j["rows"] = Json::array();
  for (const auto& row : r.rows) j["rows"].push_back(to_json(row));
  j["verdict"] = to_string(r.verdict);
  return j;
}

Json to_json(const PairReport& r) {
  Json j;
  j["index1"] = to_json(r.index1);
  j["index2"] = to_json(r.index2);
  j["bound"] = to_json(r.bound);
  j["both_morse"] = r.both_morse;
  j["oscillatory"] = r.oscillatory;
  j["rows"] = Json::array();
  for (const auto& row : r.rows) {
    Json x;
    x["ratio"] = row.ratio ? to_json(*row.ratio) : Json("inf");
    x["index"] = row.index ? to_json(*row.index) : Json(nullptr);
    x["candidate"] = row.candidate;
    x["candidate_reason"] = row.candidate_reason;
    x["bound_ok"] = row.bound_ok;
    x["status"] = to_string(row.status);
    x["note"] = row.note;
    j["rows"].push_back(x);
  }
  j["verdict"] = to_string(r.verdict);
  return j;
}

Json envelope(const std::string& command, const Json& input, const Json& config, const Json& results) {
  Json j;
  j["schema"] = kSchema;
  j["command"] = command;
  j["input"] = input;
  j["config"] = config;
  j["results"] = results;
  j["versions"] = {{"nsub", kVersion}, {"schema", 1}};
  return j;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) { row(header); }

std::string CsvWriter::escape(const std::string& cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw std::invalid_argument("CSV row width differs from header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ += ',';
    out_ += escape(cells[i]);
  }
  out_ += "\r\n";
}

std::string CsvWriter::str() const { return out_; }

}  // namespace nsub
