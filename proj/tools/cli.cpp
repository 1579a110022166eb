#include "cli.hpp"

#include "nsub/adapt.hpp"
#include "nsub/expr.hpp"
#include "nsub/fit.hpp"
#include "nsub/lemmas.hpp"
#include "nsub/oscillatory.hpp"
#include "nsub/resolve.hpp"
#include "nsub/serialize.hpp"
#include "nsub/stability.hpp"
#include "nsub/sublevel.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace nsub::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FlagSpec {
  const char* name;
  const char* help;
};

const std::vector<FlagSpec> kFlags = {
    {"out", "output directory for reports and tables"},
    {"seed", "random seed"},
    {"samples", "Monte Carlo samples per epsilon (resolve: verification samples per chart)"},
    {"eps", "epsilon range LO..HI[:COUNT]"},
    {"lambda", "lambda range LO..HI[:COUNT]"},
    {"mode", "branch data: exact | numeric"},
    {"xi", "strip width parameter"},
    {"delta", "comparability tolerance"},
    {"eta", "sector exponent (lower sector 0 < y < x^eta)"},
    {"radius", "disk radius (resolve: chart x_max)"},
    {"t-grid", "comma-separated perturbation strengths"},
    {"ratios", "comma-separated beta/alpha values for a pair sweep; 'inf' allowed"},
    {"method", "measure method: MC | GRID"},
    {"threads", "worker count; 0 uses NEWTON_SUBLEVEL_THREADS or the hardware"},
    {"tol", "tolerance on the fitted exponent"},
    {"k", "comma-separated derivative orders"},
    {"count", "instances per derivative order"},
};

struct CommandSpec {
  const char* name;
  const char* help;
  int positionals;
  std::vector<std::pair<const char*, const char*>> flags;  // name, default
};

const std::vector<CommandSpec> kCommands = {
    {"analyze", "Newton polygon, distance, bisectrix class and growth index", 1, {{"out", ""}}},
    {"adapt", "reduce to superadapted coordinates and print the shear trace", 1, {{"out", ""}}},
    {"resolve",
     "resolve the disk into monomial-comparable charts and verify each chart",
     1,
     {{"out", ""},
      {"seed", "1"},
      {"samples", "512"},
      {"mode", "exact"},
      {"xi", "1/8"},
      {"delta", "1/4"},
      {"eta", ""},
      {"radius", "1/2"},
      {"threads", "0"}}},
    {"measure",
     "sublevel measures over an epsilon sweep and the growth fit",
     1,
     {{"out", ""},
      {"seed", "1"},
      {"samples", "200000"},
      {"eps", ""},
      {"radius", "1"},
      {"method", "MC"},
      {"threads", "0"},
      {"tol", "0.05"}}},
    {"oscillate",
     "oscillatory integrals over a lambda sweep and the decay fit",
     1,
     {{"out", ""},
      {"seed", "1"},
      {"samples", "200000"},
      {"lambda", "50..1600:6"},
      {"radius", "1"},
      {"threads", "0"},
      {"tol", "0.05"}}},
    {"sweep",
     "index of S + t f over a t grid, or of S1 + r S2 over --ratios",
     2,
     {{"out", ""}, {"t-grid", "-2,-1,-1/2,1/2,1,2"}, {"ratios", ""}, {"threads", "0"}}},
    {"check-vdc",
     "random-polynomial check of the one-dimensional sublevel bound",
     0,
     {{"out", ""}, {"seed", "1"}, {"k", "1,2,3"}, {"count", "200"}, {"threads", "0"}}},
};

struct Ctx {
  std::string command;
  std::vector<std::string> pos;
  std::map<std::string, std::string> val;
  std::ostream& out;
  std::ostream& err;
};

struct Outcome {
  Json results = Json::object();
  std::string status = "ok";
  int code = kOk;
  std::vector<std::pair<std::string, std::string>> tables;  // file name, CSV text
};

// ---- value parsing

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  return out;
}

Rational rational_arg(const std::string& key, const std::string& text) {
  try {
    return parse_rational(trim(text));
  } catch (const std::exception&) {
    throw UsageError("--" + key + ": expected a rational, got '" + text + "'");
  }
}

double double_arg(const std::string& key, const std::string& text) {
  std::string t = trim(text);
  if (t.find('/') != std::string::npos) return to_double(rational_arg(key, t));
  try {
    std::size_t used = 0;
    double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw UsageError("--" + key + ": expected a number, got '" + text + "'");
  }
}

long long int_arg(const std::string& key, const std::string& text) {
  std::string t = trim(text);
  try {
    std::size_t used = 0;
    long long v = std::stoll(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw UsageError("--" + key + ": expected an integer, got '" + text + "'");
  }
}

std::vector<double> range_arg(const std::string& key, const std::string& text, int default_count) {
  std::string t = trim(text);
  int count = default_count;
  auto colon = t.find(':');
  if (colon != std::string::npos) {
    count = static_cast<int>(int_arg(key, t.substr(colon + 1)));
    t = t.substr(0, colon);
  }
  auto dots = t.find("..");
  if (dots == std::string::npos) throw UsageError("--" + key + ": expected LO..HI[:COUNT]");
  double a = double_arg(key, t.substr(0, dots)), b = double_arg(key, t.substr(dots + 2));
  double lo = std::min(a, b), hi = std::max(a, b);
  if (!(lo > 0) || !(hi > lo)) throw UsageError("--" + key + ": need 0 < LO < HI");
  if (count < 2) throw UsageError("--" + key + ": COUNT must be at least 2");
  return geometric_schedule(lo, hi, count);
}

PhaseExpr phase_arg(const std::string& text) { return parse_expression(text); }

// ---- context access

const std::string& value(const Ctx& c, const std::string& key) {
  auto it = c.val.find(key);
  if (it == c.val.end()) throw std::logic_error("unknown flag " + key);
  return it->second;
}

unsigned threads_of(const Ctx& c) {
  long long t = int_arg("threads", value(c, "threads"));
  if (t < 0) throw UsageError("--threads must be >= 0");
  return static_cast<unsigned>(t);
}

std::uint64_t seed_of(const Ctx& c) {
  long long s = int_arg("seed", value(c, "seed"));
  if (s < 0) throw UsageError("--seed must be >= 0");
  return static_cast<std::uint64_t>(s);
}

std::optional<GrowthIndex> predicted_index(const PuiseuxPoly& p, std::string& note) {
  try {
    if (!p.has_integer_x_exponents()) return growth_index(p);
    return reduced_index(p);
  } catch (const std::exception& ex) {
    note = ex.what();
    return std::nullopt;
  }
}

Json input_echo(const Ctx& c) {
  Json in;
  in["arguments"] = c.pos;
  Json parsed = Json::array();
  for (const auto& s : c.pos) {
    try {
      parsed.push_back(print_ast(*parse_expression(s).ast));
    } catch (const std::exception&) {
      parsed.push_back(nullptr);
    }
  }
  if (!c.pos.empty()) in["parsed"] = parsed;
  return in;
}

// ---- commands

Outcome cmd_analyze(const Ctx& c) {
  PhaseExpr e = phase_arg(c.pos[0]);
  const PuiseuxPoly& p = e.poly;
  if (p.is_zero()) throw UsageError("zero Taylor expansion");
  Outcome o;
  Json& r = o.results;
  r["phase"] = to_json(p);
  NewtonPolygon np = newton_polygon_of(p);
  r["polygon"] = to_json(np);
  r["newton_distance"] = to_json(newton_distance(np));
  r["bisectrix"] = to_json(bisectrix_classify(np));
  r["is_morse"] = is_morse(p);
  if (p.has_integer_x_exponents()) {
    SuperadaptCheck chk = is_superadapted(p);
    r["superadapted"] = chk.superadapted;
  } else {
    r["superadapted"] = nullptr;
  }
  std::string note;
  std::size_t shears = 0;
  std::optional<GrowthIndex> g;
  try {
    g = p.has_integer_x_exponents() ? reduced_index(p, &shears) : growth_index(p);
  } catch (const std::exception& ex) {
    note = ex.what();
  }
  if (g) {
    GrowthIndex osc = *g;
    if (osc.morse_hyperbolic) osc.p = 0;
    r["d"] = to_json(Rational(1 / g->j));
    r["j"] = to_json(g->j);
    r["p"] = g->p;
    r["index"] = to_json(*g);
    r["oscillatory_index"] = to_json(osc);
    r["reduction_shears"] = shears;
  } else {
    r["d"] = nullptr;
    r["j"] = nullptr;
    r["p"] = nullptr;
    r["index_error"] = note;
    o.status = "failed";
    o.code = kVerificationFailed;
  }
  return o;
}

Outcome cmd_adapt(const Ctx& c) {
  PhaseExpr e = phase_arg(c.pos[0]);
  if (e.poly.is_zero()) throw UsageError("zero Taylor expansion");
  Outcome o;
  try {
    AdaptReport rep = to_superadapted(e.poly);
    o.results = to_json(rep);
    o.results["index"] = to_json(growth_index(rep.result));
  } catch (const AdaptError& ex) {
    o.results = to_json(ex.partial());
    o.results["error"] = ex.what();
    o.status = "failed";
    o.code = kVerificationFailed;
  } catch (const std::domain_error& ex) {
    throw UsageError(ex.what());
  }
  return o;
}

Outcome cmd_resolve(const Ctx& c) {
  PhaseExpr e = phase_arg(c.pos[0]);
  if (e.poly.is_zero()) throw UsageError("zero Taylor expansion");
  ResolveParams params;
  params.xi = rational_arg("xi", value(c, "xi"));
  params.delta = rational_arg("delta", value(c, "delta"));
  params.x_max = rational_arg("radius", value(c, "radius"));
  if (!value(c, "eta").empty()) params.eta = rational_arg("eta", value(c, "eta"));
  const std::string& mode = value(c, "mode");
  if (mode == "exact")
    params.mode = ResolveMode::Exact;
  else if (mode == "numeric")
    params.mode = ResolveMode::Numeric;
  else
    throw UsageError("--mode must be exact or numeric");
  long long samples = int_arg("samples", value(c, "samples"));
  if (samples <= 0) throw UsageError("--samples must be positive");
  params.verify_samples = static_cast<int>(samples);
  params.seed = seed_of(c);
  if (sign(params.xi) <= 0 || sign(params.delta) <= 0 || sign(params.x_max) <= 0)
    throw UsageError("--xi, --delta and --radius must be positive");

  Outcome o;
  std::vector<Decomposition> parts;
  try {
    parts = resolve_disk(e.poly, params);
  } catch (const std::invalid_argument& ex) {
    throw UsageError(ex.what());
  } catch (const std::exception& ex) {
    o.results["error"] = ex.what();
    o.status = "failed";
    o.code = kVerificationFailed;
    return o;
  }
  Json sectors = Json::array();
  std::size_t charts = 0;
  bool all_ok = true;
  CsvWriter table({"sector", "chart", "mode", "alpha", "beta", "x_max", "verified", "max_ratio_violation"});
  for (std::size_t s = 0; s < parts.size(); ++s) {
    const Decomposition& d = parts[s];
    Json dj = to_json(d);
    for (std::size_t i = 0; i < d.charts.size(); ++i) {
      const Chart& ch = d.charts[i];
      VerifyReport v;
      bool ran = true;
      try {
        v = verify_chart(e.poly, ch, params.verify_samples, params.seed + i);
      } catch (const std::exception& ex) {
        ran = false;
        dj["charts"][i]["verify"] = {{"ok", false}, {"error", ex.what()}};
      }
      if (ran) dj["charts"][i]["verify"] = to_json(v);
      bool ok = ran && v.ok() && ch.verified;
      all_ok = all_ok && ok;
      table.row({std::to_string(s), ch.label.empty() ? "/" : ch.label, ch.mode == ChartMode::C ? "C" : "B",
                 to_string(ch.monomial.alpha), std::to_string(ch.monomial.beta), to_string(ch.x_max),
                 ok ? "true" : "false", format_double(ran ? v.max_ratio_violation : NAN)});
      ++charts;
    }
    sectors.push_back(dj);
  }
  o.results["chart_count"] = charts;
  o.results["verified"] = all_ok;
  o.results["sectors"] = sectors;
  o.tables.emplace_back("charts.csv", table.str());
  if (!all_ok) {
    o.status = "verification_failed";
    o.code = kVerificationFailed;
  }
  return o;
}

Outcome cmd_measure(const Ctx& c) {
  PhaseExpr e = phase_arg(c.pos[0]);
  if (e.poly.is_zero()) throw UsageError("zero Taylor expansion");
  MeasureBudget budget;
  const std::string& method = value(c, "method");
  if (method == "MC")
    budget.method = MeasureMethod::MC;
  else if (method == "GRID")
    budget.method = MeasureMethod::GRID;
  else
    throw UsageError("--method must be MC or GRID");
  long long n = int_arg("samples", value(c, "samples"));
  if (n < 2) throw UsageError("--samples must be at least 2");
  budget.n = n;
  budget.threads = threads_of(c);
  std::string eps_text = value(c, "eps");
  if (eps_text.empty()) eps_text = budget.method == MeasureMethod::MC ? "1e-6..1e-2:8" : "1e-9..1e-3:8";
  std::vector<double> eps = range_arg("eps", eps_text, 8);
  double radius = double_arg("radius", value(c, "radius"));
  double tol = double_arg("tol", value(c, "tol"));
  if (!(radius > 0)) throw UsageError("--radius must be positive");
  Region region = Region::disk(radius);
  std::uint64_t seed = seed_of(c);

  Outcome o;
  CsvWriter table({"epsilon", "estimate", "stderr", "n", "method"});
  std::vector<MeasureSample> samples;
  Json js = Json::array();
  try {
    for (double ep : eps) {
      MeasureSample m = sublevel_measure(e.poly, region, ep, budget, seed);
      samples.push_back(m);
      js.push_back(to_json(m));
      table.row({format_double(m.epsilon), format_double(m.estimate), format_double(m.stderr_),
                 std::to_string(m.n_samples), to_string(m.method)});
    }
  } catch (const std::domain_error& ex) {
    throw UsageError(ex.what());
  }
  o.tables.emplace_back("measure.csv", table.str());
  o.results["region"] = region.describe();
  o.results["samples"] = js;
  try {
    o.results["fit"] = to_json(fit_growth(samples));
  } catch (const FitError& ex) {
    throw UsageError(std::string("fit: ") + ex.what());
  }
  std::string note;
  auto pred = predicted_index(e.poly, note);
  if (pred) {
    LogPresence lp = log_presence(samples, to_double(pred->j));
    FitResult fixed = fit_growth_with_p(samples, lp.p_decision);
    bool consistent = std::fabs(fixed.j_hat - to_double(pred->j)) <= tol && lp.p_decision == pred->p;
    o.results["prediction"] = to_json(*pred);
    o.results["log_presence"] = to_json(lp);
    o.results["fit_fixed_p"] = to_json(fixed);
    o.results["consistent"] = consistent;
    if (!consistent) {
      o.status = "verification_failed";
      o.code = kVerificationFailed;
    }
  } else {
    o.results["prediction"] = nullptr;
    o.results["prediction_error"] = note;
  }
  return o;
}

Outcome cmd_oscillate(const Ctx& c) {
  PhaseExpr e = phase_arg(c.pos[0]);
  if (e.poly.is_zero()) throw UsageError("zero Taylor expansion");
  std::vector<double> lambdas = range_arg("lambda", value(c, "lambda"), 6);
  double radius = double_arg("radius", value(c, "radius"));
  double tol = double_arg("tol", value(c, "tol"));
  long long n = int_arg("samples", value(c, "samples"));
  if (!(radius > 0)) throw UsageError("--radius must be positive");
  if (n < 2) throw UsageError("--samples must be at least 2");
  std::sort(lambdas.begin(), lambdas.end());
  QuadratureOptions q;
  q.threads = threads_of(c);
  Cutoff cut{radius, 3};

  Outcome o;
  CsvWriter table({"lambda", "re", "im", "abs"});
  std::vector<std::pair<double, double>> pairs;
  Json rows = Json::array();
  for (double l : lambdas) {
    try {
      OscillatoryValue v = oscillatory_integral(e.poly, cut, l, q);
      pairs.emplace_back(l, std::abs(v.value));
      rows.push_back({{"lambda", l}, {"re", v.value.real()}, {"im", v.value.imag()}, {"abs", std::abs(v.value)},
                      {"error", v.error}});
      table.row({format_double(l), format_double(v.value.real()), format_double(v.value.imag()),
                 format_double(std::abs(v.value))});
    } catch (const QuadratureError& ex) {
      o.results["rows"] = rows;
      o.results["error"] = std::string(ex.what()) + " at lambda " + format_double(l);
      o.tables.emplace_back("oscillate.csv", table.str());
      o.status = "failed";
      o.code = kVerificationFailed;
      return o;
    } catch (const std::domain_error& ex) {
      throw UsageError(ex.what());
    }
  }
  o.tables.emplace_back("oscillate.csv", table.str());
  o.results["cutoff"] = {{"radius", radius}, {"order", cut.order}};
  o.results["rows"] = rows;
  try {
    o.results["fit"] = to_json(fit_decay(pairs));
  } catch (const FitError& ex) {
    throw UsageError(std::string("fit: ") + ex.what());
  }
  std::string note;
  auto growth = predicted_index(e.poly, note);
  if (!growth) {
    o.results["prediction"] = nullptr;
    o.results["prediction_error"] = note;
    return o;
  }
  GrowthIndex osc = *growth;
  if (osc.morse_hyperbolic) osc.p = 0;
  const double j = to_double(osc.j);
  FitResult fixed = fit_decay_with_p(pairs, osc.p);
  double lo = INFINITY, hi = 0.0;
  for (const auto& [l, a] : pairs) {
    double norm = a * std::pow(l, j) / std::pow(std::log(l), osc.p);
    lo = std::min(lo, norm);
    hi = std::max(hi, norm);
  }
  // Coefficient cap from the sublevel measures of the cutoff disk.
  MeasureBudget budget;
  budget.n = n;
  budget.threads = q.threads;
  double sup_ratio = 0.0;
  for (double ep : geometric_schedule(1e-6, 1e-2, 8)) {
    MeasureSample m = sublevel_measure(e.poly, Region::disk(radius), ep, budget, seed_of(c));
    double norm = std::pow(ep, to_double(growth->j)) * std::pow(std::fabs(std::log(ep)), growth->p);
    sup_ratio = std::max(sup_ratio, m.estimate / norm);
  }
  double cap = oscillatory_coefficient_cap(j, sup_ratio, cut.sup());
  bool cap_ok = hi <= 3.0 * cap;
  bool consistent = std::fabs(fixed.j_hat - j) <= tol && hi <= 2.0 * lo && cap_ok;
  o.results["prediction"] = to_json(osc);
  o.results["fit_fixed_p"] = to_json(fixed);
  o.results["normalized_band"] = {{"min", lo}, {"max", hi}, {"ratio", hi / lo}};
  o.results["coefficient_cap"] = {{"sup_measure_ratio", sup_ratio}, {"cap", cap}, {"bound", 3.0 * cap}, {"ok", cap_ok}};
  o.results["consistent"] = consistent;
  if (!consistent) {
    o.status = "verification_failed";
    o.code = kVerificationFailed;
  }
  return o;
}

std::string index_cell(const std::optional<GrowthIndex>& g, bool j) {
  if (!g) return "";
  return j ? to_string(g->j) : std::to_string(g->p);
}

Outcome cmd_sweep(const Ctx& c) {
  PhaseExpr a = phase_arg(c.pos[0]), b = phase_arg(c.pos[1]);
  if (a.poly.is_zero()) throw UsageError("S must be nonzero");
  unsigned threads = threads_of(c);
  Outcome o;
  if (!value(c, "ratios").empty()) {
    std::vector<Ratio> ratios;
    for (const auto& s : split(value(c, "ratios"), ','))
      ratios.push_back(s == "inf" ? Ratio{} : Ratio{rational_arg("ratios", s)});
    PairReport rep;
    try {
      rep = pair_sweep(a.poly, b.poly, ratios, threads);
    } catch (const std::invalid_argument& ex) {
      throw UsageError(ex.what());
    }
    o.results = to_json(rep);
    CsvWriter table({"ratio", "j", "p", "candidate", "status"});
    for (const auto& r : rep.rows)
      table.row({r.ratio ? to_string(*r.ratio) : "inf", index_cell(r.index, true), index_cell(r.index, false),
                 r.candidate_reason, to_string(r.status)});
    o.tables.emplace_back("sweep.csv", table.str());
    if (rep.verdict == Verdict::Fail) {
      o.status = "verification_failed";
      o.code = kVerificationFailed;
    }
    return o;
  }
  std::vector<Rational> grid;
  for (const auto& s : split(value(c, "t-grid"), ',')) grid.push_back(rational_arg("t-grid", s));
  if (grid.empty()) throw UsageError("--t-grid is empty");
  SweepReport rep;
  try {
    rep = stability_sweep(a.poly, b.poly, grid, threads);
  } catch (const AdaptError& ex) {
    o.results["error"] = ex.what();
    o.status = "failed";
    o.code = kVerificationFailed;
    return o;
  }
  o.results = to_json(rep);
  CsvWriter table({"t", "j", "p", "flags", "status"});
  for (const auto& r : rep.rows) {
    std::string flags;
    if (r.vertex_cancel) flags += "vertex_cancel";
    if (r.edge_degenerate) flags += std::string(flags.empty() ? "" : ";") + "edge_degenerate";
    table.row({to_string(r.t), index_cell(r.index, true), index_cell(r.index, false), flags, to_string(r.status)});
  }
  o.tables.emplace_back("sweep.csv", table.str());
  if (rep.verdict == Verdict::Fail) {
    o.status = "verification_failed";
    o.code = kVerificationFailed;
  }
  return o;
}

Outcome cmd_check_vdc(const Ctx& c) {
  std::vector<int> ks;
  for (const auto& s : split(value(c, "k"), ',')) {
    long long k = int_arg("k", s);
    if (k < 1 || k > 12) throw UsageError("--k values must lie in 1..12");
    ks.push_back(static_cast<int>(k));
  }
  long long count = int_arg("count", value(c, "count"));
  if (count < 1) throw UsageError("--count must be positive");
  Outcome o;
  CsvWriter table({"k", "f", "lo", "hi", "c", "eps", "measured", "bound", "ok"});
  Json per_k = Json::array();
  int violations = 0;
  for (int k : ks) {
    VdcEnsemble ens = vdc_ensemble(k, static_cast<int>(count), seed_of(c), true);
    violations += ens.violations;
    per_k.push_back({{"k", k},
                     {"instances", ens.instances},
                     {"violations", ens.violations},
                     {"rejected_draws", ens.rejected},
                     {"max_ratio", ens.max_ratio}});
    for (const auto& inst : ens.cases)
      table.row({std::to_string(k), inst.f.to_string('t'), to_string(inst.lo), to_string(inst.hi), to_string(inst.c),
                 to_string(inst.eps), format_double(inst.result.measured), format_double(inst.result.bound),
                 inst.result.ok ? "true" : "false"});
  }
  o.results["ensembles"] = per_k;
  o.results["violations"] = violations;
  o.tables.emplace_back("vdc.csv", table.str());
  if (violations > 0) {
    o.status = "verification_failed";
    o.code = kVerificationFailed;
  }
  return o;
}

Outcome dispatch(const Ctx& c) {
  if (c.command == "analyze") return cmd_analyze(c);
  if (c.command == "adapt") return cmd_adapt(c);
  if (c.command == "resolve") return cmd_resolve(c);
  if (c.command == "measure") return cmd_measure(c);
  if (c.command == "oscillate") return cmd_oscillate(c);
  if (c.command == "sweep") return cmd_sweep(c);
  if (c.command == "check-vdc") return cmd_check_vdc(c);
  throw UsageError("unknown command " + c.command);
}

// key = value lines; "command.key" restricts a key to one command.
std::map<std::string, std::string> read_config(const std::string& path, const std::string& command) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(t.substr(0, eq)), val = trim(t.substr(eq + 1));
    auto dot = key.find('.');
    if (dot != std::string::npos) {
      if (key.substr(0, dot) != command) continue;
      key = key.substr(dot + 1);
    }
    bool known = false;
    for (const auto& f : kFlags) known = known || key == f.name;
    if (!known) throw UsageError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    out[key] = val;
  }
  return out;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Newton polygon, resolution and sublevel-measure toolkit", "nsub"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  std::string config_path;
  app.add_option("--config", config_path, "key = value file with default flag values");

  struct Bound {
    CLI::App* sub;
    const CommandSpec* spec;
    std::vector<std::string> pos;
    std::map<std::string, std::string> raw;
    std::map<std::string, CLI::Option*> opts;
  };
  std::vector<std::unique_ptr<Bound>> bound;
  for (const auto& spec : kCommands) {
    auto b = std::make_unique<Bound>();
    b->spec = &spec;
    b->sub = app.add_subcommand(spec.name, spec.help);
    if (spec.positionals > 0) {
      b->sub->add_option("phase", b->pos, spec.positionals == 1 ? "phase expression" : "S and f (or S1 and S2)")
          ->expected(spec.positionals)
          ->required();
    }
    b->sub->add_option("--config", config_path, "key = value file with default flag values");
    for (const auto& [name, def] : spec.flags) {
      const char* help = "";
      for (const auto& f : kFlags)
        if (std::string(f.name) == name) help = f.help;
      b->opts[name] = b->sub->add_option(std::string("--") + name, b->raw[name], help);
    }
    bound.push_back(std::move(b));
  }

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  Bound* active = nullptr;
  for (auto& b : bound)
    if (b->sub->parsed()) active = b.get();
  if (!active) {
    err << "error: no command given\n";
    return kUsage;
  }

  Ctx ctx{active->spec->name, active->pos, {}, out, err};
  std::string out_dir;
  Outcome outcome;
  Json config = Json::object();
  try {
    std::map<std::string, std::string> file_vals;
    if (!config_path.empty()) file_vals = read_config(config_path, ctx.command);
    for (const auto& [name, def] : active->spec->flags) {
      std::string v = def;
      if (auto it = file_vals.find(name); it != file_vals.end()) v = it->second;
      if (active->opts[name]->count() > 0) v = active->raw[name];
      ctx.val[name] = v;
      if (std::string(name) != "out") config[name] = v;
    }
    out_dir = ctx.val["out"];
    outcome = dispatch(ctx);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    outcome = Outcome{};
    outcome.results["error"] = e.what();
    outcome.status = "failed";
    outcome.code = kVerificationFailed;
  }

  Json report = envelope(ctx.command, input_echo(ctx), config, outcome.results);
  report["status"] = outcome.status;
  std::string text = report.dump(2) + "\n";
  out << text;
  if (!out_dir.empty()) {
    try {
      std::filesystem::create_directories(out_dir);
      write_file(std::filesystem::path(out_dir) / (ctx.command + ".json"), text);
      for (const auto& [name, csv] : outcome.tables) write_file(std::filesystem::path(out_dir) / name, csv);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kUsage;
    }
  }
  if (outcome.code != kOk) err << ctx.command << ": " << outcome.status << "\n";
  return outcome.code;
}

}  // namespace nsub::cli
