#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <utility>

#include "freeineq/equilibrium.hpp"
#include "freeineq/functionals.hpp"
#include "freeineq/inequalities.hpp"
#include "freeineq/poincare.hpp"
#include "freeineq/positive_axis.hpp"

namespace freeineq::cli {

namespace {

using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitResidual = 2;
constexpr int kExitViolation = 3;

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json jnum(double x) {
  if (std::isfinite(x)) return x;
  return num(x);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw Error("usage", "--" + key + " expects a number, got '" + text + "'");
  }
  return v;
}

long long parse_integer(const std::string& key, const std::string& text) {
  long long v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw Error("usage", "--" + key + " expects an integer, got '" + text + "'");
  }
  return v;
}

std::vector<double> parse_doubles(const std::string& key, const std::string& text) {
  std::vector<double> v;
  for (const std::string& p : split(text, ',')) v.push_back(parse_double(key, p));
  return v;
}

// Config values may be numbers, strings or arrays; flags always arrive as strings.
std::string as_text(const std::string& key, const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return num(v.get<double>());
  if (v.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ',';
      s += as_text(key, v[i]);
    }
    return s;
  }
  throw Error("usage", "config key '" + key + "' has an unsupported value");
}

struct Sink {
  std::vector<std::pair<std::filesystem::path, std::string>> files;

  void add(const std::filesystem::path& p, std::string body) {
    files.emplace_back(p, std::move(body));
  }

  void flush() const {
    for (const auto& [path, body] : files) {
      if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
      std::ofstream f(path, std::ios::binary | std::ios::trunc);
      if (!f) throw Error("io", "cannot open " + path.string() + " for writing");
      f << body;
      if (!f) throw Error("io", "failed writing " + path.string());
    }
  }
};

void emit_error(std::ostream& err, const std::string& command, const std::string& code,
                const std::string& message, json extra = json::object()) {
  json j = {{"command", command}, {"error", code}, {"message", message}};
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  err << j.dump() << '\n';
}

Potential make_potential(const RunConfig& c) {
  if (c.family == "quadratic") return Potential::quadratic(c.rho.value_or(1.0));
  if (c.family == "quartic") return Potential::even_power(c.rho.value_or(1.0), 4.0);
  if (c.family == "even_power") return Potential::even_power(c.rho.value_or(1.0), c.p.value_or(4.0));
  if (c.family == "quadratic_plus_convex") {
    return Potential::quadratic_plus_convex(c.rho.value_or(1.0), c.kappa.value_or(1.0),
                                            c.p.value_or(4.0));
  }
  if (c.family == "mp") return Potential::linear_minus_log(c.r.value_or(1.0), c.s.value_or(0.0));
  throw Error("usage", "unknown family '" + c.family +
                           "' (quadratic, quartic, even_power, quadratic_plus_convex, mp)");
}

EquilibriumResult make_equilibrium(const RunConfig& c) {
  if (c.family == "mp") return mp_equilibrium(c.r.value_or(1.0), c.s.value_or(0.0));
  return solve_equilibrium(make_potential(c), c.coefficients);
}

// Curvature and exponent of the convexity certificate V - rho |x|^p.
std::pair<double, double> certificate(const RunConfig& c) {
  double rho = 0.0;
  double p = 2.0;
  if (c.family == "quadratic") {
    rho = c.rho.value_or(1.0);
  } else if (c.family == "quartic") {
    rho = c.rho.value_or(1.0);
    p = 4.0;
  } else if (c.family == "even_power") {
    rho = c.rho.value_or(1.0);
    p = c.p.value_or(4.0);
  } else if (c.family == "quadratic_plus_convex") {
    rho = c.rho.value_or(1.0);
  } else if (c.family == "mp") {
    rho = c.r.value_or(1.0);
  }
  return {c.curvature.value_or(rho), c.order.value_or(p)};
}

std::uint64_t require_seed(const RunConfig& c, const std::string& what) {
  if (!c.seed) throw Error("seed_required", what + " is randomized and needs an explicit --seed");
  return *c.seed;
}

struct LabelledMeasure {
  std::string label;
  Measure measure;
};

std::vector<LabelledMeasure> make_measures(const RunConfig& c, const EquilibriumResult* eq,
                                           bool positive_axis) {
  const std::string& spec = c.measure;
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto need_eq = [&] {
    if (!eq) throw Error("usage", "measure '" + spec + "' needs a potential family");
    return eq;
  };
  std::vector<LabelledMeasure> out;

  if (head == "equilibrium") {
    out.push_back({spec, Measure(need_eq()->measure)});
  } else if (head == "translate") {
    for (double m : parse_doubles("measure", arg)) {
      const ChebMeasure base = need_eq()->measure;
      out.push_back({"translate:" + num(m),
                     Measure(positive_axis ? sqrt_shift(base, m) : base.translated(m))});
    }
  } else if (head == "semicircle" || head == "arcsine" || head == "two-point") {
    const auto ab = parse_doubles("measure", arg);
    if (ab.size() != 2 || !(ab[0] < ab[1])) {
      throw Error("usage", "measure '" + spec + "' expects two increasing endpoints");
    }
    const SupportInterval S(ab[0], ab[1]);
    if (head == "semicircle") {
      out.push_back({spec, Measure(ChebMeasure(S, {1.0 / kPi, 0.0, -1.0 / kPi}))});
    } else if (head == "arcsine") {
      out.push_back({spec, Measure(ChebMeasure(S, {1.0 / kPi}))});
    } else {
      out.push_back({spec, Measure(GridMeasure::atomic({{ab[0], 0.5}, {ab[1], 0.5}}))});
    }
  } else if (head == "seed" || head == "perturb" || head == "shift") {
    std::uint64_t seed = 0;
    if (head == "seed") {
      seed = static_cast<std::uint64_t>(parse_integer("measure", arg));
    } else {
      seed = require_seed(c, "measure '" + head + "'");
    }
    const int count = c.count.value_or(10);
    if (count < 1) throw Error("usage", "--count must be positive");
    const auto family = head == "shift" ? shift_family(*need_eq(), count, seed)
                                        : perturbation_family(*need_eq(), count, seed);
    for (std::size_t i = 0; i < family.size(); ++i) {
      out.push_back({head + ":" + std::to_string(seed) + "#" + std::to_string(i),
                     Measure(family[i])});
    }
  } else {
    throw Error("usage", "unknown measure spec '" + spec +
                             "' (equilibrium, translate:m, semicircle:a,b, arcsine:a,b, "
                             "two-point:a,b, seed:N, perturb, shift)");
  }
  return out;
}

struct LabelledPhi {
  std::string label;
  TestFunction phi;
};

std::vector<LabelledPhi> make_test_functions(const RunConfig& c, SupportInterval S) {
  const std::string& spec = c.phi;
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  std::vector<LabelledPhi> out;
  if (head == "chebyshev") {
    const long long k = parse_integer("phi", arg);
    if (k < 0 || k > 512) throw Error("usage", "--phi chebyshev:k needs 0 <= k <= 512");
    out.push_back({spec, TestFunction::chebyshev(S, static_cast<int>(k))});
  } else if (head == "coeffs") {
    out.push_back({spec, TestFunction(S, parse_doubles("phi", arg))});
  } else if (head == "linear") {
    out.push_back({spec, TestFunction::interpolate([](double x) { return 1.0 + 2.0 * x; }, S, 1)});
  } else if (head == "inverse") {
    if (!(S.a() > 0.0)) throw Error("usage", "--phi inverse needs a support away from 0");
    out.push_back({spec, TestFunction::interpolate([](double x) { return 1.0 + 2.0 / x; }, S, 60)});
  } else if (head == "seed" || head == "random") {
    const std::uint64_t seed = head == "seed"
                                   ? static_cast<std::uint64_t>(parse_integer("phi", arg))
                                   : require_seed(c, "--phi random");
    const int count = c.count.value_or(10);
    if (count < 1) throw Error("usage", "--count must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < count; ++i) {
      std::vector<double> a(7);
      for (std::size_t k = 0; k < a.size(); ++k) a[k] = u(rng) / (1.0 + k);
      out.push_back({head + ":" + std::to_string(seed) + "#" + std::to_string(i),
                     TestFunction(S, a)});
    }
  } else {
    throw Error("usage", "unknown test function spec '" + spec +
                             "' (chebyshev:k, coeffs:c0,c1,..., linear, inverse, seed:N, random)");
  }
  return out;
}

json report_json(const InequalityReport& r, int index, const std::string& subject,
                 double tolerance) {
  json inputs = json::object();
  for (const auto& [k, v] : r.inputs) inputs[k] = v;
  json extras = json::object();
  for (const auto& [k, v] : r.extras) extras[k] = jnum(v);
  return {{"index", index},       {"kind", r.kind},
          {"subject", subject},   {"lhs", jnum(r.lhs)},
          {"rhs", jnum(r.rhs)},   {"gap", jnum(r.gap)},
          {"tolerance", jnum(tolerance)},
          {"verdict", to_string(r.verdict)},
          {"inputs", inputs},     {"extras", extras},
          {"notes", r.notes}};
}

json measure_json(const Measure& mu) {
  if (const auto* c = std::get_if<ChebMeasure>(&mu)) {
    std::vector<json> coeffs;
    for (double x : c->coeffs()) coeffs.push_back(jnum(x));
    return {{"type", "chebyshev"},
            {"support", {jnum(c->support().a()), jnum(c->support().b())}},
            {"coeffs", coeffs}};
  }
  const auto& g = std::get<GridMeasure>(mu);
  json atoms = json::array();
  for (const Atom& a : g.atoms()) atoms.push_back({jnum(a.x), jnum(a.w)});
  return {{"type", "grid"},
          {"support", {jnum(g.support().a()), jnum(g.support().b())}},
          {"nodes", g.nodes().size()},
          {"atoms", atoms}};
}

struct Check {
  InequalityReport report;
  std::string subject;
  std::optional<Measure> measure;
  std::optional<TestFunction> phi;
};

std::vector<Check> collect_checks(const RunConfig& c) {
  const std::string& kind = c.kind;
  std::vector<Check> checks;
  const bool plus = kind.rfind("plus-", 0) == 0;
  if (plus && c.family != "mp") {
    throw Error("usage", "--kind " + kind + " runs on the mp family (--family mp --r R --s S)");
  }

  if (kind == "transport" || kind == "lsi" || kind == "hwi") {
    const EquilibriumResult eq = make_equilibrium(c);
    const auto [rho, p] = certificate(c);
    for (const LabelledMeasure& m : make_measures(c, &eq, false)) {
      InequalityReport r = kind == "transport" ? check_transport(eq, rho, p, m.measure)
                           : kind == "lsi"     ? check_lsi(eq, rho, m.measure, p)
                                               : check_hwi(eq, rho, m.measure, p);
      checks.push_back({std::move(r), m.label, m.measure, std::nullopt});
    }
  } else if (kind == "bm") {
    const Potential V = make_potential(c);
    for (double a : c.weights) {
      checks.push_back({check_brunn_minkowski(V, V, V, a), "a=" + num(a), std::nullopt,
                        std::nullopt});
      checks.push_back({check_brunn_minkowski(V.plus_constant(1.0), V, V.plus_constant(a), a),
                        "a=" + num(a) + ",shifted", std::nullopt, std::nullopt});
    }
  } else if (kind == "poincare1") {
    const EquilibriumResult eq = make_equilibrium(c);
    const double rho = certificate(c).first;
    for (const LabelledPhi& f : make_test_functions(c, eq.support)) {
      checks.push_back({first_poincare(eq, rho, f.phi), f.label, std::nullopt, f.phi});
    }
  } else if (kind == "poincare2") {
    std::optional<EquilibriumResult> eq;
    const std::string head = c.measure.substr(0, c.measure.find(':'));
    if (head != "semicircle" && head != "arcsine" && head != "two-point") eq = make_equilibrium(c);
    for (const LabelledMeasure& m : make_measures(c, eq ? &*eq : nullptr, false)) {
      const PoincareBounds b = poincare_bounds(m.measure, c.basis);
      InequalityReport lower;
      lower.kind = "poincare_lower";
      lower.lhs = b.constant;
      lower.rhs = b.lower;
      lower.gap = b.constant - b.lower;
      InequalityReport upper;
      upper.kind = "poincare_upper";
      upper.lhs = b.upper;
      upper.rhs = b.constant;
      upper.gap = b.upper - b.constant;
      for (InequalityReport* r : {&lower, &upper}) {
        r->tolerance = 1e-9;
        r->verdict = classify(r->gap, r->tolerance);
        r->inputs["measure"] = m.label;
        r->inputs["basis"] = std::to_string(c.basis);
        r->extras["constant"] = b.constant;
        r->extras["diameter"] = b.diameter;
        r->extras["variance"] = b.variance;
        checks.push_back({*r, m.label, m.measure, std::nullopt});
      }
    }
  } else if (kind == "plus-transport" || kind == "plus-lsi" || kind == "plus-hwi") {
    const EquilibriumResult eq = make_equilibrium(c);
    const double rho = certificate(c).first;
    const int slot = kind == "plus-transport" ? 0 : kind == "plus-lsi" ? 1 : 2;
    for (const LabelledMeasure& m : make_measures(c, &eq, true)) {
      const auto reports = check_plus_inequalities(eq, rho, as_cheb(m.measure));
      checks.push_back({reports[slot], m.label, m.measure, std::nullopt});
    }
  } else if (kind == "plus-poincare") {
    const double r = c.r.value_or(1.0);
    const double s = c.s.value_or(0.0);
    const bool q_convex = plus_certifies(make_potential(c), 0.0);
    for (const LabelledPhi& f : make_test_functions(c, mp_support(r, s))) {
      checks.push_back({check_plus_poincare(q_convex, r, s, f.phi), f.label, std::nullopt, f.phi});
    }
  } else {
    throw Error("usage", "unknown --kind '" + kind +
                             "' (transport, lsi, hwi, bm, poincare1, poincare2, plus-transport, "
                             "plus-lsi, plus-hwi, plus-poincare)");
  }
  return checks;
}

struct CounterexampleRow {
  int n;
  double energy_gap;
  double closed_form;
  double distance;
  double ratio;
  double bound;
};

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "command", "family", "rho",     "p",       "kappa",        "r",      "s",
      "kind",    "measure", "phi",    "count",   "seed",         "curvature",
      "order",   "weights", "n",      "coefficients", "basis",  "points", "tolerance",
      "out"};
  return keys;
}

RunConfig merge_config(const std::string& command, const std::string& json_text,
                       const std::map<std::string, std::string>& flags) {
  std::map<std::string, std::string> values;
  if (!json_text.empty()) {
    json j;
    try {
      j = json::parse(json_text);
    } catch (const json::parse_error& e) {
      throw Error("config", std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error("config", "config must be a JSON object");
    const auto& keys = config_keys();
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) {
        throw Error("config", "unknown config key '" + it.key() + "'");
      }
      values[it.key()] = as_text(it.key(), it.value());
    }
  }
  for (const auto& [k, v] : flags) values[k] = v;

  RunConfig c;
  c.command = command;
  if (auto it = values.find("command"); it != values.end() && it->second != command) {
    throw Error("config", "config is for '" + it->second + "', not '" + command + "'");
  }
  auto text = [&](const char* key, std::string& dst) {
    if (auto it = values.find(key); it != values.end()) dst = it->second;
  };
  auto real = [&](const char* key, std::optional<double>& dst) {
    if (auto it = values.find(key); it != values.end()) dst = parse_double(key, it->second);
  };
  auto integer = [&](const char* key, int& dst, long long lo, long long hi) {
    if (auto it = values.find(key); it != values.end()) {
      const long long v = parse_integer(key, it->second);
      if (v < lo || v > hi) {
        throw Error("usage", std::string("--") + key + " must lie in [" + std::to_string(lo) +
                                 ", " + std::to_string(hi) + "]");
      }
      dst = static_cast<int>(v);
    }
  };

  text("family", c.family);
  real("rho", c.rho);
  real("p", c.p);
  real("kappa", c.kappa);
  real("r", c.r);
  real("s", c.s);
  text("kind", c.kind);
  text("measure", c.measure);
  text("phi", c.phi);
  if (values.count("count")) {
    int count = 0;
    integer("count", count, 1, 100000);
    c.count = count;
  }
  if (auto it = values.find("seed"); it != values.end()) {
    const long long v = parse_integer("seed", it->second);
    if (v < 0) throw Error("usage", "--seed must be nonnegative");
    c.seed = static_cast<unsigned long long>(v);
  }
  real("curvature", c.curvature);
  real("order", c.order);
  if (auto it = values.find("weights"); it != values.end()) {
    c.weights = parse_doubles("weights", it->second);
  }
  if (auto it = values.find("n"); it != values.end()) {
    c.n.clear();
    for (const std::string& p : split(it->second, ',')) {
      const long long v = parse_integer("n", p);
      if (v < -1000000 || v > 1000000) throw Error("usage", "--n entries are out of range");
      c.n.push_back(static_cast<int>(v));
    }
  }
  integer("coefficients", c.coefficients, 8, 4096);
  integer("basis", c.basis, 2, 256);
  integer("points", c.points, 2, 1000000);
  real("tolerance", c.tolerance);
  if (c.tolerance && !(*c.tolerance >= 0.0)) throw Error("usage", "--tolerance must be >= 0");
  text("out", c.out);
  if (c.out.empty()) throw Error("usage", "--out must not be empty");
  return c;
}

int run_equilibrium(const RunConfig& c, std::ostream& err) {
  const EquilibriumResult eq = make_equilibrium(c);
  const double tol = c.tolerance.value_or(1e-6);
  const SupportInterval& S = eq.support;

  std::string csv = "x,density\n";
  for (int j = 0; j < c.points; ++j) {
    const double x = S.a() + S.length() * (j + 0.5) / c.points;
    csv += num(x) + ',' + num(eq.measure.density_unchecked(x)) + '\n';
  }

  json params = json::object();
  for (const auto& [k, v] : eq.potential.params()) params[k] = jnum(v);
  const bool ok = eq.el_residual <= tol;
  json j = {{"command", "equilibrium"},
            {"family", c.family},
            {"potential", eq.potential.name()},
            {"params", params},
            {"endpoints", {jnum(S.a()), jnum(S.b())}},
            {"robin_constant", jnum(eq.robin_constant)},
            {"robin_spread", jnum(eq.robin_spread)},
            {"residual", jnum(eq.el_residual)},
            {"tolerance", jnum(tol)},
            {"energy", jnum(eq.energy)},
            {"mass_drift", jnum(eq.mass_drift)},
            {"coefficients", eq.measure.degree() + 1},
            {"warnings", eq.warnings},
            {"status", ok ? "ok" : "residual_above_tolerance"}};

  const std::filesystem::path dir(c.out);
  Sink sink;
  sink.add(dir / "equilibrium.json", j.dump(2) + '\n');
  sink.add(dir / "density.csv", csv);
  sink.flush();
  if (!ok) {
    emit_error(err, "equilibrium", "residual",
               "Euler-Lagrange residual " + num(eq.el_residual) + " exceeds " + num(tol),
               {{"residual", jnum(eq.el_residual)}, {"tolerance", jnum(tol)}});
    return kExitResidual;
  }
  return kExitOk;
}

int run_verify(const RunConfig& c, std::ostream& err) {
  if (c.kind.empty()) throw Error("usage", "verify needs --kind");
  const std::vector<Check> checks = collect_checks(c);

  std::string jsonl;
  std::string csv = "index,kind,subject,lhs,rhs,gap,tolerance,verdict\n";
  int worst = -1;
  double worst_margin = 0.0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const InequalityReport& r = checks[i].report;
    const double tol = c.tolerance.value_or(r.tolerance);
    const int idx = static_cast<int>(i);
    jsonl += report_json(r, idx, checks[i].subject, tol).dump() + '\n';
    csv += std::to_string(i) + ',' + r.kind + ",\"" + checks[i].subject + "\"," + num(r.lhs) +
           ',' + num(r.rhs) + ',' + num(r.gap) + ',' + num(tol) + ',' + to_string(r.verdict) +
           '\n';
    const double margin = std::isnan(r.gap) ? -INFINITY : r.gap + tol;
    if (margin < 0.0 && (worst < 0 || margin < worst_margin)) {
      worst = idx;
      worst_margin = margin;
    }
  }

  const std::filesystem::path dir(c.out);
  Sink sink;
  sink.add(dir / "reports.jsonl", jsonl);
  sink.add(dir / "summary.csv", csv);
  json witness;
  if (worst >= 0) {
    const Check& w = checks[worst];
    const double tol = c.tolerance.value_or(w.report.tolerance);
    witness = report_json(w.report, worst, w.subject, tol);
    if (w.measure) witness["measure"] = measure_json(*w.measure);
    if (w.phi) {
      std::vector<json> coeffs;
      for (double x : w.phi->coeffs()) coeffs.push_back(jnum(x));
      witness["phi"] = {{"support", {jnum(w.phi->support().a()), jnum(w.phi->support().b())}},
                        {"coeffs", coeffs}};
    }
    sink.add(dir / "witness.json", witness.dump(2) + '\n');
  }
  sink.flush();
  if (worst >= 0) {
    emit_error(err, "verify", "violated", "inequality violated beyond tolerance",
               {{"witness", witness}});
    return kExitViolation;
  }
  return kExitOk;
}

int run_counterexample(const RunConfig& c, std::ostream&) {
  if (c.n.empty()) throw Error("usage", "counterexample needs --n");
  std::vector<CounterexampleRow> rows;
  if (c.kind == "pinsker") {
    for (int n : c.n) {
      const PinskerRecord r = pinsker_counterexample(n);
      rows.push_back({n, r.energy_gap, r.closed_form, r.uniform_distance, r.ratio, r.ratio_bound});
    }
  } else if (c.kind == "arcsine-tv") {
    for (int n : c.n) {
      const ArcsineTvRecord r = arcsine_tv_example(n);
      rows.push_back({n, r.energy_gap, 1.0 / (2.0 * n), r.tv, r.energy_gap / (r.tv * r.tv),
                      r.tv_lower});
    }
  } else {
    throw Error("usage", "unknown counterexample --kind '" + c.kind + "' (pinsker, arcsine-tv)");
  }
  std::string csv = "n,energy_gap,closed_form,distance,ratio,bound\n";
  for (const CounterexampleRow& r : rows) {
    csv += std::to_string(r.n) + ',' + num(r.energy_gap) + ',' + num(r.closed_form) + ',' +
           num(r.distance) + ',' + num(r.ratio) + ',' + num(r.bound) + '\n';
  }
  Sink sink;
  sink.add(std::filesystem::path(c.out) / (c.kind + ".csv"), csv);
  sink.flush();
  return kExitOk;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Equilibrium measures and free functional inequalities", "freeineq"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  struct Sub {
    CLI::App* app;
    std::string config_path;
    std::map<std::string, std::string> raw;
    std::vector<std::pair<std::string, CLI::Option*>> opts;
  };
  std::map<std::string, Sub> subs;

  auto add = [&](Sub& s, const std::string& key, const std::string& help) {
    s.opts.emplace_back(key, s.app->add_option("--" + key, s.raw[key], help));
  };
  auto common = [&](Sub& s) {
    s.app->add_option("--config", s.config_path, "JSON config; flags take precedence")
        ->check(CLI::ExistingFile);
    add(s, "family", "quadratic | quartic | even_power | quadratic_plus_convex | mp");
    add(s, "rho", "quadratic coefficient (or power coefficient)");
    add(s, "p", "power for even_power / quadratic_plus_convex");
    add(s, "kappa", "weight of the convex part");
    add(s, "r", "linear coefficient of the mp family");
    add(s, "s", "logarithmic coefficient of the mp family");
    add(s, "coefficients", "Chebyshev coefficients for the equilibrium solve");
    add(s, "tolerance", "tolerance override");
    add(s, "out", "output directory");
  };

  subs["equilibrium"].app = app.add_subcommand("equilibrium", "solve an equilibrium measure");
  common(subs["equilibrium"]);
  add(subs["equilibrium"], "points", "rows in the density table");

  subs["verify"].app = app.add_subcommand("verify", "run an inequality checker over measures");
  common(subs["verify"]);
  for (const auto& [k, h] : std::vector<std::pair<std::string, std::string>>{
           {"kind", "transport | lsi | hwi | bm | poincare1 | poincare2 | plus-transport | "
                    "plus-lsi | plus-hwi | plus-poincare"},
           {"measure", "equilibrium | translate:m | semicircle:a,b | arcsine:a,b | "
                       "two-point:a,b | seed:N | perturb | shift"},
           {"phi", "chebyshev:k | coeffs:... | linear | inverse | seed:N | random"},
           {"count", "size of randomized families"},
           {"seed", "seed for randomized families"},
           {"curvature", "rho in the inequality (defaults from the family)"},
           {"order", "exponent p in the inequality"},
           {"weights", "Brunn-Minkowski interpolation weights"},
           {"basis", "polynomial basis size for Poincare constants"}}) {
    add(subs["verify"], k, h);
  }

  subs["counterexample"].app =
      app.add_subcommand("counterexample", "tabulate the Pinsker and arcsine examples");
  subs["counterexample"].app->add_option("--config", subs["counterexample"].config_path,
                                         "JSON config; flags take precedence")
      ->check(CLI::ExistingFile);
  add(subs["counterexample"], "kind", "pinsker | arcsine-tv");
  add(subs["counterexample"], "n", "comma separated list of n");
  add(subs["counterexample"], "tolerance", "tolerance override");
  add(subs["counterexample"], "out", "output directory");

  std::string command = "freeineq";
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    emit_error(err, command, "usage", e.what());
    return kExitFailure;
  }

  try {
    for (auto& [name, s] : subs) {
      if (!s.app->parsed()) continue;
      command = name;
      std::map<std::string, std::string> flags;
      for (const auto& [key, opt] : s.opts) {
        if (opt->count() > 0) flags[key] = s.raw[key];
      }
      std::string text;
      if (!s.config_path.empty()) {
        std::ifstream f(s.config_path, std::ios::binary);
        std::ostringstream buf;
        buf << f.rdbuf();
        text = buf.str();
      }
      const RunConfig cfg = merge_config(name, text, flags);
      if (name == "equilibrium") return run_equilibrium(cfg, err);
      if (name == "verify") return run_verify(cfg, err);
      return run_counterexample(cfg, err);
    }
  } catch (const Error& e) {
    emit_error(err, command, e.code(), e.what());
    return kExitFailure;
  } catch (const std::exception& e) {
    emit_error(err, command, "internal", e.what());
    return kExitFailure;
  }
  emit_error(err, command, "usage", "no subcommand");
  return kExitFailure;
}

}  // namespace freeineq::cli
