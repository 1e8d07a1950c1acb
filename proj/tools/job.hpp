#pragma once

// Command dispatch for the susyqes CLI. Every command produces a JSON result
// document; run_job never writes files itself.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "susyqes/susyqes.hpp"

namespace susyqes::cli {

using json = nlohmann::json;

enum ExitCode : int { kOk = 0, kValidationFailure = 1, kUsage = 2, kNumerical = 3 };

class UsageError : public Error {
 public:
  using Error::Error;
};

class AdmissibilityFailure : public ConstructionError {
 public:
  AdmissibilityFailure(const std::string& what, AdmissibilityReport report)
      : ConstructionError(what), report_(report) {}
  const AdmissibilityReport& report() const noexcept { return report_; }

 private:
  AdmissibilityReport report_;
};

struct JobConfig {
  std::string command;
  std::string family;
  std::string base;
  std::optional<int> k;
  std::optional<int> m;
  std::optional<double> alpha;
  std::optional<double> epsilon;
  double half_width = 12.0;
  long points = 4001;
  int levels = 6;
  double tol_riccati = 1e-9;
  double tol_spectrum = 1e-3;
  double tol_overlap = 0.999;
  std::string out;
  std::string format = "json";
  double perturb_w1 = 0.0;
};

inline json admissibility_json(const AdmissibilityReport& r) {
  return {{"min_dphi", r.min_dphi}, {"argmin_dphi", r.argmin_dphi}, {"node_count", r.node_count},
          {"monotone", r.monotone}, {"pass", r.passes}, {"reason", r.reason()}};
}

template <class T>
json opt_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

inline json to_json(const JobConfig& c) {
  json j;
  j["command"] = c.command;
  j["family"] = c.family;
  j["base"] = c.base;
  j["k"] = opt_json(c.k);
  j["m"] = opt_json(c.m);
  j["alpha"] = opt_json(c.alpha);
  j["epsilon"] = opt_json(c.epsilon);
  j["L"] = c.half_width;
  j["N"] = c.points;
  j["levels"] = c.levels;
  j["tol_riccati"] = c.tol_riccati;
  j["tol_spectrum"] = c.tol_spectrum;
  j["tol_overlap"] = c.tol_overlap;
  j["out"] = c.out;
  j["format"] = c.format;
  j["perturb_w1"] = c.perturb_w1;
  return j;
}

inline JobConfig config_from_json(const json& src) {
  const json& j = src.contains("config") ? src.at("config") : src;
  JobConfig c;
  try {
    c.command = j.at("command").get<std::string>();
    c.family = j.value("family", "");
    c.base = j.value("base", "");
    if (j.contains("k") && !j["k"].is_null()) c.k = j["k"].get<int>();
    if (j.contains("m") && !j["m"].is_null()) c.m = j["m"].get<int>();
    if (j.contains("alpha") && !j["alpha"].is_null()) c.alpha = j["alpha"].get<double>();
    if (j.contains("epsilon") && !j["epsilon"].is_null()) c.epsilon = j["epsilon"].get<double>();
    c.half_width = j.value("L", c.half_width);
    c.points = j.value("N", c.points);
    c.levels = j.value("levels", c.levels);
    c.tol_riccati = j.value("tol_riccati", c.tol_riccati);
    c.tol_spectrum = j.value("tol_spectrum", c.tol_spectrum);
    c.tol_overlap = j.value("tol_overlap", c.tol_overlap);
    c.out = j.value("out", "");
    c.format = j.value("format", c.format);
    c.perturb_w1 = j.value("perturb_w1", 0.0);
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed config: ") + e.what());
  }
  return c;
}

struct JobOutcome {
  json document;
  int exit_code = kOk;
  std::string csv;  // grid or table export when format == csv
};

inline json check(double value, double tol, bool pass) {
  return {{"value", value}, {"tol", tol}, {"pass", pass}};
}

inline json check_below(double value, double tol) { return check(value, tol, value < tol); }

inline json error_document(const std::string& kind, const std::string& message, int code) {
  return {{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}};
}

namespace detail {

// Everything the commands need about one configuration.
struct Setup {
  GeneratorFunction phi = GeneratorFunction::monomial();
  double epsilon = 0.0;
  std::optional<CesModel> model;  // set when the configuration is exactly solvable
  std::optional<SolvableBase> base;
  std::optional<double> gamma;
  bool ces = false;
};

inline int require_int(const std::optional<int>& v, const char* flag, const std::string& who) {
  if (!v) throw UsageError(who + " requires --" + flag);
  return *v;
}

inline double require_double(const std::optional<double>& v, const char* flag, const std::string& who) {
  if (!v) throw UsageError(who + " requires --" + flag);
  return *v;
}

inline bool same_value(double a, double b) { return std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(b)); }

inline void require_admissible(const GeneratorFunction& g, const JobConfig& c) {
  const auto rep = check_admissible(g, Interval{-c.half_width, c.half_width});
  if (!rep.passes) throw AdmissibilityFailure(g.name() + " is not admissible: " + rep.reason(), rep);
}

inline Setup resolve(const JobConfig& c) {
  if (c.family.empty() == c.base.empty()) throw UsageError("exactly one of --family or --base is required");
  if (c.levels < 1 || c.levels > 12) throw UsageError("--levels must be in 1..12");
  if (!(c.tol_riccati > 0.0) || !(c.tol_spectrum > 0.0)) throw UsageError("tolerances must be positive");
  Setup s;
  if (!c.base.empty()) {
    if (c.epsilon) throw UsageError("--epsilon is fixed by the base and index; do not pass it with --base");
    const int k = require_int(c.k, "k", "--base");
    if (c.base == "harmonic") {
      s.base = SolvableBase::harmonic();
    } else if (c.base == "rosen-morse") {
      s.base = SolvableBase::rosen_morse(require_double(c.alpha, "alpha", "--base rosen-morse"));
    } else {
      throw UsageError("unknown base '" + c.base + "' (harmonic, rosen-morse)");
    }
    require_admissible(phi_from_dual(*s.base, k), c);
    s.model = make_ces_model(*s.base, k, Interval{-c.half_width, c.half_width});
    s.phi = s.model->phi;
    s.epsilon = s.model->epsilon;
    s.ces = true;
    if (s.base->kind() == BaseKind::Harmonic) s.gamma = 1.0;
    return s;
  }
  if (c.family == "monomial") {
    s.phi = GeneratorFunction::monomial();
    s.epsilon = require_double(c.epsilon, "epsilon", "--family monomial");
  } else if (c.family == "hermite-odd") {
    const int k = require_int(c.k, "k", "--family hermite-odd");
    s.phi = GeneratorFunction::hermite_odd(k);
    require_admissible(s.phi, c);
    s.epsilon = c.epsilon.value_or(2.0 * k + 1.0);
    s.gamma = s.epsilon / (2.0 * k + 1.0);
    if (same_value(s.epsilon, 2.0 * k + 1.0)) {
      s.ces = true;
      s.base = SolvableBase::harmonic();
      s.model = make_ces_model(*s.base, k, Interval{-c.half_width, c.half_width});
    }
  } else if (c.family == "hermite-ratio") {
    const int k = require_int(c.k, "k", "--family hermite-ratio");
    const int m = require_int(c.m, "m", "--family hermite-ratio");
    s.phi = GeneratorFunction::hermite_ratio(k, m);
    require_admissible(s.phi, c);
    s.epsilon = c.epsilon.value_or(2.0 * k - 2.0 * m + 1.0);
    if (same_value(s.epsilon, 2.0 * k - 2.0 * m + 1.0)) {
      s.ces = true;
      s.model = make_hermite_ratio_ces(k, m, Interval{-c.half_width, c.half_width});
    }
  } else if (c.family == "sinh") {
    const int k = require_int(c.k, "k", "--family sinh");
    const double a = require_double(c.alpha, "alpha", "--family sinh");
    s.phi = GeneratorFunction::sinh_family(k, a);
    require_admissible(s.phi, c);
    const double ek = 0.5 * ((a + k) * (a + k) - a * a);
    s.epsilon = c.epsilon.value_or(ek);
    if (a > 1.0 && same_value(s.epsilon, ek)) {
      s.ces = true;
      s.base = SolvableBase::rosen_morse(a);
      s.model = make_ces_model(*s.base, k, Interval{-c.half_width, c.half_width});
    }
  } else {
    throw UsageError("unknown family '" + c.family + "' (monomial, hermite-odd, hermite-ratio, sinh)");
  }
  require_positive_gap(s.epsilon);
  if (c.family == "monomial") require_admissible(s.phi, c);
  return s;
}

struct Built {
  Setup setup;
  SuperpotentialPair pair;
  EigenPair eig;
  Grid grid;
};

inline Built build(const JobConfig& c) {
  auto s = resolve(c);
  if (c.points < 0) throw UsageError("--N must be positive");
  Grid grid(c.half_width, static_cast<std::size_t>(c.points));
  auto pair = superpotentials_from_phi(s.phi, s.epsilon, Interval{-c.half_width, c.half_width});
  if (c.perturb_w1 != 0.0) pair.w1 = pair.w1.plus_constant(c.perturb_w1);
  EigenPair eig(s.phi, s.epsilon);
  return {std::move(s), std::move(pair), std::move(eig), grid};
}

inline json construction_json(const Built& b) {
  json j;
  j["generator"] = b.setup.phi.name();
  j["epsilon"] = b.setup.epsilon;
  j["gamma"] = opt_json(b.setup.gamma);
  j["ces"] = b.setup.ces;
  j["base"] = b.setup.base ? json(b.setup.base->name()) : json(nullptr);
  j["E0"] = 0.0;
  j["E1"] = b.setup.epsilon;
  j["psi0_closed_form"] = b.eig.closed_form();
  j["V_minus_at_0"] = partner_potentials(b.pair.w).minus(0.0);
  return j;
}

struct Validation {
  json doc;
  bool pass = true;
};

inline Validation validate(const JobConfig& c, const Built& b) {
  Validation v;
  const double span = std::min(8.0, c.half_width);
  const auto xs = linspace(-span, span, 1001);

  const double ric = riccati_residual(b.pair.w, b.pair.w1, b.setup.epsilon, xs);
  v.doc["riccati"] = check_below(ric, c.tol_riccati);
  v.doc["riccati"]["interval"] = {-span, span};
  v.doc["riccati"]["samples"] = 1001;

  const auto pp = partner_potentials(b.pair);
  double shift = 0.0;
  for (double x : xs) shift = std::max(shift, std::fabs(pp.shift_at(x) - b.setup.epsilon));
  v.doc["partner_shift"] = check_below(shift, 1e-10);

  const auto sw = unbroken_susy_check(b.pair.w, span);
  const auto sw1 = unbroken_susy_check(b.pair.w1, span);
  v.doc["unbroken_susy"] = {{"probe", span},
                            {"W", {{"sign_minus", sw.sign_minus}, {"sign_plus", sw.sign_plus}, {"pass", sw.pass}}},
                            {"W1", {{"sign_minus", sw1.sign_minus}, {"sign_plus", sw1.sign_plus}, {"pass", sw1.pass}}}};

  const auto adm = check_admissible(b.setup.phi, Interval{-c.half_width, c.half_width});
  v.doc["admissibility"] = admissibility_json(adm);

  const auto psi0 = b.eig.sample(b.grid, 0);
  const auto psi1 = b.eig.sample(b.grid, 1);
  const int n0 = node_count(psi0);
  const int n1 = node_count(psi1);
  v.doc["nodes"] = {{"psi0", {{"value", n0}, {"expected", 0}, {"pass", n0 == 0}}},
                    {"psi1", {{"value", n1}, {"expected", 1}, {"pass", n1 == 1}}}};

  v.pass = v.doc["riccati"]["pass"].get<bool>() && v.doc["partner_shift"]["pass"].get<bool>() && sw.pass &&
           sw1.pass && adm.passes && n0 == 0 && n1 == 1;

  if (b.setup.model) {
    const auto ode = phi_ode_residual(*b.setup.model, linspace(-span, span, 1001));
    v.doc["phi_ode"] = check_below(ode, 1e-10);
    v.pass = v.pass && ode < 1e-10;
  }
  return v;
}

inline json oracle_block(const JobConfig& c, const Built& b, bool& pass) {
  OracleOptions opt;
  opt.levels = static_cast<std::size_t>(c.levels);
  const auto pp = partner_potentials(b.pair.w);
  const auto res = solve_spectrum([&](double x) { return pp.minus(x); }, b.grid, opt);

  std::vector<std::optional<double>> expected(opt.levels);
  std::optional<double> continuum;
  bool derived = false;
  if (b.setup.model) {
    const auto ex = exact_spectrum(*b.setup.model, c.levels - 1);
    for (std::size_t i = 0; i < ex.energies.size() && i < opt.levels; ++i) expected[i] = ex.energies[i];
    continuum = ex.continuum;
    derived = ex.derived_by_chain;
  } else {
    expected[0] = 0.0;
    if (opt.levels > 1) expected[1] = b.setup.epsilon;
  }

  const auto psi0 = b.eig.sample(b.grid, 0);
  const auto psi1 = b.eig.sample(b.grid, 1);
  json rows = json::array();
  pass = true;
  for (std::size_t i = 0; i < opt.levels; ++i) {
    json row;
    row["level"] = i;
    row["oracle"] = res.eigenvalues[i];
    row["oracle_raw"] = res.raw_eigenvalues[i];
    row["refinement_shift"] = res.refinement_shift[i];
    row["expected"] = opt_json(expected[i]);
    if (expected[i]) {
      const double dev = std::fabs(res.eigenvalues[i] - *expected[i]);
      row["deviation"] = check_below(dev, c.tol_spectrum);
      pass = pass && dev < c.tol_spectrum;
    } else {
      row["deviation"] = nullptr;
    }
    if (i < 2) {
      const double ov = overlap_sampled(i == 0 ? psi0 : psi1, res.eigenvectors[i], b.grid);
      row["overlap"] = check(ov, c.tol_overlap, ov >= c.tol_overlap);
      pass = pass && ov >= c.tol_overlap;
    } else {
      row["overlap"] = nullptr;
    }
    rows.push_back(row);
  }
  json j;
  j["grid"] = {{"L", b.grid.half_width()}, {"N", b.grid.size()}, {"h", b.grid.spacing()}};
  j["extrapolated"] = res.extrapolated;
  j["levels"] = rows;
  j["continuum_threshold"] = opt_json(continuum);
  j["levels_beyond_E1_derived_by_susy_chain"] = derived;
  j["pass"] = pass;
  return j;
}

inline std::string grid_csv(const Built& b) {
  const auto xs = b.grid.nodes();
  auto psi0 = b.eig.sample(b.grid, 0);
  auto psi1 = b.eig.sample(b.grid, 1);
  const double h = b.grid.spacing();
  double n0 = 0.0;
  double n1 = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    n0 += psi0[i] * psi0[i] * h;
    n1 += psi1[i] * psi1[i] * h;
  }
  const auto pp = partner_potentials(b.pair.w);
  std::ostringstream os;
  os.precision(17);
  os << "x,V_minus,V_plus,W,W1,psi0,psi1\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    os << x << ',' << pp.minus(x) << ',' << pp.plus(x) << ',' << b.pair.w(x) << ',' << b.pair.w1(x) << ','
       << psi0[i] / std::sqrt(n0) << ',' << psi1[i] / std::sqrt(n1) << '\n';
  }
  return os.str();
}

inline json normalization_json(const Built& b) {
  const double L = b.grid.half_width();
  const double c0 = 1.0 / std::sqrt(b.eig.norm_squared(0, L));
  const double c1 = 1.0 / std::sqrt(b.eig.norm_squared(1, L));
  return {{"interval", {-L, L}}, {"C0", c0}, {"C1", c1}};
}

inline json ces_block(const JobConfig& c, const Built& b, bool& pass) {
  const CesModel& model = *b.setup.model;
  const SolvableBase& base = *b.setup.base;
  const double span = std::min(8.0, c.half_width);
  const auto xs = linspace(-span, span, 1001);
  json j;
  j["model"] = model.name();
  j["epsilon_k"] = model.epsilon;

  // Two routes to V_-(x,k).
  double two_route = 0.0;
  std::string second_route;
  for (double x : xs) {
    const double vm = model.potential(x);
    double other = 0.0;
    if (base.kind() == BaseKind::RosenMorse) {
      other = rosen_morse_ces_closed(base.alpha(), model.k, x);
      second_route = "tanh^2-Phi_k closed form";
    } else {
      const auto ex1 = superpotentials_from_phi(GeneratorFunction::hermite_odd(model.k), 2.0 * model.k + 1.0);
      other = partner_potentials(ex1.w).minus(x);
      second_route = "hermite-odd gamma=1 QES potential";
    }
    two_route = std::max(two_route, std::fabs(vm - other) / std::max(1.0, std::fabs(other)));
  }
  j["two_route"] = check_below(two_route, 1e-9);
  j["two_route"]["second_route"] = second_route;
  pass = pass && two_route < 1e-9;

  if (base.kind() == BaseKind::RosenMorse && model.k == 3) {
    double r = 0.0;
    for (double x : xs) {
      const double e = rosen_morse_ces_k3_explicit(base.alpha(), x);
      r = std::max(r, std::fabs(model.potential(x) - e) / std::max(1.0, std::fabs(e)));
    }
    j["explicit_k3"] = check_below(r, 1e-9);
    pass = pass && r < 1e-9;
  }

  double w1_consistency = 0.0;
  for (double x : xs) w1_consistency = std::max(w1_consistency, std::fabs(b.pair.w1(x) - model.w1(x)));
  j["w1_consistency"] = check_below(w1_consistency, 1e-10);
  pass = pass && w1_consistency < 1e-10;

  const auto xis = linspace(-1.2, 1.2, 101);
  double dual_rule = 0.0;
  double involution = 0.0;
  for (double xi : xis) {
    const auto rule = base.dual_by_rule(xi);
    dual_rule = std::max(dual_rule, std::abs(rule - std::complex<double>(base.dual(xi).w, 0.0)));
    involution = std::max(involution, std::abs(base.double_dual(xi) - std::complex<double>(base.w1(xi).w, 0.0)));
  }
  j["dual_rule"] = check_below(dual_rule, 1e-12);
  j["double_dual"] = check_below(involution, 1e-12);
  pass = pass && dual_rule < 1e-12 && involution < 1e-12;

  const auto sh = base.shape();
  const auto dsh = base.dual_shape();
  const double si = shape_invariance_residual(base.family(), sh.param, sh.param1, sh.remainder, xs);
  const double dsi = shape_invariance_residual(base.dual_family(), dsh.param, dsh.param1, dsh.remainder, xis);
  j["shape_invariance"] = check_below(si, 1e-10);
  j["shape_invariance"]["params"] = {sh.param, sh.param1};
  j["shape_invariance"]["R"] = sh.remainder;
  j["dual_shape_invariance"] = check_below(dsi, 1e-10);
  j["dual_shape_invariance"]["params"] = {dsh.param, dsh.param1};
  j["dual_shape_invariance"]["R"] = dsh.remainder;
  pass = pass && si < 1e-10 && dsi < 1e-10;

  const double ode = phi_ode_residual(model, xs);
  j["phi_ode"] = check_below(ode, 1e-10);
  pass = pass && ode < 1e-10;
  return j;
}

inline JobOutcome run_checked(const JobConfig& c) {
  static const std::vector<std::string> commands{"construct", "validate", "spectrum", "ces", "export-grid"};
  if (std::find(commands.begin(), commands.end(), c.command) == commands.end()) {
    throw UsageError("unknown command '" + c.command + "'");
  }
  if (c.format != "json" && c.format != "csv") throw UsageError("--format must be json or csv");
  if (c.command == "ces" && c.base.empty()) throw UsageError("ces requires --base");
  if (c.command == "validate" && c.format == "csv") throw UsageError("validate has no csv output");

  JobOutcome out;
  json& doc = out.document;
  doc["tool"] = "susyqes";
  doc["command"] = c.command;
  doc["config"] = to_json(c);

  const Built b = build(c);
  doc["construction"] = construction_json(b);
  auto val = validate(c, b);
  doc["validation"] = val.doc;
  bool pass = val.pass;

  if (c.command == "construct" || c.command == "export-grid" || c.command == "ces") {
    doc["normalization"] = normalization_json(b);
  }
  if (c.command == "ces") {
    doc["ces"] = ces_block(c, b, pass);
  }
  if (c.command == "spectrum" || c.command == "ces") {
    bool opass = true;
    doc["oracle"] = oracle_block(c, b, opass);
    pass = pass && opass;
  }
  const bool want_grid = c.command == "export-grid" || (c.format == "csv" && c.command != "spectrum");
  if (want_grid) {
    out.csv = grid_csv(b);
    doc["grid_export"] = {{"path", c.out.empty() ? json(nullptr) : json(c.out)},
                          {"columns", {"x", "V_minus", "V_plus", "W", "W1", "psi0", "psi1"}},
                          {"rows", b.grid.size()}};
  } else if (c.command == "spectrum" && c.format == "csv") {
    std::ostringstream os;
    os.precision(17);
    os << "level,oracle,expected,deviation,overlap\n";
    for (const auto& row : doc["oracle"]["levels"]) {
      os << row["level"].get<int>() << ',' << row["oracle"].get<double>() << ',';
      if (!row["expected"].is_null()) os << row["expected"].get<double>();
      os << ',';
      if (!row["deviation"].is_null()) os << row["deviation"]["value"].get<double>();
      os << ',';
      if (!row["overlap"].is_null()) os << row["overlap"]["value"].get<double>();
      os << '\n';
    }
    out.csv = os.str();
    doc["grid_export"] = nullptr;
  } else {
    doc["grid_export"] = nullptr;
  }
  out.exit_code = pass ? kOk : kValidationFailure;
  doc["status"] = {{"pass", pass}, {"exit_code", out.exit_code}};
  return out;
}

}  // namespace detail

/// Runs one job; errors become an error document and the matching exit code.
inline JobOutcome run_job(const JobConfig& c) {
  try {
    return detail::run_checked(c);
  } catch (const UsageError& e) {
    return {error_document("usage", e.what(), kUsage), kUsage, {}};
  } catch (const InputError& e) {
    return {error_document("parameter", e.what(), kUsage), kUsage, {}};
  } catch (const CapacityError& e) {
    return {error_document("parameter", e.what(), kUsage), kUsage, {}};
  } catch (const AdmissibilityFailure& e) {
    JobOutcome o{error_document("admissibility", e.what(), kValidationFailure), kValidationFailure, {}};
    o.document["admissibility"] = admissibility_json(e.report());
    o.document["config"] = to_json(c);
    return o;
  } catch (const ConstructionError& e) {
    JobOutcome o{error_document("construction", e.what(), kValidationFailure), kValidationFailure, {}};
    o.document["config"] = to_json(c);
    return o;
  } catch (const RangeError& e) {
    auto d = error_document("numerical", e.what(), kNumerical);
    d["error"]["threshold"] = e.threshold();
    return {d, kNumerical, {}};
  } catch (const NumericalError& e) {
    auto d = error_document("numerical", e.what(), kNumerical);
    d["error"]["achieved"] = e.achieved();
    return {d, kNumerical, {}};
  } catch (const DomainError& e) {
    return {error_document("numerical", e.what(), kNumerical), kNumerical, {}};
  }
}

}  // namespace susyqes::cli
