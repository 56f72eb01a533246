#pragma once

// Runs every solver on one functional and collects the values into a
// comparison report (JSON and text renderings).

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <json.hpp>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bellcc/ccp.hpp"
#include "bellcc/classical.hpp"
#include "bellcc/errors.hpp"
#include "bellcc/functional.hpp"
#include "bellcc/ptm.hpp"
#include "bellcc/quantum.hpp"

namespace bellcc {

struct ReportOptions {
  std::string name;  // free-form instance label
  int da = 0;        // 0 means d
  int db = 0;        // 0 means d
  SeesawOptions seesaw;
  double aii_tol = 1e-6;
  bool force_aii = false;
  double bell_cap = kDefaultBellCap;
  double ccp_cap = kDefaultCcpCap;
  bool timings = false;
};

struct Report {
  struct Instance {
    std::string name;
    int d = 0, mA = 0, mB = 0, N = 0, K = 0;
    int terms = 0;
    bool uniform_p = false;
    bool operator==(const Instance&) const = default;
  };
  struct ClassicalBound {
    double value = 0.0;
    std::vector<int> a, b;
    bool operator==(const ClassicalBound&) const = default;
  };
  struct CcpBoundEntry {
    bool computed = false;
    double value = 0.0;
    std::vector<int> messaging;  // m(x0, x) at x0*mA + x
    std::string note;
    bool operator==(const CcpBoundEntry&) const = default;
  };
  struct AdditiveBound {
    double value = 0.0;
    std::vector<int> b;
    bool operator==(const AdditiveBound&) const = default;
  };
  struct Entangled {
    double value = 0.0;
    int da = 0, db = 0, restarts = 0;
    bool converged = false;
    bool operator==(const Entangled&) const = default;
  };
  struct Aii {
    bool pass = false;
    double deviation = 0.0;
    double tol = 0.0;
    bool operator==(const Aii&) const = default;
  };
  struct MappedPtm {
    std::optional<double> value;  // empty when AII is violated and not forced
    bool guaranteed = false;
    std::string status;  // "ok", "AII violated", "forced", "not applicable"
    bool operator==(const MappedPtm&) const = default;
  };
  struct Ptm {
    double value = 0.0;
    int restarts = 0;
    bool converged = false;
    bool operator==(const Ptm&) const = default;
  };

  std::string version = "1";
  Instance instance;
  ClassicalBound classical_bell_bound;
  CcpBoundEntry ccp_general_bound;
  AdditiveBound ccp_additive_bound;  // Bob restricted to G = m + b(y)
  Entangled entangled_best_found;
  Aii aii_check;
  MappedPtm mapped_ptm;
  Ptm ptm_best_found;
  std::map<std::string, double> timings;  // seconds; empty unless requested
  std::uint64_t seed = 0;
  double tol = 0.0;

  bool operator==(const Report&) const = default;
};

// Differences derived from the stored values; never stored themselves.
struct Comparisons {
  std::optional<double> ccp_minus_bell;
  double entangled_minus_bell = 0.0;
  double ptm_minus_entangled = 0.0;
  std::optional<double> ptm_minus_mapped;
};

inline Comparisons compare(const Report& r) {
  Comparisons c;
  if (r.ccp_general_bound.computed)
    c.ccp_minus_bell = r.ccp_general_bound.value - r.classical_bell_bound.value;
  c.entangled_minus_bell = r.entangled_best_found.value - r.classical_bell_bound.value;
  c.ptm_minus_entangled = r.ptm_best_found.value - r.entangled_best_found.value;
  if (r.mapped_ptm.value) c.ptm_minus_mapped = r.ptm_best_found.value - *r.mapped_ptm.value;
  return c;
}

inline Report build_report(const BellFunctional& f, const ReportOptions& opts) {
  using Clock = std::chrono::steady_clock;
  const auto since = [](Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
  };
  require_valid(f);
  const int d = f.d();
  Report r;
  r.seed = opts.seesaw.seed;
  r.tol = opts.seesaw.tol;
  r.instance = {opts.name, d, f.mA(), f.mB(), f.N, f.K, static_cast<int>(f.terms.size()), true};
  for (double v : f.scenario.p)
    if (v != f.scenario.p.front()) r.instance.uniform_p = false;

  auto t0 = Clock::now();
  const BellBound bb = bell_bound(f, {opts.bell_cap, opts.seesaw.threads});
  r.classical_bell_bound = {bb.value, bb.argmax.a, bb.argmax.b};
  if (opts.timings) r.timings["classicalBellBound"] = since(t0);

  const CcpGame game = build_game(f);
  t0 = Clock::now();
  try {
    const CcpBound cb = ccp_bound_general(game, {opts.ccp_cap, opts.seesaw.threads});
    r.ccp_general_bound = {true, cb.value, cb.argmax.m, ""};
  } catch (const InfeasibleError& e) {
    r.ccp_general_bound = {false, 0.0, {}, e.what()};
  }
  if (opts.timings) r.timings["ccpGeneralBound"] = since(t0);
  const AdditiveCcpBound ab = ccp_bound_additive(game, {opts.ccp_cap, opts.seesaw.threads});
  r.ccp_additive_bound = {ab.value, ab.b};

  const int da = opts.da > 0 ? opts.da : d;
  const int db = opts.db > 0 ? opts.db : d;
  t0 = Clock::now();
  const SeesawBellResult sb = seesaw_bell(f, da, db, opts.seesaw);
  r.entangled_best_found = {sb.value, da, db, opts.seesaw.restarts, sb.converged};
  if (opts.timings) r.timings["entangledBestFound"] = since(t0);

  const MarginalCheck mc = check_uniform_marginals(sb.rho, sb.A, opts.aii_tol);
  r.aii_check = {mc.pass, mc.worst_deviation, opts.aii_tol};

  if (db != d) {
    r.mapped_ptm = {std::nullopt, false, "not applicable"};
  } else if (!mc.pass && !opts.force_aii) {
    r.mapped_ptm = {std::nullopt, false, "AII violated"};
  } else {
    const PtmFromBell pf = ptm_from_bell(game, sb.rho, sb.A, opts.aii_tol, opts.force_aii);
    r.mapped_ptm = {ptm_value(game, pf.prep, sb.B), pf.guaranteed, pf.guaranteed ? "ok" : "forced"};
  }

  t0 = Clock::now();
  const SeesawPtmResult sp = seesaw_ptm(game, opts.seesaw);
  r.ptm_best_found = {sp.value, opts.seesaw.restarts, sp.converged};
  if (opts.timings) r.timings["ptmBestFound"] = since(t0);
  return r;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::ordered_json report_to_json(const Report& r) {
  using J = nlohmann::ordered_json;
  J j;
  j["version"] = r.version;
  j["instance"] = {{"name", r.instance.name}, {"d", r.instance.d},   {"mA", r.instance.mA},
                   {"mB", r.instance.mB},     {"N", r.instance.N},   {"K", r.instance.K},
                   {"terms", r.instance.terms}, {"uniformP", r.instance.uniform_p}};
  j["classicalBellBound"] = {{"value", r.classical_bell_bound.value},
                             {"a", r.classical_bell_bound.a},
                             {"b", r.classical_bell_bound.b}};
  J ccp = {{"computed", r.ccp_general_bound.computed}};
  if (r.ccp_general_bound.computed) {
    ccp["value"] = r.ccp_general_bound.value;
    ccp["messaging"] = r.ccp_general_bound.messaging;
  } else {
    ccp["note"] = r.ccp_general_bound.note;
  }
  j["ccpGeneralBound"] = ccp;
  j["ccpAdditiveBound"] = {{"value", r.ccp_additive_bound.value}, {"b", r.ccp_additive_bound.b}};
  j["entangledBestFound"] = {{"value", r.entangled_best_found.value},
                             {"dims", {r.entangled_best_found.da, r.entangled_best_found.db}},
                             {"restarts", r.entangled_best_found.restarts},
                             {"converged", r.entangled_best_found.converged}};
  j["aiiCheck"] = {{"pass", r.aii_check.pass},
                   {"deviation", r.aii_check.deviation},
                   {"tol", r.aii_check.tol}};
  if (r.mapped_ptm.value)
    j["theorem3Value"] = *r.mapped_ptm.value;
  else
    j["theorem3Value"] = r.mapped_ptm.status;
  j["theorem3Status"] = r.mapped_ptm.status;
  j["theorem3Guaranteed"] = r.mapped_ptm.guaranteed;
  j["ptmBestFound"] = {{"value", r.ptm_best_found.value},
                       {"restarts", r.ptm_best_found.restarts},
                       {"converged", r.ptm_best_found.converged}};
  const Comparisons c = compare(r);
  J comp;
  if (c.ccp_minus_bell) comp["ccpMinusBell"] = *c.ccp_minus_bell;
  comp["entangledMinusBell"] = c.entangled_minus_bell;
  comp["ptmMinusEntangled"] = c.ptm_minus_entangled;
  if (c.ptm_minus_mapped) comp["ptmMinusTheorem3"] = *c.ptm_minus_mapped;
  j["comparisons"] = comp;
  if (!r.timings.empty()) j["timings"] = r.timings;
  j["seed"] = r.seed;
  j["tol"] = r.tol;
  return j;
}

inline Report report_from_json(const nlohmann::json& j) {
  try {
    Report r;
    r.version = j.at("version").get<std::string>();
    if (r.version != "1") throw InputError("unsupported report version " + r.version);
    const auto& in = j.at("instance");
    r.instance = {in.at("name").get<std::string>(), in.at("d").get<int>(),  in.at("mA").get<int>(),
                  in.at("mB").get<int>(),           in.at("N").get<int>(),  in.at("K").get<int>(),
                  in.at("terms").get<int>(),        in.at("uniformP").get<bool>()};
    const auto& cb = j.at("classicalBellBound");
    r.classical_bell_bound = {cb.at("value").get<double>(), cb.at("a").get<std::vector<int>>(),
                              cb.at("b").get<std::vector<int>>()};
    const auto& ccp = j.at("ccpGeneralBound");
    r.ccp_general_bound.computed = ccp.at("computed").get<bool>();
    if (r.ccp_general_bound.computed) {
      r.ccp_general_bound.value = ccp.at("value").get<double>();
      r.ccp_general_bound.messaging = ccp.at("messaging").get<std::vector<int>>();
    } else {
      r.ccp_general_bound.note = ccp.at("note").get<std::string>();
    }
    const auto& ab = j.at("ccpAdditiveBound");
    r.ccp_additive_bound = {ab.at("value").get<double>(), ab.at("b").get<std::vector<int>>()};
    const auto& eb = j.at("entangledBestFound");
    r.entangled_best_found = {eb.at("value").get<double>(), eb.at("dims").at(0).get<int>(),
                              eb.at("dims").at(1).get<int>(), eb.at("restarts").get<int>(),
                              eb.at("converged").get<bool>()};
    const auto& aii = j.at("aiiCheck");
    r.aii_check = {aii.at("pass").get<bool>(), aii.at("deviation").get<double>(),
                   aii.at("tol").get<double>()};
    r.mapped_ptm.status = j.at("theorem3Status").get<std::string>();
    r.mapped_ptm.guaranteed = j.at("theorem3Guaranteed").get<bool>();
    if (j.at("theorem3Value").is_number()) r.mapped_ptm.value = j.at("theorem3Value").get<double>();
    const auto& pb = j.at("ptmBestFound");
    r.ptm_best_found = {pb.at("value").get<double>(), pb.at("restarts").get<int>(),
                        pb.at("converged").get<bool>()};
    if (j.contains("timings")) r.timings = j.at("timings").get<std::map<std::string, double>>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.tol = j.at("tol").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Text

inline std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline std::string report_to_text(const Report& r) {
  std::ostringstream os;
  const auto& in = r.instance;
  // For uniform p the functional is the textbook expression divided by mA*mB.
  const double scale = static_cast<double>(in.mA) * in.mB;
  const auto line = [&](const std::string& label, double v) {
    os << "  " << label << ": " << format_value(v);
    if (in.uniform_p) os << "  (x" << in.mA * in.mB << ": " << format_value(scale * v) << ")";
    os << "\n";
  };
  const auto join = [](const std::vector<int>& v) {
    std::string s;
    for (size_t n = 0; n < v.size(); ++n) s += (n ? " " : "") + std::to_string(v[n]);
    return s;
  };
  os << "instance " << (in.name.empty() ? "<unnamed>" : in.name) << ": d=" << in.d << " mA=" << in.mA
     << " mB=" << in.mB << " N=" << in.N << " K=" << in.K << " terms=" << in.terms << "\n";
  line("classical Bell bound", r.classical_bell_bound.value);
  os << "    a = [" << join(r.classical_bell_bound.a) << "]  b = [" << join(r.classical_bell_bound.b) << "]\n";
  if (r.ccp_general_bound.computed) {
    line("classical CCP bound (general messaging)", r.ccp_general_bound.value);
    os << "    m(x0,x) = [" << join(r.ccp_general_bound.messaging) << "]\n";
  } else {
    os << "  classical CCP bound: skipped (" << r.ccp_general_bound.note << ")\n";
  }
  line("classical CCP bound (decoder m + b(y))", r.ccp_additive_bound.value);
  line("entangled value, best found", r.entangled_best_found.value);
  os << "    dims " << r.entangled_best_found.da << "x" << r.entangled_best_found.db << ", "
     << r.entangled_best_found.restarts << " restarts, "
     << (r.entangled_best_found.converged ? "converged" : "not converged") << "\n";
  os << "  uniform marginals (AII): " << (r.aii_check.pass ? "pass" : "fail") << ", worst deviation "
     << format_value(r.aii_check.deviation) << " (tol " << format_value(r.aii_check.tol) << ")\n";
  if (r.mapped_ptm.value) {
    line("prepare-and-measure from entangled strategy", *r.mapped_ptm.value);
    if (!r.mapped_ptm.guaranteed) os << "    (forced renormalisation: equality not guaranteed)\n";
  } else {
    os << "  prepare-and-measure from entangled strategy: " << r.mapped_ptm.status << "\n";
  }
  line("prepare-and-measure value, best found", r.ptm_best_found.value);
  os << "    " << r.ptm_best_found.restarts << " restarts, "
     << (r.ptm_best_found.converged ? "converged" : "not converged") << "\n";
  const Comparisons c = compare(r);
  os << "comparisons\n";
  if (c.ccp_minus_bell) os << "  CCP bound - Bell bound: " << format_value(*c.ccp_minus_bell) << "\n";
  os << "  entangled - Bell bound: " << format_value(c.entangled_minus_bell) << "\n";
  os << "  prepare-and-measure - entangled: " << format_value(c.ptm_minus_entangled) << "\n";
  if (!r.timings.empty()) {
    os << "timings (s)\n";
    for (const auto& [k, v] : r.timings) os << "  " << k << ": " << format_value(v) << "\n";
  }
  os << "seed " << r.seed << "\n";
  return os.str();
}

}  // namespace bellcc
