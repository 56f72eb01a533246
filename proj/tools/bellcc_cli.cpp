// bellcc: validate Bell functionals and compare their classical, entangled
// and prepare-and-measure values.
//
// Exit status: 0 success, 1 invalid input, 2 infeasible parameters or
// failed uniform-marginal check, 3 numerical breakdown.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "bellcc/bellcc.hpp"

namespace {

using namespace bellcc;

struct SolverFlags {
  std::vector<int> dims;
  int restarts = 10;
  double tol = 1e-10;
  int max_iters = 2000;
  std::uint64_t seed = 0;
  int threads = 1;

  SeesawOptions seesaw() const {
    SeesawOptions o;
    o.restarts = restarts;
    o.tol = tol;
    o.max_iters = max_iters;
    o.seed = seed;
    o.threads = threads;
    return o;
  }
  std::pair<int, int> local_dims(int d) const {
    if (dims.empty()) return {d, d};
    return {dims[0], dims[1]};
  }
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
  cmd->add_option("--dims", f.dims, "local dimensions DA DB (default d d)")->expected(2);
  cmd->add_option("--restarts", f.restarts, "random restarts")->capture_default_str();
  cmd->add_option("--tol", f.tol, "convergence tolerance")->capture_default_str();
  cmd->add_option("--max-iters", f.max_iters, "sweeps per restart")->capture_default_str();
  cmd->add_option("--seed", f.seed, "random seed")->capture_default_str();
  cmd->add_option("--threads", f.threads, "worker threads")->capture_default_str();
}

std::string fmt(double v) { return format_value(v); }

std::string join(const std::vector<int>& v) {
  std::string s;
  for (size_t n = 0; n < v.size(); ++n) s += (n ? " " : "") + std::to_string(v[n]);
  return s;
}

void write_dump(const std::string& path, const std::vector<LabeledMatrix>& items) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  write_matrices(out, items);
}

std::vector<LabeledMatrix> read_dump(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_matrices(in);
}

int cmd_validate(const std::string& path) {
  const BellFunctional f = load_functional(path);
  const auto report = validate(f);
  for (const Violation& v : report) std::cout << v.to_string() << "\n";
  if (report.empty()) {
    std::cout << "valid: d=" << f.d() << " mA=" << f.mA() << " mB=" << f.mB() << " N=" << f.N
              << " K=" << f.K << " terms=" << f.terms.size() << "\n";
    return 0;
  }
  return 1;
}

int cmd_classical(const std::string& path, int threads) {
  const BellFunctional f = load_functional(path);
  require_valid(f);
  const BellBound bb = bell_bound(f, {kDefaultBellCap, threads});
  std::cout << "bell bound: " << fmt(bb.value) << "\n"
            << "  a = [" << join(bb.argmax.a) << "]  b = [" << join(bb.argmax.b) << "]\n";
  const CcpGame game = build_game(f);
  const CcpBound cb = ccp_bound_general(game, {kDefaultCcpCap, threads});
  std::cout << "ccp general bound: " << fmt(cb.value) << "\n"
            << "  m(x0,x) = [" << join(cb.argmax.m) << "]\n";
  const BestResponse br = bob_best_response(game, cb.argmax);
  std::cout << "  G(y,m) = [" << join(br.guess.g) << "]\n";
  const AdditiveCcpBound ab = ccp_bound_additive(game, {kDefaultCcpCap, threads});
  std::cout << "ccp bound with decoder G = m + b(y): " << fmt(ab.value) << "\n"
            << "  b = [" << join(ab.b) << "]\n";
  return 0;
}

int cmd_seesaw(const std::string& path, const SolverFlags& flags, double aii_tol,
               const std::string& dump) {
  const BellFunctional f = load_functional(path);
  const auto [da, db] = flags.local_dims(f.d());
  const SeesawBellResult r = seesaw_bell(f, da, db, flags.seesaw());
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  const MarginalCheck mc = check_uniform_marginals(r.rho, r.A, aii_tol);
  std::cout << "entangled value (best found): " << fmt(r.value) << "\n"
            << "  dims " << da << "x" << db << ", restarts " << flags.restarts << ", best restart "
            << r.best_restart << ", " << (r.converged ? "converged" : "not converged") << "\n"
            << "AII check: " << (mc.pass ? "pass" : "fail") << ", worst deviation "
            << fmt(mc.worst_deviation) << " (tol " << fmt(aii_tol) << ")\n";
  if (!dump.empty()) {
    std::vector<LabeledMatrix> items{{"rho", r.rho.matrix()}};
    for (auto& m : measurements_to_matrices(r.A, "A")) items.push_back(std::move(m));
    for (auto& m : measurements_to_matrices(r.B, "B")) items.push_back(std::move(m));
    write_dump(dump, items);
  }
  return 0;
}

int cmd_ptm(const std::string& path, const SolverFlags& flags, double aii_tol, bool from_seesaw,
            const std::string& prep_path, bool force, const std::string& dump) {
  const BellFunctional f = load_functional(path);
  const CcpGame game = build_game(f);
  int status = 0;
  if (from_seesaw) {
    const auto [da, db] = flags.local_dims(f.d());
    if (db != f.d()) throw InfeasibleError("--from-seesaw needs Bob's dimension equal to d");
    const SeesawBellResult r = seesaw_bell(f, da, db, flags.seesaw());
    std::cout << "entangled value (best found): " << fmt(r.value) << "\n";
    try {
      const PtmFromBell pf = ptm_from_bell(game, r.rho, r.A, aii_tol, force);
      std::cout << "AII check: " << (pf.aii.pass ? "pass" : "fail") << ", worst deviation "
                << fmt(pf.aii.worst_deviation) << "\n"
                << "prepare-and-measure value from entangled strategy: "
                << fmt(ptm_value(game, pf.prep, r.B)) << "\n";
      if (!pf.guaranteed) std::cout << "  (forced renormalisation: equality not guaranteed)\n";
      if (!dump.empty()) write_dump(dump, preparations_to_matrices(pf.prep));
    } catch (const UniformMarginalError& e) {
      std::cout << "AII violated: worst deviation " << fmt(e.deviation()) << " (tol " << fmt(aii_tol)
                << "); rerun with --force-aii to renormalise\n";
      status = 2;
    }
  }
  if (!prep_path.empty()) {
    const PreparationSet prep = preparations_from_matrices(read_dump(prep_path), game.d, game.mA());
    MeasurementSet B;
    for (int y = 0; y < game.mB(); ++y)
      B.push_back(measurement_best_response(bob_effective_operators(game, prep, y), 1e-14, 500).povm);
    std::cout << "prepare-and-measure value of given preparations (Bob best response): "
              << fmt(ptm_value(game, prep, B)) << "\n";
  }
  const SeesawPtmResult s = seesaw_ptm(game, flags.seesaw());
  std::cout << "prepare-and-measure value (best found): " << fmt(s.value) << "\n"
            << "  restarts " << flags.restarts << ", best restart " << s.best_restart << ", "
            << (s.converged ? "converged" : "not converged") << "\n";
  if (!dump.empty() && !from_seesaw) write_dump(dump, preparations_to_matrices(s.prep));
  return status;
}

int cmd_report(const std::string& path, const SolverFlags& flags, double aii_tol, bool force,
               bool timings, const std::string& format, const std::string& out_path) {
  const BellFunctional f = load_functional(path);
  ReportOptions opts;
  opts.name = path;
  std::tie(opts.da, opts.db) = flags.local_dims(f.d());
  opts.seesaw = flags.seesaw();
  opts.aii_tol = aii_tol;
  opts.force_aii = force;
  opts.timings = timings;
  const Report r = build_report(f, opts);
  const std::string text = format == "json" ? report_to_json(r).dump(2) + "\n" : report_to_text(r);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) throw InputError("cannot write " + out_path);
    out << text;
  }
  return 0;
}

int cmd_catalog_list() {
  for (const auto& e : catalog_entries()) std::cout << e.name << "\t" << e.description << "\n";
  return 0;
}

int cmd_catalog_export(const std::string& name, const std::string& path) {
  const auto f = catalog_lookup(name);
  if (!f) throw InputError("unknown catalog entry: " + name);
  save_functional(path, *f);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bell functionals as communication games"};
  app.require_subcommand(1);

  std::string file;
  SolverFlags flags;
  double aii_tol = 1e-6;
  int threads = 1;

  auto* validate_cmd = app.add_subcommand("validate", "check a functional file");
  validate_cmd->add_option("file", file, "functional JSON")->required();

  auto* classical_cmd = app.add_subcommand("classical", "local bound and classical game bound");
  classical_cmd->add_option("file", file, "functional JSON")->required();
  classical_cmd->add_option("--threads", threads, "worker threads")->capture_default_str();

  std::string dump;
  auto* seesaw_cmd = app.add_subcommand("seesaw", "entangled value by see-saw");
  seesaw_cmd->add_option("file", file, "functional JSON")->required();
  add_solver_flags(seesaw_cmd, flags);
  seesaw_cmd->add_option("--aii-tol", aii_tol, "uniform-marginal tolerance")->capture_default_str();
  seesaw_cmd->add_option("--dump", dump, "write state and measurements to a matrix dump");

  bool from_seesaw = false, force = false;
  std::string prep_path;
  auto* ptm_cmd = app.add_subcommand("ptm", "prepare-and-measure values");
  ptm_cmd->add_option("file", file, "functional JSON")->required();
  add_solver_flags(ptm_cmd, flags);
  ptm_cmd->add_option("--aii-tol", aii_tol, "uniform-marginal tolerance")->capture_default_str();
  auto* fs = ptm_cmd->add_flag("--from-seesaw", from_seesaw, "map the entangled see-saw optimum");
  ptm_cmd->add_option("--prep", prep_path, "evaluate preparations from a matrix dump")->excludes(fs);
  ptm_cmd->add_flag("--force-aii", force, "renormalise when the marginal check fails");
  ptm_cmd->add_option("--dump", dump, "write preparations to a matrix dump");

  std::string format = "text", out_path;
  bool timings = false;
  auto* report_cmd = app.add_subcommand("report", "run every solver and compare");
  report_cmd->add_option("file", file, "functional JSON")->required();
  add_solver_flags(report_cmd, flags);
  report_cmd->add_option("--aii-tol", aii_tol, "uniform-marginal tolerance")->capture_default_str();
  report_cmd->add_flag("--force-aii", force, "renormalise when the marginal check fails");
  report_cmd->add_option("--format", format, "json or text")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
  report_cmd->add_option("--out", out_path, "output file (default stdout)");
  report_cmd->add_flag("--timings", timings, "include wall-clock timings");

  std::string name, export_path;
  auto* catalog_cmd = app.add_subcommand("catalog", "built-in functionals");
  catalog_cmd->require_subcommand(1);
  auto* list_cmd = catalog_cmd->add_subcommand("list", "list entries");
  auto* export_cmd = catalog_cmd->add_subcommand("export", "write an entry as JSON");
  export_cmd->add_option("name", name, "entry name")->required();
  export_cmd->add_option("path", export_path, "output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*validate_cmd) return cmd_validate(file);
    if (*classical_cmd) return cmd_classical(file, threads);
    if (*seesaw_cmd) return cmd_seesaw(file, flags, aii_tol, dump);
    if (*ptm_cmd) return cmd_ptm(file, flags, aii_tol, from_seesaw, prep_path, force, dump);
    if (*report_cmd) return cmd_report(file, flags, aii_tol, force, timings, format, out_path);
    if (*list_cmd) return cmd_catalog_list();
    if (*export_cmd) return cmd_catalog_export(name, export_path);
  } catch (const UniformMarginalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
