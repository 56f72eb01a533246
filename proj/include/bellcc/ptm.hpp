#pragma once

// Prepare-transmit-measure protocols for the game of a Bell functional:
// Alice sends a d-dimensional state rho_{x0 x}, Bob measures B^y and
// answers with his outcome.

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "bellcc/ccp.hpp"
#include "bellcc/errors.hpp"
#include "bellcc/linalg.hpp"
#include "bellcc/modular.hpp"
#include "bellcc/parallel.hpp"
#include "bellcc/quantum.hpp"
#include "bellcc/random.hpp"

namespace bellcc {

// rho_{x0 x}, stored at x0*mA + x; every state has dimension d.
struct PreparationSet {
  int d = 2;
  int mA = 1;
  std::vector<DensityMatrix> states;

  const DensityMatrix& operator()(int x0, int x) const {
    return states[static_cast<size_t>(x0) * mA + x];
  }
};

inline void require_compatible(const CcpGame& game, const PreparationSet& prep) {
  if (prep.d != game.d || prep.mA != game.mA() ||
      prep.states.size() != static_cast<size_t>(game.d) * game.mA())
    throw InputError("preparation set does not match the game");
  for (const DensityMatrix& s : prep.states)
    if (s.dim() != game.d) throw InputError("preparations must have dimension d");
}

inline void require_bob_measurements(const CcpGame& game, const MeasurementSet& B) {
  const auto [dim, d] = measurement_shape(B);
  if (dim != game.d || d != game.d || B.size() != static_cast<size_t>(game.mB()))
    throw InputError("Bob needs mB measurements with d outcomes on dimension d");
}

// I^qc = sum_{x0,x,y} p(x0) p(x,y) sum_{i,k} c Tr[B^y_{f_{i,k}} rho_{x0 x}]
inline double ptm_value(const CcpGame& game, const PreparationSet& prep, const MeasurementSet& B) {
  require_compatible(game, prep);
  require_bob_measurements(game, B);
  double value = 0.0;
  for (int x0 = 0; x0 < game.d; ++x0)
    for (int x = 0; x < game.mA(); ++x)
      for (int y = 0; y < game.mB(); ++y)
        for (const Term& t : game.terms(x, y))
          value += game.x0_prior[x0] * game.p(x, y) * t.c *
                   trace_product(B[y][game.target(t, x0)], prep(x0, x).matrix());
  return value;
}

struct PtmFromBell {
  PreparationSet prep;
  MarginalCheck aii;
  // False when the uniform-marginal check failed and the states were
  // renormalised on request; the payoff equality is then not guaranteed.
  bool guaranteed = true;
};

// Bob's conditional states after Alice's measurement,
//   rho_{x0 x} = d Tr_A[(A^x_a (x) 1) rho]  with  a = -x0 mod d,
// so that Bob's outcome b = x0 + F exactly when a + b = F. Requires Bob's
// local dimension to be d and, unless `force` is set, uniform marginals
// p(a|x) = 1/d within `tol`.
inline PtmFromBell ptm_from_bell(const CcpGame& game, const DensityMatrix& rho,
                                 const MeasurementSet& A, double tol, bool force = false) {
  const auto [da, d] = measurement_shape(A);
  if (d != game.d || A.size() != static_cast<size_t>(game.mA()))
    throw InputError("Alice needs mA measurements with d outcomes");
  if (rho.dim() != da * game.d)
    throw InputError("Bob's local dimension must equal d = " + std::to_string(game.d));
  PtmFromBell out;
  out.aii = check_uniform_marginals(rho, A, tol);
  if (!out.aii.pass && !force)
    throw UniformMarginalError("Alice's marginals deviate from 1/d by " +
                                   std::to_string(out.aii.worst_deviation),
                               out.aii.worst_deviation);
  out.guaranteed = out.aii.pass;
  out.prep.d = d;
  out.prep.mA = game.mA();
  const Matrix Ib = Matrix::Identity(d, d);
  const double trace_tol = d * tol + kStateTol;
  for (int x0 = 0; x0 < d; ++x0)
    for (int x = 0; x < game.mA(); ++x) {
      Matrix sigma = static_cast<double>(d) *
                     partial_trace_first(kron(A[x][mod(-x0, d)], Ib) * rho.matrix(), da, d);
      sigma = hermitian_part(sigma);
      if (!out.guaranteed) {
        const double tr = sigma.trace().real();
        sigma = tr > 1e-15 ? Matrix(sigma / tr) : Matrix(Ib / static_cast<double>(d));
      }
      out.prep.states.emplace_back(std::move(sigma), out.guaranteed ? trace_tol : kStateTol);
    }
  return out;
}

// Pure state on the top eigenvector of O_{x0 x} = sum_y p(x,y) sum c B^y_f
// for every (x0, x).
inline PreparationSet preparation_best_response(const CcpGame& game, const MeasurementSet& B) {
  require_bob_measurements(game, B);
  PreparationSet out{game.d, game.mA(), {}};
  for (int x0 = 0; x0 < game.d; ++x0)
    for (int x = 0; x < game.mA(); ++x) {
      Matrix O = Matrix::Zero(game.d, game.d);
      for (int y = 0; y < game.mB(); ++y)
        for (const Term& t : game.terms(x, y)) O += game.p(x, y) * t.c * B[y][game.target(t, x0)];
      out.states.push_back(DensityMatrix::pure(top_eigenvector(O).vector));
    }
  return out;
}

// R^y_b = sum_{x0,x} p(x0) p(x,y) sum_{f_{i,k} = b} c rho_{x0 x}
inline std::vector<Matrix> bob_effective_operators(const CcpGame& game, const PreparationSet& prep,
                                                   int y) {
  std::vector<Matrix> R(game.d, Matrix::Zero(game.d, game.d));
  for (int x0 = 0; x0 < game.d; ++x0)
    for (int x = 0; x < game.mA(); ++x)
      for (const Term& t : game.terms(x, y))
        R[game.target(t, x0)] += game.x0_prior[x0] * game.p(x, y) * t.c * prep(x0, x).matrix();
  return R;
}

struct SeesawPtmResult {
  double value = -std::numeric_limits<double>::infinity();
  PreparationSet prep;
  MeasurementSet B;
  bool converged = false;
  int best_restart = 0;
  std::vector<std::vector<double>> history;
};

namespace detail {

struct PtmRun {
  double value;
  PreparationSet prep;
  MeasurementSet B;
  bool converged;
  std::vector<double> history;
};

inline PtmRun seesaw_ptm_run(const CcpGame& game, const SeesawOptions& opts, int restart) {
  Rng rng = make_rng(opts.seed, "seesaw_ptm", restart);
  PtmRun run;
  run.B = random_measurements(game.mB(), game.d, game.d, rng);
  run.converged = false;
  double prev = -std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < opts.max_iters; ++iter) {
    run.prep = preparation_best_response(game, run.B);
    for (int y = 0; y < game.mB(); ++y)
      improve_measurement(run.B[y], bob_effective_operators(game, run.prep, y), opts);
    run.value = ptm_value(game, run.prep, run.B);
    run.history.push_back(run.value);
    if (run.value - prev < opts.tol) {
      run.converged = true;
      break;
    }
    prev = run.value;
  }
  PreparationSet last = preparation_best_response(game, run.B);
  const double v = ptm_value(game, last, run.B);
  if (v >= run.value) {
    run.prep = std::move(last);
    run.value = v;
  }
  return run;
}

}  // namespace detail

// Lower bound on the prepare-and-measure value of the game, alternating
// exact preparation updates with Bob's measurement best responses.
inline SeesawPtmResult seesaw_ptm(const CcpGame& game, const SeesawOptions& opts = {}) {
  if (opts.restarts < 1) throw InfeasibleError("seesaw_ptm: need at least one restart");
  auto runs = parallel_map<detail::PtmRun>(
      opts.restarts, opts.threads, [&](int r) { return detail::seesaw_ptm_run(game, opts, r); });
  int best = 0;
  for (int r = 1; r < opts.restarts; ++r)
    if (runs[r].value > runs[best].value) best = r;
  SeesawPtmResult out;
  for (auto& run : runs) out.history.push_back(run.history);
  out.value = runs[best].value;
  out.prep = std::move(runs[best].prep);
  out.B = std::move(runs[best].B);
  out.converged = runs[best].converged;
  out.best_restart = best;
  return out;
}

}  // namespace bellcc
