#pragma once

// States, measurements, Born-rule behaviors and see-saw lower bounds on the
// quantum value of a Bell functional.

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "bellcc/errors.hpp"
#include "bellcc/functional.hpp"
#include "bellcc/linalg.hpp"
#include "bellcc/modular.hpp"
#include "bellcc/parallel.hpp"
#include "bellcc/random.hpp"

namespace bellcc {

inline constexpr double kStateTol = 1e-10;
inline constexpr double kPsdTol = 1e-9;
inline constexpr double kPovmTol = 1e-9;

// Unit-trace positive semidefinite Hermitian matrix.
class DensityMatrix {
 public:
  DensityMatrix() : m_(Matrix::Identity(1, 1)) {}

  // Throws InputError when `m` is not a density matrix. `trace_tol` bounds
  // both the Hermiticity defect and the trace deviation.
  explicit DensityMatrix(Matrix m, double trace_tol = kStateTol) : m_(std::move(m)) {
    if (m_.rows() == 0 || m_.rows() != m_.cols()) throw InputError("density matrix must be square");
    if (hermitian_defect(m_) > trace_tol) throw InputError("density matrix is not Hermitian");
    m_ = hermitian_part(m_);
    const double tr = m_.trace().real();
    if (std::abs(tr - 1.0) > trace_tol)
      throw InputError("density matrix trace is " + std::to_string(tr));
    if (min_eigenvalue(m_) < -kPsdTol) throw InputError("density matrix is not positive semidefinite");
  }

  static DensityMatrix pure(const Vector& v) { return DensityMatrix(projector(v / v.norm())); }
  static DensityMatrix maximally_mixed(int n) {
    return DensityMatrix(Matrix::Identity(n, n) / static_cast<double>(n));
  }
  // (1/sqrt(n)) sum_j |j>|j>
  static DensityMatrix maximally_entangled(int n) {
    Vector v = Vector::Zero(n * n);
    for (int j = 0; j < n; ++j) v(j * n + j) = 1.0 / std::sqrt(static_cast<double>(n));
    return pure(v);
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }

 private:
  Matrix m_;
};

// Positive operators summing to the identity, one per outcome.
struct Povm {
  std::vector<Matrix> elements;

  int outcomes() const { return static_cast<int>(elements.size()); }
  int dim() const { return elements.empty() ? 0 : static_cast<int>(elements.front().rows()); }
  const Matrix& operator[](int b) const { return elements[b]; }

  // Projective measurement in the columns of `basis`; basis vector j is
  // assigned to outcome j mod d.
  static Povm from_basis(const Matrix& basis, int d) {
    Povm p;
    p.elements.assign(d, Matrix::Zero(basis.rows(), basis.rows()));
    for (Eigen::Index j = 0; j < basis.cols(); ++j) p.elements[j % d] += projector(basis.col(j));
    return p;
  }
  static Povm uniform(int dim, int d) {
    return {std::vector<Matrix>(d, Matrix::Identity(dim, dim) / static_cast<double>(d))};
  }
};

using MeasurementSet = std::vector<Povm>;

// Empty string when valid, otherwise the first problem found.
inline std::string povm_problem(const Povm& p, double tol = kPovmTol) {
  if (p.elements.empty()) return "POVM has no elements";
  const int n = p.dim();
  Matrix total = Matrix::Zero(n, n);
  for (const Matrix& m : p.elements) {
    if (m.rows() != n || m.cols() != n) return "POVM elements have inconsistent dimensions";
    if (hermitian_defect(m) > tol) return "POVM element is not Hermitian";
    if (min_eigenvalue(m) < -tol) return "POVM element is not positive semidefinite";
    total += m;
  }
  if ((total - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > tol)
    return "POVM elements do not sum to the identity";
  return {};
}

inline void require_valid(const Povm& p) {
  if (auto problem = povm_problem(p); !problem.empty()) throw InputError(problem);
}

// Common (dimension, outcome count) of a measurement set.
inline std::pair<int, int> measurement_shape(const MeasurementSet& ms) {
  if (ms.empty()) throw InputError("measurement set is empty");
  const int dim = ms.front().dim(), d = ms.front().outcomes();
  for (const Povm& p : ms) {
    require_valid(p);
    if (p.dim() != dim || p.outcomes() != d)
      throw InputError("measurement set has inconsistent dimensions or outcome counts");
  }
  return {dim, d};
}

// P(a,b|x,y) = Tr[(A^x_a (x) B^y_b) rho]
inline Behavior born_behavior(const DensityMatrix& rho, const MeasurementSet& A,
                              const MeasurementSet& B) {
  const auto [da, d] = measurement_shape(A);
  const auto [db, d2] = measurement_shape(B);
  if (d != d2) throw InputError("Alice and Bob measurements have different outcome counts");
  if (da * db != rho.dim())
    throw InputError("state dimension " + std::to_string(rho.dim()) + " is not " +
                     std::to_string(da) + " x " + std::to_string(db));
  const int mA = static_cast<int>(A.size()), mB = static_cast<int>(B.size());
  Behavior beh(d, mA, mB);
  for (int x = 0; x < mA; ++x)
    for (int a = 0; a < d; ++a) {
      for (int y = 0; y < mB; ++y)
        for (int b = 0; b < d; ++b)
          beh.at(a, b, x, y) = trace_product(kron(A[x][a], B[y][b]), rho.matrix());
    }
  return beh;
}

// ---------------------------------------------------------------------------
// Measurement best response

struct MeasurementResponse {
  Povm povm;
  double value = 0.0;
  double certificate_residual = 0.0;
  int iterations = 0;
};

// Largest violation of the optimality condition Herm(sum_c M_c R_c) >= R_b;
// zero certifies that M maximises sum_b Tr[M_b R_b].
inline double optimality_residual(std::span<const Matrix> R, const Povm& M) {
  Matrix Y = Matrix::Zero(R[0].rows(), R[0].cols());
  for (size_t c = 0; c < R.size(); ++c) Y += M.elements[c] * R[c];
  const Matrix Yh = hermitian_part(Y);
  double worst = 0.0;
  for (const Matrix& Rb : R) worst = std::max(worst, -min_eigenvalue(Yh - hermitian_part(Rb)));
  return worst;
}

inline double povm_objective(std::span<const Matrix> R, const Povm& M) {
  double v = 0.0;
  for (size_t b = 0; b < R.size(); ++b) v += trace_product(M.elements[b], R[b]);
  return v;
}

// Maximises sum_b Tr[M_b R_b] over POVMs with the multiplicative fixed-point
// iteration M_b <- L S_b M_b S_b L, L = (sum_b S_b M_b S_b + eps)^{-1/2},
// started from M_b = I/d. S_b = R_b + s I with the shift s making every S_b
// positive semidefinite (the shift only adds the constant s * dim to the
// objective). A step that lowers the objective is retried with a larger
// shift, which shortens the step.
inline MeasurementResponse measurement_best_response(std::span<const Matrix> R, double tol,
                                                     int max_iters) {
  if (R.empty()) throw InputError("measurement_best_response: no operators");
  const Eigen::Index n = R[0].rows();
  const int d = static_cast<int>(R.size());
  double scale = 0.0, lowest = 0.0;
  for (const Matrix& Rb : R) {
    if (Rb.rows() != n || Rb.cols() != n)
      throw InputError("measurement_best_response: operators have different dimensions");
    const double norm = Rb.cwiseAbs().maxCoeff();
    if (hermitian_defect(Rb) > 1e-10 * std::max(1.0, norm))
      throw InputError("measurement_best_response: operator is not Hermitian");
    const RealVector ev = eigenvalues(Rb);
    scale = std::max(scale, ev.cwiseAbs().maxCoeff());
    lowest = std::min(lowest, ev.minCoeff());
  }
  std::vector<Matrix> Rh;
  Rh.reserve(d);
  for (const Matrix& Rb : R) Rh.push_back(hermitian_part(Rb));

  const Matrix I = Matrix::Identity(n, n);
  const double ridge = 1e-12 * static_cast<double>(n);
  const double slack = 1e-14 * std::max(1.0, scale);
  double shift = -lowest;

  Povm M = Povm::uniform(static_cast<int>(n), d);
  double value = povm_objective(Rh, M);
  int it = 0;
  for (; it < max_iters; ++it) {
    Matrix lambda = Matrix::Zero(n, n);
    std::vector<Matrix> S(d);
    for (int b = 0; b < d; ++b) {
      S[b] = Rh[b] + shift * I;
      lambda += S[b] * M.elements[b] * S[b];
    }
    const Matrix L = inverse_sqrt_psd(lambda, ridge);
    Povm next;
    next.elements.resize(d);
    Matrix total = Matrix::Zero(n, n);
    for (int b = 0; b < d; ++b) {
      next.elements[b] = hermitian_part(L * S[b] * M.elements[b] * S[b] * L);
      total += next.elements[b];
    }
    // The ridge leaves sum_b M_b slightly below I; spread the deficit.
    const Matrix deficit = hermitian_part(I - total) / static_cast<double>(d);
    for (int b = 0; b < d; ++b) next.elements[b] += deficit;

    const double next_value = povm_objective(Rh, next);
    if (next_value < value - slack) {
      shift = 2.0 * shift + 0.1 * std::max(scale, 1e-300);
      if (!(shift < 1e8 * std::max(1.0, scale)))
        throw NumericalError("measurement_best_response: iteration failed to increase the objective");
      continue;
    }
    const double improvement = next_value - value;
    M = std::move(next);
    value = next_value;
    if (improvement < tol) {
      ++it;
      break;
    }
  }
  return {M, povm_objective(Rh, M), optimality_residual(Rh, M), it};
}

// ---------------------------------------------------------------------------
// Bell operator and see-saw

// Sum over terms of p c sum_a A^x_a (x) B^y_{F - a}.
inline Matrix bell_operator(const BellFunctional& f, const MeasurementSet& A,
                            const MeasurementSet& B) {
  const int d = f.d();
  const int da = A.front().dim(), db = B.front().dim();
  Matrix W = Matrix::Zero(da * db, da * db);
  for (const Term& t : f.terms) {
    const double w = f.scenario.prob(t.x, t.y) * t.c;
    if (w == 0.0) continue;
    for (int a = 0; a < d; ++a) W += w * kron(A[t.x][a], B[t.y][mod(t.F - a, d)]);
  }
  return W;
}

struct SeesawOptions {
  int restarts = 10;
  double tol = 1e-10;
  int max_iters = 2000;
  std::uint64_t seed = 0;
  int threads = 1;
  double inner_tol = 1e-14;
  int inner_max_iters = 500;
};

struct SeesawBellResult {
  double value = -std::numeric_limits<double>::infinity();
  DensityMatrix rho;
  MeasurementSet A;
  MeasurementSet B;
  bool converged = false;
  int best_restart = 0;
  std::vector<std::vector<double>> history;  // value after each sweep, per restart
  std::vector<std::string> warnings;
};

inline MeasurementSet random_measurements(int count, int dim, int d, Rng& rng) {
  MeasurementSet out;
  for (int s = 0; s < count; ++s) out.push_back(Povm::from_basis(haar_unitary(dim, rng), d));
  return out;
}

namespace detail {

struct SeesawRun {
  double value;
  Vector psi;
  MeasurementSet A, B;
  bool converged;
  std::vector<double> history;
};

// Replaces `current` with the best response to R when that does not lower
// the objective.
inline void improve_measurement(Povm& current, const std::vector<Matrix>& R,
                                const SeesawOptions& opts) {
  const auto resp = measurement_best_response(R, opts.inner_tol, opts.inner_max_iters);
  if (resp.value >= povm_objective(R, current)) current = resp.povm;
}

inline SeesawRun seesaw_bell_run(const BellFunctional& f, int da, int db,
                                 const SeesawOptions& opts, int restart) {
  const int d = f.d(), mA = f.mA(), mB = f.mB();
  Rng rng = make_rng(opts.seed, "seesaw_bell", restart);
  SeesawRun run;
  run.A = random_measurements(mA, da, d, rng);
  run.B = random_measurements(mB, db, d, rng);
  run.converged = false;
  const Matrix Ia = Matrix::Identity(da, da), Ib = Matrix::Identity(db, db);

  double prev = -std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < opts.max_iters; ++iter) {
    // State: top eigenvector of the Bell operator.
    run.psi = top_eigenvector(bell_operator(f, run.A, run.B)).vector;
    const Matrix rho = projector(run.psi);

    // Alice: R^x_a = Tr_B[(I (x) W^x_a) rho], W^x_a = sum p c B^y_{F-a}.
    for (int x = 0; x < mA; ++x) {
      std::vector<Matrix> W(d, Matrix::Zero(db, db));
      for (const Term& t : f.terms) {
        if (t.x != x) continue;
        const double w = f.scenario.prob(t.x, t.y) * t.c;
        for (int a = 0; a < d; ++a) W[a] += w * run.B[t.y][mod(t.F - a, d)];
      }
      std::vector<Matrix> R(d);
      for (int a = 0; a < d; ++a) R[a] = partial_trace_second(kron(Ia, W[a]) * rho, da, db);
      improve_measurement(run.A[x], R, opts);
    }
    // Bob, symmetrically.
    for (int y = 0; y < mB; ++y) {
      std::vector<Matrix> W(d, Matrix::Zero(da, da));
      for (const Term& t : f.terms) {
        if (t.y != y) continue;
        const double w = f.scenario.prob(t.x, t.y) * t.c;
        for (int b = 0; b < d; ++b) W[b] += w * run.A[t.x][mod(t.F - b, d)];
      }
      std::vector<Matrix> R(d);
      for (int b = 0; b < d; ++b) R[b] = partial_trace_first(kron(W[b], Ib) * rho, da, db);
      improve_measurement(run.B[y], R, opts);
    }

    run.value = (run.psi.adjoint() * bell_operator(f, run.A, run.B) * run.psi)(0, 0).real();
    run.history.push_back(run.value);
    if (run.value - prev < opts.tol) {
      run.converged = true;
      break;
    }
    prev = run.value;
  }
  // Final state update so that the returned state is optimal for the
  // returned measurements.
  const TopEigen top = top_eigenvector(bell_operator(f, run.A, run.B));
  if (top.value >= run.value) {
    run.psi = top.vector;
    run.value = top.value;
  }
  return run;
}

}  // namespace detail

// Lower bound on the quantum value of f with local dimensions da x db, by
// alternating exact state updates and measurement best responses from
// random starting measurements. Returns the best restart (largest value,
// lowest index on ties).
inline SeesawBellResult seesaw_bell(const BellFunctional& f, int da, int db,
                                    const SeesawOptions& opts = {}) {
  require_valid(f);
  if (da < 1 || db < 1) throw InfeasibleError("seesaw_bell: local dimensions must be positive");
  if (opts.restarts < 1) throw InfeasibleError("seesaw_bell: need at least one restart");
  SeesawBellResult out;
  if (db < f.d())
    out.warnings.push_back("Bob's dimension " + std::to_string(db) + " is below d = " +
                           std::to_string(f.d()));
  else if (db != f.d())
    out.warnings.push_back("Bob's dimension differs from d; the prepare-and-measure "
                           "construction needs db = d");

  auto runs = parallel_map<detail::SeesawRun>(
      opts.restarts, opts.threads,
      [&](int r) { return detail::seesaw_bell_run(f, da, db, opts, r); });
  int best = 0;
  for (int r = 1; r < opts.restarts; ++r)
    if (runs[r].value > runs[best].value) best = r;
  for (auto& run : runs) out.history.push_back(run.history);
  out.value = runs[best].value;
  out.rho = DensityMatrix::pure(runs[best].psi);
  out.A = std::move(runs[best].A);
  out.B = std::move(runs[best].B);
  out.converged = runs[best].converged;
  out.best_restart = best;
  return out;
}

// ---------------------------------------------------------------------------
// Alice's local marginals

struct MarginalCheck {
  bool pass = false;
  double worst_deviation = 0.0;
  std::vector<double> marginals;  // p(a|x) at x*d + a
};

inline MarginalCheck check_uniform_marginals(const DensityMatrix& rho, const MeasurementSet& A,
                                             double tol) {
  const auto [da, d] = measurement_shape(A);
  if (rho.dim() % da != 0)
    throw InputError("state dimension is not a multiple of Alice's dimension");
  const Matrix rho_a = partial_trace_second(rho.matrix(), da, rho.dim() / da);
  MarginalCheck out;
  for (size_t x = 0; x < A.size(); ++x)
    for (int a = 0; a < d; ++a) {
      const double p = trace_product(A[x][a], rho_a);
      out.marginals.push_back(p);
      out.worst_deviation = std::max(out.worst_deviation, std::abs(p - 1.0 / d));
    }
  out.pass = out.worst_deviation <= tol;
  return out;
}

}  // namespace bellcc
