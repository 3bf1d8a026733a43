#pragma once

// Feasibility certification of compiled inflation systems.
//
// The float phase solves the nonnegative least-squares relaxation
//   min ||A x - b||^2  over  x >= 0
// with an accelerated projected gradient (FISTA with adaptive restart). At
// the optimum the KKT conditions read A^T(Ax - b) >= 0 componentwise, so
//   y = b - A x
// satisfies y^T A <= 0 and y^T b = ||b - A x||^2 > 0: the residual itself is
// a (max-margin) Farkas witness of infeasibility, while a vanishing residual
// exhibits a feasible point.
//
// Escalation to an exact certificate needs no exact LP solve: the float dual
// is converted entry-wise to exact rationals (doubles are dyadic, so this is
// lossless) and the residual slack theta = max_j (A^T y)_j -- machine-epsilon
// sized -- is cancelled by subtracting theta from the dual of every
// normalization row, since those cover each variable exactly once with
// coefficient one. The resulting multipliers satisfy y^T A <= 0 *exactly*,
// and the witness value w(P) = y^T b is evaluated in Q(sqrt 2), so a verified
// certificate is a rigorous proof independent of all floating-point steps.

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "losr/constraints.hpp"
#include "losr/quantum.hpp"
#include "losr/simplex.hpp"

namespace losr {

struct CertifyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Machine-verifiable Farkas certificate: rational multipliers over the
/// equality rows whose combination bounds an affine functional of P that the
/// observed behavior strictly violates.
struct Certificate {
  long long num_rows = 0;
  long long num_vars = 0;
  std::vector<std::pair<long long, Rational>> duals;           // row -> y_r
  std::vector<std::pair<long long, Rational>> witness_coeffs;  // P index -> c_i
  Rational witness_constant{0};
  RootTwo verification_value;  // w(P) = sum c_i P_i + const = y^T b, > 0

  // provenance
  int scenario_n = 0;
  int order = 0;
  int num_inflations = 0;
};

enum class Verdict { Feasible, Infeasible };

struct CertifyResult {
  Verdict verdict = Verdict::Feasible;
  std::optional<Certificate> certificate;  // set iff infeasible
  double residual = 0;                     // float NNLS gap (row-normalized)
  long long iterations = 0;
  bool local_decomposition = false;  // feasible via deterministic mixture
  long long num_rows = 0;
  long long num_vars = 0;
};

struct CertifyOptions {
  long long max_lp_vars = 1'000'000;
  long long max_nnls_iterations = 600'000;
  double feasible_residual = 1e-9;  // row-normalized residual accepted as zero
  bool skip_local_shortcut = false;
  bool exact = false;  // require exact arithmetic for the feasible verdict too
};

namespace detail {

inline Rational rational_from_double(double v) {
  if (!std::isfinite(v)) throw CertifyError("non-finite value in dual vector");
  return Rational(v);  // doubles are dyadic rationals; conversion is exact
}

inline RootTwo to_root_two(const RootTwo& v) { return v; }
inline RootTwo to_root_two(const Rational& v) { return RootTwo(v); }

struct NnlsOutcome {
  Eigen::VectorXd x;     // approximate feasible point (original scaling)
  Eigen::VectorXd dual;  // y = b - Ax, rescaled to the original rows
  double residual = 0;   // ||b - Ax|| over unit-norm rows
  long long iterations = 0;
  bool stationary = false;
};

/// Accelerated projected gradient for min ||Ax-b||^2, x >= 0, on rows scaled
/// to unit norm. Runs until the residual vanishes, the iterates are
/// KKT-stationary to machine precision, or the budget is exhausted.
inline NnlsOutcome nnls_feasibility(const std::vector<SparseRow<double>>& rows,
                                    long long num_vars, long long max_iterations,
                                    double feasible_residual) {
  const int m = static_cast<int>(rows.size());
  const int n = static_cast<int>(num_vars);
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd b(m), row_norm(m);
  for (int r = 0; r < m; ++r) {
    double nrm = 0;
    for (const auto& [j, c] : rows[r].coeffs) nrm += c * c;
    nrm = std::sqrt(std::max(nrm, 1e-300));
    row_norm[r] = nrm;
    for (const auto& [j, c] : rows[r].coeffs) trip.emplace_back(r, j, c / nrm);
    b[r] = rows[r].rhs / nrm;
  }
  Eigen::SparseMatrix<double> A(m, n);
  A.setFromTriplets(trip.begin(), trip.end());
  const Eigen::SparseMatrix<double> At = A.transpose();

  // Lipschitz constant of the gradient via power iteration, started from a
  // deterministic sign-varying vector so no eigenspace is missed by symmetry
  Eigen::VectorXd v(n);
  std::uint64_t h = 0x9e3779b97f4a7c15ull;
  for (int j = 0; j < n; ++j) {
    h ^= h << 13;
    h ^= h >> 7;
    h ^= h << 17;
    v[j] = (double(h % 2000) - 999.5) / 1000.0;
  }
  v /= v.norm();
  double lip = 1.0;
  for (int i = 0; i < 200; ++i) {
    Eigen::VectorXd w = At * (A * v);
    const double next = std::max(w.norm(), 1e-12);
    v = w / next;
    if (i > 20 && std::abs(next - lip) <= 1e-6 * next) {
      lip = next;
      break;
    }
    lip = next;
  }
  double step = 1.0 / (lip * 1.05);

  NnlsOutcome out;
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 0.01), z = x;
  double t_acc = 1.0, last_res = std::numeric_limits<double>::infinity();
  const long long check_every = 2000;
  for (long long it = 0;; ++it) {
    out.iterations = it;
    if (it % check_every == 0 || it >= max_iterations) {
      const Eigen::VectorXd r = A * x - b;
      const double res = r.norm();
      if (!std::isfinite(res)) {  // diverged: the step was too optimistic
        step /= 2;
        x = Eigen::VectorXd::Constant(n, 0.01);
        z = x;
        t_acc = 1.0;
        last_res = std::numeric_limits<double>::infinity();
        continue;
      }
      const double max_kkt_violation = -((At * r).minCoeff());
      const bool stuck = std::abs(res - last_res) <= 1e-10 * std::max(res, 1e-30);
      if (res <= feasible_residual || (max_kkt_violation <= 1e-13 && stuck) ||
          it >= max_iterations) {
        out.residual = res;
        out.stationary = max_kkt_violation <= 1e-12;
        out.x = x;
        out.dual = (-r).cwiseQuotient(row_norm);
        return out;
      }
      last_res = res;
    }
    const Eigen::VectorXd g = At * (A * z - b);
    Eigen::VectorXd xn = (z - step * g).cwiseMax(0.0);
    const double tn = (1 + std::sqrt(1 + 4 * t_acc * t_acc)) / 2;
    if (g.dot(xn - x) > 0) {  // adaptive restart of the momentum
      t_acc = 1.0;
      z = xn;
    } else {
      z = xn + ((t_acc - 1) / tn) * (xn - x);
      t_acc = tn;
    }
    x = std::move(xn);
  }
}

/// Exact certificate from exact rational multipliers: shifts the
/// normalization-row duals by theta = max_j (A^T y)_j so that y^T A <= 0
/// holds exactly, then evaluates w(P) = y^T b in Q(sqrt 2).
template <class S>
std::optional<Certificate> certificate_from_duals(const ConstraintSystem<S>& sys,
                                                  std::vector<Rational> y) {
  const auto& rows = sys.rows;
  std::vector<Rational> s(sys.num_vars, Rational(0));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (y[r] == 0) continue;
    for (const auto& [j, c] : rows[r].row.coeffs)
      s[j] += y[r] * ScalarTraits<Rational>::from_root_two(to_root_two(c));
  }
  Rational theta(0);
  for (const auto& v : s) theta = std::max(theta, v);
  if (theta > 0) {
    // normalization rows cover every variable exactly once with coefficient
    // one, so subtracting theta from each of their duals cancels the slack
    std::vector<int> cover(sys.num_vars, 0);
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (rows[r].tag == RowTag::Normalization)
        for (const auto& [j, c] : rows[r].row.coeffs) cover[j] += 1;
    for (int c : cover)
      if (c != 1) return std::nullopt;
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (rows[r].tag == RowTag::Normalization) y[r] -= theta;
  }

  Certificate cert;
  cert.num_rows = static_cast<long long>(rows.size());
  cert.num_vars = sys.num_vars;
  RootTwo w(0);
  std::map<long long, Rational> coeffs;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (y[r] == 0) continue;
    const RootTwo rhs = to_root_two(rows[r].row.rhs);
    w += RootTwo(y[r]) * rhs;
    cert.duals.emplace_back(static_cast<long long>(r), y[r]);
    if (!rows[r].rhs_terms.empty()) {
      for (long long t : rows[r].rhs_terms) coeffs[t] += y[r];
    } else if (rhs.sign() != 0) {
      cert.witness_constant +=
          y[r] * ScalarTraits<Rational>::from_root_two(rhs);
    }
  }
  if (w.sign() <= 0) return std::nullopt;
  cert.verification_value = w;
  for (auto& [t, c] : coeffs)
    if (c != 0) cert.witness_coeffs.emplace_back(t, c);
  return cert;
}

template <class S>
std::optional<Certificate> certificate_from_float_duals(
    const ConstraintSystem<S>& sys, const Eigen::VectorXd& dual) {
  const double cutoff = 1e-14 * dual.cwiseAbs().maxCoeff();
  std::vector<Rational> y(sys.rows.size(), Rational(0));
  for (long long r = 0; r < dual.size(); ++r)
    if (std::abs(dual[r]) > cutoff) y[r] = rational_from_double(dual[r]);
  return certificate_from_duals(sys, std::move(y));
}

/// Mixture-of-deterministic-strategies LP: deterministic points are
/// producible with (N-1)-partite resources at every inflation order, so a
/// convex decomposition of P proves feasibility outright. Returns nullopt
/// when the strategy count is too large to enumerate.
template <class S>
std::optional<bool> local_decomposition_feasible(const Scenario& scn,
                                                 const Behavior<S>& p) {
  long long num_strategies = 1;
  std::vector<long long> strat_count(scn.n());
  for (int j = 0; j < scn.n(); ++j) {
    long long c = 1;
    for (int i = 0; i < scn.party(j).input_cardinality; ++i)
      c *= scn.party(j).output_cardinality;
    strat_count[j] = c;
    num_strategies *= c;
    if (num_strategies > 200'000) return std::nullopt;
  }
  const long long table = p.table().size();
  if (table > 20'000) return std::nullopt;

  std::vector<SparseRow<S>> rows(table);
  for (long long t = 0; t < table; ++t) rows[t].rhs = p.table()[t];
  std::vector<int> strat(scn.n(), 0);
  std::vector<int> x(scn.n(), 0), o(scn.n(), 0), in_radix(scn.n());
  for (int j = 0; j < scn.n(); ++j) in_radix[j] = scn.party(j).input_cardinality;
  for (long long col = 0; col < num_strategies; ++col) {
    std::fill(x.begin(), x.end(), 0);
    do {
      for (int j = 0; j < scn.n(); ++j) {
        // digit x_j of strategy j in base out_cardinality is the response
        int s = strat[j];
        for (int i = 0; i < x[j]; ++i) s /= scn.party(j).output_cardinality;
        o[j] = s % scn.party(j).output_cardinality;
      }
      rows[p.flat_index(x, o)].coeffs.emplace_back(static_cast<int>(col), S(1));
    } while (next_tuple(x, in_radix));
    for (int j = scn.n() - 1; j >= 0; --j) {
      if (++strat[j] < strat_count[j]) break;
      strat[j] = 0;
    }
  }
  return solve_phase1(static_cast<int>(num_strategies), rows).feasible;
}

}  // namespace detail

/// Independent exact re-check of a certificate against a compiled system:
/// the dual combination must cancel to a nonpositive functional on every
/// variable, and the witness value over the right-hand sides (equivalently
/// over P) must be strictly positive. Uses no floating point.
template <class S>
bool verify_certificate(const Certificate& cert, const ConstraintSystem<S>& sys,
                        const Behavior<RootTwo>* p = nullptr) {
  if (cert.num_rows != static_cast<long long>(sys.rows.size()) ||
      cert.num_vars != sys.num_vars)
    throw CertifyError("certificate does not match the system's row layout");
  std::vector<Rational> s(sys.num_vars, Rational(0));
  RootTwo w(0);
  for (const auto& [r, y] : cert.duals) {
    if (r < 0 || r >= cert.num_rows)
      throw CertifyError("certificate references a row outside the system");
    const auto& row = sys.rows[static_cast<std::size_t>(r)].row;
    for (const auto& [j, c] : row.coeffs)
      s[j] += y * ScalarTraits<Rational>::from_root_two(detail::to_root_two(c));
    w += RootTwo(y) * detail::to_root_two(row.rhs);
  }
  for (const auto& v : s)
    if (v > 0) return false;
  if (w.sign() <= 0) return false;
  if (w != cert.verification_value) return false;
  if (p != nullptr) {
    RootTwo wp(cert.witness_constant);
    for (const auto& [t, c] : cert.witness_coeffs) {
      if (t < 0 || t >= p->table().size())
        throw CertifyError("witness references an entry outside P");
      wp += RootTwo(c) * p->table()[t];
    }
    if (wp != w) return false;
  }
  return true;
}

/// Decide feasibility of the compiled system for the observed behavior p.
/// Infeasible verdicts always carry an exactly verified certificate.
inline CertifyResult certify_system(const ConstraintSystem<RootTwo>& sys,
                                    const CertifyOptions& opt = {}) {
  CertifyResult res;
  res.num_rows = static_cast<long long>(sys.rows.size());
  res.num_vars = sys.num_vars;

  std::vector<SparseRow<double>> frows;
  frows.reserve(sys.rows.size());
  for (const auto& r : sys.rows) {
    SparseRow<double> fr;
    fr.rhs = r.row.rhs.to_double();
    for (const auto& [j, c] : r.row.coeffs) fr.coeffs.emplace_back(j, c.to_double());
    frows.push_back(std::move(fr));
  }

  long long budget = opt.max_nnls_iterations;
  for (int attempt = 0; attempt < 2; ++attempt, budget *= 4) {
    auto nnls = detail::nnls_feasibility(frows, sys.num_vars, budget,
                                         opt.feasible_residual);
    res.residual = nnls.residual;
    res.iterations += nnls.iterations;
    if (nnls.residual <= opt.feasible_residual) {
      res.verdict = Verdict::Feasible;
      return res;
    }
    if (auto cert = detail::certificate_from_float_duals(sys, nnls.dual)) {
      if (!verify_certificate(*cert, sys))
        throw CertifyError("internal error: emitted certificate failed verification");
      res.verdict = Verdict::Infeasible;
      res.certificate = std::move(cert);
      return res;
    }
    // a stationary point with a tiny gap that cannot be certified lies within
    // float noise of the feasible set; treat it as feasible
    if (nnls.stationary && nnls.residual <= 1e-6) {
      res.verdict = Verdict::Feasible;
      return res;
    }
  }
  throw CertifyError("certification did not converge: residual " +
                     std::to_string(res.residual));
}

inline CertifyResult certify(const Scenario& scenario, const Behavior<RootTwo>& p,
                             const std::vector<Inflation>& inflations,
                             const CertifyOptions& opt = {}) {
  auto sys = compile(scenario, p, inflations, opt.max_lp_vars);
  if (!opt.skip_local_shortcut) {
    std::optional<bool> local;
    if (opt.exact) {
      local = detail::local_decomposition_feasible(scenario, p);
    } else {
      local = detail::local_decomposition_feasible(scenario, p.to_float());
    }
    if (local && *local) {
      CertifyResult res;
      res.verdict = Verdict::Feasible;
      res.local_decomposition = true;
      res.num_rows = static_cast<long long>(sys.rows.size());
      res.num_vars = sys.num_vars;
      return res;
    }
  }
  auto res = certify_system(sys, opt);
  if (res.certificate) {
    res.certificate->scenario_n = scenario.n();
    res.certificate->order = inflations.front().order();
    res.certificate->num_inflations = static_cast<int>(inflations.size());
    if (!verify_certificate(*res.certificate, sys, &p))
      throw CertifyError("internal error: witness functional inconsistent with P");
  }
  return res;
}

/// Shared-bit no-go (chain of perfectly correlated bits with independent
/// endpoints): solved in exact rational arithmetic outright; the Farkas dual
/// of the exact solver already satisfies y^T A <= 0 with no shift needed.
inline CertifyResult certify_shared_bit(int n) {
  const auto sys = shared_bit_system(n);
  CertifyResult res;
  res.num_rows = static_cast<long long>(sys.rows.size());
  res.num_vars = sys.num_vars;
  auto out = solve_phase1(static_cast<int>(sys.num_vars), sys.sparse_rows());
  if (out.feasible) {
    res.verdict = Verdict::Feasible;
    return res;
  }
  auto cert = detail::certificate_from_duals(sys, out.farkas);
  if (!cert || !verify_certificate(*cert, sys))
    throw CertifyError("internal error: shared-bit certificate invalid");
  cert->scenario_n = n;
  res.verdict = Verdict::Infeasible;
  res.certificate = std::move(cert);
  return res;
}

struct SweepResult {
  double noise_feasible = 0;    // largest noise parameter found feasible
  double noise_infeasible = 1;  // smallest noise parameter found infeasible
  double fidelity_feasible = 0;
  double fidelity_infeasible = 1;
  Certificate certificate;  // at noise_infeasible
  int queries = 0;
};

/// Bisect the GHZ_N noise threshold at the given inflation order. The bracket
/// endpoints are verified first: p=0 must be feasible and p=1 infeasible.
inline SweepResult sweep_noise(int n, int order, double tol,
                               const CertifyOptions& opt = {}) {
  if (tol <= 0 || tol >= 1) throw CertifyError("sweep tolerance must lie in (0,1)");
  const auto scenario = canonical_scenario(n, ghz_party_specs(n));
  std::vector<Inflation> inflations;
  for (const auto& cls : enumerate_inflations(scenario, order).classes)
    inflations.push_back(Inflation(&scenario, order, cls.representative.wiring()));

  SweepResult sweep;
  auto query = [&](double noise) {
    ++sweep.queries;
    const auto p = ghz_behavior<RootTwo>(
        n, RootTwo(detail::rational_from_double(noise)));
    return certify(scenario, p, inflations, opt);
  };

  auto at_zero = query(0.0);
  if (at_zero.verdict != Verdict::Feasible)
    throw CertifyError("sweep does not bracket a threshold: p=0 is infeasible");
  auto at_one = query(1.0);
  if (at_one.verdict != Verdict::Infeasible)
    throw CertifyError("sweep does not bracket a threshold: p=1 is feasible");
  double lo = 0.0, hi = 1.0;
  sweep.certificate = *at_one.certificate;

  while (hi - lo > tol) {
    const double mid = (lo + hi) / 2;
    auto r = query(mid);
    if (r.verdict == Verdict::Infeasible) {
      hi = mid;
      sweep.certificate = *r.certificate;
    } else {
      lo = mid;
    }
  }
  sweep.noise_feasible = lo;
  sweep.noise_infeasible = hi;
  sweep.fidelity_feasible = fidelity_of(lo, n);
  sweep.fidelity_infeasible = fidelity_of(hi, n);
  return sweep;
}

}  // namespace losr
