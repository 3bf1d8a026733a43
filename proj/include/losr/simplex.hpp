#pragma once

// Phase-1 revised simplex for equality-form feasibility problems
//   A x = b,  x >= 0
// templated on the scalar. Float mode prices with Dantzig's rule and falls
// back to Bland's rule when an iteration budget is exhausted; exact mode uses
// Bland's rule throughout, so termination is guaranteed and verdicts are
// never numerically wrong. When the system is infeasible the phase-1 duals
// give a Farkas vector y with  y^T A <= 0  componentwise and  y^T b > 0.

#include <Eigen/Dense>
#include <stdexcept>
#include <utility>
#include <vector>

#include "losr/scalar.hpp"

namespace losr {

struct SimplexError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class S>
struct SparseRow {
  std::vector<std::pair<int, S>> coeffs;  // (column, coefficient), column-sorted
  S rhs = S(0);
};

template <class S>
struct SimplexOutcome {
  bool feasible = false;
  std::vector<S> x;       // a feasible point (structural variables) if feasible
  std::vector<S> farkas;  // y with y^T A <= 0, y^T b > 0 if infeasible
  S objective = S(0);     // phase-1 optimum (sum of artificials)
  long long iterations = 0;
  bool near_degenerate = false;  // float mode: |objective| within 1e-7 of 0
};

/// Decide feasibility of {x >= 0 : rows hold with equality}.
template <class S>
SimplexOutcome<S> solve_phase1(int num_vars, const std::vector<SparseRow<S>>& rows,
                               double tol = 1e-9,
                               long long max_iterations = -1) {
  constexpr bool exact = ScalarTraits<S>::exact;
  const int m = static_cast<int>(rows.size());
  const int n = num_vars;
  using Matrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<S, Eigen::Dynamic, 1>;

  auto is_zero = [&](const S& v) { return ScalarTraits<S>::is_zero(v, tol); };
  auto positive = [&](const S& v) { return !is_zero(v) && v > S(0); };
  auto negative = [&](const S& v) { return !is_zero(v) && v < S(0); };

  // sign-normalize so b >= 0, remembering flips for the dual translation
  std::vector<bool> flipped(m, false);
  Vector b(m);
  for (int r = 0; r < m; ++r) {
    b[r] = rows[r].rhs;
    if (negative(b[r])) {
      flipped[r] = true;
      b[r] = S(0) - b[r];
    }
  }

  // column-major structural matrix
  std::vector<std::vector<std::pair<int, S>>> cols(n);
  for (int r = 0; r < m; ++r)
    for (const auto& [j, v] : rows[r].coeffs) {
      if (j < 0 || j >= n) throw SimplexError("column index out of range");
      cols[j].emplace_back(r, flipped[r] ? S(0) - v : v);
    }

  Matrix binv = Matrix::Identity(m, m);
  Vector xb = b;                       // basic variable values
  std::vector<int> basis(m);           // column index; >= n means artificial
  std::vector<bool> artificial_out(m, false);
  for (int r = 0; r < m; ++r) basis[r] = n + r;

  if (max_iterations < 0) max_iterations = 20000LL + 40LL * (m + n);
  const long long dantzig_budget = exact ? 0 : max_iterations / 2;

  SimplexOutcome<S> out;
  Vector y(m), d(m);
  for (;; ++out.iterations) {
    if (out.iterations > max_iterations)
      throw SimplexError("simplex iteration budget exhausted (cycling guard)");
    const bool bland = exact || out.iterations >= dantzig_budget;

    // y = c_B^T B^-1 with c = 1 on artificials, 0 on structurals
    y.setZero();
    for (int r = 0; r < m; ++r)
      if (basis[r] >= n) y += binv.row(r).transpose();

    // pricing
    int enter = -1;
    S best_rc(0);
    for (int j = 0; j < n; ++j) {
      S rc(0);
      for (const auto& [r, v] : cols[j]) rc -= y[r] * v;
      if (negative(rc)) {
        if (bland) {
          enter = j;
          break;
        }
        if (enter < 0 || rc < best_rc) {
          enter = j;
          best_rc = rc;
        }
      }
    }
    // artificials may re-enter only until they first leave
    if (enter < 0) {
      for (int a = 0; a < m && enter < 0; ++a) {
        if (artificial_out[a]) continue;
        const S rc = S(1) - y[a];
        if (negative(rc)) enter = n + a;
      }
    }

    if (enter < 0) break;  // optimal

    // direction d = B^-1 A_enter
    if (enter < n) {
      d.setZero();
      for (const auto& [r, v] : cols[enter]) d += binv.col(r) * v;
    } else {
      d = binv.col(enter - n);
    }

    // lexicographic ratio test: minimize (xb_r, binv_r) / d_r row-wise, which
    // prevents cycling under any pricing rule (the initial artificial basis
    // makes every (xb_r, binv_r) lexico-positive)
    std::vector<int> cand;
    S best_ratio(0);
    for (int r = 0; r < m; ++r) {
      if (!positive(d[r])) continue;
      const S ratio = xb[r] / d[r];
      if (cand.empty() || negative(ratio - best_ratio)) {
        cand.assign(1, r);
        best_ratio = ratio;
      } else if (is_zero(ratio - best_ratio)) {
        cand.push_back(r);
      }
    }
    if (cand.empty())
      throw SimplexError("phase-1 direction unbounded; system is malformed");
    for (int c = 0; c < m && cand.size() > 1; ++c) {
      S best(0);
      std::vector<int> next;
      for (int r : cand) {
        const S w = binv(r, c) / d[r];
        if (next.empty() || negative(w - best)) {
          next.assign(1, r);
          best = w;
        } else if (is_zero(w - best)) {
          next.push_back(r);
        }
      }
      cand.swap(next);
    }
    const int leave = cand.front();

    // pivot: eta update of B^-1 and the basic values
    const S piv = d[leave];
    binv.row(leave) /= piv;
    xb[leave] /= piv;
    for (int r = 0; r < m; ++r) {
      if (r == leave || is_zero(d[r])) continue;
      binv.row(r) -= d[r] * binv.row(leave);
      xb[r] -= d[r] * xb[leave];
      if (!exact && xb[r] < S(0) && is_zero(xb[r])) xb[r] = S(0);
    }
    if (basis[leave] >= n) artificial_out[basis[leave] - n] = true;
    basis[leave] = enter;
  }

  S objective(0);
  for (int r = 0; r < m; ++r)
    if (basis[r] >= n) objective += xb[r];
  out.objective = objective;
  out.near_degenerate = !exact && std::abs(losr::to_double(objective)) <= 1e-7;

  if (is_zero(objective) || (!exact && objective < S(0))) {
    out.feasible = true;
    out.x.assign(n, S(0));
    for (int r = 0; r < m; ++r)
      if (basis[r] < n) out.x[basis[r]] = xb[r];
  } else {
    out.feasible = false;
    // final duals: y^T A_j <= 0 by optimality, y^T b = objective > 0
    y.setZero();
    for (int r = 0; r < m; ++r)
      if (basis[r] >= n) y += binv.row(r).transpose();
    out.farkas.assign(m, S(0));
    for (int r = 0; r < m; ++r) out.farkas[r] = flipped[r] ? S(0) - y[r] : y[r];
  }
  return out;
}

}  // namespace losr
