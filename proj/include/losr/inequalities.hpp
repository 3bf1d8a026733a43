#pragma once

// Closed-form game scores and witness inequalities over behaviors with the
// GHZ_N input structure (Alice: 2 inputs, Bob: 3, Charlies: 2 each) and the
// chained-Bell (BKP) family.

#include <optional>
#include <stdexcept>

#include "losr/behavior.hpp"

namespace losr {

/// Event "all Charlies had input 1 and an even number of them output -1",
/// i.e. the product of their +-1 outcomes is +1.
inline ParityEvent collective_charlie_event(int n) {
  ParityEvent ev;
  for (int j = 2; j < n; ++j) ev.parties.emplace_back(j, 1);
  ev.target = +1;
  return ev;
}

/// CHSH score between Alice and Bob, scored only on the collective-Charlie
/// event: <A0B0> + <A0B1> + <A1B0> - <A1B1>, all conditioned.
template <class S>
S i_bell_conditioned(const Behavior<S>& b, const ParityEvent& conditioning) {
  auto corr = [&](int xa, int xb) {
    return condition_expectation(b, CorrelatorTerm{{{0, xa}, {1, xb}}}, conditioning);
  };
  return corr(0, 0) + corr(0, 1) + corr(1, 0) - corr(1, 1);
}

/// The "same" chain: <A0B2> + <B2C0[1]> + sum_i <C0[i]C0[i+1]>, n-1 terms.
template <class S>
S i_same(const Behavior<S>& b, int n) {
  if (b.num_parties() != n || n < 3)
    throw BehaviorError("i_same: behavior does not have the GHZ_n structure");
  if (b.parties()[0].input_cardinality != 2 || b.parties()[1].input_cardinality != 3)
    throw BehaviorError("i_same: input structure mismatch");
  auto corr = [&](int p1, int x1, int p2, int x2) {
    return condition_expectation(b, CorrelatorTerm{{{p1, x1}, {p2, x2}}});
  };
  S score = corr(0, 0, 1, 2) + corr(1, 2, 2, 0);
  for (int j = 2; j + 1 < n; ++j) score += corr(j, 0, j + 1, 0);
  return score;
}

/// Slack (LHS - RHS) of the N-party witness inequality
///   I_Bell^{C~=1} + 4 I_same / (1+<C~>) <= 6 + (4(N-2) - 4<C~>) / (1+<C~>);
/// positive slack certifies violation. For N=3 this is the tripartite
/// inequality with plain Charlie conditioning.
template <class S>
S ghz_inequality_slack(const Behavior<S>& b, int n) {
  const auto event = collective_charlie_event(n);
  const S c_tilde = condition_expectation(
      b, CorrelatorTerm{[&] {
        std::vector<std::pair<int, int>> f;
        for (int j = 2; j < n; ++j) f.emplace_back(j, 1);
        return f;
      }()});
  if (ScalarTraits<S>::is_zero(c_tilde + S(1), 1e-12))
    throw BehaviorError("ghz_inequality_slack: <C~> = -1 singularity");
  const S bell = i_bell_conditioned(b, event);
  const S same = i_same(b, n);
  const S lhs = bell + S(4) * same / (S(1) + c_tilde);
  const S rhs = S(6) + (S(4 * (n - 2)) - S(4) * c_tilde) / (S(1) + c_tilde);
  return lhs - rhs;
}

/// BKP_M score between parties 0 and 1 (inputs 1..M), optionally conditioned.
/// Local resources cannot reach below 1; the algebraic minimum is 0.
template <class S>
S bkp_score(const Behavior<S>& b, int m,
            const std::optional<ParityEvent>& conditioning = std::nullopt) {
  if (b.parties()[0].input_cardinality < m + 1 || b.parties()[1].input_cardinality < m + 1)
    throw BehaviorError("bkp_score: fewer than M settings");
  // P(A != B | X, Y [, event]) via the +-1 correlator: (1 - <AB>)/2
  auto p_diff = [&](int xa, int xb) {
    const S c = condition_expectation(b, CorrelatorTerm{{{0, xa}, {1, xb}}}, conditioning);
    return (S(1) - c) / S(2);
  };
  S score = (S(1) - p_diff(1, m));  // P(A = B | X=1, Y=M)
  score += p_diff(m, m);
  for (int i = 1; i <= m - 1; ++i)
    for (int j = 0; j <= 1; ++j) score += p_diff(i + j, i);
  return score;
}

}  // namespace losr
