#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "losr/behavior.hpp"
#include "losr/quantum.hpp"

using namespace losr;

namespace {

Behavior<double> uniform_ab() {
  return uniform_behavior<double>({{"A", 2, 2}, {"B", 2, 2}});
}

// product of independent single-party tables, so nonsignalling by build
Behavior<Rational> random_rational_behavior(const std::vector<PartySpec>& specs,
                                            std::mt19937& rng) {
  std::vector<Behavior<Rational>> locals;
  for (const auto& spec : specs) {
    auto l = Behavior<Rational>::zero({spec});
    for (Eigen::Index x = 0; x < l.num_input_combos(); ++x) {
      Rational total(0);
      std::vector<Rational> w;
      for (Eigen::Index o = 0; o < l.num_output_combos(); ++o) {
        w.emplace_back(1 + rng() % 7);
        total += w.back();
      }
      for (Eigen::Index o = 0; o < l.num_output_combos(); ++o)
        l.table()[x * l.num_output_combos() + o] = w[o] / total;
    }
    locals.push_back(l);
  }
  auto out = locals[0];
  for (std::size_t j = 1; j < locals.size(); ++j) out = product(out, locals[j]);
  return out;
}

}  // namespace

TEST_CASE("nonsignalling checks") {
  CHECK(check_nonsignalling(uniform_ab()));

  // A's marginal depends on B's input: signalling
  auto b = Behavior<double>::zero({{"A", 2, 2}, {"B", 2, 2}});
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      b.at({x, y}, {y, 0}) = 1.0;  // a = y
  CHECK_FALSE(check_nonsignalling(b));

  auto un = Behavior<double>::zero({{"A", 1, 2}});
  un.table()[0] = 0.7;
  un.table()[1] = 0.7;
  CHECK_THROWS_AS(check_nonsignalling(un), BehaviorError);

  // the hidden-signalling LHVM is nonsignalling as a distribution
  CHECK(check_nonsignalling(svetlichny_lhvm_behavior<double>()));
}

TEST_CASE("marginalize") {
  auto ghz = ghz_behavior<double>(3, 1.0);
  auto ab = marginalize(ghz, {0, 1});
  CHECK(ab.num_parties() == 2);
  CHECK(ab.is_normalized());
  // uniform single-party marginals
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 2; ++a)
      CHECK(marginalize(ab, {0}).at({x}, {a}) == doctest::Approx(0.5));

  // marginalize over nothing is the identity
  auto full = marginalize(ghz, {0, 1, 2});
  for (Eigen::Index i = 0; i < full.table().size(); ++i)
    CHECK(full.table()[i] == doctest::Approx(ghz.table()[i]));

  CHECK_THROWS_AS(marginalize(ghz, {0, 0}), BehaviorError);
  CHECK_THROWS_AS(marginalize(ghz, {5}), BehaviorError);
}

TEST_CASE("product and marginalize recover factors exactly") {
  std::mt19937 rng(7);
  for (int rep = 0; rep < 10; ++rep) {
    auto b1 = random_rational_behavior({{"A", 2, 2}, {"B", 2, 3}}, rng);
    auto b2 = random_rational_behavior({{"C", 3, 2}}, rng);
    auto prod = product(b1, b2);
    auto back = marginalize(prod, {0, 1});
    for (Eigen::Index i = 0; i < b1.table().size(); ++i)
      CHECK(back.table()[i] == b1.table()[i]);
    auto back2 = marginalize(prod, {2});
    for (Eigen::Index i = 0; i < b2.table().size(); ++i)
      CHECK(back2.table()[i] == b2.table()[i]);
  }
  CHECK_THROWS_AS(product(uniform_ab(), uniform_ab()), BehaviorError);
}

TEST_CASE("marginalization commutes") {
  std::mt19937 rng(11);
  auto b = random_rational_behavior({{"A", 2, 2}, {"B", 2, 2}, {"C", 2, 2}}, rng);
  auto direct = marginalize(b, {0});
  auto staged = marginalize(marginalize(b, {0, 2}), {0});
  for (Eigen::Index i = 0; i < direct.table().size(); ++i)
    CHECK(direct.table()[i] == staged.table()[i]);
}

TEST_CASE("condition_expectation") {
  // deterministic all-zero outputs: every conditioned correlator is 1
  auto det = deterministic_behavior<double>(ghz_party_specs(3),
                                            {{0, 0}, {0, 0, 0}, {0, 0}});
  ParityEvent ev{{{2, 1}}, +1};
  CHECK(condition_expectation(det, CorrelatorTerm{{{0, 0}, {1, 0}}}, ev) ==
        doctest::Approx(1.0));

  // ideal GHZ_3: <A0B0> conditioned on C=+1 at z=1 equals 1/sqrt2
  auto ghz = ghz_behavior<double>(3, 1.0);
  CHECK(condition_expectation(ghz, CorrelatorTerm{{{0, 0}, {1, 0}}}, ev) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  // unconditioned Hadamard marginal of Charlie vanishes
  CHECK(condition_expectation(ghz, CorrelatorTerm{{{2, 1}}}) ==
        doctest::Approx(0.0));

  // zero-probability conditioning is an explicit error
  ParityEvent impossible{{{0, 0}}, -1};  // det behavior never outputs 1
  CHECK_THROWS_AS(
      condition_expectation(det, CorrelatorTerm{{{1, 0}}}, impossible),
      ConditioningError);
}

TEST_CASE("exact conditioning on the GHZ oracle") {
  auto ghz = ghz_behavior<RootTwo>(3, RootTwo(1));
  ParityEvent ev{{{2, 1}}, +1};
  const RootTwo half_r2(Rational(0), Rational(1, 2));  // 1/sqrt2
  CHECK(condition_expectation(ghz, CorrelatorTerm{{{0, 0}, {1, 0}}}, ev) == half_r2);
}
