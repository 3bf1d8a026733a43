#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "losr/quantum.hpp"

using namespace losr;

TEST_CASE("ghz behavior is a valid nonsignalling distribution") {
  for (int n : {3, 4}) {
    for (double p : {0.0, 0.5, 1.0}) {
      auto b = ghz_behavior<double>(n, p);
      CHECK(b.is_normalized());
      CHECK(b.is_nonnegative());
      CHECK(check_nonsignalling(b));
    }
  }
  CHECK_THROWS(ghz_behavior<double>(2, 1.0));
}

TEST_CASE("ghz behavior exact entries") {
  auto b = ghz_behavior<RootTwo>(3, RootTwo(1));
  const Rational half(1, 2);
  // all-rectilinear (Bob input 2): perfectly correlated coin
  CHECK(b.at({0, 2, 0}, {0, 0, 0}) == RootTwo(half));
  CHECK(b.at({0, 2, 0}, {1, 1, 1}) == RootTwo(half));
  CHECK(b.at({0, 2, 0}, {0, 0, 1}) == RootTwo(0));
  // Alice Hadamard against rectilinear rest: coherence invisible, uniform on
  // the correlated pair
  CHECK(b.at({1, 2, 0}, {0, 0, 0}) == RootTwo(Rational(1, 4)));
  CHECK(b.at({1, 2, 0}, {0, 1, 0}) == RootTwo(0));

  // white noise floor: p = 0 is exactly uniform
  auto u = ghz_behavior<RootTwo>(3, RootTwo(0));
  for (Eigen::Index i = 0; i < u.table().size(); ++i)
    CHECK(u.table()[i] == RootTwo(Rational(1, 8)));
}

TEST_CASE("ghz behavior is affine in the noise parameter") {
  auto b1 = ghz_behavior<RootTwo>(3, RootTwo(1));
  auto b0 = ghz_behavior<RootTwo>(3, RootTwo(0));
  const RootTwo p(Rational(3, 7));
  auto bp = ghz_behavior<RootTwo>(3, p);
  for (Eigen::Index i = 0; i < bp.table().size(); ++i)
    CHECK(bp.table()[i] == p * b1.table()[i] + (RootTwo(1) - p) * b0.table()[i]);
}

TEST_CASE("fidelity / noise conversion") {
  CHECK(fidelity_of(1.0, 3) == doctest::Approx(1.0));
  CHECK(fidelity_of(0.0, 3) == doctest::Approx(0.125));
  // f = (1 + 7p)/8 for N = 3
  CHECK(fidelity_of(0.5, 3) == doctest::Approx(4.5 / 8));
  for (double p : {0.0, 0.3, 0.9238, 1.0})
    CHECK(noise_of(fidelity_of(p, 4), 4) == doctest::Approx(p));
  CHECK_THROWS(fidelity_of(1.5, 3));
  CHECK_THROWS(noise_of(0.05, 3));
}

TEST_CASE("ghz density sanity") {
  auto rho = ghz_density(3, 0.7);
  CHECK(rho.trace() == doctest::Approx(1.0));
  CHECK((rho - rho.transpose()).norm() == doctest::Approx(0.0));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho);
  CHECK(es.eigenvalues().minCoeff() >= -1e-12);
}

TEST_CASE("w behavior basics") {
  for (int m : {2, 4}) {
    auto b = w_behavior(m);
    CHECK(b.is_normalized());
    CHECK(b.is_nonnegative());
    CHECK(check_nonsignalling(b));
    // P(C = 0 | rectilinear) = 2/3 for the W state
    auto c = marginalize(b, {2});
    CHECK(c.at({0}, {0}) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  }
  CHECK_THROWS(w_behavior(1));
}

TEST_CASE("hidden-signalling lhvm entries") {
  auto b = svetlichny_lhvm_behavior<Rational>();
  CHECK(b.is_normalized());
  // Bob and Charlie always agree (both output lambda)
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 3; ++y)
      for (int z = 0; z < 2; ++z)
        for (int a = 0; a < 2; ++a)
          CHECK(b.at({x, y, z}, {a, 0, 1}) == Rational(0));
  // a = b unless x*y odd
  CHECK(b.at({1, 1, 0}, {1, 0, 0}) == Rational(1, 2));
  CHECK(b.at({1, 1, 0}, {0, 0, 0}) == Rational(0));
  CHECK(b.at({0, 1, 0}, {0, 0, 0}) == Rational(1, 2));
}
