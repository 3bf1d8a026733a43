#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "losr/certify.hpp"

using namespace losr;

namespace {

Scenario ghz_scenario(int n = 3) {
  return canonical_scenario(n, ghz_party_specs(n));
}

std::vector<Inflation> order_classes(const Scenario& scn, int order) {
  std::vector<Inflation> out;
  for (const auto& cls : enumerate_inflations(scn, order).classes)
    out.push_back(Inflation(&scn, order, cls.representative.wiring()));
  return out;
}

Behavior<RootTwo> random_deterministic_mixture(std::mt19937& rng) {
  auto specs = ghz_party_specs(3);
  auto b = Behavior<RootTwo>::zero(specs);
  const int terms = 1 + int(rng() % 5);
  for (int t = 0; t < terms; ++t) {
    const Rational weight(1, terms);
    // deterministic responses: output bit per (party, input)
    std::vector<std::vector<int>> resp(3);
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < specs[j].input_cardinality; ++i)
        resp[j].push_back(int(rng() % 2));
    std::vector<int> x(3, 0), in_radix{2, 3, 2};
    do {
      b.at(x, {resp[0][x[0]], resp[1][x[1]], resp[2][x[2]]}) += RootTwo(weight);
    } while (detail::next_tuple(x, in_radix));
  }
  return b;
}

}  // namespace

TEST_CASE("GHZ_3 at p=1 is infeasible at K=2 with a verified certificate") {
  auto scn = ghz_scenario();
  auto infls = order_classes(scn, 2);
  auto res = certify(scn, ghz_behavior<RootTwo>(3, RootTwo(1)), infls);
  REQUIRE(res.verdict == Verdict::Infeasible);
  REQUIRE(res.certificate.has_value());
  const auto& cert = *res.certificate;
  CHECK(cert.verification_value.sign() > 0);
  CHECK(cert.order == 2);
  CHECK(cert.num_inflations == 2);
  CHECK(!cert.duals.empty());
  CHECK(!cert.witness_coeffs.empty());

  // independent exact re-verification from a fresh compilation
  auto p = ghz_behavior<RootTwo>(3, RootTwo(1));
  auto sys = compile(scn, p, infls);
  CHECK(verify_certificate(cert, sys, &p));

  // perturbing any multiplier must break exact validity
  Certificate bad = cert;
  bad.duals[0].second += Rational(1, 1000);
  CHECK_FALSE(verify_certificate(bad, sys));

  // the certificate is tied to this row layout
  auto sys_k1 = compile(scn, p, {identity_inflation(scn, 1)});
  CHECK_THROWS_AS(verify_certificate(cert, sys_k1), CertifyError);
}

TEST_CASE("GHZ_3 at p=1/2 is feasible at K=2") {
  auto scn = ghz_scenario();
  auto infls = order_classes(scn, 2);
  auto res = certify(scn, ghz_behavior<RootTwo>(3, RootTwo(Rational(1, 2))), infls);
  CHECK(res.verdict == Verdict::Feasible);
  CHECK(!res.certificate.has_value());
  CHECK(res.local_decomposition);  // p=1/2 decomposes into local strategies

  // without the shortcut the LP relaxation must agree
  CertifyOptions opt;
  opt.skip_local_shortcut = true;
  auto lp = certify(scn, ghz_behavior<RootTwo>(3, RootTwo(Rational(1, 2))), infls, opt);
  CHECK(lp.verdict == Verdict::Feasible);
}

TEST_CASE("witness separates: nonpositive on feasible behaviors") {
  auto scn = ghz_scenario();
  auto infls = order_classes(scn, 2);
  auto res = certify(scn, ghz_behavior<RootTwo>(3, RootTwo(1)), infls);
  REQUIRE(res.certificate.has_value());
  const auto& cert = *res.certificate;

  std::mt19937 rng(2024);
  for (int rep = 0; rep < 50; ++rep) {
    auto q = random_deterministic_mixture(rng);
    RootTwo w(cert.witness_constant);
    for (const auto& [t, c] : cert.witness_coeffs) w += RootTwo(c) * q.table()[t];
    CHECK(w.sign() <= 0);
  }
}

TEST_CASE("random deterministic mixtures are feasible") {
  auto scn = ghz_scenario();
  auto infls = order_classes(scn, 2);
  std::mt19937 rng(7);
  for (int rep = 0; rep < 10; ++rep) {
    auto q = random_deterministic_mixture(rng);
    auto res = certify(scn, q, infls);
    CHECK(res.verdict == Verdict::Feasible);
    CHECK(res.local_decomposition);
  }
}

TEST_CASE("K=1 compiled system certifies through the generic path") {
  auto scn = ghz_scenario();
  CertifyOptions opt;
  opt.skip_local_shortcut = true;
  auto res = certify(scn, ghz_behavior<RootTwo>(3, RootTwo(1)),
                     {identity_inflation(scn, 1)}, opt);
  // K=1 only pins the single block to P itself: always feasible
  CHECK(res.verdict == Verdict::Feasible);
}

TEST_CASE("shared-bit chains are infeasible with exact certificates") {
  for (int n : {3, 4, 5}) {
    CAPTURE(n);
    auto res = certify_shared_bit(n);
    REQUIRE(res.verdict == Verdict::Infeasible);
    REQUIRE(res.certificate.has_value());
    auto sys = shared_bit_system(n);
    CHECK(verify_certificate(*res.certificate, sys));
    CHECK(res.certificate->verification_value.sign() > 0);
    CHECK(res.certificate->verification_value.is_rational());
  }
}

TEST_CASE("noise sweep brackets the K=2 threshold") {
  auto sweep = sweep_noise(3, 2, 0.02);
  CHECK(sweep.noise_infeasible - sweep.noise_feasible <= 0.02);
  const double threshold = 2 * std::sqrt(2.0) - 2;  // ~0.82843
  CHECK(sweep.noise_feasible <= threshold);
  CHECK(sweep.noise_infeasible >= threshold);
  CHECK(sweep.certificate.verification_value.sign() > 0);
  CHECK(sweep.fidelity_infeasible == doctest::Approx(fidelity_of(sweep.noise_infeasible, 3)));
}
