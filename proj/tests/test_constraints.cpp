#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <sstream>

#include "losr/constraints.hpp"
#include "losr/quantum.hpp"

using namespace losr;

namespace {

Scenario triangle() {
  return canonical_scenario(3, {{"A", 2, 2}, {"B", 3, 2}, {"C", 2, 2}});
}

std::vector<Inflation> triangle_k2_list(const Scenario& tri) {
  std::vector<Inflation> out;
  for (const auto& cls : enumerate_inflations(tri, 2).classes)
    out.push_back(Inflation(&tri, 2, cls.representative.wiring()));
  return out;
}

template <class S>
std::map<RowTag, long long> rows_by_tag(const ConstraintSystem<S>& sys) {
  std::map<RowTag, long long> out;
  for (const auto& r : sys.rows) ++out[r.tag];
  return out;
}

}  // namespace

TEST_CASE("triangle K=2 block and row cardinalities") {
  auto tri = triangle();
  auto infls = triangle_k2_list(tri);
  REQUIRE(infls.size() == 2);
  auto p = ghz_behavior<double>(3, 0.5);
  auto sys = compile(tri, p, infls);

  // two dense blocks: (2*3*2)^2 input combos... precisely 144 x 64 each
  REQUIRE(sys.blocks.size() == 2);
  CHECK(sys.blocks[0].size == 9216);
  CHECK(sys.blocks[1].size == 9216);
  CHECK(sys.num_vars == 18432);
  CHECK(sys.block_offset == std::vector<long long>{0, 9216});

  auto tally = rows_by_tag(sys);
  // closed forms: 144 input combos per block; NS per party q is
  // (I_q - 1) * (144 / I_q) * 32 summed over the six party copies
  CHECK(tally[RowTag::Normalization] == 2 * 144);
  CHECK(tally[RowTag::Nonsignalling] == 2 * (4 * 2304 + 2 * 3072));
  // C1: double triangle pins two full triples (96 rows each); the hexagon
  // pins its six ring edges (24 + 24 + 16 rows per type pair, twice)
  CHECK(tally[RowTag::C1] == 192 + 128);
  CHECK(tally[RowTag::C2] > 0);

  // cross-check C1 against the enumerated pairs
  long long c1_expected = 0;
  for (std::size_t b = 0; b < infls.size(); ++b)
    for (const auto& pair : enumerate_c1_pairs(infls[b], tri)) {
      long long rows = 1;
      for (int t : pair.base_types)
        rows *= static_cast<long long>(tri.party(t).input_cardinality) *
                tri.party(t).output_cardinality;
      c1_expected += rows;
    }
  CHECK(tally[RowTag::C1] == c1_expected);
}

TEST_CASE("row shape, ordering and key uniqueness") {
  auto tri = triangle();
  auto infls = triangle_k2_list(tri);
  auto sys = compile(tri, ghz_behavior<double>(3, 0.5), infls);

  std::map<std::string, int> keys;
  for (std::size_t r = 0; r < sys.rows.size(); ++r) {
    const auto& row = sys.rows[r];
    ++keys[row.key];
    if (r > 0) {
      const auto& prev = sys.rows[r - 1];
      CHECK((prev.tag < row.tag || (prev.tag == row.tag && prev.key < row.key)));
    }
    for (const auto& [c, v] : row.row.coeffs) {
      CHECK(c >= 0);
      CHECK(c < sys.num_vars);
      if (row.tag != RowTag::C1) CHECK((v == 1.0 || v == -1.0));
    }
    if (row.tag == RowTag::C2) {
      CHECK(row.row.rhs == 0.0);
      CHECK(!row.row.coeffs.empty());
    }
    if (row.tag == RowTag::Normalization) CHECK(row.row.rhs == 1.0);
    if (row.tag == RowTag::Nonsignalling) CHECK(row.row.rhs == 0.0);
  }
  for (const auto& [k, count] : keys) {
    CAPTURE(k);
    CHECK(count == 1);
  }

  // determinism: a second compilation is row-for-row identical
  auto sys2 = compile(tri, ghz_behavior<double>(3, 0.5), infls);
  REQUIRE(sys2.rows.size() == sys.rows.size());
  for (std::size_t r = 0; r < sys.rows.size(); ++r) {
    CHECK(sys2.rows[r].key == sys.rows[r].key);
    CHECK(sys2.rows[r].row.coeffs == sys.rows[r].row.coeffs);
  }
}

TEST_CASE("K=1 system pins the single block to P") {
  auto tri = triangle();
  std::vector<Inflation> infls = {identity_inflation(tri, 1)};
  auto p = ghz_behavior<double>(3, 0.3);
  auto sys = compile(tri, p, infls);
  REQUIRE(sys.num_vars == 96);

  auto out = solve_phase1(static_cast<int>(sys.num_vars), sys.sparse_rows());
  REQUIRE(out.feasible);
  // block party order (A1, B1, C1) matches P's party order, so the flat
  // layouts coincide entry for entry
  for (int j = 0; j < 96; ++j)
    CHECK(out.x[j] == doctest::Approx(p.table()[j]).epsilon(1e-9));
}

TEST_CASE("compile error paths") {
  auto tri = triangle();
  auto infls = triangle_k2_list(tri);
  auto p = ghz_behavior<double>(3, 0.5);

  CHECK_THROWS_AS(compile(tri, p, std::vector<Inflation>{}), ConstraintError);
  CHECK_THROWS_AS(compile(tri, ghz_behavior<double>(4, 0.5), infls),
                  ConstraintError);
  CHECK_THROWS_AS(compile(tri, p, infls, /*max_lp_vars=*/10000), ConstraintError);

  // an inflation built over a different scenario object is rejected
  auto other = triangle();
  CHECK_THROWS_AS(compile(tri, p, {identity_inflation(other, 1)}),
                  ConstraintError);

  // a signalling table (Alice outputs Bob's input) is rejected
  auto bad = Behavior<double>::zero(p.parties());
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 3; ++y)
      for (int z = 0; z < 2; ++z)
        for (int b = 0; b < 2; ++b)
          for (int c = 0; c < 2; ++c)
            bad.at({x, y, z}, {y % 2, b, c}) = 0.25;
  REQUIRE(bad.is_normalized());
  CHECK_THROWS_AS(compile(tri, bad, infls), ConstraintError);
}

TEST_CASE("shared-bit chain system") {
  auto sys = shared_bit_system(3);
  CHECK(sys.num_vars == 8);
  auto tally = rows_by_tag(sys);
  CHECK(tally[RowTag::C1] == 8);
  CHECK(tally[RowTag::C2] == 4);
  CHECK(tally[RowTag::Normalization] == 1);

  for (int n : {3, 4, 5}) {
    auto s = shared_bit_system(n);
    auto out = solve_phase1(static_cast<int>(s.num_vars), s.sparse_rows());
    CAPTURE(n);
    REQUIRE_FALSE(out.feasible);
    // exact Farkas: y^T A <= 0 on every column, y^T b > 0
    std::vector<Rational> yta(s.num_vars, 0);
    Rational ytb = 0;
    const auto rows = s.sparse_rows();
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (const auto& [j, c] : rows[r].coeffs) yta[j] += out.farkas[r] * c;
      ytb += out.farkas[r] * rows[r].rhs;
    }
    for (const auto& v : yta) CHECK(v <= 0);
    CHECK(ytb > 0);
  }

  CHECK_THROWS_AS(shared_bit_system(2), ConstraintError);
  CHECK_THROWS_AS(shared_bit_system(21), ConstraintError);
}

TEST_CASE("sparse text dump") {
  auto tri = triangle();
  auto sys = compile(tri, ghz_behavior<double>(3, 0.0),
                     {identity_inflation(tri, 1)});
  std::ostringstream os;
  dump_constraints(sys, os);
  const std::string text = os.str();
  CHECK(text.rfind("# vars 96 rows " + std::to_string(sys.rows.size()), 0) == 0);
  CHECK(text.find(" rhs ") != std::string::npos);
  CHECK(text.find("C1") != std::string::npos);
  CHECK(text.find("NORM") != std::string::npos);
}
