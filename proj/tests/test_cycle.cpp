#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "gkzcc/cycle.hpp"
#include "gkzcc/json_io.hpp"
#include "test_support.hpp"

using namespace gkzcc;
using gkzcc::testing::random_unimodular;

TEST_CASE("umbrella lists the supporting-functional zero sets") {
  SECTION("B = [0 0 1]: the repeated column pins {1,2} together") {
    auto u = umbrella(hat(IntMatrix{{0, 0, 1}}));
    CHECK(u == std::vector<ThetaSubset>{ThetaSubset{}, ThetaSubset({3}),
                                        ThetaSubset({1, 2}), ThetaSubset({1, 2, 3})});
  }
  SECTION("B = [0 1 2]: only the extreme columns span rays") {
    auto u = umbrella(hat(IntMatrix{{0, 1, 2}}));
    CHECK(u == std::vector<ThetaSubset>{ThetaSubset{}, ThetaSubset({1}),
                                        ThetaSubset({3}), ThetaSubset({1, 2, 3})});
  }
  SECTION("equal columns leave only the trivial faces") {
    auto u = umbrella(IntMatrix{{1, 1, 1}});
    CHECK(u == std::vector<ThetaSubset>{ThetaSubset{}, ThetaSubset({1, 2, 3})});
  }
  SECTION("square nonsingular hats expose every subset") {
    auto u = umbrella(hat(IntMatrix{{0, 1}}));
    CHECK(u.size() == 4);
  }
  SECTION("confluent input is rejected") {
    CHECK_THROWS_AS(umbrella(IntMatrix{{2, 2}, {0, 1}}), PreconditionError);
  }
}

TEST_CASE("umbrella is invariant under unimodular row transforms") {
  std::mt19937_64 rng(12001);
  for (const IntMatrix& b :
       {IntMatrix{{0, 0, 1}}, IntMatrix{{0, 5, 10}}, IntMatrix{{0, 1, 5}}}) {
    const IntMatrix a = hat(b);
    auto base = umbrella(a);
    for (int iter = 0; iter < 10; ++iter) {
      IntMatrix p = random_unimodular(rng, a.rows());
      CHECK(umbrella(p * a) == base);
    }
  }
}

TEST_CASE("cc_gkz on the worked nondegenerate example") {
  auto res = cc_gkz(IntMatrix{{0, 0, 1}}, 7, CharacterVector(6, {1, 1}));
  CHECK(res.cycle.sign_exponent == 4);  // d + n = 1 + 3
  REQUIRE(res.cycle.components.size() == 4);
  CHECK(res.cycle.components[0].kind == CycleKind::ZeroSection);
  for (const auto& c : res.cycle.components) {
    CHECK(c.field == FieldTag::CharP);
    CHECK_FALSE(c.multiplicity.has_value());  // symbolic multiplicities
  }
  CHECK(res.cycle.components[1].theta == ThetaSubset({3}));
  CHECK(res.cycle.components[2].theta == ThetaSubset({1, 2}));
  CHECK(res.cycle.components[3].theta == ThetaSubset({1, 2, 3}));
  CHECK(res.report.initial_audit.value);
  CHECK(res.report.dim_audit_ok);
}

TEST_CASE("cc_gkz auto-reduces a p-divisible row") {
  auto res = cc_gkz(IntMatrix{{0, 5, 10}}, 5, CharacterVector(4, {1, 1}));
  CHECK(res.report.divided_rows == std::vector<std::size_t>{1});
  CHECK(res.report.final_b == IntMatrix{{0, 1, 2}});
  CHECK_FALSE(res.report.initial_audit.value);
  CHECK(res.cycle.components.size() == 4);
}

TEST_CASE("cc_gkz fails loudly on the degenerate example") {
  try {
    cc_gkz(IntMatrix{{0, 1, 5}}, 5, CharacterVector(4, {1, 1}));
    FAIL("expected NondegeneracyFailure");
  } catch (const NondegeneracyFailure& e) {
    REQUIRE(e.failing.size() == 1);
    CHECK(e.failing.front() == ThetaSubset({1, 3}));
    REQUIRE(e.dim_excess.size() == 1);
    CHECK(e.dim_excess.front().second == 4);
    CHECK(e.ambient_n == 3);
  }
}

TEST_CASE("cc_gkz rejects trivial chi_0 and confluent input") {
  CHECK_THROWS_AS(cc_gkz(IntMatrix{{0, 0, 1}}, 7, CharacterVector(6, {0, 1})),
                  TrivialCharacterError);
  CHECK_THROWS_AS(cc_gkz(IntMatrix{{1, 1}, {2, 2}}, 7, CharacterVector(6, {1, 0, 0})),
                  PreconditionError);
}

TEST_CASE("cc_gkz reduces square degenerate matrices") {
  // hat([0 5]) = [[1,1],[0,5]] has determinant 5
  auto res = cc_gkz(IntMatrix{{0, 5}}, 5, CharacterVector(4, {1, 1}));
  REQUIRE(res.report.square_reduction.has_value());
  CHECK(res.report.square_reduction->steps.size() == 1);
  CHECK(res.report.square_reduction->replay() ==
        res.report.square_reduction->final_matrix);
  CHECK(is_p_nondegenerate(hat(res.report.final_b), 5).value);
  CHECK(res.cycle.components.size() == 4);
  REQUIRE(res.report.final_chi.has_value());
  CHECK(res.report.final_chi->order == 4);
}

TEST_CASE("multiplicity tables fill in integer coefficients") {
  MultiplicityTable table;
  table.entries[ThetaSubset({3})] = 2;
  table.entries[ThetaSubset{}] = 1;
  auto res = cc_gkz(IntMatrix{{0, 0, 1}}, 7, CharacterVector(6, {1, 1}), table);
  CHECK(res.cycle.components[0].multiplicity == Int(1));  // zero section
  CHECK(res.cycle.components[1].multiplicity == Int(2));  // theta = {3}
  CHECK_FALSE(res.cycle.components[2].multiplicity.has_value());

  MultiplicityTable bad;
  bad.entries[ThetaSubset({2})] = 1;  // {2} is not an umbrella member here
  CHECK_THROWS_AS(cc_gkz(IntMatrix{{0, 0, 1}}, 7, CharacterVector(6, {1, 1}), bad),
                  PreconditionError);
}

TEST_CASE("specialize relabels and nothing else") {
  Cycle c;
  c.sign_exponent = 4;
  c.components.push_back(
      {CycleKind::ZeroSection, std::nullopt, std::nullopt, FieldTag::Char0});
  c.components.push_back(
      {CycleKind::UmbrellaStratum, ThetaSubset({1, 2}), Int(3), FieldTag::Char0});
  Cycle s = specialize(c);
  REQUIRE(s.components.size() == 2);
  CHECK(s.sign_exponent == c.sign_exponent);
  for (std::size_t i = 0; i < s.components.size(); ++i) {
    CHECK(s.components[i].field == FieldTag::CharP);
    CHECK(s.components[i].kind == c.components[i].kind);
    CHECK(s.components[i].theta == c.components[i].theta);
    CHECK(s.components[i].multiplicity == c.components[i].multiplicity);
  }
  CHECK_THROWS_AS(specialize(s), PreconditionError);
  CHECK(specialize(Cycle{}).components.empty());
}

TEST_CASE("resolution route stays inside the umbrella") {
  SECTION("one-dimensional worked example") {
    auto route = cc_via_resolution(IntMatrix{{0, 0, 1}});
    CHECK(route.resolution.records.empty());
    auto members = umbrella(hat(IntMatrix{{0, 0, 1}}));
    std::set<ThetaSubset> umbrella_set(members.begin(), members.end());
    bool zero_section = false, infinity = false;
    for (const auto& comp : route.cycle.components) {
      if (comp.kind == CycleKind::ZeroSection) zero_section = true;
      if (comp.kind == CycleKind::InfinityConormal) infinity = true;
      if (comp.theta) CHECK(umbrella_set.count(*comp.theta) == 1);
    }
    CHECK(zero_section);
    CHECK(infinity);
  }
  SECTION("two-dimensional route with real blow-ups") {
    IntMatrix b{{1, 0, 0}, {0, 1, 0}};
    auto route = cc_via_resolution(b);
    CHECK_FALSE(route.resolution.records.empty());
    CHECK(is_Sigma_good(b, route.resolution.fan));
    auto members = umbrella(hat(b));
    std::set<ThetaSubset> umbrella_set(members.begin(), members.end());
    for (const auto& comp : route.cycle.components)
      if (comp.theta) CHECK(umbrella_set.count(*comp.theta) == 1);
  }
}

TEST_CASE("cycle serialization round-trips canonically") {
  auto res = cc_gkz(IntMatrix{{0, 0, 1}}, 7, CharacterVector(6, {1, 1}));
  Json j = cycle_to_json(res.cycle);
  Cycle back = cycle_from_json(j);
  CHECK(back == res.cycle);
  CHECK(cycle_to_json(back).dump(2) == j.dump(2));
}
