#include "cmcert/cm_verifier.hpp"
#include "cmcert/errors.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cmcert;

namespace {

const PrecisionPolicy kPolicy = PrecisionPolicy::with_target(128);

}  // namespace

TEST_CASE("default grid") {
  const GridSpec g = GridSpec::default_grid();
  REQUIRE(g.size() == 25);
  CHECK(g.points().front() == BigRational(1, 16));
  CHECK(g.points().back() == 64);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const BigRational& x = g.points()[i];
    CHECK(BigRational(x * pow2(20)).get_den() == 1);
    if (i > 0) {
      CHECK(x > g.points()[i - 1]);
      // consecutive ratio close to 2^(5/12)
      const double ratio = BigRational(x / g.points()[i - 1]).get_d();
      CHECK(ratio == doctest::Approx(1.3348398541700344).epsilon(1e-4));
    }
  }
}

TEST_CASE("grid construction") {
  const GridSpec geo = GridSpec::geometric(BigRational(1, 10), 2, 12);
  CHECK(geo.size() == 12);
  CHECK(geo.points().back() == BigRational(1024, 5));
  const GridSpec list = GridSpec::parse_list("2, 1/3,0.5,2");
  CHECK(list.points() == std::vector<BigRational>{BigRational(1, 3), BigRational(1, 2), BigRational(2)});
  CHECK(list.merged(GridSpec::parse_list("7")).size() == 4);
  CHECK_THROWS_AS(GridSpec::parse_list("1,,2"), ParseError);
  CHECK_THROWS_AS(GridSpec::parse_list("1,-2"), DomainError);
  CHECK_THROWS_AS(GridSpec::explicit_points({}), DomainError);
  CHECK_THROWS_AS(GridSpec::geometric(1, 0, 3), DomainError);
  CHECK_THROWS_AS(GridSpec::log_spaced(2, 1, 5), DomainError);
}

TEST_CASE("function kinds") {
  CHECK(parse_function_kind("g") == FunctionKind::G);
  CHECK(parse_function_kind("H") == FunctionKind::H);
  CHECK(parse_function_kind("h") == FunctionKind::H);
  CHECK_THROWS_AS(parse_function_kind("f"), ParseError);
}

TEST_CASE("single cell at x = 1") {
  const CmScanReport r = cm_scan(FunctionKind::G, 0, GridSpec::parse_list("1"), kPolicy);
  REQUIRE(r.entries.size() == 1);
  CHECK(r.entries[0].verdict == Sign::Positive);
  CHECK(cmcert::testing::encloses(r.entries[0].value, "0.0963546512225457968794218072189"));
  CHECK(r.summary.max_k_verified == 0);
  CHECK(r.passed());
}

TEST_CASE("g and H scans on a geometric grid") {
  const GridSpec grid = GridSpec::geometric(BigRational(1, 10), 2, 12);
  for (FunctionKind kind : {FunctionKind::G, FunctionKind::H}) {
    const CmScanReport r = cm_scan(kind, 6, grid, kPolicy);
    INFO(to_string(kind));
    CHECK(r.entries.size() == 7 * 12);
    CHECK(r.all_positive());
    CHECK(r.summary.max_k_verified == 6);
    CHECK(r.summary.failures == 0);
    CHECK(r.summary.indeterminate == 0);
    // sorted by (k, x)
    for (std::size_t i = 1; i < r.entries.size(); ++i) {
      const auto& a = r.entries[i - 1];
      const auto& b = r.entries[i];
      CHECK((a.k < b.k || (a.k == b.k && a.x < b.x)));
    }
  }
}

TEST_CASE("scan is independent of the thread count") {
  const GridSpec grid = GridSpec::log_spaced(BigRational(1, 8), 8, 9);
  const std::string serial = cm_scan(FunctionKind::H, 4, grid, kPolicy, BoundModel::reference(), {1, 2}).to_json();
  const std::string parallel = cm_scan(FunctionKind::H, 4, grid, kPolicy, BoundModel::reference(), {8, 2}).to_json();
  CHECK(serial == parallel);
}

TEST_CASE("verdicts are monotone in precision") {
  const GridSpec grid = GridSpec::log_spaced(BigRational(1, 16), 64, 7);
  const CmScanReport low = cm_scan(FunctionKind::G, 5, grid, PrecisionPolicy::with_target(40));
  const CmScanReport high = cm_scan(FunctionKind::G, 5, grid, PrecisionPolicy::with_target(80));
  REQUIRE(low.entries.size() == high.entries.size());
  for (std::size_t i = 0; i < low.entries.size(); ++i) {
    if (low.entries[i].verdict == Sign::Positive) CHECK(high.entries[i].verdict == Sign::Positive);
  }
}

TEST_CASE("escalation resolves low-precision indeterminates") {
  // g(1024) ~ 1e-19 against psi'(1024)^2 ~ 1e-6: 40 working bits cannot decide it
  PrecisionPolicy p = PrecisionPolicy::with_target(8);
  const GridSpec grid = GridSpec::parse_list("1024");
  const CmScanReport none = cm_scan(FunctionKind::G, 0, grid, p, BoundModel::reference(), {1, 0});
  const CmScanReport some = cm_scan(FunctionKind::G, 0, grid, p, BoundModel::reference(), {1, 8});
  CHECK(none.entries[0].verdict == Sign::Indeterminate);
  CHECK(none.summary.indeterminate == 1);
  CHECK(none.passed());
  CHECK_FALSE(none.all_positive());
  CHECK(some.entries[0].verdict == Sign::Positive);
  CHECK(some.entries[0].precision_used > 8);
}

TEST_CASE("a negative verdict fails the scan") {
  ConstantTable t = ConstantTable::builtin();
  t.set("p[0]", 4500);  // B(x) ~ 5/x^4 near 0 overtakes psi'(x)^2
  const BoundModel broken(BoundConstants::from_table(t));
  const CmScanReport r = cm_scan(FunctionKind::G, 0, GridSpec::parse_list("1/16"), kPolicy, broken);
  CHECK(r.entries[0].verdict == Sign::Negative);
  CHECK(r.summary.failures == 1);
  CHECK(r.summary.max_k_verified == -1);
  CHECK_FALSE(r.passed());
}

TEST_CASE("inequality scan agrees with the k = 0 scan") {
  const GridSpec grid = GridSpec::default_grid().merged(GridSpec::parse_list("1/1024,1/256,1/64"));
  const InequalityReport ineq = inequality_scan(grid, kPolicy);
  const CmScanReport scan = cm_scan(FunctionKind::G, 0, grid, kPolicy);
  REQUIRE(ineq.entries.size() == scan.entries.size());
  for (std::size_t i = 0; i < ineq.entries.size(); ++i) {
    CHECK(ineq.entries[i].x == scan.entries[i].x);
    CHECK(ineq.entries[i].verdict == scan.entries[i].verdict);
  }
  CHECK(ineq.passed());
  CHECK(ineq.strict == grid.size());
  CHECK(ineq.entries.back().margin_lower > 0);
  CHECK(ineq.entries.back().margin_lower < 1e-11);
}

TEST_CASE("decay checks") {
  const DecayReport g = decay_check(FunctionKind::G, 10, kPolicy);
  CHECK(g.passed());
  CHECK(g.entries.size() == 11);
  CHECK(g.entries.back().x == 1024);
  const DecayReport h = decay_check(FunctionKind::H, 10, kPolicy);
  CHECK(h.decreasing);
  const DecayReport single = decay_check(FunctionKind::G, 0, kPolicy);
  CHECK(single.decreasing);
  CHECK(single.entries.size() == 1);
  CHECK_FALSE(single.below_threshold);
  CHECK_FALSE(single.note.empty());
  CHECK_THROWS_AS(decay_check(FunctionKind::G, 17, kPolicy), DomainError);
}

TEST_CASE("scan limits") {
  CHECK_THROWS_AS(cm_scan(FunctionKind::G, 13, GridSpec::parse_list("1"), kPolicy), DomainError);
  CHECK_THROWS_AS(cm_scan(FunctionKind::G, 0, GridSpec(), kPolicy), DomainError);
}

TEST_CASE("serialisation") {
  const CmScanReport r = cm_scan(FunctionKind::H, 3, GridSpec::parse_list("1/3,2,17"), kPolicy);
  const std::string json = r.to_json();
  const CmScanReport back = CmScanReport::from_json(json);
  CHECK(back.to_json() == json);
  REQUIRE(back.entries.size() == r.entries.size());
  for (std::size_t i = 0; i < r.entries.size(); ++i) {
    CHECK(mpfr_equal_p(back.entries[i].value.mid().get(), r.entries[i].value.mid().get()));
    CHECK(mpfr_equal_p(back.entries[i].value.rad().get(), r.entries[i].value.rad().get()));
  }
  const std::string csv = r.to_csv();
  CHECK(csv.rfind("k,x,mid,rad,verdict\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 13);
  CHECK(csv.find("\n0,1/3,") != std::string::npos);
  CHECK(r.to_text().find("summary: 12 positive") != std::string::npos);
  CHECK_THROWS_AS(CmScanReport::from_json("[]"), ParseError);
}
