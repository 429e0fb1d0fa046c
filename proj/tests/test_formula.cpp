#include <doctest.h>

#include <random>

#include "curves/formula.hpp"

using namespace curves;

namespace {
CountSeries series_from(const TotientFormula& f, std::size_t cap) {
  std::vector<std::uint64_t> count(cap + 1, 0);
  for (std::size_t l = 1; l <= cap; ++l) count[l] = f.predict(static_cast<std::int64_t>(l));
  return make_series(std::move(count));
}
}  // namespace

TEST_CASE("rationals and supports") {
  CHECK(parse_rational("2/9") == Rational(2, 9));
  CHECK(parse_rational("4") == Rational(4));
  CHECK(to_string(Rational(2059, 144)) == "2059/144");
  CHECK_THROWS_AS(parse_rational("x/2"), Error);
  const Support s = Support::parse("1 mod 3");
  CHECK(s.contains(7));
  CHECK_FALSE(s.contains(9));
  CHECK(s.str() == "1 mod 3");
  CHECK(Support::parse("all").contains(5));
  CHECK_THROWS_AS(Support::parse("3 mod 3"), Error);
}

TEST_CASE("printed special values") {
  const auto& t = builtin_formula_table();
  auto c = [&](const char* seed, std::int64_t l) { return t.find(parse_class(seed))->formula.predict(l); };
  CHECK(c("abaB", 4) == 4);
  CHECK(c("aaabb", 5) == 8);
  CHECK(c("aaaabb", 6) == 10);
  CHECK(c("aabaaB", 6) == 2);
  CHECK(c("aabAbaBAb", 9) == 16);
  CHECK(c("abaB", 5) == 0);
  CHECK(c("abaB", 6) == 2 * totient(3));
  CHECK(c("aaabb", 7) == 2 * totient(7) + 2 * totient(3));
  CHECK(c("aaaabAB", 10) == 4 * totient(2));  // 4 Phi((l+2)/3 - 2)
  CHECK(c("aaaabAB", 9) == 0);
}

TEST_CASE("table structure") {
  const auto& t = builtin_formula_table();
  CHECK(t.rows.size() == 23);
  CHECK(t.with_si(0).size() == 1);
  CHECK(t.with_si(1).size() == 2);
  CHECK(t.with_si(2).size() == 6);
  CHECK(t.with_si(3).size() == 14);
}

TEST_CASE("each row's p is the sum of 1/k^2 over its terms") {
  for (const auto& row : builtin_formula_table().rows) {
    CAPTURE(row.seed_text);
    CHECK(growth_coefficient(row.formula) == row.printed_p);
  }
}

TEST_CASE("coefficient sums") {
  const auto& t = builtin_formula_table();
  CHECK(t.coefficient_sum(0) == Rational(1));
  CHECK(t.coefficient_sum(1) == Rational(9, 4));
  CHECK(t.coefficient_sum(2) == Rational(197, 36));
  CHECK(t.coefficient_sum(3) == Rational(2023, 144));
  CHECK(t.printed_sums.at(3) == Rational(2059, 144));
  CHECK(t.printed_orbit_counts.at(3) == 14);
}

TEST_CASE("verification classifies disagreements") {
  TotientFormula f{{{1, 0}}, {}, 5, {}};
  auto s = series_from(f, 30);
  CHECK(compare_series(parse_class("a"), s, f).status == RowStatus::match);

  auto near = s;
  near.count[4] += 2;
  const auto rep = compare_series(parse_class("a"), make_series(near.count), f);
  CHECK(rep.status == RowStatus::boundary);
  CHECK(rep.agrees_from == 5);
  CHECK(rep.mismatch_count() == 1);

  auto far = s;
  far.count[20] += 2;
  CHECK(compare_series(parse_class("a"), make_series(far.count), f).status == RowStatus::mismatch);
}

TEST_CASE("verification against enumeration") {
  for (const char* seed : {"a", "aabAB", "abaB", "aaabb", "aabaB", "aabaaB"}) {
    CAPTURE(seed);
    const auto rep = verify_formula(parse_class(seed), 30);
    CHECK(rep.status == RowStatus::match);
  }
  CHECK_THROWS_AS(verify_formula(parse_class("aabb"), 10), Error);
}

TEST_CASE("fitter recovers each printed formula from its own series") {
  for (const auto& row : builtin_formula_table().rows) {
    CAPTURE(row.seed_text);
    const auto fitted = fit_totient_formula(series_from(row.formula, 40));
    CHECK(recovers(fitted, row.formula));
    CHECK(growth_coefficient(fitted) == row.printed_p);
  }
}

TEST_CASE("fitted formulas reproduce random synthetic series") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    TotientFormula f;
    const int k = 1 + static_cast<int>(rng() % 4);
    const int n = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < n; ++i) f.terms.push_back({k, -static_cast<int>(rng() % 9)});
    f.threshold = 1;
    const auto s = series_from(f, 48);
    const auto fitted = fit_totient_formula(s);
    for (std::size_t l = 1; l <= 48; ++l) CHECK(fitted.predict(static_cast<std::int64_t>(l)) == s.count[l]);
  }
}

TEST_CASE("fitter preconditions") {
  try {
    fit_totient_formula(make_series(std::vector<std::uint64_t>(31, 2)));
    FAIL("expected precondition");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::precondition);
  }
  std::vector<std::uint64_t> junk(41, 0);
  for (std::size_t l = 1; l <= 40; ++l) junk[l] = 1000 + l * l;
  try {
    fit_totient_formula(make_series(junk));
    FAIL("expected no_formula_found");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::no_formula_found);
  }
}
