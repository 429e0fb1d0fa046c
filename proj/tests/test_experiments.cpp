#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "curves/experiments.hpp"

using namespace curves;

namespace {
const Representation& rep_unit() {
  static const Representation r = build_metric(metric_unit());
  return r;
}
}  // namespace

TEST_CASE("coefficient estimator examples") {
  const auto e = coefficient_estimate(std::vector<double>{2, 3, 6});
  CHECK(e.u == 2);
  CHECK(e.M == 6);
  CHECK(e.T == 3);
  CHECK(e.h == doctest::Approx(4 / std::sqrt(3.0)).epsilon(1e-15));
  const auto f = coefficient_estimate(std::vector<double>{2, 6, 6, 6});
  CHECK(f.T == 4);
  CHECK(f.h == 2);
  CHECK(f.b == f.h);
  CHECK(f.d == doctest::Approx(1 / (f.h * f.h)).epsilon(1e-15));
  CHECK(f.d * (f.M - f.u) * (f.M - f.u) == doctest::Approx(4).epsilon(1e-15));
  for (const auto& bad : {std::vector<double>{3}, std::vector<double>{2, 2, 2}}) {
    try {
      coefficient_estimate(bad);
      FAIL("expected degenerate_spectrum");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::degenerate_spectrum);
    }
  }
  CHECK(implied_p(2, 2) == 1);
  CHECK(implied_p(2, 1) == 4);
}

TEST_CASE("boundary orbit has a one-point spectrum") {
  const auto sp = length_spectrum(parse_class("abAB"), rep_unit(), 20);
  REQUIRE(sp.T == 1);
  CHECK(sp.u == sp.M);
  CHECK(sp.u == doctest::Approx(static_cast<double>(rep_unit().boundary_length)));
  CHECK_THROWS_AS(coefficient_estimate(sp), Error);
}

TEST_CASE("spectrum of a at L = 100/c is complete") {
  const double L = default_max_length(metric_unit());
  CHECK(L == doctest::Approx(98.814229249));
  const auto sp = length_spectrum(parse_class("a"), rep_unit(), L);
  CHECK(sp.word_cap == static_cast<std::size_t>(std::ceil(L / 1.012)));
  CHECK_FALSE(sp.clamped);
  for (const auto& e : sp.entries) CHECK(e.cls.size() <= sp.word_cap);

  // recount from an enumeration ten letters deeper
  const Orbit deeper = enumerate_orbit(parse_class("a"), sp.word_cap + 10);
  std::size_t T = 0;
  double u = 1e300;
  for (const auto& m : deeper.members) {
    const double gl = static_cast<double>(geodesic_length(rep_unit(), m));
    u = std::min(u, gl);
    if (gl <= L) ++T;
  }
  CHECK(T == sp.T);
  CHECK(u == sp.u);
  CHECK(sp.u == doctest::Approx(2.0));  // gl(a) = 2 l1
  CHECK(std::is_sorted(sp.entries.begin(), sp.entries.end(),
                       [](const auto& x, const auto& y) { return x.length < y.length; }));
}

TEST_CASE("word cap below L/c lowers L") {
  const auto sp = length_spectrum(parse_class("a"), rep_unit(), 98.8, {20, 1, {}});
  CHECK(sp.clamped);
  CHECK(sp.max_length == doctest::Approx(20 * 1.012));
  CHECK(sp.M <= sp.max_length);
}

TEST_CASE("series bundle") {
  const auto sp = length_spectrum(parse_class("aabAB"), rep_unit(), 40);
  const auto b = series_bundle(sp);
  REQUIRE(!b.residual.empty());
  CHECK(b.residual.front().value == 0);
  CHECK(b.mirzakhani.back().count == sp.T);
  CHECK(b.mirzakhani.back().length == sp.M);
  std::map<double, std::size_t> mult;
  for (double x : sp.lengths()) ++mult[x];
  std::size_t prev = 0;
  for (const auto& p : b.mirzakhani) {
    CHECK(p.count - prev == mult[p.length]);
    prev = p.count;
    CHECK(p.fit == doctest::Approx(b.est.d * (p.length - sp.u) * (p.length - sp.u)));
  }
  for (std::size_t i = 0; i < b.inverse.size(); ++i) {
    CHECK(b.inverse[i].length == sp.entries[i].length);
    if (i > 0) CHECK(b.inverse[i].length >= b.inverse[i - 1].length);
    CHECK(b.inverse[i].fit == doctest::Approx(b.est.b * std::sqrt(double(i + 1)) + sp.u));
  }
}

TEST_CASE("spectrum output is independent of the worker count") {
  const auto one = spectrum_csv(length_spectrum(parse_class("aaabb"), rep_unit(), 50, {std::nullopt, 1, {}}));
  const auto four = spectrum_csv(length_spectrum(parse_class("aaabb"), rep_unit(), 50, {std::nullopt, 4, {}}));
  CHECK(one == four);
  CHECK(one.rfind("k,length,wordlength,class\n", 0) == 0);
  // second line: 1,<length>,<wl>,<class>; lengths are written with 17 significant digits
  const auto line = one.substr(one.find('\n') + 1, one.find('\n', one.find('\n') + 1) - one.find('\n') - 1);
  const auto field = line.substr(2, line.find(',', 2) - 2);
  CHECK(fmt::format("{:.17g}", std::stod(field)) == field);
}

TEST_CASE("ratio report") {
  const std::vector<ClassKey> seeds{parse_class("a"), parse_class("aabAB"), parse_class("abaB")};
  const auto rows = ratio_report(seeds, {metric_unit()});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].ratio == 1);
  CHECK(rows[0].implied == 1);
  CHECK(*rows[1].relative_error < 0.2);
  CHECK(*rows[2].relative_error < 0.2);
  CHECK(ratio_csv(rows) == ratio_csv(ratio_report(seeds, {metric_unit()})));

  const std::vector<ClassKey> reordered{parse_class("abaB"), parse_class("a"), parse_class("aabAB")};
  const auto again = ratio_report(reordered, {metric_unit()});
  CHECK(again[0].implied == rows[2].implied);
  CHECK(again[2].implied == rows[1].implied);

  try {
    ratio_report({parse_class("aabAB")}, {metric_unit()});
    FAIL("expected precondition");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::precondition);
  }
}

TEST_CASE("abaB under the small metric at word cap 250") {
  // L = 100/c would need word length about 2165 here; cap 250 lowers L to 53.7
  const auto rows = ratio_report({parse_class("a"), parse_class("abaB")}, {metric_small()}, {std::nullopt, 250, 1});
  CHECK(*rows[1].relative_error < 0.2);
}

TEST_CASE("desk conjecture suite") {
  const auto rep = conjecture_checks(desk_suite());
  CHECK(rep.passed());
  std::map<std::string, int> by_id;
  for (const auto& c : rep.checks) ++by_id[c.id];
  CHECK(by_id["C1"] == 5);
  CHECK(by_id["C4"] == 5);
  CHECK(by_id["C5"] == 4);
  for (const auto& c : rep.checks) {
    if (c.id == "C2" || c.id == "C3") CHECK(c.status == CheckStatus::report);
    if (c.id == "C5" && c.subject == "si=1") CHECK(c.value == doctest::Approx(0.25));
    if (c.id == "C1" && c.subject.rfind("a ", 0) == 0) CHECK(c.value == 0);
  }
  CHECK(conjecture_csv(rep).rfind("check,subject,value,threshold,status,detail\n", 0) == 0);
}
