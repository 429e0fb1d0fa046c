// Acceptance run: one line per criterion, exit status 1 if any selected criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "curves/experiments.hpp"
#include "curves/formula.hpp"
#include "curves/geometry.hpp"
#include "curves/intersect.hpp"
#include "curves/orbits.hpp"

using namespace curves;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  double limit_s;  // 0: untimed
  std::function<Outcome()> run;
};

std::string capture(const std::string& args, int& status) {
  const std::string cmd = std::string(CURVES_BIN) + " " + args;
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    status = -1;
    return out;
  }
  char buf[1 << 16];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int st = pclose(p);
  status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return out;
}

Outcome c1() {
  const auto s = summatory(170);
  return {s == 17660, fmt::format("sum of 2Phi(l), l <= 170 = {}", s)};
}

Outcome c2() {
  const CountSeries s = count_series(enumerate_orbit(parse_class("a"), 60));
  std::vector<int> bad;
  for (std::int64_t l = 1; l <= 60; ++l)
    if (s.at(static_cast<std::size_t>(l)) != 2 * totient(l)) bad.push_back(static_cast<int>(l));
  return {bad.empty(), fmt::format("orbit(a), l <= 60: {} disagreeing lengths", bad.size())};
}

Outcome c3() {
  std::size_t match = 0;
  std::vector<std::string> boundary, mismatch;
  for (const auto& row : builtin_formula_table().rows) {
    const auto rep = verify_formula(row.seed, 30);
    const bool closed = closure_holds(enumerate_orbit(row.seed, 30));
    if (rep.status == RowStatus::match && closed) {
      ++match;
      continue;
    }
    std::vector<std::string> at;
    for (const auto& c : rep.checks)
      if (!c.ok()) at.push_back(fmt::format("l={}: {} vs {}", c.length, c.enumerated, c.predicted));
    const std::string what =
        fmt::format("{} [{}{}]", row.seed_text, fmt::join(at, "; "), closed ? "" : "; closure broken");
    if (rep.status == RowStatus::boundary && closed)
      boundary.push_back(what);
    else
      mismatch.push_back(what);
  }
  std::string detail = fmt::format("{}/23 rows match for l <= 30", match);
  if (!boundary.empty()) detail += fmt::format("; threshold boundary (reported): {}", fmt::join(boundary, ", "));
  if (!mismatch.empty()) detail += fmt::format("; mismatch: {}", fmt::join(mismatch, ", "));
  return {mismatch.empty(), detail};
}

Outcome c4() {
  const std::vector<std::size_t> want{2, 2, 6, 14};
  std::vector<std::size_t> got;
  for (std::uint64_t k = 0; k < 4; ++k) got.push_back(classify(k, 12).size());
  std::string detail = fmt::format("orbits at wl <= 12 for si 0..3: {} (want {})", fmt::join(got, ","),
                                   fmt::join(want, ","));
  if (got[3] != want[3]) {
    const auto at13 = classify(3, 13);
    std::vector<std::string> missing;
    for (const auto* row : builtin_formula_table().with_si(3)) {
      const Orbit o = enumerate_orbit(row->seed, 13);
      if (o.minimal().size() > 12) missing.push_back(fmt::format("{} (shortest member wl {})", row->seed_text, o.minimal().size()));
    }
    detail += fmt::format("; si=3 at wl <= 13 gives {}; not reached by wl 12: {}", at13.size(), fmt::join(missing, ", "));
  }
  return {got == want, detail};
}

Outcome c5() {
  std::size_t checked = 0, bad = 0;
  std::string first;
  for (const auto& p : {metric_small(), metric_unit()}) {
    const Representation r = build_metric(p);
    for (const auto& k : classes_up_to(8)) {
      if (!is_primitive(k)) continue;
      ++checked;
      const auto g = self_intersection_geometric(r, k);
      const auto c = self_intersection(k);
      if (g != c) {
        if (first.empty()) first = fmt::format("; first: {} under {}: {} vs {}", k.str(), p.str(), c, g);
        ++bad;
      }
    }
  }
  return {bad == 0, fmt::format("{} class/metric pairs at wl <= 8, {} disagreements{}", checked, bad, first)};
}

Outcome c6() {
  std::size_t checked = 0, bad = 0;
  Real worst = 1e300L;
  for (const auto& p : {metric_small(), metric_unit()}) {
    const Representation r = build_metric(p);
    for (const char* seed : {"a", "aabAB"}) {
      for (const auto& m : enumerate_orbit(parse_seed(seed), 40).members) {
        const Real margin = geodesic_length(r, m) - r.c * static_cast<Real>(m.size());
        worst = std::min(worst, margin);
        ++checked;
        if (margin < -1e-9L) ++bad;
      }
    }
  }
  return {bad == 0, fmt::format("{} members checked, {} violations, smallest gl - c wl = {:.3g}", checked, bad,
                                static_cast<double>(worst))};
}

Outcome c7() {
  bool ok = true;
  std::vector<std::string> parts;
  for (const auto& p : {metric_small(), metric_unit()}) {
    const Representation r = build_metric(p);
    const Real side = r.pentagon.max_side_residual(p), angle = r.pentagon.max_angle_residual();
    const Real gl_err = std::fabs(geodesic_length(r, parse_class("a")) - 2 * distance(r.G, r.Y));
    const bool acute = r.pentagon.phi > 0 && r.pentagon.phi < std::acos(Real(0));
    ok = ok && side < 1e-9L && angle < 1e-9L && acute && r.commutator_trace < -2 && gl_err < 1e-9L;
    parts.push_back(fmt::format("{}: side {:.1e}, angle {:.1e}, phi {:.4f}, tr[A,B] {:.4f}, |gl(a) - 2d(G,Y)| {:.1e}",
                                p.str(), static_cast<double>(side), static_cast<double>(angle),
                                static_cast<double>(r.pentagon.phi), static_cast<double>(r.commutator_trace),
                                static_cast<double>(gl_err)));
  }
  return {ok, fmt::format("{}", fmt::join(parts, "; "))};
}

Outcome c8() {
  std::vector<ClassKey> seeds;
  for (const char* s : {"a", "aabAB", "abaB", "aaabb", "aabaB"}) seeds.push_back(parse_seed(s));
  const auto rows = ratio_report(seeds, {metric_unit()}, {std::nullopt, 120, 1});
  bool ok = true;
  std::vector<std::string> parts;
  for (const auto& r : rows) {
    if (r.seed == "a") continue;
    ok = ok && r.relative_error && *r.relative_error <= 0.2;
    parts.push_back(fmt::format("{} {:.4g} vs {} ({:.1f}%)", r.seed, r.implied, to_string(*r.table_p),
                                100 * r.relative_error.value_or(1.0 / 0.0)));
  }
  return {ok, fmt::format("implied p: {}", fmt::join(parts, ", "))};
}

Outcome c9() {
  std::size_t t1 = 0, t1_ok = 0, t2 = 0, t2_ok = 0;
  std::vector<std::string> flagged;
  for (const auto& row : builtin_formula_table().rows) {
    bool ok = false;
    try {
      ok = recovers(fit_totient_formula(count_series(enumerate_orbit(row.seed, 40))), row.formula);
    } catch (const Error&) {
    }
    const bool first = row.si <= 2;
    (first ? t1 : t2) += 1;
    (first ? t1_ok : t2_ok) += ok;
    if (!ok) flagged.push_back(row.seed_text);
  }
  std::string detail = fmt::format("first table {}/{}, second table {}/{}", t1_ok, t1, t2_ok, t2);
  if (!flagged.empty()) detail += fmt::format("; flagged: {}", fmt::join(flagged, ", "));
  return {t1_ok == t1 && t2_ok >= 10, detail};
}

Outcome c10() {
  const auto& t = builtin_formula_table();
  const std::vector<Rational> want{Rational(1), Rational(9, 4), Rational(197, 36), Rational(2023, 144)};
  bool ok = true;
  std::vector<std::string> parts;
  for (std::uint64_t k = 0; k < 4; ++k) {
    const Rational s = t.coefficient_sum(k);
    ok = ok && s == want[k];
    const auto orbits = static_cast<double>(t.printed_orbit_counts.at(k));
    const Rational printed = t.printed_sums.at(k);
    for (const Rational& r : {s, printed})
      ok = ok && std::fabs(boost::rational_cast<double>(r) - orbits) <= 1;
    parts.push_back(s == printed ? fmt::format("si={}: {}", k, to_string(s))
                                 : fmt::format("si={}: {} (printed {})", k, to_string(s), to_string(printed)));
  }
  return {ok, fmt::format("{}; each within one of its orbit count under both readings", fmt::join(parts, ", "))};
}

Outcome c11() {
  std::optional<std::string> first;
  std::vector<std::string> parts;
  bool ok = true;
  for (int w : {1, 4, 8}) {
    int status = 0;
    const auto out = capture(fmt::format("--workers {} orbit enumerate --seed aabAB --max-wl 60", w), status);
    std::vector<std::string> lines;
    for (std::size_t i = 0, j; i < out.size(); i = j + 1) {
      j = out.find('\n', i);
      if (j == std::string::npos) j = out.size();
      lines.push_back(out.substr(i, j - i));
    }
    ok = ok && status == 0 && !out.empty();
    if (!first) {
      first = out;
      std::vector<ClassKey> keys;
      for (const auto& l : lines)
        if (!l.empty()) keys.push_back(parse_class(l));
      ok = ok && std::is_sorted(keys.begin(), keys.end());
      parts.push_back(fmt::format("{} members, {} bytes", keys.size(), out.size()));
    } else {
      ok = ok && out == *first;
    }
  }
  return {ok, fmt::format("workers 1/4/8 {}; {}", ok ? "byte-identical and sorted" : "differ", fmt::join(parts, ""))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> only;
  app.add_option("--criterion", only, "criterion number(s), default all")->check(CLI::Range(1, 11));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all{
      {1, 1, c1},     {2, 60, c2},   {3, 600, c3}, {4, 600, c4}, {5, 300, c5},  {6, 300, c6},
      {7, 0, c7},     {8, 1800, c8}, {9, 900, c9}, {10, 0, c10}, {11, 0, c11},
  };
  const std::set<int> selected(only.begin(), only.end());
  bool ok = true;
  for (const auto& c : all) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, fmt::format("error: {}", e.what())};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool late = c.limit_s > 0 && secs > c.limit_s;
    const bool pass = o.pass && !late;
    ok = ok && pass;
    const std::string timing = c.limit_s > 0 ? fmt::format("{:.2f}s, limit {:g}s{}", secs, c.limit_s, late ? ", over" : "")
                                             : fmt::format("{:.2f}s", secs);
    fmt::print("criterion {}: {} {} ({})\n", c.id, pass ? "PASS" : "FAIL", o.detail, timing);
    std::fflush(stdout);
  }
  return ok ? 0 : 1;
}
