#include "curves/formula.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace curves {

using nlohmann::json;

namespace {
std::int64_t parse_int(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(ErrorCode::parse, "expected an integer, got '" + std::string(s) + "'");
  return v;
}
}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return fmt::format("{}/{}", r.numerator(), r.denominator());
}

bool Support::contains(std::int64_t l) const {
  const std::int64_t r = ((l % modulus) + modulus) % modulus;
  return r == residue;
}

std::string Support::str() const { return modulus == 1 ? "all" : fmt::format("{} mod {}", residue, modulus); }

Support Support::parse(std::string_view text) {
  if (text == "all") return {};
  const auto pos = text.find(" mod ");
  if (pos == std::string_view::npos) throw Error(ErrorCode::parse, "bad support '" + std::string(text) + "'");
  Support s{static_cast<int>(parse_int(text.substr(pos + 5))), static_cast<int>(parse_int(text.substr(0, pos)))};
  if (s.modulus < 1 || s.residue < 0 || s.residue >= s.modulus)
    throw Error(ErrorCode::parse, "bad support '" + std::string(text) + "'");
  return s;
}

std::uint64_t TotientFormula::raw(std::int64_t l) const {
  std::uint64_t total = 0;
  for (const auto& t : terms) total += totient_of_quotient(l + t.j, t.k);
  return 2 * total;
}

std::uint64_t TotientFormula::predict(std::int64_t l) const {
  if (auto it = specials.find(l); it != specials.end()) return it->second;
  if (l < threshold || !support.contains(l)) return 0;
  return raw(l);
}

std::string TotientFormula::str() const {
  std::string out = "2*(";
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i) out += " + ";
    const auto& t = terms[i];
    std::string arg = t.j == 0 ? "l" : fmt::format("l{:+d}", t.j);
    out += t.k == 1 ? fmt::format("Phi({})", arg) : fmt::format("Phi(({})/{})", arg, t.k);
  }
  out += fmt::format(") for l >= {}, l in {}", threshold, support.str());
  for (const auto& [l, v] : specials) out += fmt::format("; C({})={}", l, v);
  return out;
}

Rational growth_coefficient(const TotientFormula& f) {
  Rational p(0);
  for (const auto& t : f.terms) p += Rational(1, std::int64_t(t.k) * t.k);
  return p;
}

// ---------------------------------------------------------------------------

const FormulaRow* FormulaTable::find(const ClassKey& seed) const {
  for (const auto& r : rows)
    if (r.seed == seed) return &r;
  return nullptr;
}

std::vector<const FormulaRow*> FormulaTable::with_si(std::uint64_t si) const {
  std::vector<const FormulaRow*> out;
  for (const auto& r : rows)
    if (r.si == si) out.push_back(&r);
  return out;
}

Rational FormulaTable::coefficient_sum(std::uint64_t si) const {
  Rational sum(0);
  for (const auto* r : with_si(si)) sum += growth_coefficient(r->formula);
  return sum;
}

FormulaTable parse_formula_table(std::string_view json_text) {
  FormulaTable table;
  try {
    const json doc = json::parse(json_text);
    for (const auto& jr : doc.at("rows")) {
      TotientFormula f;
      for (const auto& t : jr.at("terms")) f.terms.push_back({t.at(0).get<int>(), t.at(1).get<int>()});
      f.support = Support::parse(jr.at("support").get<std::string>());
      const auto thr = jr.at("threshold").get<std::string>();
      if (thr.starts_with(">="))
        f.threshold = parse_int(std::string_view(thr).substr(2));
      else if (thr.starts_with(">"))
        f.threshold = parse_int(std::string_view(thr).substr(1)) + 1;
      else
        throw Error(ErrorCode::parse, "bad threshold '" + thr + "'");
      for (const auto& [l, v] : jr.at("specials").items()) f.specials[parse_int(l)] = v.get<std::uint64_t>();
      const auto seed_text = jr.at("seed").get<std::string>();
      table.rows.push_back(FormulaRow{seed_text, jr.at("label").get<std::string>(), parse_seed(seed_text),
                                      jr.at("table").get<int>(), jr.at("si").get<std::uint64_t>(), thr, std::move(f),
                                      parse_rational(jr.at("p").get<std::string>()),
                                      jr.at("printed").get<std::string>()});
    }
    for (const auto& [k, v] : doc.at("coefficient_sums").items())
      table.printed_sums[static_cast<std::uint64_t>(parse_int(k))] = parse_rational(v.get<std::string>());
    for (const auto& [k, v] : doc.at("orbit_counts").items())
      table.printed_orbit_counts[static_cast<std::uint64_t>(parse_int(k))] = v.get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse, std::string("formula table: ") + e.what());
  }
  return table;
}

FormulaTable load_formula_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_formula_table(buf.str());
}

const FormulaTable& builtin_formula_table() {
  static const FormulaTable table = parse_formula_table(builtin_formula_table_json());
  return table;
}

// ---------------------------------------------------------------------------

std::string_view to_string(RowStatus s) {
  switch (s) {
    case RowStatus::match: return "match";
    case RowStatus::boundary: return "boundary";
    case RowStatus::mismatch: return "mismatch";
  }
  return "?";
}

std::size_t VerificationReport::mismatch_count() const {
  return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.ok(); }));
}

VerificationReport compare_series(const ClassKey& seed, const CountSeries& series, const TotientFormula& f) {
  VerificationReport rep{seed, series.cap(), {}, 1, RowStatus::match, {}};
  const auto cap = static_cast<std::int64_t>(series.cap());
  for (std::int64_t l = 1; l <= cap; ++l)
    rep.checks.push_back({l, series.at(static_cast<std::size_t>(l)), f.predict(l)});

  rep.agrees_from = cap + 1;
  while (rep.agrees_from > 1 && rep.checks[static_cast<std::size_t>(rep.agrees_from - 2)].ok()) --rep.agrees_from;
  if (rep.mismatch_count() == 0) return rep;

  const std::int64_t window = 2 * f.support.modulus;
  bool boundary = rep.agrees_from <= f.threshold + window;
  for (const auto& c : rep.checks) {
    if (c.ok()) continue;
    if (c.length < f.threshold - window || c.length >= f.threshold + window) boundary = false;
    rep.notes.push_back(fmt::format("l={}: enumerated {} vs formula {}", c.length, c.enumerated, c.predicted));
  }
  rep.status = boundary ? RowStatus::boundary : RowStatus::mismatch;
  rep.notes.push_back(boundary ? fmt::format("disagreement only near the printed threshold (l >= {}); formula holds "
                                             "from l = {}",
                                             f.threshold, rep.agrees_from)
                               : fmt::format("formula disagrees with enumeration away from the printed threshold "
                                             "(l >= {})",
                                             f.threshold));
  return rep;
}

VerificationReport verify_formula(const ClassKey& seed, std::size_t cap, const OrbitOptions& opts) {
  const auto* row = builtin_formula_table().find(seed);
  if (!row) throw Error(ErrorCode::unknown_seed, seed.str() + " is not in the formula table");
  const auto orbit = enumerate_orbit(seed, cap, opts);
  return compare_series(seed, count_series(orbit), row->formula);
}

// ---------------------------------------------------------------------------

namespace {
struct FitSearch {
  const std::vector<std::vector<std::int64_t>>& candidates;
  std::vector<std::int64_t> residual;
  std::vector<std::size_t> chosen;
  std::uint64_t nodes = 0;
  std::uint64_t budget = 0;
  std::vector<std::int64_t> peak;  // largest candidate value at each length

  bool zero() const {
    return std::all_of(residual.begin(), residual.end(), [](std::int64_t v) { return v == 0; });
  }

  bool dfs(std::size_t start, int remaining) {
    if (zero()) return true;
    if (remaining == 0 || ++nodes > budget) return false;
    for (std::size_t i = 0; i < residual.size(); ++i)
      if (residual[i] > remaining * peak[i]) return false;
    for (std::size_t c = start; c < candidates.size(); ++c) {
      const auto& term = candidates[c];
      bool fits = true;
      for (std::size_t i = 0; i < residual.size() && fits; ++i) fits = residual[i] >= term[i];
      if (!fits) continue;
      for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= term[i];
      chosen.push_back(c);
      if (dfs(c, remaining - 1)) return true;
      chosen.pop_back();
      for (std::size_t i = 0; i < residual.size(); ++i) residual[i] += term[i];
    }
    return false;
  }
};

Support support_of(const std::vector<Term>& terms) {
  const int k = terms.front().k;
  const int r = ((-terms.front().j) % k + k) % k;
  for (const auto& t : terms)
    if (t.k != k || ((-t.j) % k + k) % k != r) return {};
  return {k, r};
}
}  // namespace

TotientFormula fit_totient_formula(const CountSeries& s, const FitOptions& opts) {
  const auto cap = static_cast<std::int64_t>(s.cap());
  if (cap < 40) throw Error(ErrorCode::precondition, "formula fitting needs a series up to at least length 40");
  const std::int64_t lo = opts.max_threshold;

  std::vector<Term> terms;
  std::vector<std::vector<std::int64_t>> values;
  for (int k = 1; k <= opts.max_k; ++k)
    for (int step = 0; step <= 2 * opts.max_abs_j; ++step) {
      const int j = step % 2 ? -(step + 1) / 2 : step / 2;  // 0, -1, 1, -2, 2, ...
      std::vector<std::int64_t> v;
      bool nonzero = false;
      for (std::int64_t l = lo; l <= cap; ++l) {
        v.push_back(static_cast<std::int64_t>(2 * totient_of_quotient(l + j, k)));
        nonzero |= v.back() != 0;
      }
      if (!nonzero) continue;
      terms.push_back({k, j});
      values.push_back(std::move(v));
    }

  FitSearch search{values, {}, {}, 0, opts.node_budget, std::vector<std::int64_t>(values.front().size(), 0)};
  for (const auto& v : values)
    for (std::size_t i = 0; i < v.size(); ++i) search.peak[i] = std::max(search.peak[i], v[i]);
  for (std::int64_t l = lo; l <= cap; ++l) search.residual.push_back(static_cast<std::int64_t>(s.at(std::size_t(l))));
  if (search.zero()) throw Error(ErrorCode::no_formula_found, "series vanishes at large lengths");

  bool found = false;
  for (int depth = 1; depth <= opts.max_terms && !found; ++depth) found = search.dfs(0, depth);
  if (!found) throw Error(ErrorCode::no_formula_found, fmt::format("no formula with <= {} terms", opts.max_terms));

  TotientFormula f;
  for (auto c : search.chosen) f.terms.push_back(terms[c]);
  std::sort(f.terms.begin(), f.terms.end());
  f.support = support_of(f.terms);
  std::int64_t from = cap + 1;
  while (from > 1 && f.raw(from - 1) == s.at(std::size_t(from - 1)) &&
         (f.support.contains(from - 1) || s.at(std::size_t(from - 1)) == 0))
    --from;
  f.threshold = from;
  for (std::int64_t l = 1; l < from; ++l)
    if (s.at(std::size_t(l)) != 0) f.specials[l] = s.at(std::size_t(l));
  return f;
}

bool recovers(const TotientFormula& fitted, const TotientFormula& printed) {
  auto a = fitted.terms, b = printed.terms;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b) return false;
  for (const auto& [l, v] : printed.specials)
    if (fitted.predict(l) != v) return false;
  return true;
}

}  // namespace curves
