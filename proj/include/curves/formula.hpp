#pragma once

// Totient formulas for orbit counts: C(l) = 2 * sum Phi((l + j) / k), their
// growth coefficients, the shipped formula table, verification against
// enumeration, and formula discovery from a count series.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "curves/orbits.hpp"

namespace curves {

using Rational = boost::rational<std::int64_t>;

Rational parse_rational(std::string_view text);
std::string to_string(const Rational& r);

/// Residue condition l = residue (mod modulus); modulus 1 means every length.
struct Support {
  int modulus = 1;
  int residue = 0;

  bool contains(std::int64_t l) const;
  std::string str() const;
  static Support parse(std::string_view text);
  bool operator==(const Support&) const = default;
};

struct Term {
  int k = 1;
  int j = 0;
  auto operator<=>(const Term&) const = default;
};

struct TotientFormula {
  std::vector<Term> terms;
  Support support{};
  /// First length at which the formula applies.
  std::int64_t threshold = 1;
  /// Printed values; they take precedence over the formula at their lengths.
  std::map<std::int64_t, std::uint64_t> specials;

  /// 2 * sum over terms of Phi((l + j) / k), without support or threshold.
  std::uint64_t raw(std::int64_t l) const;
  std::uint64_t predict(std::int64_t l) const;
  std::string str() const;
};

/// Sum over terms of 1/k^2.
Rational growth_coefficient(const TotientFormula& f);

struct FormulaRow {
  std::string seed_text;
  std::string label;
  ClassKey seed;
  int table = 0;
  std::uint64_t si = 0;
  std::string threshold_text;
  TotientFormula formula;
  Rational printed_p;
  std::string printed;
};

struct FormulaTable {
  std::vector<FormulaRow> rows;
  /// Printed per-si coefficient sums and orbit counts.
  std::map<std::uint64_t, Rational> printed_sums;
  std::map<std::uint64_t, std::uint64_t> printed_orbit_counts;

  const FormulaRow* find(const ClassKey& seed) const;
  std::vector<const FormulaRow*> with_si(std::uint64_t si) const;
  Rational coefficient_sum(std::uint64_t si) const;
};

FormulaTable parse_formula_table(std::string_view json_text);
FormulaTable load_formula_table(const std::string& path);
/// The table compiled from data/formula_table.json.
const FormulaTable& builtin_formula_table();
/// Raw JSON text of the shipped table.
std::string_view builtin_formula_table_json();

// ---------------------------------------------------------------------------

enum class RowStatus { match, boundary, mismatch };
std::string_view to_string(RowStatus s);

struct LengthCheck {
  std::int64_t length = 0;
  std::uint64_t enumerated = 0;
  std::uint64_t predicted = 0;
  bool ok() const { return enumerated == predicted; }
};

struct VerificationReport {
  ClassKey seed;
  std::size_t cap = 0;
  std::vector<LengthCheck> checks;  // l = 1..cap
  /// Smallest l with agreement at every length in [l, cap]; cap + 1 if none.
  std::int64_t agrees_from = 1;
  RowStatus status = RowStatus::match;
  std::vector<std::string> notes;

  std::size_t mismatch_count() const;
};

/// Compares an enumerated series with a formula. Mismatches confined to
/// [threshold - 2m, threshold + 2m) (m = support modulus), with agreement
/// from threshold + 2m on, are classified as boundary; anything else is a
/// mismatch.
VerificationReport compare_series(const ClassKey& seed, const CountSeries& series, const TotientFormula& f);
/// Enumerates the orbit of a builtin seed and compares. Throws Error(unknown_seed).
VerificationReport verify_formula(const ClassKey& seed, std::size_t cap, const OrbitOptions& opts = {});

// ---------------------------------------------------------------------------

struct FitOptions {
  int max_k = 6;
  int max_abs_j = 16;
  int max_terms = 6;
  std::int64_t max_threshold = 14;
  std::uint64_t node_budget = 20'000'000;
};

/// Searches for terms matching the series exactly on [max_threshold, cap] by
/// iterative-deepening peeling, then records earlier lengths as specials.
/// Requires cap >= 40 (Error(precondition)); Error(no_formula_found) otherwise.
TotientFormula fit_totient_formula(const CountSeries& s, const FitOptions& opts = {});

/// True when the terms agree as multisets and every printed special is reproduced.
bool recovers(const TotientFormula& fitted, const TotientFormula& printed);

}  // namespace curves
