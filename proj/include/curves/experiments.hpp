#pragma once

// Length spectra of orbits under a hyperbolic metric, the (M - u)/sqrt(T)
// coefficient estimator, counting-function series, and conjecture checks.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "curves/formula.hpp"
#include "curves/geometry.hpp"
#include "curves/orbits.hpp"

namespace curves {

struct SpectrumEntry {
  double length = 0;
  ClassKey cls;
};

struct SpectrumOptions {
  /// Word-length cap for the enumeration; defaults to ceil(L / c). A smaller
  /// cap lowers L to c * cap so the spectrum stays complete.
  std::optional<std::size_t> word_cap;
  unsigned workers = 1;
  EnumerationLimits limits{};
};

struct LengthSpectrum {
  ClassKey seed;
  MetricParams metric;
  double requested_length = 0;
  /// Geometric cap actually used; below requested_length when clamped.
  double max_length = 0;
  std::size_t word_cap = 0;
  bool clamped = false;
  /// Sorted by length, ties by class.
  std::vector<SpectrumEntry> entries;
  double u = 0, M = 0;
  std::size_t T = 0;

  std::vector<double> lengths() const;
};

/// 100 / c for the metric.
double default_max_length(const MetricParams& p);

/// Every orbit member with gl <= L; complete because gl >= c wl.
LengthSpectrum length_spectrum(const ClassKey& seed, const Representation& r, double L,
                               const SpectrumOptions& opts = {});

struct CoefficientEstimate {
  double u = 0, M = 0;
  std::size_t T = 0;
  double h = 0;  // (M - u) / sqrt(T)
  double d = 0;  // T / (M - u)^2
  double b = 0;  // slope of the sqrt(k) fit, equal to h
};

/// Throws Error(degenerate_spectrum) unless T >= 2 and M > u.
CoefficientEstimate coefficient_estimate(const std::vector<double>& sorted_lengths);
CoefficientEstimate coefficient_estimate(const LengthSpectrum& sp);

/// (h_ref / h)^2: the growth coefficient relative to the reference orbit.
double implied_p(double h_reference, double h);

struct RatioRow {
  std::string seed;
  MetricParams metric;
  CoefficientEstimate est;
  double ratio = 0;  // h / h(a)
  double implied = 0;
  std::optional<Rational> table_p;
  std::optional<double> relative_error;
};

struct RatioOptions {
  std::optional<double> max_length;  // default 100 / c per metric
  std::optional<std::size_t> word_cap;
  unsigned workers = 1;
};

/// Rows in metric-major, input-seed order. The seed "a" must be present
/// (Error(precondition)).
std::vector<RatioRow> ratio_report(const std::vector<ClassKey>& seeds, const std::vector<MetricParams>& metrics,
                                   const RatioOptions& opts = {});

struct MirzakhaniPoint {
  double length = 0;
  std::size_t count = 0;
  double fit = 0;
};
struct InversePoint {
  std::size_t k = 0;
  double length = 0;
  double fit = 0;
};
struct ResidualPoint {
  std::size_t k = 0;
  double value = 0;
};

struct SeriesBundle {
  CoefficientEstimate est;
  /// One point per distinct length: s(l) = #{lengths <= l}, fit d (l - u)^2.
  std::vector<MirzakhaniPoint> mirzakhani;
  /// k-th length with fit b sqrt(k) + u.
  std::vector<InversePoint> inverse;
  /// (length_k - u) / sqrt(k).
  std::vector<ResidualPoint> residual;
};

SeriesBundle series_bundle(const LengthSpectrum& sp);

// CSV writers; floats carry 17 significant digits.
std::string spectrum_csv(const LengthSpectrum& sp);
std::string ratio_csv(const std::vector<RatioRow>& rows);
std::string mirzakhani_csv(const SeriesBundle& s);
std::string inverse_csv(const SeriesBundle& s);
std::string residual_csv(const SeriesBundle& s);
std::string counts_csv(const CountSeries& s);

// ---------------------------------------------------------------------------

enum class CheckStatus { pass, fail, report };
std::string_view to_string(CheckStatus s);

struct ConjectureCheck {
  std::string id;  // C1 .. C5
  std::string subject;
  double value = 0;
  double threshold = 0;
  CheckStatus status = CheckStatus::report;
  std::string detail;
};

struct SuiteConfig {
  std::string name;
  std::vector<std::string> seeds;
  std::vector<MetricParams> metrics;
  std::size_t word_cap = 120;
  std::optional<double> max_length;  // default 100 / c
  double c1_tolerance = 0.2;
  std::size_t fit_cap = 40;
  unsigned workers = 1;
};

/// Seeds a, aabAB, abaB, aaabb, aabaB under (1, 1.2, 1.012), word cap 120.
SuiteConfig desk_suite();
/// All table seeds under both metrics, word cap 170, 10% tolerance.
SuiteConfig full_suite();

struct ConjectureReport {
  std::string suite;
  std::vector<ConjectureCheck> checks;
  bool passed() const;
};

/// C1 implied p vs table p; C2 sqrt(k) fit deviation (report); C3 quadratic
/// fit deviation (report); C4 fitter vs table; C5 coefficient sums vs orbit counts.
ConjectureReport conjecture_checks(const SuiteConfig& cfg);
std::string conjecture_csv(const ConjectureReport& r);

}  // namespace curves
