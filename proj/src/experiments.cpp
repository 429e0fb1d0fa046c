#include "curves/experiments.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "curves/parallel.hpp"

namespace curves {

namespace {
std::string num(double x) { return fmt::format("{:.17g}", x); }
}  // namespace

std::vector<double> LengthSpectrum::lengths() const {
  std::vector<double> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.length);
  return out;
}

double default_max_length(const MetricParams& p) { return 100.0 / p.inclusion_constant(); }

LengthSpectrum length_spectrum(const ClassKey& seed, const Representation& r, double L, const SpectrumOptions& opts) {
  if (!(L > 0)) throw Error(ErrorCode::precondition, "the geometric length cap must be positive");
  const double c = r.c;
  const auto needed = static_cast<std::size_t>(std::ceil(L / c));
  LengthSpectrum sp{seed, r.params, L, L, needed, false, {}, 0, 0, 0};
  if (opts.word_cap && *opts.word_cap < needed) {
    sp.word_cap = *opts.word_cap;
    sp.max_length = c * static_cast<double>(sp.word_cap);
    sp.clamped = true;
  }
  const Orbit orbit = enumerate_orbit(seed, std::max(sp.word_cap, seed.size()), {opts.workers, opts.limits});

  std::vector<double> gl(orbit.members.size());
  detail::parallel_for(orbit.members.size(), opts.workers,
                       [&](std::size_t i) { gl[i] = static_cast<double>(geodesic_length(r, orbit.members[i])); });
  for (std::size_t i = 0; i < gl.size(); ++i)
    if (gl[i] <= sp.max_length) sp.entries.push_back({gl[i], orbit.members[i]});
  std::sort(sp.entries.begin(), sp.entries.end(), [](const SpectrumEntry& x, const SpectrumEntry& y) {
    if (x.length != y.length) return x.length < y.length;
    return x.cls < y.cls;
  });
  sp.T = sp.entries.size();
  if (sp.T > 0) {
    sp.u = sp.entries.front().length;
    sp.M = sp.entries.back().length;
  }
  return sp;
}

CoefficientEstimate coefficient_estimate(const std::vector<double>& sorted_lengths) {
  if (sorted_lengths.size() < 2 || !(sorted_lengths.back() > sorted_lengths.front()))
    throw Error(ErrorCode::degenerate_spectrum,
                fmt::format("need at least two distinct lengths, got {} values", sorted_lengths.size()));
  CoefficientEstimate e;
  e.u = sorted_lengths.front();
  e.M = sorted_lengths.back();
  e.T = sorted_lengths.size();
  const double span = e.M - e.u;
  const double T = static_cast<double>(e.T);
  e.h = span / std::sqrt(T);
  e.d = T / (span * span);
  e.b = e.h;
  return e;
}

CoefficientEstimate coefficient_estimate(const LengthSpectrum& sp) {
  try {
    return coefficient_estimate(sp.lengths());
  } catch (const Error& e) {
    throw Error(ErrorCode::degenerate_spectrum, "spectrum of " + sp.seed.str() + ": " + e.what());
  }
}

double implied_p(double h_reference, double h) {
  const double r = h_reference / h;
  return r * r;
}

std::vector<RatioRow> ratio_report(const std::vector<ClassKey>& seeds, const std::vector<MetricParams>& metrics,
                                   const RatioOptions& opts) {
  const ClassKey reference = parse_class("a");
  if (std::find(seeds.begin(), seeds.end(), reference) == seeds.end())
    throw Error(ErrorCode::precondition, "the ratio report needs the reference seed a");
  const auto& table = builtin_formula_table();
  std::vector<RatioRow> rows;
  for (const auto& m : metrics) {
    const Representation rep = build_metric(m);
    const double L = opts.max_length.value_or(default_max_length(m));
    const SpectrumOptions so{opts.word_cap, opts.workers, {}};
    const double h_ref = coefficient_estimate(length_spectrum(reference, rep, L, so)).h;
    for (const auto& seed : seeds) {
      RatioRow row;
      row.seed = seed.str();
      row.metric = m;
      row.est = coefficient_estimate(length_spectrum(seed, rep, L, so));
      row.ratio = row.est.h / h_ref;
      row.implied = implied_p(h_ref, row.est.h);
      if (const auto* tr = table.find(seed)) {
        row.table_p = tr->printed_p;
        const double p = boost::rational_cast<double>(tr->printed_p);
        row.relative_error = std::fabs(row.implied - p) / p;
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

SeriesBundle series_bundle(const LengthSpectrum& sp) {
  SeriesBundle s;
  s.est = coefficient_estimate(sp);
  const auto lengths = sp.lengths();
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    const std::size_t k = i + 1;
    const double x = lengths[i];
    if (i + 1 == lengths.size() || lengths[i + 1] != x)
      s.mirzakhani.push_back({x, k, s.est.d * (x - s.est.u) * (x - s.est.u)});
    const double rk = std::sqrt(static_cast<double>(k));
    s.inverse.push_back({k, x, s.est.b * rk + s.est.u});
    s.residual.push_back({k, (x - s.est.u) / rk});
  }
  return s;
}

std::string spectrum_csv(const LengthSpectrum& sp) {
  std::string out = "k,length,wordlength,class\n";
  for (std::size_t i = 0; i < sp.entries.size(); ++i)
    out += fmt::format("{},{},{},{}\n", i + 1, num(sp.entries[i].length), sp.entries[i].cls.size(),
                       sp.entries[i].cls.str());
  return out;
}

std::string ratio_csv(const std::vector<RatioRow>& rows) {
  std::string out = "seed,l1,l2,l3,u,M,T,h,h_over_h_a,implied_p,table_p,relative_error\n";
  for (const auto& r : rows)
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", r.seed, num(r.metric.l1), num(r.metric.l2),
                       num(r.metric.l3), num(r.est.u), num(r.est.M), r.est.T, num(r.est.h), num(r.ratio),
                       num(r.implied), r.table_p ? to_string(*r.table_p) : "",
                       r.relative_error ? num(*r.relative_error) : "");
  return out;
}

std::string mirzakhani_csv(const SeriesBundle& s) {
  std::string out = "length,count,fit\n";
  for (const auto& p : s.mirzakhani) out += fmt::format("{},{},{}\n", num(p.length), p.count, num(p.fit));
  return out;
}

std::string inverse_csv(const SeriesBundle& s) {
  std::string out = "k,length,fit\n";
  for (const auto& p : s.inverse) out += fmt::format("{},{},{}\n", p.k, num(p.length), num(p.fit));
  return out;
}

std::string residual_csv(const SeriesBundle& s) {
  std::string out = "k,value\n";
  for (const auto& p : s.residual) out += fmt::format("{},{}\n", p.k, num(p.value));
  return out;
}

std::string counts_csv(const CountSeries& s) {
  std::string out = "wordlength,count,cumulative\n";
  for (std::size_t l = 1; l <= s.cap(); ++l) out += fmt::format("{},{},{}\n", l, s.count[l], s.cumulative[l]);
  return out;
}

// ---------------------------------------------------------------------------

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::report: return "report";
  }
  return "?";
}

SuiteConfig desk_suite() {
  SuiteConfig cfg;
  cfg.name = "desk";
  cfg.seeds = {"a", "aabAB", "abaB", "aaabb", "aabaB"};
  cfg.metrics = {metric_unit()};
  cfg.word_cap = 120;
  cfg.c1_tolerance = 0.2;
  return cfg;
}

SuiteConfig full_suite() {
  SuiteConfig cfg;
  cfg.name = "full";
  for (const auto& row : builtin_formula_table().rows) cfg.seeds.push_back(row.seed_text);
  cfg.metrics = {metric_small(), metric_unit()};
  cfg.word_cap = 170;
  cfg.c1_tolerance = 0.1;
  return cfg;
}

bool ConjectureReport::passed() const {
  return std::none_of(checks.begin(), checks.end(), [](const auto& c) { return c.status == CheckStatus::fail; });
}

ConjectureReport conjecture_checks(const SuiteConfig& cfg) {
  ConjectureReport rep;
  rep.suite = cfg.name;
  const auto& table = builtin_formula_table();
  std::vector<ClassKey> seeds;
  for (const auto& s : cfg.seeds) seeds.push_back(parse_seed(s));
  const ClassKey reference = parse_class("a");

  for (const auto& m : cfg.metrics) {
    const Representation r = build_metric(m);
    const double L = cfg.max_length.value_or(default_max_length(m));
    const SpectrumOptions so{cfg.word_cap, cfg.workers, {}};
    const auto ref = length_spectrum(reference, r, L, so);
    const double h_ref = coefficient_estimate(ref).h;
    for (const auto& seed : seeds) {
      const auto sp = seed == reference ? ref : length_spectrum(seed, r, L, so);
      const std::string subject = fmt::format("{} {}", seed.str(), m.str());
      const auto bundle = series_bundle(sp);
      const double ip = implied_p(h_ref, bundle.est.h);
      const std::string clamp_note =
          sp.clamped ? fmt::format("; L lowered from {} to {} by word cap {}", num(sp.requested_length),
                                   num(sp.max_length), sp.word_cap)
                     : "";

      // C1
      ConjectureCheck c1{"C1", subject, ip, cfg.c1_tolerance, CheckStatus::report, ""};
      if (const auto* row = table.find(seed)) {
        const double p = boost::rational_cast<double>(row->printed_p);
        c1.value = std::fabs(ip - p) / p;
        c1.status = c1.value <= cfg.c1_tolerance ? CheckStatus::pass : CheckStatus::fail;
        c1.detail = fmt::format("implied p {} vs table p {} (T = {}, L = {}){}", num(ip), to_string(row->printed_p),
                                sp.T, num(sp.max_length), clamp_note);
      } else {
        c1.detail = fmt::format("implied p {}; seed not in the table", num(ip));
      }
      rep.checks.push_back(c1);

      // C2: deviation of the k-th length from b sqrt(k) + u
      double worst = 0, tail = 0;
      const std::size_t tail_from = bundle.inverse.size() - bundle.inverse.size() / 10;
      for (std::size_t i = 0; i < bundle.inverse.size(); ++i) {
        const double dev = std::fabs(bundle.inverse[i].fit - bundle.inverse[i].length);
        worst = std::max(worst, dev);
        if (i >= tail_from) tail = std::max(tail, dev);
      }
      rep.checks.push_back({"C2", subject, worst, 0, CheckStatus::report,
                            fmt::format("max |b sqrt(k) + u - length_k| = {}, over the last 10% = {}", num(worst),
                                        num(tail))});

      // C3: deviation of the counting function from d (l - u)^2 on a grid
      const auto lengths = sp.lengths();
      double worst3 = 0;
      constexpr int grid = 256;
      for (int g = 0; g <= grid; ++g) {
        const double l = sp.u + (sp.M - sp.u) * g / grid;
        const auto count = static_cast<double>(std::upper_bound(lengths.begin(), lengths.end(), l) - lengths.begin());
        worst3 = std::max(worst3, std::fabs(bundle.est.d * (l - sp.u) * (l - sp.u) - count));
      }
      rep.checks.push_back({"C3", subject, worst3, 0, CheckStatus::report,
                            fmt::format("max |d (l - u)^2 - s(l)| = {} over {} grid points", num(worst3), grid + 1)});
    }
  }

  // C4
  for (const auto& seed : seeds) {
    const auto* row = table.find(seed);
    if (!row) continue;
    const auto series = count_series(enumerate_orbit(seed, cfg.fit_cap, {cfg.workers, {}}));
    ConjectureCheck c4{"C4", seed.str(), 0, 0, CheckStatus::fail, ""};
    try {
      const auto fitted = fit_totient_formula(series);
      c4.status = recovers(fitted, row->formula) ? CheckStatus::pass : CheckStatus::fail;
      c4.value = c4.status == CheckStatus::pass ? 1 : 0;
      c4.detail = fmt::format("fitted {} vs table {}", fitted.str(), row->formula.str());
    } catch (const Error& e) {
      c4.detail = e.what();
    }
    rep.checks.push_back(c4);
  }

  // C5
  for (const auto& [k, orbits] : table.printed_orbit_counts) {
    const Rational computed = table.coefficient_sum(k);
    const auto it = table.printed_sums.find(k);
    const Rational printed = it == table.printed_sums.end() ? computed : it->second;
    const Rational n(static_cast<std::int64_t>(orbits));
    const double gap = std::max(boost::rational_cast<double>(abs(computed - n)),
                                boost::rational_cast<double>(abs(printed - n)));
    std::string detail = fmt::format("sum p = {} vs {} orbits", to_string(computed), orbits);
    if (printed != computed) detail += fmt::format("; printed sum {} (gap {})", to_string(printed), to_string(abs(printed - n)));
    rep.checks.push_back({"C5", fmt::format("si={}", k), gap, 1, gap <= 1 ? CheckStatus::pass : CheckStatus::fail,
                          detail});
  }
  return rep;
}

std::string conjecture_csv(const ConjectureReport& r) {
  std::string out = "check,subject,value,threshold,status,detail\n";
  for (const auto& c : r.checks)
    out += fmt::format("{},\"{}\",{},{},{},\"{}\"\n", c.id, c.subject, num(c.value), num(c.threshold),
                       to_string(c.status), c.detail);
  return out;
}

}  // namespace curves
