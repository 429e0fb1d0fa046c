// Command-line front end: enumeration, verification, metrics, spectra and reports.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "curves/experiments.hpp"
#include "curves/formula.hpp"
#include "curves/geometry.hpp"
#include "curves/intersect.hpp"
#include "curves/orbits.hpp"

namespace fs = std::filesystem;
using namespace curves;

namespace {

constexpr const char* kVersion = "curves 1.0.0";

enum Exit { ok = 0, check_failed = 1, usage = 2 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Collects outputs; writes them under --out (plus a manifest) or to stdout.
class Sink {
 public:
  Sink(std::optional<std::string> dir, std::vector<std::string> argv) : dir_(std::move(dir)), argv_(std::move(argv)) {}

  void file(const std::string& name, const std::string& content) {
    if (!dir_) {
      std::cout << content;
      return;
    }
    fs::create_directories(*dir_);
    std::ofstream(fs::path(*dir_) / name, std::ios::binary) << content;
    files_.push_back(name);
  }

  void input(const std::string& key, nlohmann::json value) { inputs_[key] = std::move(value); }

  void finish() {
    if (!dir_) return;
    nlohmann::json m;
    m["version"] = kVersion;
    m["argv"] = argv_;
    m["inputs"] = inputs_;
    m["outputs"] = files_;
    std::ofstream(fs::path(*dir_) / "manifest.json", std::ios::binary) << m.dump(2) << "\n";
  }

  bool to_files() const { return dir_.has_value(); }

 private:
  std::optional<std::string> dir_;
  std::vector<std::string> argv_;
  nlohmann::json inputs_ = nlohmann::json::object();
  std::vector<std::string> files_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// "l1,l2,l3", a JSON document, or a path to one.
MetricParams parse_metric(const std::string& text) {
  if (text.find('{') != std::string::npos) return metric_from_json(text);
  if (text.find(',') != std::string::npos) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        v.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw UsageError("bad metric component '" + item + "' in '" + text + "'");
      }
    }
    if (v.size() != 3) throw UsageError("a metric needs three lengths l1,l2,l3, got '" + text + "'");
    return {v[0], v[1], v[2]};
  }
  if (fs::exists(text)) return metric_from_json(read_file(text));
  throw UsageError("metric '" + text + "' is neither l1,l2,l3, JSON, nor an existing file");
}

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

nlohmann::json metric_json(const MetricParams& m) { return {{"l1", m.l1}, {"l2", m.l2}, {"l3", m.l3}}; }

bool is_usage(ErrorCode c) {
  switch (c) {
    case ErrorCode::parse:
    case ErrorCode::empty_after_reduction:
    case ErrorCode::seed_not_reduced:
    case ErrorCode::unknown_seed:
    case ErrorCode::precondition:
    case ErrorCode::cap_too_large:
      return true;
    default:
      return false;
  }
}

int run(std::vector<std::string> args, std::optional<std::string> out_override);

int run_command(CLI::App& app, const std::vector<std::string>& recorded, std::vector<std::string> args,
                std::optional<std::string> out_override) {
  std::optional<std::string> out;
  unsigned workers = 1;
  app.add_option("--out", out, "directory for output files and manifest.json");
  app.add_option("--workers", workers, "worker threads (results do not depend on it)")->check(CLI::Range(1u, 1024u));
  app.require_subcommand(1);
  app.fallthrough();

  std::string word;
  auto* si = app.add_subcommand("si", "self-intersection number of a class");
  si->add_option("WORD", word)->required();
  auto* canon = app.add_subcommand("canon", "canonical representative of a class");
  canon->add_option("WORD", word)->required();

  std::string seed, action;
  std::size_t max_wl = 0;
  auto* orbit = app.add_subcommand("orbit", "orbit enumeration, counts and formula verification");
  orbit->add_option("ACTION", action, "enumerate | counts | verify")
      ->required()
      ->check(CLI::IsMember({"enumerate", "counts", "verify"}));
  orbit->add_option("--seed", seed)->required();
  orbit->add_option("--max-wl", max_wl)->required();

  std::uint64_t si_k = 0;
  auto* classify_cmd = app.add_subcommand("classify", "partition primitive classes of given si into orbits");
  classify_cmd->add_option("--si", si_k)->required();
  classify_cmd->add_option("--max-wl", max_wl)->required();

  std::string metric_action;
  std::optional<double> l1, l2, l3;
  std::string config;
  auto* metric = app.add_subcommand("metric", "build a metric from pentagon parameters");
  metric->add_option("ACTION", metric_action)->required()->check(CLI::IsMember({"build"}));
  metric->add_option("--l1", l1);
  metric->add_option("--l2", l2);
  metric->add_option("--l3", l3);
  metric->add_option("--config", config, "JSON file {\"l1\":..,\"l2\":..,\"l3\":..}");

  std::string metric_text;
  std::optional<double> max_gl;
  std::optional<std::size_t> word_cap;
  auto* spectrum = app.add_subcommand("spectrum", "geodesic length spectrum of an orbit");
  spectrum->add_option("--seed", seed)->required();
  spectrum->add_option("--metric", metric_text, "l1,l2,l3 or JSON or JSON file")->required();
  spectrum->add_option("--max-gl", max_gl, "geometric length cap (default 100/c)");
  spectrum->add_option("--word-cap", word_cap, "word length cap (default ceil(L/c))");

  std::string seeds_text;
  std::vector<std::string> metric_texts;
  auto* coeffs = app.add_subcommand("coeffs", "coefficient estimates and ratios against seed a");
  coeffs->add_option("--seeds", seeds_text, "comma-separated seeds, must include a")->required();
  coeffs->add_option("--metrics", metric_texts, "one or more metrics")->required();
  coeffs->add_option("--max-gl", max_gl);
  coeffs->add_option("--word-cap", word_cap);

  std::string which;
  auto* series = app.add_subcommand("series", "counting function (i), inverse (ii), residual (iii)");
  series->add_option("--seed", seed)->required();
  series->add_option("--metric", metric_text)->required();
  series->add_option("--which", which)->required()->check(CLI::IsMember({"i", "ii", "iii"}));
  series->add_option("--max-gl", max_gl);
  series->add_option("--word-cap", word_cap);

  auto* fit = app.add_subcommand("fit", "fit a totient formula to an orbit count series");
  fit->add_option("--seed", seed)->required();
  fit->add_option("--max-wl", max_wl)->required();

  std::string suite;
  auto* conj = app.add_subcommand("conjectures", "run the conjecture checks");
  conj->add_option("--suite", suite)->required()->check(CLI::IsMember({"desk", "full"}));

  std::string manifest_path;
  auto* rerun = app.add_subcommand("rerun", "re-run the command recorded in a manifest");
  rerun->add_option("MANIFEST", manifest_path)->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return Exit::ok;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return Exit::usage;
  }
  if (out_override) out = out_override;

  if (rerun->parsed()) {
    nlohmann::json m;
    try {
      m = nlohmann::json::parse(read_file(manifest_path));
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("bad manifest '" + manifest_path + "': " + e.what());
    }
    auto argv = m.at("argv").get<std::vector<std::string>>();
    if (workers > 1) argv.insert(argv.begin(), {"--workers", std::to_string(workers)});
    return run(argv, out);
  }

  Sink sink(out, recorded);
  const OrbitOptions oo{workers, {}};
  int status = Exit::ok;

  if (si->parsed()) {
    const ClassKey k = parse_class(word);
    sink.input("word", word);
    sink.file("si.txt", fmt::format("{}\n", self_intersection(k)));
  } else if (canon->parsed()) {
    sink.input("word", word);
    sink.file("canon.txt", parse_class(word).str() + "\n");
  } else if (orbit->parsed()) {
    const ClassKey s = parse_seed(seed);
    sink.input("seed", s.str());
    sink.input("max_wl", max_wl);
    if (action == "verify") {
      const auto rep = verify_formula(s, max_wl, oo);
      std::string csv = "wordlength,enumerated,formula,agree\n";
      for (const auto& c : rep.checks)
        csv += fmt::format("{},{},{},{}\n", c.length, c.enumerated, c.predicted, c.ok() ? 1 : 0);
      sink.file("counts.csv", csv);
      std::string summary = fmt::format("seed {}: {} (agrees from l = {})\n", s.str(), to_string(rep.status),
                                        rep.agrees_from);
      for (const auto& n : rep.notes) summary += "  " + n + "\n";
      sink.file("verify.txt", summary);
      if (rep.status == RowStatus::mismatch) status = Exit::check_failed;
    } else {
      const Orbit o = enumerate_orbit(s, max_wl, oo);
      if (action == "enumerate") {
        std::string text;
        for (const auto& m : o.members) text += m.str() + "\n";
        sink.file("members.txt", text);
      } else {
        sink.file("counts.csv", counts_csv(count_series(o)));
      }
    }
  } else if (classify_cmd->parsed()) {
    sink.input("si", si_k);
    sink.input("max_wl", max_wl);
    const auto orbits = classify(si_k, max_wl, oo);
    std::string csv = "seed,members\n";
    for (const auto& o : orbits) csv += fmt::format("{},{}\n", o.minimal().str(), o.members.size());
    sink.file("classify.csv", csv);
  } else if (metric->parsed()) {
    MetricParams p;
    if (!config.empty()) {
      p = metric_from_json(read_file(config));
    } else {
      if (!l1 || !l2 || !l3) throw UsageError("metric build needs --l1, --l2 and --l3, or --config FILE");
      p = {*l1, *l2, *l3};
    }
    sink.input("metric", metric_json(p));
    sink.file("metric.json", to_json(build_metric(p)));
  } else if (spectrum->parsed() || series->parsed()) {
    const ClassKey s = parse_seed(seed);
    const MetricParams p = parse_metric(metric_text);
    const Representation r = build_metric(p);
    const double L = max_gl.value_or(default_max_length(p));
    const auto sp = length_spectrum(s, r, L, {word_cap, workers, {}});
    sink.input("seed", s.str());
    sink.input("metric", metric_json(p));
    sink.input("max_gl", L);
    sink.input("word_cap", sp.word_cap);
    if (sp.clamped)
      std::cerr << fmt::format("note: L lowered from {} to {} so that word cap {} keeps the spectrum complete\n",
                               sp.requested_length, sp.max_length, sp.word_cap);
    if (spectrum->parsed()) {
      sink.file("spectrum.csv", spectrum_csv(sp));
    } else {
      const auto b = series_bundle(sp);
      sink.input("which", which);
      if (which == "i") sink.file("series_i.csv", mirzakhani_csv(b));
      if (which == "ii") sink.file("series_ii.csv", inverse_csv(b));
      if (which == "iii") sink.file("series_iii.csv", residual_csv(b));
    }
  } else if (coeffs->parsed()) {
    std::vector<ClassKey> seeds;
    for (const auto& t : split_list(seeds_text, ',')) seeds.push_back(parse_seed(t));
    std::vector<MetricParams> metrics;
    nlohmann::json mj = nlohmann::json::array();
    for (const auto& t : metric_texts) {
      metrics.push_back(parse_metric(t));
      mj.push_back(metric_json(metrics.back()));
    }
    sink.input("seeds", seeds_text);
    sink.input("metrics", mj);
    const auto rows = ratio_report(seeds, metrics, {max_gl, word_cap, workers});
    sink.file("ratios.csv", ratio_csv(rows));
  } else if (fit->parsed()) {
    const ClassKey s = parse_seed(seed);
    sink.input("seed", s.str());
    sink.input("max_wl", max_wl);
    const auto fitted = fit_totient_formula(count_series(enumerate_orbit(s, max_wl, oo)));
    std::string text = fmt::format("fitted: {}\np: {}\n", fitted.str(), to_string(growth_coefficient(fitted)));
    if (const auto* row = builtin_formula_table().find(s)) {
      const bool same = recovers(fitted, row->formula);
      text += fmt::format("table: {}\nrecovers table row: {}\n", row->formula.str(), same ? "yes" : "no");
      if (!same) status = Exit::check_failed;
    }
    sink.file("fit.txt", text);
  } else if (conj->parsed()) {
    SuiteConfig cfg = suite == "desk" ? desk_suite() : full_suite();
    cfg.workers = workers;
    sink.input("suite", suite);
    const auto rep = conjecture_checks(cfg);
    sink.file("conjectures.csv", conjecture_csv(rep));
    if (!rep.passed()) status = Exit::check_failed;
  }
  sink.finish();
  return status;
}

// Arguments worth recording in a manifest: everything except output location
// and worker count, neither of which changes the results.
std::vector<std::string> recorded_args(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto& a = args[i];
    if (a == "--out" || a == "--workers") {
      ++i;
      continue;
    }
    if (a.starts_with("--out=") || a.starts_with("--workers=")) continue;
    out.push_back(a);
  }
  return out;
}

int run(std::vector<std::string> args, std::optional<std::string> out_override) {
  CLI::App app{"Orbits of curves on the one-holed torus: counts, formulas, metrics and length spectra", "curves"};
  app.set_version_flag("--version", kVersion);
  const auto recorded = recorded_args(args);
  try {
    return run_command(app, recorded, std::move(args), std::move(out_override));
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Exit::usage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_usage(e.code()) ? Exit::usage : Exit::check_failed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Exit::check_failed;
  }
}

}  // namespace

int main(int argc, char** argv) { return run(std::vector<std::string>(argv + 1, argv + argc), std::nullopt); }
