#include "annuli/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "annuli/diophantine.hpp"
#include "annuli/errors.hpp"
#include "annuli/spectral.hpp"

namespace annuli {

namespace fs = std::filesystem;
using nlohmann::json;

const char* build_describe() {
#ifdef ANNULI_GIT_DESCRIBE
  return ANNULI_GIT_DESCRIBE;
#else
  return "unknown";
#endif
}

namespace {

// Acceptance bands frozen from oracle runs.
constexpr double kVarianceRatioLo = 0.6;
constexpr double kVarianceRatioHi = 1.4;
constexpr double kSmoothKsBand = 0.06;
constexpr double kSharpKsBand = 0.10;
constexpr double kUnsmoothingRatioBound = 3.0;
constexpr double kRamanujanBandLo = 7.5;
constexpr double kRamanujanBandHi = 8.7;
constexpr double kMoment3Band = 0.2;
constexpr double kMoment4Lo = 2.4;
constexpr double kMoment4Hi = 3.6;
constexpr double kMoment5Band = 1.5;

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const fs::path& path, const std::string& body,
                std::vector<std::string>& files) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ResourceError("cannot write " + path.string());
  f << body;
  files.push_back(path.string());
}

std::string samples_csv(const DistributionReport& rep) {
  std::string out = "index,t,value,normalized\n";
  for (std::size_t i = 0; i < rep.normalized.size(); ++i) {
    out += std::to_string(i) + "," + format_g17(rep.t_values[i]) + "," +
           format_g17(rep.values[i]) + "," + format_g17(rep.normalized[i]) +
           "\n";
  }
  return out;
}

json report_json(const DistributionReport& rep) {
  json j;
  j["samples"] = rep.samples;
  j["sigma2"] = rep.sigma2;
  j["ks"] = rep.ks;
  json mom = json::array(), se = json::array();
  for (int m = 1; m <= 6; ++m) {
    mom.push_back(rep.moments[m]);
    se.push_back(rep.moment_se[m]);
  }
  j["moments"] = mom;
  j["moment_se"] = se;
  j["histogram"] = {{"edges", rep.histogram.edges},
                    {"counts", rep.histogram.counts}};
  return j;
}

json base_report(const ExperimentConfig& cfg, const std::string& target) {
  json j;
  j["preset"] = cfg.name;
  j["target"] = target;
  j["parameters"] = {{"T", cfg.T},
                     {"L", cfg.L},
                     {"M", cfg.M},
                     {"samples", cfg.samples},
                     {"seed", cfg.seed},
                     {"window", std::string(window_kind_name(cfg.window))}};
  j["build"] = build_describe();
  j["generated_at"] = timestamp_utc();
  return j;
}

ExperimentOptions options_from(const ExperimentConfig& cfg) {
  ExperimentOptions opts;
  opts.threads = cfg.threads;
  return opts;
}

struct PresetSpec {
  const char* name;
  const char* target;
};

constexpr PresetSpec kPresets[] = {
    {"variance-asymptotics",
     "spectral variance approaches 16 log(L)/L as L grows with M = L^3"},
    {"smooth-clt",
     "normalized smooth annulus statistic converges to the standard normal "
     "law"},
    {"sharp-clt",
     "normalized sharp annulus count remainder converges to the standard "
     "normal law"},
    {"unsmoothing",
     "mean-square gap between sharp and smooth remainders is O(log M / "
     "sqrt(M))"},
    {"moments",
     "moments of the normalized smooth statistic approach the Gaussian "
     "moments m!/(2^{m/2}(m/2)!)"},
    {"diophantine-sweep",
     "nonvanishing signed sums of square roots obey the Liouville lower "
     "bound 1/(m sqrt(M))^{2^{m-1}-1}"},
    {"ramanujan",
     "sum of r(n)^2 up to X grows like 4 X log X with an O(X) defect"},
};

const PresetSpec& find_preset(const std::string& name) {
  for (const auto& p : kPresets) {
    if (name == p.name) return p;
  }
  throw UsageError("unknown preset '" + name + "'");
}

PresetResult run_variance_preset(const ExperimentConfig& cfg) {
  PresetResult res;
  res.name = cfg.name;
  const std::vector<double> grid = {10, 20, 50, 100};
  double max_m = 0;
  for (double L : grid) max_m = std::max(max_m, L * L * L);
  const RTable table =
      ensure_r_table(static_cast<uint64_t>(max_m), cfg.sieve_cache);

  json rows = json::array();
  std::string csv = "L,sigma2_spectral,sigma2_asymptotic,ratio\n";
  std::ostringstream summary;
  summary << "variance ratios (M = L^3):\n";
  bool pass = true;
  for (double L : grid) {
    const VarianceReport r = variance_spectral(L, L * L * L, table);
    rows.push_back({{"L", L},
                    {"M", r.M},
                    {"sigma2_spectral", r.sigma2_spectral},
                    {"sigma2_asymptotic", r.sigma2_asymptotic},
                    {"ratio", r.ratio}});
    csv += format_g17(L) + "," + format_g17(r.sigma2_spectral) + "," +
           format_g17(r.sigma2_asymptotic) + "," + format_g17(r.ratio) + "\n";
    summary << "  L=" << L << "  ratio=" << r.ratio << "\n";
    pass = pass && r.ratio >= kVarianceRatioLo && r.ratio <= kVarianceRatioHi;
  }
  summary << (pass ? "PASS" : "FAIL") << ": all ratios within ["
          << kVarianceRatioLo << ", " << kVarianceRatioHi << "]\n";

  json rep = base_report(cfg, find_preset(cfg.name).target);
  rep["rows"] = rows;
  rep["pass"] = pass;
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  write_file(dir / "report.json", rep.dump(2) + "\n", res.files);
  write_file(dir / "samples.csv", csv, res.files);
  write_file(dir / "summary.txt", summary.str(), res.files);
  res.pass = pass;
  res.summary = summary.str();
  return res;
}

PresetResult run_distribution_preset(const ExperimentConfig& cfg) {
  PresetResult res;
  res.name = cfg.name;
  const bool smooth = cfg.name == "smooth-clt" || cfg.name == "moments";
  DistributionReport dist;
  if (smooth) {
    const RTable table =
        ensure_r_table(static_cast<uint64_t>(cfg.M), cfg.sieve_cache);
    dist = run_distribution_experiment(cfg.T, cfg.L, cfg.M, cfg.samples,
                                       Window::by_kind(cfg.window), cfg.seed,
                                       table, options_from(cfg));
  } else {
    dist = run_sharp_distribution_experiment(cfg.T, cfg.L, cfg.samples,
                                             cfg.seed, options_from(cfg));
  }

  bool pass = true;
  std::ostringstream summary;
  if (cfg.name == "moments") {
    summary << "normalized moments vs Gaussian targets:\n";
    for (int m = 2; m <= 6; ++m) {
      summary << "  m" << m << " = " << dist.moments[m] << " +- "
              << dist.moment_se[m] << "  (target " << gaussian_moment(m)
              << ")\n";
    }
    pass = std::abs(dist.moments[3]) <= kMoment3Band &&
           dist.moments[4] >= kMoment4Lo && dist.moments[4] <= kMoment4Hi &&
           std::abs(dist.moments[5]) <= kMoment5Band;
    summary << (pass ? "PASS" : "FAIL") << ": |m3| <= " << kMoment3Band
            << ", m4 in [" << kMoment4Lo << ", " << kMoment4Hi
            << "], |m5| <= " << kMoment5Band << "\n";
  } else {
    const double band = smooth ? kSmoothKsBand : kSharpKsBand;
    pass = dist.ks <= band;
    summary << "KS distance vs standard normal: " << dist.ks << "\n"
            << (pass ? "PASS" : "FAIL") << ": KS <= " << band << "\n";
  }

  json rep = base_report(cfg, find_preset(cfg.name).target);
  rep["distribution"] = report_json(dist);
  rep["pass"] = pass;
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  write_file(dir / "report.json", rep.dump(2) + "\n", res.files);
  write_file(dir / "samples.csv", samples_csv(dist), res.files);
  write_file(dir / "summary.txt", summary.str(), res.files);
  res.pass = pass;
  res.summary = summary.str();
  return res;
}

PresetResult run_unsmoothing_preset(const ExperimentConfig& cfg) {
  PresetResult res;
  res.name = cfg.name;
  const std::vector<double> grid = {1e3, 1e4, 1e5};
  const double max_m = *std::max_element(grid.begin(), grid.end());
  const RTable table =
      ensure_r_table(static_cast<uint64_t>(max_m), cfg.sieve_cache);

  json rows = json::array();
  std::string csv = "M,gap,log_m_over_sqrt_m,ratio,gap_over_sigma2\n";
  std::ostringstream summary;
  summary << "unsmoothing gap over M grid (T=" << cfg.T << ", L=" << cfg.L
          << "):\n";
  bool pass = true;
  for (double M : grid) {
    const UnsmoothingReport r = unsmoothing_gap(cfg.T, cfg.L, M, cfg.samples,
                                                cfg.seed, table,
                                                options_from(cfg));
    rows.push_back({{"M", M},
                    {"gap", r.gap},
                    {"log_m_over_sqrt_m", r.log_m_over_sqrt_m},
                    {"ratio", r.ratio},
                    {"gap_over_sigma2", r.gap_over_sigma2}});
    csv += format_g17(M) + "," + format_g17(r.gap) + "," +
           format_g17(r.log_m_over_sqrt_m) + "," + format_g17(r.ratio) + "," +
           format_g17(r.gap_over_sigma2) + "\n";
    summary << "  M=" << M << "  gap=" << r.gap << "  ratio=" << r.ratio
            << "\n";
    pass = pass && r.ratio <= kUnsmoothingRatioBound;
  }
  summary << (pass ? "PASS" : "FAIL")
          << ": gap/(log M/sqrt M) <= " << kUnsmoothingRatioBound
          << " across the grid\n";

  json rep = base_report(cfg, find_preset(cfg.name).target);
  rep["rows"] = rows;
  rep["pass"] = pass;
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  write_file(dir / "report.json", rep.dump(2) + "\n", res.files);
  write_file(dir / "samples.csv", csv, res.files);
  write_file(dir / "summary.txt", summary.str(), res.files);
  res.pass = pass;
  res.summary = summary.str();
  return res;
}

PresetResult run_diophantine_preset(const ExperimentConfig& cfg) {
  PresetResult res;
  res.name = cfg.name;
  const SweepReport two = exhaustive_bound_sweep(50, 2);
  const SweepReport three = exhaustive_bound_sweep(30, 3);

  std::string csv = "m,max_n,tuples,patterns,vanishing,all_pass,tightest_ratio\n";
  json rows = json::array();
  std::ostringstream summary;
  bool pass = true;
  for (const SweepReport* r : {&two, &three}) {
    rows.push_back({{"m", r->m},
                    {"max_n", r->max_n},
                    {"tuples", r->tuples},
                    {"patterns_checked", r->patterns_checked},
                    {"vanishing", r->vanishing},
                    {"all_pass", r->all_pass},
                    {"tightest_ratio", r->tightest_ratio},
                    {"tightest_tuple", r->tightest_tuple}});
    csv += std::to_string(r->m) + "," + std::to_string(r->max_n) + "," +
           std::to_string(r->tuples) + "," + std::to_string(r->patterns_checked) +
           "," + std::to_string(r->vanishing) + "," +
           (r->all_pass ? "1" : "0") + "," + format_g17(r->tightest_ratio) +
           "\n";
    summary << "  m=" << r->m << " max_n=" << r->max_n
            << " tightest_ratio=" << r->tightest_ratio
            << (r->all_pass ? " (all pass)" : " (VIOLATION)") << "\n";
    pass = pass && r->all_pass && r->tightest_ratio > 1.0;
  }
  summary << (pass ? "PASS" : "FAIL")
          << ": every nonvanishing signed sum meets the lower bound\n";

  json rep = base_report(cfg, find_preset(cfg.name).target);
  rep["rows"] = rows;
  rep["pass"] = pass;
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  write_file(dir / "report.json", rep.dump(2) + "\n", res.files);
  write_file(dir / "samples.csv", csv, res.files);
  write_file(dir / "summary.txt", summary.str(), res.files);
  res.pass = pass;
  res.summary = summary.str();
  return res;
}

PresetResult run_ramanujan_preset(const ExperimentConfig& cfg) {
  PresetResult res;
  res.name = cfg.name;
  const std::vector<uint64_t> grid = {1000, 10000, 100000, 1000000, 10000000};
  const RTable table = ensure_r_table(grid.back(), cfg.sieve_cache);

  json rows = json::array();
  std::string csv = "X,sum_r_squared,reference_4XlogX,normalized_error\n";
  std::ostringstream summary;
  bool pass = true;
  for (uint64_t X : grid) {
    const RamanujanSum r = ramanujan_partial_sum(X, table);
    rows.push_back({{"X", r.x},
                    {"sum_r_squared", r.sum_r_squared},
                    {"reference", r.reference},
                    {"normalized_error", r.normalized_error}});
    csv += std::to_string(r.x) + "," + std::to_string(r.sum_r_squared) + "," +
           format_g17(r.reference) + "," + format_g17(r.normalized_error) +
           "\n";
    summary << "  X=" << X << "  (sum - 4XlogX)/X = " << r.normalized_error
            << "\n";
    pass = pass && r.normalized_error >= kRamanujanBandLo &&
           r.normalized_error <= kRamanujanBandHi;
  }
  summary << (pass ? "PASS" : "FAIL") << ": normalized error within ["
          << kRamanujanBandLo << ", " << kRamanujanBandHi << "]\n";

  json rep = base_report(cfg, find_preset(cfg.name).target);
  rep["rows"] = rows;
  rep["pass"] = pass;
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  write_file(dir / "report.json", rep.dump(2) + "\n", res.files);
  write_file(dir / "samples.csv", csv, res.files);
  write_file(dir / "summary.txt", summary.str(), res.files);
  res.pass = pass;
  res.summary = summary.str();
  return res;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& p : kPresets) v.emplace_back(p.name);
    return v;
  }();
  return names;
}

ExperimentConfig preset_defaults(const std::string& name) {
  find_preset(name);  // validates
  ExperimentConfig cfg;
  cfg.name = name;
  if (name == "smooth-clt" || name == "moments") {
    cfg.T = 1e5;
    cfg.L = 20;
    cfg.M = 8000;
    cfg.samples = 10000;
    cfg.window = WindowKind::kSmoothBump;
  } else if (name == "sharp-clt") {
    cfg.T = 1e4;
    cfg.L = 10;
    cfg.samples = 2000;
    cfg.window = WindowKind::kUniform;
  } else if (name == "unsmoothing") {
    cfg.T = 1e4;
    cfg.L = 10;
    cfg.samples = 1000;
    cfg.window = WindowKind::kUniform;
  }
  return cfg;
}

PresetResult run_preset(const ExperimentConfig& config) {
  const std::string& name = config.name;
  find_preset(name);  // throws for unknown presets
  if (name == "variance-asymptotics") return run_variance_preset(config);
  if (name == "smooth-clt" || name == "sharp-clt" || name == "moments") {
    return run_distribution_preset(config);
  }
  if (name == "unsmoothing") return run_unsmoothing_preset(config);
  if (name == "diophantine-sweep") return run_diophantine_preset(config);
  return run_ramanujan_preset(config);
}

SandwichReport sandwich_comparison(double T, double L, double M,
                                   uint64_t samples, uint64_t seed,
                                   const RTable& table,
                                   const ExperimentOptions& opts) {
  SandwichReport rep;
  rep.uniform = run_distribution_experiment(T, L, M, samples,
                                            Window::uniform(), seed, table,
                                            opts);
  rep.bump = run_distribution_experiment(T, L, M, samples,
                                         Window::smooth_bump(), seed, table,
                                         opts);
  rep.delta_ks = std::abs(rep.uniform.ks - rep.bump.ks);
  rep.ks_pass = rep.delta_ks <= 0.03;
  rep.moments_pass = true;
  for (int m = 1; m <= 6; ++m) {
    rep.moment_delta[m] = std::abs(rep.uniform.moments[m] - rep.bump.moments[m]);
    rep.combined_se[m] = std::hypot(rep.uniform.moment_se[m],
                                    rep.bump.moment_se[m]);
    if (rep.moment_delta[m] > 3.0 * rep.combined_se[m]) rep.moments_pass = false;
  }
  return rep;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_text(const std::string& text,
                                             ExperimentConfig base) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line is not 'key = value': " + line);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "name") base.name = value;
      else if (key == "T") base.T = std::stod(value);
      else if (key == "L") base.L = std::stod(value);
      else if (key == "M") base.M = std::stod(value);
      else if (key == "samples") base.samples = std::stoull(value);
      else if (key == "seed") base.seed = std::stoull(value);
      else if (key == "window") base.window = window_kind_from_name(value);
      else if (key == "out") base.out_dir = value;
      else if (key == "threads") base.threads = std::stoi(value);
      else if (key == "sieve_cache") base.sieve_cache = value;
      else throw UsageError("unknown config key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw UsageError("bad value for config key '" + key + "': " + value);
    } catch (const std::out_of_range&) {
      throw UsageError("value out of range for config key '" + key + "'");
    }
  }
  return base;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path,
                                             ExperimentConfig base) {
  std::ifstream f(path);
  if (!f) throw ResourceError("cannot open config file: " + path);
  std::ostringstream body;
  body << f.rdbuf();
  return from_text(body.str(), std::move(base));
}

std::string ExperimentConfig::serialize() const {
  std::ostringstream out;
  out << "name = " << name << "\n";
  out << "T = " << format_g17(T) << "\n";
  out << "L = " << format_g17(L) << "\n";
  out << "M = " << format_g17(M) << "\n";
  out << "samples = " << samples << "\n";
  out << "seed = " << seed << "\n";
  out << "window = " << window_kind_name(window) << "\n";
  out << "out = " << out_dir << "\n";
  out << "threads = " << threads << "\n";
  out << "sieve_cache = " << sieve_cache << "\n";
  return out.str();
}

}  // namespace annuli
