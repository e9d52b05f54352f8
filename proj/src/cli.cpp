#include "annuli/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "annuli/counting.hpp"
#include "annuli/diophantine.hpp"
#include "annuli/errors.hpp"
#include "annuli/experiments.hpp"
#include "annuli/spectral.hpp"
#include "annuli/stats.hpp"

namespace annuli {

namespace {

using nlohmann::json;

std::string sig12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string sig6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Env var takes precedence over the flag.
std::string effective_cache(const std::string& flag_value) {
  if (const char* env = std::getenv("ANNULI_SIEVE_CACHE")) return env;
  return flag_value;
}

std::vector<uint64_t> parse_n_list(const std::string& csv) {
  std::vector<uint64_t> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stoull(item));
    } catch (...) {
      throw UsageError("bad integer in --n list: '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("--n list is empty");
  return out;
}

json distribution_json(const DistributionReport& rep) {
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

void write_distribution_files(const DistributionReport& rep, const json& meta,
                              const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::ofstream csv(fs::path(out_dir) / "samples.csv",
                    std::ios::binary | std::ios::trunc);
  if (!csv) throw ResourceError("cannot write samples.csv under " + out_dir);
  csv << "index,t,value,normalized\n";
  char buf[140];
  for (std::size_t i = 0; i < rep.normalized.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g\n", i,
                  rep.t_values[i], rep.values[i], rep.normalized[i]);
    csv << buf;
  }
  json full = meta;
  full["distribution"] = distribution_json(rep);
  full["build"] = build_describe();
  std::ofstream rj(fs::path(out_dir) / "report.json",
                   std::ios::binary | std::ios::trunc);
  if (!rj) throw ResourceError("cannot write report.json under " + out_dir);
  rj << full.dump(2) << "\n";
}

struct GlobalFlags {
  bool json = false;
  uint64_t seed = 1;
  int threads = 0;
  std::string sieve_cache;
};

int run_app(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"lattice points in thin annuli: exact counting, spectral "
               "series, and Gaussian-law experiments"};
  app.require_subcommand(0, 1);
  GlobalFlags g;
  app.add_flag("--json", g.json, "machine-readable JSON on stdout");
  app.add_option("--seed", g.seed, "base seed for all randomness");
  app.add_option("--threads", g.threads,
                 "worker threads (0 = hardware concurrency)");
  app.add_option("--sieve-cache", g.sieve_cache,
                 "sieve cache path (env ANNULI_SIEVE_CACHE overrides)");

  // count
  auto* count_cmd =
      app.add_subcommand("count", "exact lattice count N(t) and S(t,rho)");
  std::string count_t, count_rho;
  int count_prec = Dyadic::kDefaultPrecisionBits;
  count_cmd->add_option("--t", count_t, "radius (decimal, parsed as dyadic)")
      ->required();
  count_cmd->add_option("--rho", count_rho, "annulus width (decimal dyadic)");
  count_cmd->add_option("--prec", count_prec,
                        "fractional bits for decimal->dyadic rounding");

  // spectral
  auto* spectral_cmd = app.add_subcommand(
      "spectral", "smoothed count Nf(t) and smooth remainder");
  double sp_t = 0, sp_m = 0, sp_l = 10;
  std::string sp_route = "bessel";
  spectral_cmd->add_option("--t", sp_t, "radius")->required();
  spectral_cmd->add_option("--M", sp_m, "smoothness parameter")->required();
  spectral_cmd->add_option("--L", sp_l, "inverse annulus width")->required();
  spectral_cmd->add_option("--route", sp_route, "bessel | asymptotic")
      ->check(CLI::IsMember({"bessel", "asymptotic"}));

  // variance
  auto* variance_cmd =
      app.add_subcommand("variance", "spectral / asymptotic variance");
  double va_l = 0, va_m = -1;
  bool va_asym = false;
  variance_cmd->add_option("--L", va_l, "inverse annulus width")->required();
  variance_cmd->add_option("--M", va_m, "smoothness parameter");
  variance_cmd->add_flag("--asymptotic", va_asym, "print 16 log(L)/L only");

  // distribution
  auto* dist_cmd = app.add_subcommand(
      "distribution", "sample the normalized remainder and test against the "
                      "standard normal");
  std::string di_mode = "smooth", di_window = "bump", di_out = "out";
  double di_t = 1e4, di_l = 10, di_m = 1e3;
  uint64_t di_samples = 1000;
  bool di_no_guardrails = false;
  dist_cmd->add_option("--mode", di_mode, "sharp | smooth")
      ->check(CLI::IsMember({"sharp", "smooth"}));
  dist_cmd->add_option("--T", di_t, "scale of the t-window")->required();
  dist_cmd->add_option("--L", di_l, "inverse annulus width")->required();
  dist_cmd->add_option("--M", di_m, "smoothness (smooth mode)");
  dist_cmd->add_option("--samples", di_samples, "sample count")->required();
  dist_cmd->add_option("--window", di_window, "uniform | bump")
      ->check(CLI::IsMember({"uniform", "bump"}));
  dist_cmd->add_option("--out", di_out, "output directory");
  dist_cmd->add_flag("--no-guardrails", di_no_guardrails,
                     "skip the M <= T and L/sqrt(M) checks");

  // unsmoothing
  auto* unsm_cmd = app.add_subcommand(
      "unsmoothing", "mean-square gap between sharp and smooth remainders");
  double un_t = 1e4, un_l = 10, un_m = 1e3;
  uint64_t un_samples = 1000;
  unsm_cmd->add_option("--T", un_t, "scale")->required();
  unsm_cmd->add_option("--L", un_l, "inverse width")->required();
  unsm_cmd->add_option("--M", un_m, "smoothness")->required();
  unsm_cmd->add_option("--samples", un_samples, "sample count");

  // moments
  auto* mom_cmd = app.add_subcommand(
      "moments", "normalized moments vs the Gaussian targets");
  double mo_t = 1e5, mo_l = 20, mo_m = 8000;
  uint64_t mo_samples = 10000;
  std::string mo_window = "bump";
  mom_cmd->add_option("--T", mo_t, "scale");
  mom_cmd->add_option("--L", mo_l, "inverse width");
  mom_cmd->add_option("--M", mo_m, "smoothness");
  mom_cmd->add_option("--samples", mo_samples, "sample count");
  mom_cmd->add_option("--window", mo_window, "uniform | bump")
      ->check(CLI::IsMember({"uniform", "bump"}));

  // liouville
  auto* liou_cmd = app.add_subcommand(
      "liouville", "certified lower bounds for signed sums of square roots");
  std::string li_n;
  liou_cmd->add_option("--n", li_n, "comma-separated positive integers");
  auto* sweep_cmd = liou_cmd->add_subcommand(
      "sweep", "exhaustive bound check over all tuples up to a cap");
  uint64_t sw_max = 30;
  std::size_t sw_m = 3;
  sweep_cmd->add_option("--max", sw_max, "largest n to include")->required();
  sweep_cmd->add_option("--m", sw_m, "tuple length")->required();

  // ramanujan
  auto* ram_cmd =
      app.add_subcommand("ramanujan", "partial sums of r(n)^2 vs 4 X log X");
  uint64_t ra_x = 0;
  ram_cmd->add_option("--X", ra_x, "upper limit of the sum")->required();

  // experiment
  auto* exp_cmd = app.add_subcommand("experiment", "named end-to-end presets");
  auto* exp_run = exp_cmd->add_subcommand("run", "run a named preset");
  std::string ex_name, ex_config, ex_out;
  exp_run->add_option("name", ex_name, "preset name")->required();
  exp_run->add_option("--config", ex_config, "key = value config file");
  exp_run->add_option("--out", ex_out, "output directory");
  auto* exp_list = exp_cmd->add_subcommand("list", "list preset names");

  std::vector<const char*> argv;
  argv.push_back("annuli");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  if (*count_cmd) {
    const Dyadic t = Dyadic::from_decimal(count_t, count_prec);
    const uint64_t n_inner = lattice_count_rows(t);
    if (count_rho.empty()) {
      if (g.json) {
        out << json{{"t", t.to_string()}, {"n", n_inner}}.dump() << "\n";
      } else {
        out << n_inner << "\n";
      }
      return 0;
    }
    const Dyadic rho = Dyadic::from_decimal(count_rho, count_prec);
    const AnnulusSpec spec{t, rho};
    const uint64_t n_outer = lattice_count_rows(t + rho);
    const double s = s_sharp(spec);
    if (g.json) {
      out << json{{"t", t.to_string()},
                  {"rho", rho.to_string()},
                  {"n_inner", n_inner},
                  {"n_outer", n_outer},
                  {"s_sharp", s}}
                 .dump()
          << "\n";
    } else {
      out << "N(t) = " << n_inner << "\n";
      out << "N(t+rho) = " << n_outer << "\n";
      out << "S(t,rho) = " << sig12(s) << "\n";
    }
    return 0;
  }

  if (*spectral_cmd) {
    const RTable table = ensure_r_table(static_cast<uint64_t>(sp_m),
                                        effective_cache(g.sieve_cache));
    const double nf = sp_route == "bessel" ? nf_exact_bessel(sp_t, sp_m, table)
                                           : nf_asymptotic(sp_t, sp_m, table);
    const SpectralParams params{.M = sp_m, .L = sp_l, .T = sp_t};
    const json j{{"t", sp_t},
                 {"M", sp_m},
                 {"L", sp_l},
                 {"route", sp_route},
                 {"nf", nf},
                 {"s_smooth", s_smooth(sp_t, params, table)}};
    out << j.dump() << "\n";
    return 0;
  }

  if (*variance_cmd) {
    if (va_asym || va_m < 0) {
      const double v = variance_asymptotic(va_l);
      if (g.json) {
        out << json{{"L", va_l}, {"sigma2_asymptotic", v}}.dump() << "\n";
      } else {
        out << sig6(v) << "\n";
      }
      return 0;
    }
    const RTable table = ensure_r_table(static_cast<uint64_t>(va_m),
                                        effective_cache(g.sieve_cache));
    const VarianceReport rep = variance_spectral(va_l, va_m, table);
    if (g.json) {
      out << json{{"L", rep.L},
                  {"M", rep.M},
                  {"sigma2_spectral", rep.sigma2_spectral},
                  {"sigma2_asymptotic", rep.sigma2_asymptotic},
                  {"ratio", rep.ratio}}
                 .dump()
          << "\n";
    } else {
      out << "sigma2_spectral = " << sig12(rep.sigma2_spectral) << "\n";
      out << "sigma2_asymptotic = " << sig12(rep.sigma2_asymptotic) << "\n";
      out << "ratio = " << sig12(rep.ratio) << "\n";
    }
    return 0;
  }

  if (*dist_cmd) {
    ExperimentOptions opts;
    opts.threads = g.threads;
    opts.enforce_guardrails = !di_no_guardrails;
    DistributionReport rep;
    json meta{{"mode", di_mode}, {"T", di_t},       {"L", di_l},
              {"seed", g.seed},  {"window", di_window}};
    if (di_mode == "smooth") {
      meta["M"] = di_m;
      const RTable table = ensure_r_table(static_cast<uint64_t>(di_m),
                                          effective_cache(g.sieve_cache));
      rep = run_distribution_experiment(di_t, di_l, di_m, di_samples,
                                        Window::by_kind(window_kind_from_name(
                                            di_window)),
                                        g.seed, table, opts);
    } else {
      rep = run_sharp_distribution_experiment(di_t, di_l, di_samples, g.seed,
                                              opts);
    }
    write_distribution_files(rep, meta, di_out);
    if (g.json) {
      json j = meta;
      j["distribution"] = distribution_json(rep);
      out << j.dump() << "\n";
    } else {
      out << "samples = " << rep.samples << "\n";
      out << "sigma2 = " << sig12(rep.sigma2) << "\n";
      out << "KS = " << sig12(rep.ks) << "\n";
      for (int m = 1; m <= 6; ++m) {
        out << "m" << m << " = " << sig12(rep.moments[m]) << " +- "
            << sig12(rep.moment_se[m]) << "\n";
      }
      out << "wrote " << di_out << "/samples.csv and report.json\n";
    }
    return 0;
  }

  if (*unsm_cmd) {
    ExperimentOptions opts;
    opts.threads = g.threads;
    const RTable table = ensure_r_table(static_cast<uint64_t>(un_m),
                                        effective_cache(g.sieve_cache));
    const UnsmoothingReport rep =
        unsmoothing_gap(un_t, un_l, un_m, un_samples, g.seed, table, opts);
    const json j{{"T", un_t},
                 {"L", un_l},
                 {"M", un_m},
                 {"samples", rep.samples},
                 {"gap", rep.gap},
                 {"log_m_over_sqrt_m", rep.log_m_over_sqrt_m},
                 {"ratio", rep.ratio},
                 {"sigma2_spectral", rep.sigma2_spectral},
                 {"gap_over_sigma2", rep.gap_over_sigma2}};
    out << j.dump() << "\n";
    return 0;
  }

  if (*mom_cmd) {
    ExperimentOptions opts;
    opts.threads = g.threads;
    const RTable table = ensure_r_table(static_cast<uint64_t>(mo_m),
                                        effective_cache(g.sieve_cache));
    const DistributionReport rep = run_distribution_experiment(
        mo_t, mo_l, mo_m, mo_samples,
        Window::by_kind(window_kind_from_name(mo_window)), g.seed, table,
        opts);
    if (g.json) {
      json j = distribution_json(rep);
      json targets = json::array();
      for (int m = 1; m <= 6; ++m) targets.push_back(gaussian_moment(m));
      j["gaussian_targets"] = targets;
      out << j.dump() << "\n";
    } else {
      out << "m  estimate         std.err          gaussian\n";
      for (int m = 1; m <= 6; ++m) {
        char line[120];
        std::snprintf(line, sizeof(line), "%d  %-15.6g  %-15.6g  %g\n", m,
                      rep.moments[m], rep.moment_se[m], gaussian_moment(m));
        out << line;
      }
    }
    return 0;
  }

  if (*liou_cmd) {
    if (*sweep_cmd) {
      const SweepReport rep = exhaustive_bound_sweep(sw_max, sw_m);
      const json j{{"m", rep.m},
                   {"max_n", rep.max_n},
                   {"tuples", rep.tuples},
                   {"patterns_checked", rep.patterns_checked},
                   {"vanishing", rep.vanishing},
                   {"all_pass", rep.all_pass},
                   {"tightest_ratio", rep.tightest_ratio},
                   {"tightest_tuple", rep.tightest_tuple}};
      if (g.json) {
        out << j.dump() << "\n";
      } else {
        out << (rep.all_pass ? "PASS" : "FAIL") << " tightest_ratio = "
            << sig12(rep.tightest_ratio) << "\n";
      }
      return rep.all_pass ? 0 : 1;
    }
    if (li_n.empty()) {
      err << "liouville: provide --n or the sweep subcommand\n";
      return 2;
    }
    const LiouvilleCertificate cert = liouville_certificate(parse_n_list(li_n));
    json patterns = json::array();
    for (const auto& pb : cert.pattern_bounds) {
      patterns.push_back(
          {{"pattern", pb.pattern}, {"certified_lower", pb.certified_lower}});
    }
    const json j{{"n", cert.n},
                 {"P", cert.p_integer},
                 {"p_nonzero", cert.p_nonzero},
                 {"p_is_square", cert.p_is_square},
                 {"min_abs", cert.min_abs},
                 {"bound", cert.bound},
                 {"max_n", cert.max_n},
                 {"precision_bits", cert.precision_bits},
                 {"vanishing_patterns", cert.vanishing},
                 {"pattern_bounds", patterns},
                 {"pass", cert.meets_bound}};
    out << j.dump() << "\n";
    return cert.meets_bound ? 0 : 1;
  }

  if (*ram_cmd) {
    const RTable table =
        ensure_r_table(ra_x, effective_cache(g.sieve_cache));
    const RamanujanSum rep = ramanujan_partial_sum(ra_x, table);
    if (g.json) {
      out << json{{"X", rep.x},
                  {"sum_r_squared", rep.sum_r_squared},
                  {"reference", rep.reference},
                  {"normalized_error", rep.normalized_error}}
                 .dump()
          << "\n";
    } else {
      out << "sum_{n<=X} r(n)^2 = " << rep.sum_r_squared << "\n";
      out << "4 X log X = " << sig12(rep.reference) << "\n";
      out << "(sum - 4XlogX)/X = " << sig12(rep.normalized_error) << "\n";
    }
    return 0;
  }

  if (*exp_cmd) {
    if (*exp_list) {
      for (const auto& n : preset_names()) out << n << "\n";
      return 0;
    }
    if (!*exp_run) {
      err << "experiment: expected 'run <name>' or 'list'\n";
      return 2;
    }
    ExperimentConfig cfg = preset_defaults(ex_name);
    cfg.threads = g.threads;
    cfg.seed = g.seed;
    cfg.sieve_cache = effective_cache(g.sieve_cache);
    if (!ex_config.empty()) cfg = ExperimentConfig::from_file(ex_config, cfg);
    cfg.name = ex_name;
    if (!ex_out.empty()) cfg.out_dir = ex_out;
    const PresetResult res = run_preset(cfg);
    out << res.summary;
    if (g.json) {
      out << json{{"preset", res.name}, {"pass", res.pass}, {"files", res.files}}
                 .dump()
          << "\n";
    }
    return res.pass ? 0 : 1;
  }

  out << app.help();
  return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  try {
    return run_app(args, out, err);
  } catch (const GuardrailError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const NotVanishingError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace annuli
