// ptsrc: point-source significance from on/off counts and count maps.
//
// Exit codes: 0 success, 1 usage error, 2 input parse error, 3 verification
// failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ptsrc/errors.hpp"
#include "ptsrc/exact.hpp"
#include "ptsrc/null_simulator.hpp"
#include "ptsrc/reference.hpp"
#include "ptsrc/scan.hpp"
#include "ptsrc/significance.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitVerify = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Writes to `path`, or to stdout when path is empty or "-".
template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ptsrc::IoError("cannot write '" + path + "'");
  fn(out);
  if (!out) throw ptsrc::IoError("error writing '" + path + "'");
}

// ---- scan -------------------------------------------------------------------

struct ScanArgs {
  std::string map_path;
  double r_src = 0.0;
  double r_in = 0.0;
  double r_out = 0.0;
  std::uint64_t min_bak_pixels = 8;
  std::optional<double> sigma_min;
  std::uint64_t trials_factor = 1;
  std::string out;
  unsigned threads = 1;
  std::uint64_t seed = 0;
  std::uint64_t spot_check = 0;
};

// Recomputes p for randomly chosen records with exact rational arithmetic.
bool spot_check(std::span<const ptsrc::scan::DetectionRecord> records, std::uint64_t count,
                std::uint64_t trials_factor, std::uint64_t seed) {
  if (records.empty() || count == 0) return true;
  ptsrc::nullsim::CounterStream rng(seed, 0);
  std::uint64_t failures = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    auto k = static_cast<std::size_t>(rng.next_uniform() * static_cast<double>(records.size()));
    k = std::min(k, records.size() - 1);
    const auto& r = records[k];
    ptsrc::exact::ExactRational f(ptsrc::exact::BigInt(static_cast<unsigned long>(r.src_pixels)),
                                  ptsrc::exact::BigInt(
                                      static_cast<unsigned long>(r.src_pixels + r.bak_pixels)));
    f.canonicalize();
    ptsrc::exact::ExactRational p = ptsrc::exact::p_lampton_exact(r.n_src, r.n_bak, f);
    p *= ptsrc::exact::ExactRational(static_cast<unsigned long>(trials_factor));
    if (p > 1) p = 1;
    const double exact = ptsrc::exact::to_double(p);
    bool ok;
    if (exact >= 1e-300) {
      ok = std::abs(r.p - exact) <= 1e-12 * exact;
    } else {
      ok = std::abs(r.log_p - ptsrc::exact::log_value(p)) <= 1e-12;
    }
    if (!ok) {
      ++failures;
      std::cerr << "spot check failed at (" << r.x << ", " << r.y << "): p=" << fmt17(r.p)
                << " exact=" << fmt17(exact) << '\n';
    }
  }
  std::cerr << "spot check: " << count - failures << '/' << count << " pixels agree\n";
  return failures == 0;
}

int run_scan(const ScanArgs& a) {
  ptsrc::scan::ApertureSpec spec;
  try {
    spec = ptsrc::scan::ApertureSpec::make(a.r_src, a.r_in, a.r_out);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (a.min_bak_pixels == 0) throw UsageError("--min-bak-pixels must be positive");
  if (a.trials_factor == 0) throw UsageError("--trials-factor must be positive");

  const auto map = ptsrc::scan::load_map(a.map_path);
  ptsrc::scan::ScanOptions options;
  options.min_bak_pixels = a.min_bak_pixels;
  options.trials_factor = a.trials_factor;
  options.threads = a.threads;
  auto records = ptsrc::scan::scan(map, spec, options);
  const bool checked = spot_check(records, a.spot_check, a.trials_factor, a.seed);
  if (a.sigma_min) records = ptsrc::scan::threshold_detections(records, *a.sigma_min);
  with_output(a.out, [&](std::ostream& os) { ptsrc::scan::write_records(os, records); });
  return checked ? kExitOk : kExitVerify;
}

// ---- simulate ---------------------------------------------------------------

struct SimulateArgs {
  std::size_t width = 0;
  std::size_t height = 0;
  double mu = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> inject_at;
  double inject_radius = 2.0;
  std::uint64_t inject_counts = 0;
  std::string out;
};

int run_simulate(const SimulateArgs& a) {
  ptsrc::scan::CountMap map;
  try {
    map = ptsrc::scan::simulate_background(a.width, a.height, a.mu, a.seed);
    if (a.inject_counts > 0) {
      if (a.inject_at.size() != 2) throw UsageError("--inject-at needs X Y");
      ptsrc::scan::inject_source(map, {a.inject_at[0], a.inject_at[1]}, a.inject_radius,
                                 a.inject_counts, a.seed);
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  } catch (const std::out_of_range& e) {
    throw UsageError(e.what());
  }
  with_output(a.out, [&](std::ostream& os) { os << ptsrc::scan::format_map(map); });
  return kExitOk;
}

// ---- pvalue -----------------------------------------------------------------

struct PvalueArgs {
  std::uint64_t n = 0;
  std::uint64_t b = 0;
  std::string f;
  double rel_tol = 1e-12;
  bool exact = false;
};

int run_pvalue(const PvalueArgs& a) {
  ptsrc::exact::ExactRational f_exact;
  double f = 0.0;
  try {
    f_exact = ptsrc::exact::parse_rational(a.f);
    f = ptsrc::exact::to_double(f_exact);
  } catch (const std::exception&) {
    throw UsageError("--f: not a number '" + a.f + "'");
  }
  if (!(f_exact > 0 && f_exact < 1)) throw UsageError("--f must lie in (0, 1)");
  if (!(a.rel_tol > 0.0)) throw UsageError("--rel-tol must be positive");

  const auto geom = ptsrc::sig::RegionGeometry::from_fraction(f);
  const ptsrc::sig::CountObservation obs{a.n, a.b};
  std::cout << "route,method,p,log_p,sigma,truncation_bound\n";
  auto row = [](std::string_view route, const ptsrc::sig::PValueResult& r) {
    std::cout << route << ',' << ptsrc::sig::to_string(r.method) << ',' << fmt17(r.p) << ','
              << fmt17(r.log_p) << ',' << fmt17(r.sigma) << ',' << fmt17(r.truncation_bound)
              << '\n';
  };
  row("binomial_tail", ptsrc::sig::p_lampton(obs, geom));
  row("bayes_series", ptsrc::sig::p_alexandreas(obs, geom, a.rel_tol));
  if (a.exact) {
    const auto p = ptsrc::exact::p_lampton_exact(a.n, a.b, f_exact);
    const double log_p = ptsrc::exact::log_value(p);
    std::cout << "exact,rational," << fmt17(ptsrc::exact::to_double(p)) << ',' << fmt17(log_p)
              << ',' << fmt17(ptsrc::exact::sigma_reference(log_p)) << ",0\n";
  }
  return kExitOk;
}

// ---- verify-lemmas ----------------------------------------------------------

struct VerifyArgs {
  unsigned threads = 1;
  std::string csv;
};

int run_verify(const VerifyArgs& a) {
  const auto reports = ptsrc::exact::run_all_sweeps(a.threads);
  bool all = true;
  for (const auto& r : reports) {
    std::cout << ptsrc::exact::render_text(r) << '\n';
    all = all && r.all_passed;
  }
  if (!a.csv.empty()) {
    with_output(a.csv, [&](std::ostream& os) {
      os << ptsrc::exact::lemma_report_csv_header() << '\n';
      for (const auto& r : reports) os << ptsrc::exact::render_csv(r) << '\n';
    });
  }
  return all ? kExitOk : kExitVerify;
}

// ---- calibrate --------------------------------------------------------------

struct CalibrateArgs {
  double mu = 0.0;
  double alpha = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<double> thresholds{0.5, 0.1, 0.01, 0.001};
  unsigned threads = 1;
  std::string csv;
};

int run_calibrate(const CalibrateArgs& a) {
  ptsrc::nullsim::NullModel model;
  ptsrc::nullsim::CalibrationReport report;
  try {
    model = ptsrc::nullsim::NullModel::make(a.mu, a.alpha, a.seed);
    report = ptsrc::nullsim::calibrate(model, a.trials, a.thresholds, a.threads);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::cout << ptsrc::nullsim::render_text(report, model);
  if (!a.csv.empty()) {
    with_output(a.csv, [&](std::ostream& os) {
      os << ptsrc::nullsim::calibration_csv_header() << '\n'
         << ptsrc::nullsim::render_csv(report, model) << '\n';
    });
  }
  return report.passed ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Point-source significance for on/off photon counts and count maps"};
  app.require_subcommand(1);

  ScanArgs scan_args;
  auto* scan = app.add_subcommand("scan", "Slide a source aperture and background annulus over a map");
  scan->add_option("--map", scan_args.map_path, "CSV count map")->required();
  scan->add_option("--r-src", scan_args.r_src, "Source aperture radius (pixels)")->required();
  scan->add_option("--r-in", scan_args.r_in, "Annulus inner radius (pixels)")->required();
  scan->add_option("--r-out", scan_args.r_out, "Annulus outer radius (pixels)")->required();
  scan->add_option("--min-bak-pixels", scan_args.min_bak_pixels, "Skip pixels with a smaller annulus")
      ->capture_default_str();
  scan->add_option("--sigma-min", scan_args.sigma_min,
                   "Emit only detections at or above this sigma, strongest first");
  scan->add_option("--trials-factor", scan_args.trials_factor,
                   "Multiply p by this count (capped at 1)")
      ->capture_default_str();
  scan->add_option("--out", scan_args.out, "Output CSV (default stdout)");
  scan->add_option("--threads", scan_args.threads, "Worker threads")
      ->check(CLI::Range(1u, 1024u))
      ->capture_default_str();
  scan->add_option("--seed", scan_args.seed, "Seed for spot-check pixel selection")
      ->capture_default_str();
  scan->add_option("--spot-check", scan_args.spot_check,
                   "Recheck this many random pixels against exact rationals")
      ->capture_default_str();

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "Write a synthetic Poisson count map");
  simulate->add_option("--width", sim_args.width)->required()->check(CLI::PositiveNumber);
  simulate->add_option("--height", sim_args.height)->required()->check(CLI::PositiveNumber);
  simulate->add_option("--mu", sim_args.mu, "Mean counts per pixel")->required();
  simulate->add_option("--seed", sim_args.seed)->capture_default_str();
  simulate->add_option("--inject-at", sim_args.inject_at, "Source center X Y")->expected(2);
  simulate->add_option("--inject-radius", sim_args.inject_radius)->capture_default_str();
  simulate->add_option("--inject-counts", sim_args.inject_counts)->capture_default_str();
  simulate->add_option("--out", sim_args.out, "Output CSV (default stdout)");

  PvalueArgs pv_args;
  auto* pvalue = app.add_subcommand("pvalue", "Evaluate one (N, B, f) by both routes");
  pvalue->add_option("--n", pv_args.n, "Source-region counts")->required();
  pvalue->add_option("--b", pv_args.b, "Background-region counts")->required();
  pvalue->add_option("--f", pv_args.f, "Source area fraction, decimal or p/q")->required();
  pvalue->add_option("--rel-tol", pv_args.rel_tol, "Series truncation tolerance")
      ->capture_default_str();
  pvalue->add_flag("--exact", pv_args.exact, "Also print the exact rational value");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify-lemmas", "Run the exact identity sweeps");
  verify->add_option("--threads", verify_args.threads)
      ->check(CLI::Range(1u, 1024u))
      ->capture_default_str();
  verify->add_option("--csv", verify_args.csv, "Also write CSV records here");

  CalibrateArgs cal_args;
  auto* calibrate = app.add_subcommand("calibrate", "Monte Carlo null calibration");
  calibrate->add_option("--mu", cal_args.mu, "Expected source-region counts")->required();
  calibrate->add_option("--alpha", cal_args.alpha, "Area ratio A_src / A_bak")->required();
  calibrate->add_option("--trials", cal_args.trials)->required();
  calibrate->add_option("--seed", cal_args.seed)->capture_default_str();
  calibrate->add_option("--thresholds", cal_args.thresholds)->capture_default_str();
  calibrate->add_option("--threads", cal_args.threads)
      ->check(CLI::Range(1u, 1024u))
      ->capture_default_str();
  calibrate->add_option("--csv", cal_args.csv, "Also write CSV records here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*scan) return run_scan(scan_args);
    if (*simulate) return run_simulate(sim_args);
    if (*pvalue) return run_pvalue(pv_args);
    if (*verify) return run_verify(verify_args);
    if (*calibrate) return run_calibrate(cal_args);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ptsrc::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const ptsrc::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitVerify;
  }
  return kExitUsage;
}
