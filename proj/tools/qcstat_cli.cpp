// Command-line front end: parses distribution specs and experiment
// parameters, dispatches to the library, writes CSV/JSON artifacts.
//
// Exit codes: 0 success, 1 unexpected failure, 2 usage, 3 domain,
// 4 capacity, 5 degenerate input.

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qcstat/dists.hpp"
#include "qcstat/errors.hpp"
#include "qcstat/mc.hpp"
#include "qcstat/orderstats.hpp"
#include "qcstat/qc.hpp"
#include "qcstat/rng.hpp"

namespace {

using qcstat::DistributionSpec;
using qcstat::RandomStream;
using qcstat::SimulationConfig;
using qcstat::Threshold;

// Command-line misuse detected after CLI11 parsing (bad spec strings,
// conflicting flags). Mapped to exit code 2 like CLI11's own errors.
struct usage_error : std::runtime_error {
  explicit usage_error(const std::string& what) : std::runtime_error(what) {}
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp(path + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    }
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("short write to " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ec2;
    fs::remove(tmp, ec2);
    throw std::runtime_error("cannot move output into place at " + path +
                             ": " + ec.message());
  }
}

double parse_double_token(const std::string& text, const std::string& where) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + text.size() || text.empty()) {
    throw usage_error("--dist: bad number '" + text + "' for " + where);
  }
  return v;
}

// Grammar: "<family> key=value ...". Families: normal (mu, sigma),
// lognormal (mu, sigma), exp (mu), rayleigh (b), gpd (k, s, theta),
// gamma (alpha, theta).
DistributionSpec parse_dist(const std::string& text) {
  std::istringstream in(text);
  std::string family;
  if (!(in >> family)) throw usage_error("--dist: empty distribution spec");
  std::map<std::string, double> kv;
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw usage_error("--dist: expected key=value, got '" + token + "'");
    }
    const std::string key = token.substr(0, eq);
    if (kv.count(key)) throw usage_error("--dist: duplicate key '" + key + "'");
    kv[key] = parse_double_token(token.substr(eq + 1), key);
  }
  const auto take = [&](std::initializer_list<const char*> keys) {
    std::vector<double> out;
    for (const char* key : keys) {
      const auto it = kv.find(key);
      if (it == kv.end()) {
        throw usage_error("--dist: " + family + " requires " + key + "=<value>");
      }
      out.push_back(it->second);
      kv.erase(it);
    }
    if (!kv.empty()) {
      throw usage_error("--dist: unknown key '" + kv.begin()->first + "' for " +
                        family);
    }
    return out;
  };
  if (family == "normal") {
    const auto v = take({"mu", "sigma"});
    return qcstat::normal_spec(v[0], v[1]);
  }
  if (family == "lognormal") {
    const auto v = take({"mu", "sigma"});
    return qcstat::lognormal_spec(v[0], v[1]);
  }
  if (family == "exp" || family == "exponential") {
    const auto v = take({"mu"});
    return qcstat::exponential_spec(v[0]);
  }
  if (family == "rayleigh") {
    const auto v = take({"b"});
    return qcstat::rayleigh_spec(v[0]);
  }
  if (family == "gpd") {
    const auto v = take({"k", "s", "theta"});
    return qcstat::gpd_spec(v[0], v[1], v[2]);
  }
  if (family == "gamma") {
    const auto v = take({"alpha", "theta"});
    return qcstat::gamma_spec(v[0], v[1]);
  }
  throw usage_error("--dist: unknown family '" + family + "'");
}

Threshold parse_threshold(const std::string& text) {
  if (text == "empirical") return Threshold::empirical;
  if (text == "population") return Threshold::population;
  throw usage_error("--threshold: expected 'empirical' or 'population'");
}

void check_probability_flag(double p) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw usage_error("--p: must be in (0, 1]");
  }
}

struct SimulateOpts {
  std::string dist;
  std::string out;
  std::string density_out;
  std::string threshold = "empirical";
  std::int64_t n = 0;
  std::int64_t reps = 0;
  double p = 0.0;
  std::uint64_t seed = 0;
  int workers = 1;
};

void run_simulate(const SimulateOpts& opts) {
  const DistributionSpec spec = parse_dist(opts.dist);
  check_probability_flag(opts.p);
  const Threshold threshold = parse_threshold(opts.threshold);
  const SimulationConfig config{spec, opts.n, opts.reps, opts.p, opts.seed};
  const qcstat::ReplicationResult result =
      qcstat::run_replications(config, opts.workers, threshold);

  std::string csv = "rep,lambda\n";
  for (std::size_t r = 0; r < result.lambdas.size(); ++r) {
    csv += std::to_string(r);
    csv += ',';
    csv += fmt(result.lambdas[r]);
    csv += '\n';
  }

  std::vector<double> finite;
  finite.reserve(result.lambdas.size());
  double total = 0.0;
  for (const double v : result.lambdas) {
    if (std::isfinite(v)) {
      finite.push_back(v);
      total += v;
    }
  }

  std::string density_csv;
  if (!opts.density_out.empty()) {
    const qcstat::EmpiricalDensity density = qcstat::kde(finite, 512);
    const qcstat::AsymptoticParams params =
        qcstat::asymptotic_params(spec, opts.p, opts.n);
    const qcstat::Moments mom = qcstat::moments(spec);
    density_csv = "t,analytic_hinkley,analytic_lognormal,kde\n";
    for (std::size_t i = 0; i < density.grid.size(); ++i) {
      const double t = density.grid[i];
      density_csv += fmt(t);
      density_csv += ',';
      density_csv += fmt(qcstat::hinkley_pdf(params, mom.mu, mom.sigma2, t));
      density_csv += ',';
      density_csv += fmt(qcstat::lognormal_pdf(params, mom.mu, mom.sigma2, t));
      density_csv += ',';
      density_csv += fmt(density.values[i]);
      density_csv += '\n';
    }
  }

  write_file_atomic(opts.out, csv);
  if (!opts.density_out.empty()) {
    write_file_atomic(opts.density_out, density_csv);
  }
  const double mean =
      finite.empty() ? 0.0 : total / static_cast<double>(finite.size());
  std::cout << "simulate: " << result.lambdas.size()
            << " replications, mean lambda " << fmt_short(mean) << ", excluded "
            << result.excluded << " -> " << opts.out << "\n";
}

struct ExactCdfOpts {
  std::string dist;
  std::string method = "quadrature";
  std::string out;
  int n = 0;
  double p = 0.0;
  double lambda = 0.0;
  std::int64_t reps = 1000000;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

void run_exact_cdf(const ExactCdfOpts& opts) {
  const DistributionSpec spec = parse_dist(opts.dist);
  check_probability_flag(opts.p);
  std::string csv;
  std::string summary;
  if (opts.method == "quadrature") {
    const double value =
        qcstat::exact_cdf_quadrature(spec, opts.n, opts.p, opts.lambda);
    csv = "lambda,value\n" + fmt(opts.lambda) + "," + fmt(value) + "\n";
    summary = "exact-cdf: F(" + fmt_short(opts.lambda) + ") = " + fmt(value) +
              " (quadrature)";
  } else if (opts.method == "mc-direct" || opts.method == "mc-integral") {
    if (!opts.seed_given) {
      throw usage_error("--seed: required for Monte Carlo methods");
    }
    const auto estimator = opts.method == "mc-direct"
                               ? qcstat::ExactCdfEstimator::direct
                               : qcstat::ExactCdfEstimator::integral;
    RandomStream stream(opts.seed, 0);
    const auto [value, se] = qcstat::exact_cdf_mc(
        spec, opts.n, opts.p, opts.lambda, opts.reps, stream, estimator);
    csv = "lambda,value,std_error\n" + fmt(opts.lambda) + "," + fmt(value) +
          "," + fmt(se) + "\n";
    summary = "exact-cdf: F(" + fmt_short(opts.lambda) + ") = " + fmt(value) +
              " +/- " + fmt_short(se) + " (" + opts.method + ", " +
              std::to_string(opts.reps) + " reps)";
  } else {
    throw usage_error(
        "--method: expected 'quadrature', 'mc-direct' or 'mc-integral'");
  }
  if (!opts.out.empty()) write_file_atomic(opts.out, csv);
  std::cout << summary << "\n";
}

struct AsymptoticOpts {
  std::string dist;
  std::string model = "both";
  std::string out;
  std::int64_t n = 0;
  double p = 0.0;
  int grid = 1001;
};

void run_asymptotic(const AsymptoticOpts& opts) {
  const DistributionSpec spec = parse_dist(opts.dist);
  check_probability_flag(opts.p);
  if (opts.grid < 2) throw usage_error("--grid: must be at least 2");
  const bool want_hinkley = opts.model == "hinkley" || opts.model == "both";
  const bool want_lognormal = opts.model == "lognormal" || opts.model == "both";
  if (!want_hinkley && !want_lognormal) {
    throw usage_error("--model: expected 'hinkley', 'lognormal' or 'both'");
  }
  const qcstat::AsymptoticParams params =
      qcstat::asymptotic_params(spec, opts.p, opts.n);
  const qcstat::Moments mom = qcstat::moments(spec);
  const double limit = params.mu_n / mom.mu;
  const double width =
      std::sqrt(params.sigma2_n / static_cast<double>(opts.n)) /
      std::fabs(mom.mu);
  const double lo = limit - 10.0 * width;
  const double hi = limit + 10.0 * width;
  const double step = (hi - lo) / (opts.grid - 1);

  std::string csv = "t";
  if (want_hinkley && want_lognormal) {
    csv += ",analytic_hinkley,analytic_lognormal";
  } else {
    csv += ",value";
  }
  csv += '\n';
  double peak_h = 0.0, at_h = lo, peak_l = 0.0, at_l = lo;
  for (int i = 0; i < opts.grid; ++i) {
    const double t = lo + i * step;
    csv += fmt(t);
    if (want_hinkley) {
      const double v = qcstat::hinkley_pdf(params, mom.mu, mom.sigma2, t);
      if (v > peak_h) {
        peak_h = v;
        at_h = t;
      }
      csv += ',';
      csv += fmt(v);
    }
    if (want_lognormal) {
      const double v = qcstat::lognormal_pdf(params, mom.mu, mom.sigma2, t);
      if (v > peak_l) {
        peak_l = v;
        at_l = t;
      }
      csv += ',';
      csv += fmt(v);
    }
    csv += '\n';
  }
  write_file_atomic(opts.out, csv);
  std::cout << "asymptotic: wrote " << opts.grid << " rows to " << opts.out;
  if (want_hinkley) std::cout << ", hinkley peak at t=" << fmt_short(at_h);
  if (want_lognormal) std::cout << ", lognormal peak at t=" << fmt_short(at_l);
  std::cout << "\n";
}

struct OrderStatOpts {
  std::string dist;
  std::string out;
  int n = 0;
  int i = 0;
  int grid = 201;
  double xmin = 0.0;
  double xmax = 0.0;
  bool range_given = false;
};

void run_order_stat(const OrderStatOpts& opts) {
  const DistributionSpec spec = parse_dist(opts.dist);
  if (opts.grid < 2) throw usage_error("--grid: must be at least 2");
  double lo = opts.xmin;
  double hi = opts.xmax;
  if (!opts.range_given) {
    lo = qcstat::eval_quantile(spec, 0.001);
    hi = qcstat::eval_quantile(spec, 0.999);
  }
  if (!(lo < hi)) throw usage_error("--xmin must be below --xmax");
  const double step = (hi - lo) / (opts.grid - 1);
  std::string csv = "x,cdf,pdf\n";
  for (int g = 0; g < opts.grid; ++g) {
    const double x = lo + g * step;
    csv += fmt(x);
    csv += ',';
    csv += fmt(qcstat::marginal_cdf(spec, opts.i, opts.n, x));
    csv += ',';
    csv += fmt(qcstat::marginal_pdf(spec, opts.i, opts.n, x));
    csv += '\n';
  }
  write_file_atomic(opts.out, csv);
  std::cout << "order-stat: rank " << opts.i << " of " << opts.n << ", wrote "
            << opts.grid << " rows to " << opts.out << "\n";
}

struct CalibrateOpts {
  std::string preset;
  std::string dist;
  std::string out;
  std::string threshold = "empirical";
  std::int64_t n = 1000;
  std::int64_t reps = 100000;
  double p = 0.8;
  std::uint64_t seed = 42;
  int workers = 1;
  bool json = false;
};

void run_calibrate(const CalibrateOpts& opts) {
  check_probability_flag(opts.p);
  const Threshold threshold = parse_threshold(opts.threshold);
  std::vector<DistributionSpec> specs;
  if (!opts.preset.empty() && !opts.dist.empty()) {
    throw usage_error("--preset and --dist are mutually exclusive");
  }
  if (!opts.preset.empty()) {
    if (opts.preset != "paper-table1") {
      throw usage_error("--preset: unknown preset '" + opts.preset + "'");
    }
    specs = {qcstat::normal_spec(1.0, 0.25), qcstat::lognormal_spec(1.0, 0.25),
             qcstat::exponential_spec(1.0),  qcstat::rayleigh_spec(0.25),
             qcstat::gpd_spec(0.25, 0.25, 1.0), qcstat::gamma_spec(3.0, 1.0)};
  } else if (!opts.dist.empty()) {
    specs = {parse_dist(opts.dist)};
  } else {
    throw usage_error("calibrate requires --preset or --dist");
  }
  std::vector<SimulationConfig> configs;
  configs.reserve(specs.size());
  for (const DistributionSpec& spec : specs) {
    configs.push_back({spec, opts.n, opts.reps, opts.p, opts.seed});
  }
  const qcstat::CalibrationReport report =
      qcstat::calibrate(configs, opts.workers, threshold);

  std::string content;
  if (opts.json) {
    nlohmann::ordered_json doc;
    doc["settings"] = {{"bandwidth_rule", report.bandwidth_rule},
                       {"bandwidth_factor", report.bandwidth_factor},
                       {"grid_size", report.grid_size},
                       {"workers", report.workers},
                       {"threshold", opts.threshold}};
    doc["rows"] = nlohmann::ordered_json::array();
    for (const qcstat::CalibrationRow& row : report.rows) {
      nlohmann::ordered_json j;
      j["family"] = row.family;
      if (row.error.empty()) {
        j["area"] = row.area;
      } else {
        j["area"] = nullptr;
        j["error"] = row.error;
      }
      j["n"] = row.n;
      j["reps"] = row.reps;
      j["p"] = row.p;
      j["seed"] = row.seed;
      j["runtime_s"] = row.runtime_s;
      j["excluded"] = row.excluded;
      doc["rows"].push_back(std::move(j));
    }
    content = doc.dump(2);
    content += '\n';
  } else {
    content = "family,area,n,reps,p,seed,runtime_s,excluded\n";
    for (const qcstat::CalibrationRow& row : report.rows) {
      content += row.family;
      content += ',';
      if (row.error.empty()) content += fmt(row.area);
      content += ',';
      content += std::to_string(row.n);
      content += ',';
      content += std::to_string(row.reps);
      content += ',';
      content += fmt_short(row.p);
      content += ',';
      content += std::to_string(row.seed);
      content += ',';
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", row.runtime_s);
      content += buf;
      content += ',';
      if (row.error.empty()) content += std::to_string(row.excluded);
      content += '\n';
    }
  }
  write_file_atomic(opts.out, content);
  std::cout << "calibrate:";
  for (const qcstat::CalibrationRow& row : report.rows) {
    std::cout << ' ' << row.family << '=';
    if (row.error.empty()) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.4f", row.area);
      std::cout << buf;
    } else {
      std::cout << "error";
    }
  }
  std::cout << " -> " << opts.out << "\n";
}

struct ConvergeOpts {
  std::string dist;
  std::string checkpoints;
  std::string out;
  double p = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

void run_converge(const ConvergeOpts& opts) {
  const DistributionSpec spec = parse_dist(opts.dist);
  check_probability_flag(opts.p);
  std::vector<std::int64_t> checkpoints;
  std::istringstream in(opts.checkpoints);
  std::string token;
  while (std::getline(in, token, ',')) {
    if (token.empty()) continue;
    const char* begin = token.c_str();
    char* end = nullptr;
    const long long v = std::strtoll(begin, &end, 10);
    if (end != begin + token.size() || v <= 0) {
      throw usage_error("--checkpoints: bad entry '" + token + "'");
    }
    checkpoints.push_back(v);
  }
  if (checkpoints.empty()) {
    throw usage_error("--checkpoints: expected a comma-separated list");
  }
  RandomStream stream(opts.seed, opts.stream_id);
  const auto trace = qcstat::convergence_trace(spec, opts.p, checkpoints, stream);
  std::string csv = "n,lambda\n";
  for (const auto& [n, lambda] : trace) {
    csv += std::to_string(n);
    csv += ',';
    csv += fmt(lambda);
    csv += '\n';
  }
  write_file_atomic(opts.out, csv);
  std::cout << "converge: lambda(" << trace.back().first << ") = "
            << fmt_short(trace.back().second) << " -> " << opts.out << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantile-contribution statistic toolkit"};
  app.require_subcommand(1);
  app.failure_message([](const CLI::App*, const CLI::Error& e) {
    return std::string("error: ") + e.what() + "\n";
  });

  SimulateOpts sim;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Replicate Lambda_n(p), write rep,lambda CSV");
  simulate->add_option("--dist", sim.dist, "Distribution, e.g. 'exp mu=1'")
      ->required();
  simulate->add_option("--n", sim.n, "Sample size per replication")
      ->required()
      ->check(CLI::PositiveNumber);
  simulate->add_option("--reps", sim.reps, "Replication count")
      ->required()
      ->check(CLI::PositiveNumber);
  simulate->add_option("--p", sim.p, "Tail probability in (0, 1]")->required();
  simulate->add_option("--seed", sim.seed, "RNG seed")->required();
  simulate->add_option("--out", sim.out, "Output CSV path")->required();
  simulate->add_option("--density-out", sim.density_out,
                       "Also write a density CSV (KDE plus analytic models)");
  simulate->add_option("--threshold", sim.threshold,
                       "Tail threshold: empirical or population");
  simulate->add_option("--workers", sim.workers, "Worker threads")
      ->check(CLI::PositiveNumber);
  simulate->callback([&] { run_simulate(sim); });

  ExactCdfOpts ecdf;
  CLI::App* exact_cdf =
      app.add_subcommand("exact-cdf", "CDF of Lambda_n(p) at a point");
  exact_cdf->add_option("--dist", ecdf.dist, "Distribution, e.g. 'exp mu=1'")
      ->required();
  exact_cdf->add_option("--n", ecdf.n, "Sample size")
      ->required()
      ->check(CLI::PositiveNumber);
  exact_cdf->add_option("--p", ecdf.p, "Tail probability in (0, 1]")->required();
  exact_cdf->add_option("--lambda", ecdf.lambda, "Evaluation point")->required();
  exact_cdf->add_option("--method", ecdf.method,
                        "quadrature, mc-direct or mc-integral");
  exact_cdf->add_option("--reps", ecdf.reps, "Monte Carlo replications")
      ->check(CLI::PositiveNumber);
  CLI::Option* ecdf_seed =
      exact_cdf->add_option("--seed", ecdf.seed, "RNG seed (Monte Carlo only)");
  exact_cdf->add_option("--out", ecdf.out, "Optional output CSV path");
  exact_cdf->callback([&] {
    ecdf.seed_given = ecdf_seed->count() > 0;
    run_exact_cdf(ecdf);
  });

  AsymptoticOpts asym;
  CLI::App* asymptotic =
      app.add_subcommand("asymptotic", "Tabulate the asymptotic densities");
  asymptotic->add_option("--dist", asym.dist, "Distribution, e.g. 'exp mu=1'")
      ->required();
  asymptotic->add_option("--n", asym.n, "Sample size")
      ->required()
      ->check(CLI::PositiveNumber);
  asymptotic->add_option("--p", asym.p, "Tail probability in (0, 1]")
      ->required();
  asymptotic->add_option("--model", asym.model,
                         "hinkley, lognormal or both");
  asymptotic->add_option("--grid", asym.grid, "Grid points");
  asymptotic->add_option("--out", asym.out, "Output CSV path")->required();
  asymptotic->callback([&] { run_asymptotic(asym); });

  OrderStatOpts ost;
  CLI::App* order_stat =
      app.add_subcommand("order-stat", "Marginal order-statistic CDF/PDF table");
  order_stat->add_option("--dist", ost.dist, "Distribution, e.g. 'exp mu=1'")
      ->required();
  order_stat->add_option("--n", ost.n, "Sample size")
      ->required()
      ->check(CLI::PositiveNumber);
  order_stat->add_option("--i", ost.i, "Rank (1 = minimum, n = maximum)")
      ->required();
  order_stat->add_option("--grid", ost.grid, "Grid points");
  CLI::Option* xmin_opt = order_stat->add_option("--xmin", ost.xmin, "Grid start");
  CLI::Option* xmax_opt = order_stat->add_option("--xmax", ost.xmax, "Grid end");
  order_stat->add_option("--out", ost.out, "Output CSV path")->required();
  order_stat->callback([&] {
    if ((xmin_opt->count() > 0) != (xmax_opt->count() > 0)) {
      throw usage_error("--xmin and --xmax must be given together");
    }
    ost.range_given = xmin_opt->count() > 0;
    run_order_stat(ost);
  });

  CalibrateOpts cal;
  CLI::App* calibrate = app.add_subcommand(
      "calibrate", "Replication/KDE/analytic-overlay area report");
  calibrate->add_option("--preset", cal.preset,
                        "Built-in configuration (paper-table1)");
  calibrate->add_option("--dist", cal.dist, "Single custom distribution");
  calibrate->add_option("--n", cal.n, "Sample size per replication")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  calibrate->add_option("--reps", cal.reps, "Replication count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  calibrate->add_option("--p", cal.p, "Tail probability in (0, 1]")
      ->capture_default_str();
  calibrate->add_option("--seed", cal.seed, "RNG seed")->capture_default_str();
  calibrate->add_option("--threshold", cal.threshold,
                        "Tail threshold: empirical or population");
  calibrate->add_option("--workers", cal.workers, "Worker threads")
      ->check(CLI::PositiveNumber);
  calibrate->add_flag("--json", cal.json, "Write JSON instead of CSV");
  calibrate->add_option("--out", cal.out, "Output path")->required();
  calibrate->callback([&] { run_calibrate(cal); });

  ConvergeOpts con;
  CLI::App* converge =
      app.add_subcommand("converge", "Lambda_hat along one growing sample");
  converge->add_option("--dist", con.dist, "Distribution, e.g. 'exp mu=1'")
      ->required();
  converge->add_option("--p", con.p, "Tail probability in (0, 1]")->required();
  converge->add_option("--checkpoints", con.checkpoints,
                       "Comma-separated sample sizes, e.g. 10,100,1000")
      ->required();
  converge->add_option("--seed", con.seed, "RNG seed")->required();
  converge->add_option("--stream", con.stream_id, "Stream id (default 0)");
  converge->add_option("--out", con.out, "Output CSV path")->required();
  converge->callback([&] { run_converge(con); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const qcstat::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const qcstat::capacity_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const qcstat::degenerate_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
