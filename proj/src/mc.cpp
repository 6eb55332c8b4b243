#include "qcstat/mc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "qcstat/errors.hpp"
#include "qcstat/qc.hpp"

namespace qcstat {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;

double neumaier_total(double& comp, double sum, double term) {
  const double t = sum + term;
  if (std::fabs(sum) >= std::fabs(term)) {
    comp += (sum - t) + term;
  } else {
    comp += (term - t) + sum;
  }
  return t;
}

// Compensated sum of f(r) for r in [0, count), evaluated in index order so
// the total does not depend on how replications were partitioned earlier.
template <typename Fn>
double compensated_sum(std::int64_t count, Fn&& f) {
  double sum = 0.0;
  double comp = 0.0;
  for (std::int64_t r = 0; r < count; ++r) {
    sum = neumaier_total(comp, sum, f(r));
  }
  return sum + comp;
}

void validate_config(const SimulationConfig& config) {
  if (config.n < 2) throw domain_error("simulation: n must be at least 2");
  if (config.reps < 1) throw domain_error("simulation: reps must be positive");
  if (!(config.p > 0.0) || !(config.p <= 1.0)) {
    throw domain_error("simulation: p must be in (0, 1]");
  }
}

void validate_workers(int workers) {
  if (workers < 1) throw domain_error("simulation: workers must be positive");
}

// Runs chunk(worker, begin, end) over a static partition of [0, reps).
// Chunks touch disjoint output slots, so no synchronization is needed.
template <typename Fn>
void parallel_chunks(std::int64_t reps, int workers, Fn&& chunk) {
  if (workers <= 1) {
    chunk(0, std::int64_t{0}, reps);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    const std::int64_t begin = reps * w / workers;
    const std::int64_t end = reps * (w + 1) / workers;
    threads.emplace_back([&, w, begin, end] {
      try {
        chunk(w, begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Quantile with linear interpolation between order statistics (the common
// "type 7" convention), for bandwidth and bin-width rules.
double quantile_type7(const std::vector<double>& sorted, double prob) {
  const std::size_t n = sorted.size();
  const double h = (static_cast<double>(n) - 1.0) * prob;
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::vector<double> sorted_finite_checked(const std::vector<double>& values,
                                          const char* who) {
  if (values.size() < 2) {
    throw domain_error(std::string(who) + ": need at least two values");
  }
  for (const double v : values) {
    if (!std::isfinite(v)) {
      throw domain_error(std::string(who) + ": non-finite value");
    }
  }
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

double interp_or_zero(const EmpiricalDensity& d, double x) {
  if (x < d.grid.front() || x > d.grid.back()) return 0.0;
  const auto it = std::upper_bound(d.grid.begin(), d.grid.end(), x);
  if (it == d.grid.begin()) return d.values.front();
  if (it == d.grid.end()) return d.values.back();
  const std::size_t hi = static_cast<std::size_t>(it - d.grid.begin());
  const std::size_t lo = hi - 1;
  const double span = d.grid[hi] - d.grid[lo];
  const double frac = (x - d.grid[lo]) / span;
  return d.values[lo] + frac * (d.values[hi] - d.values[lo]);
}

void validate_density(const EmpiricalDensity& d, const char* who) {
  if (d.grid.size() < 2 || d.grid.size() != d.values.size()) {
    throw domain_error(std::string(who) + ": malformed density");
  }
  for (std::size_t i = 1; i < d.grid.size(); ++i) {
    if (!(d.grid[i] > d.grid[i - 1])) {
      throw domain_error(std::string(who) + ": grid must be strictly increasing");
    }
  }
}

}  // namespace

ReplicationResult run_replications(const SimulationConfig& config, int workers,
                                   Threshold threshold) {
  validate_config(config);
  validate_workers(workers);
  const double pop_threshold = threshold == Threshold::population
                                   ? eval_quantile(config.spec, config.p)
                                   : 0.0;
  ReplicationResult result;
  result.lambdas.assign(config.reps, 0.0);
  std::vector<std::int64_t> excluded(workers, 0);
  parallel_chunks(config.reps, workers, [&](int w, std::int64_t begin,
                                            std::int64_t end) {
    std::vector<double> buffer(config.n);
    for (std::int64_t r = begin; r < end; ++r) {
      RandomStream stream(config.seed, static_cast<std::uint64_t>(r));
      sample_into(config.spec, buffer, stream);
      std::sort(buffer.begin(), buffer.end());
      double lambda;
      if (threshold == Threshold::empirical) {
        try {
          lambda = lambda_hat_sorted(buffer, config.p);
        } catch (const degenerate_error&) {
          ++excluded[w];
          result.lambdas[r] = std::numeric_limits<double>::quiet_NaN();
          continue;
        }
      } else {
        double total = 0.0;
        for (const double x : buffer) total += x;
        if (total == 0.0) {
          ++excluded[w];
          result.lambdas[r] = std::numeric_limits<double>::quiet_NaN();
          continue;
        }
        const auto it =
            std::lower_bound(buffer.begin(), buffer.end(), pop_threshold);
        double tail = 0.0;
        for (auto j = it; j != buffer.end(); ++j) tail += *j;
        lambda = tail / total;
      }
      result.lambdas[r] = lambda;
    }
  });
  for (const std::int64_t e : excluded) result.excluded += e;
  return result;
}

NumeratorDiagnostics numerator_diagnostics(const SimulationConfig& config,
                                           int workers, Threshold threshold) {
  validate_config(config);
  validate_workers(workers);
  const std::int64_t n = config.n;
  const std::int64_t reps = config.reps;
  const std::int64_t m = ceil_np(n, config.p);
  const double pop_threshold = threshold == Threshold::population
                                   ? eval_quantile(config.spec, config.p)
                                   : 0.0;
  std::vector<double> u(reps);
  std::vector<double> z(reps);
  parallel_chunks(reps, workers, [&](int, std::int64_t begin,
                                     std::int64_t end) {
    std::vector<double> buffer(n);
    for (std::int64_t r = begin; r < end; ++r) {
      RandomStream stream(config.seed, static_cast<std::uint64_t>(r));
      sample_into(config.spec, buffer, stream);
      std::sort(buffer.begin(), buffer.end());
      const double t =
          threshold == Threshold::empirical ? buffer[m - 1] : pop_threshold;
      const auto it = std::lower_bound(buffer.begin(), buffer.end(), t);
      double tail = 0.0;
      for (auto j = it; j != buffer.end(); ++j) tail += *j;
      double total = 0.0;
      for (const double x : buffer) total += x;
      u[r] = tail / static_cast<double>(n);
      z[r] = total / static_cast<double>(n);
    }
  });
  NumeratorDiagnostics diag;
  const double dr = static_cast<double>(reps);
  diag.mean_u = compensated_sum(reps, [&](std::int64_t r) { return u[r]; }) / dr;
  if (reps < 2) return diag;
  const double mean_z =
      compensated_sum(reps, [&](std::int64_t r) { return z[r]; }) / dr;
  const double mu = diag.mean_u;
  diag.var_u = compensated_sum(reps, [&](std::int64_t r) {
                 const double d = u[r] - mu;
                 return d * d;
               }) /
               (dr - 1.0);
  diag.cov_uz = compensated_sum(reps, [&](std::int64_t r) {
                  return (u[r] - mu) * (z[r] - mean_z);
                }) /
                (dr - 1.0);
  return diag;
}

EmpiricalDensity kde(const std::vector<double>& values, int grid_size) {
  if (grid_size < 2) throw domain_error("kde: grid_size must be at least 2");
  const std::vector<double> sorted = sorted_finite_checked(values, "kde");
  const double lo = sorted.front();
  const double hi = sorted.back();
  if (lo == hi) throw degenerate_error("kde: all values identical");
  const std::size_t n = sorted.size();
  const double dn = static_cast<double>(n);
  double mean = 0.0;
  for (const double v : sorted) mean += v;
  mean /= dn;
  double ss = 0.0;
  for (const double v : sorted) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (dn - 1.0));
  const double iqr =
      quantile_type7(sorted, 0.75) - quantile_type7(sorted, 0.25);
  double spread = sd;
  if (iqr > 0.0) spread = std::min(sd, iqr / 1.34);
  const double h = 0.9 * spread * std::pow(dn, -0.2);
  if (!(h > 0.0)) throw degenerate_error("kde: degenerate bandwidth");

  EmpiricalDensity density;
  density.grid.resize(grid_size);
  density.values.resize(grid_size);
  const double a = lo - 3.0 * h;
  const double b = hi + 3.0 * h;
  const double step = (b - a) / (grid_size - 1);
  const double scale = kInvSqrt2Pi / (dn * h);
  for (int i = 0; i < grid_size; ++i) {
    const double g = a + i * step;
    density.grid[i] = g;
    // Kernel mass beyond 8 bandwidths is below 1e-14; skip those points.
    const auto first =
        std::lower_bound(sorted.begin(), sorted.end(), g - 8.0 * h);
    const auto last =
        std::upper_bound(sorted.begin(), sorted.end(), g + 8.0 * h);
    double acc = 0.0;
    for (auto it = first; it != last; ++it) {
      const double zscore = (g - *it) / h;
      acc += std::exp(-0.5 * zscore * zscore);
    }
    density.values[i] = scale * acc;
  }
  return density;
}

Histogram histogram_fd(const std::vector<double>& values) {
  const std::vector<double> sorted = sorted_finite_checked(values, "histogram");
  const double lo = sorted.front();
  const double hi = sorted.back();
  if (lo == hi) throw degenerate_error("histogram: all values identical");
  const double dn = static_cast<double>(sorted.size());
  const double iqr =
      quantile_type7(sorted, 0.75) - quantile_type7(sorted, 0.25);
  const double target_width = 2.0 * iqr * std::pow(dn, -1.0 / 3.0);
  if (!(target_width > 0.0)) {
    throw degenerate_error("histogram: zero interquartile range");
  }
  const std::int64_t nbins = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil((hi - lo) / target_width)));
  const double bin_width = (hi - lo) / static_cast<double>(nbins);
  Histogram hist;
  hist.edges.resize(nbins + 1);
  for (std::int64_t i = 0; i <= nbins; ++i) {
    hist.edges[i] = lo + bin_width * static_cast<double>(i);
  }
  hist.edges[nbins] = hi;
  std::vector<std::int64_t> counts(nbins, 0);
  for (const double v : sorted) {
    auto idx = static_cast<std::int64_t>((v - lo) / bin_width);
    idx = std::min(idx, nbins - 1);
    ++counts[idx];
  }
  hist.density.resize(nbins);
  for (std::int64_t i = 0; i < nbins; ++i) {
    hist.density[i] = static_cast<double>(counts[i]) / (dn * bin_width);
  }
  return hist;
}

double area_between(const EmpiricalDensity& d1, const EmpiricalDensity& d2) {
  validate_density(d1, "area_between");
  validate_density(d2, "area_between");
  std::vector<double> grid;
  grid.reserve(d1.grid.size() + d2.grid.size() + 4);
  grid.insert(grid.end(), d1.grid.begin(), d1.grid.end());
  grid.insert(grid.end(), d2.grid.begin(), d2.grid.end());
  // Pin each support edge so the interpolant drops to 0 immediately outside
  // a density's grid instead of ramping across a foreign segment.
  const double inf = std::numeric_limits<double>::infinity();
  for (const EmpiricalDensity* d : {&d1, &d2}) {
    grid.push_back(std::nextafter(d->grid.front(), -inf));
    grid.push_back(std::nextafter(d->grid.back(), inf));
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  double area = 0.0;
  double prev_x = grid.front();
  double prev_v = std::fabs(interp_or_zero(d1, prev_x) - interp_or_zero(d2, prev_x));
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double x = grid[i];
    const double v = std::fabs(interp_or_zero(d1, x) - interp_or_zero(d2, x));
    area += 0.5 * (v + prev_v) * (x - prev_x);
    prev_x = x;
    prev_v = v;
  }
  return area;
}

CalibrationReport calibrate(const std::vector<SimulationConfig>& configs,
                            int workers, Threshold threshold) {
  validate_workers(workers);
  CalibrationReport report;
  report.workers = workers;
  for (const SimulationConfig& config : configs) {
    CalibrationRow row;
    row.family = family_name(config.spec.family);
    row.n = config.n;
    row.reps = config.reps;
    row.p = config.p;
    row.seed = config.seed;
    const auto start = std::chrono::steady_clock::now();
    try {
      const ReplicationResult reps = run_replications(config, workers, threshold);
      row.excluded = reps.excluded;
      std::vector<double> lambdas;
      lambdas.reserve(reps.lambdas.size());
      for (const double v : reps.lambdas) {
        if (std::isfinite(v)) lambdas.push_back(v);
      }
      const EmpiricalDensity density = kde(lambdas, report.grid_size);
      const AsymptoticParams params =
          asymptotic_params(config.spec, config.p, config.n);
      const Moments mom = moments(config.spec);
      EmpiricalDensity model;
      model.grid = density.grid;
      model.values.resize(density.grid.size());
      for (std::size_t i = 0; i < density.grid.size(); ++i) {
        model.values[i] =
            lognormal_pdf(params, mom.mu, mom.sigma2, density.grid[i]);
      }
      row.area = area_between(density, model);
    } catch (const std::exception& e) {
      row.error = e.what();
      row.area = std::numeric_limits<double>::quiet_NaN();
    }
    row.runtime_s = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::vector<std::pair<std::int64_t, double>> convergence_trace(
    const DistributionSpec& spec, double p,
    const std::vector<std::int64_t>& checkpoints, RandomStream& stream) {
  if (checkpoints.empty()) {
    throw domain_error("convergence_trace: no checkpoints");
  }
  std::int64_t prev = 0;
  for (const std::int64_t c : checkpoints) {
    if (c <= prev) {
      throw domain_error(
          "convergence_trace: checkpoints must be strictly increasing and "
          "positive");
    }
    prev = c;
  }
  std::vector<double> draws;
  draws.reserve(checkpoints.back());
  std::vector<std::pair<std::int64_t, double>> trace;
  trace.reserve(checkpoints.size());
  for (const std::int64_t c : checkpoints) {
    const std::int64_t have = static_cast<std::int64_t>(draws.size());
    draws.resize(c);
    sample_into(spec, std::span<double>(draws.data() + have, c - have), stream);
    std::vector<double> prefix = draws;
    std::sort(prefix.begin(), prefix.end());
    trace.emplace_back(c, lambda_hat_sorted(prefix, p));
  }
  return trace;
}

}  // namespace qcstat
