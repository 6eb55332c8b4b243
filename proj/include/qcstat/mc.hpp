#ifndef QCSTAT_MC_HPP
#define QCSTAT_MC_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qcstat/dists.hpp"
#include "qcstat/rng.hpp"

namespace qcstat {

struct SimulationConfig {
  DistributionSpec spec;
  std::int64_t n = 0;
  std::int64_t reps = 0;
  double p = 0.0;
  std::uint64_t seed = 0;
};

// Which threshold defines the tail sum in a replication: the sample's own
// ceil(n*p)-th order statistic, or the population quantile of the spec.
enum class Threshold { empirical, population };

struct ReplicationResult {
  std::vector<double> lambdas;  // one per replication, NaN when excluded
  std::int64_t excluded = 0;    // replications whose sample summed to zero
};

struct NumeratorDiagnostics {
  double mean_u = 0.0;
  double var_u = 0.0;
  double cov_uz = 0.0;
};

struct EmpiricalDensity {
  std::vector<double> grid;
  std::vector<double> values;
};

struct Histogram {
  std::vector<double> edges;    // nbins + 1 ascending edges
  std::vector<double> density;  // nbins normalized heights
};

struct CalibrationRow {
  std::string family;
  double area = 0.0;
  std::int64_t n = 0;
  std::int64_t reps = 0;
  double p = 0.0;
  std::uint64_t seed = 0;
  double runtime_s = 0.0;
  std::int64_t excluded = 0;
  std::string error;  // empty on success; area is NaN when set
};

struct CalibrationReport {
  std::vector<CalibrationRow> rows;
  // Density-estimator settings, recorded so reported areas are reproducible.
  std::string bandwidth_rule = "silverman";
  double bandwidth_factor = 0.9;
  int grid_size = 512;
  int workers = 1;
};

// Runs config.reps replications of Lambda_n(p); replication r draws its
// sample from RandomStream(config.seed, r), so output is bit-identical for
// any worker count. Zero-sum samples are recorded as NaN and counted.
ReplicationResult run_replications(const SimulationConfig& config,
                                   int workers = 1,
                                   Threshold threshold = Threshold::empirical);

// Per replication computes U = (1/n) sum X_i 1{X_i >= T} and the sample
// mean Z, with T the replication's empirical p-quantile (or the population
// quantile). Returns the mean and variance of U and the (U, Z) covariance
// across replications; aggregation is compensated and partition-invariant.
NumeratorDiagnostics numerator_diagnostics(
    const SimulationConfig& config, int workers = 1,
    Threshold threshold = Threshold::empirical);

// Gaussian-kernel density with Silverman bandwidth on an equispaced grid
// spanning [min - 3h, max + 3h]. Requires at least two distinct values.
EmpiricalDensity kde(const std::vector<double>& values, int grid_size = 512);

// Freedman-Diaconis histogram normalized to unit area.
Histogram histogram_fd(const std::vector<double>& values);

// Trapezoid integral of |d1 - d2| over the union grid, each density linearly
// interpolated on its own grid and 0 outside it.
double area_between(const EmpiricalDensity& d1, const EmpiricalDensity& d2);

// For each config: replications, KDE, lognormal overlay on the same grid,
// area between the two. A failing config yields a row carrying the error
// message; remaining rows are still produced.
CalibrationReport calibrate(const std::vector<SimulationConfig>& configs,
                            int workers = 1,
                            Threshold threshold = Threshold::empirical);

// Lambda_hat of the first n draws of one growing sample at each checkpoint.
std::vector<std::pair<std::int64_t, double>> convergence_trace(
    const DistributionSpec& spec, double p,
    const std::vector<std::int64_t>& checkpoints, RandomStream& stream);

}  // namespace qcstat

#endif  // QCSTAT_MC_HPP
