// The six sample-distribution families behind one abstraction: CDF, density,
// quantile, sampling, ordinary moments, and the tail functionals that feed
// the asymptotic formulas.

#ifndef QCSTAT_DISTS_HPP
#define QCSTAT_DISTS_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qcstat/rng.hpp"

namespace qcstat {

enum class Family { normal, lognormal, exponential, rayleigh, gpd, gamma };

// Validated family + parameters. Parameter slots by family:
//   normal:      p1 = mean,      p2 = std
//   lognormal:   p1 = log-mean,  p2 = log-std
//   exponential: p1 = mean
//   rayleigh:    p1 = scale b
//   gpd:         p1 = shape k,   p2 = scale s,  p3 = location theta
//   gamma:       p1 = shape a,   p2 = scale theta
// Use the factory functions; they validate.
struct DistributionSpec {
  Family family = Family::exponential;
  double p1 = 1.0, p2 = 0.0, p3 = 0.0;
};

DistributionSpec normal_spec(double mean, double stddev);
DistributionSpec lognormal_spec(double log_mean, double log_stddev);
DistributionSpec exponential_spec(double mean);
DistributionSpec rayleigh_spec(double scale);
DistributionSpec gpd_spec(double shape, double scale, double location);
DistributionSpec gamma_spec(double shape, double scale);

// Report/CSV label, e.g. "GeneralizedPareto".
std::string family_name(Family family);

// All tail-functional scalars at the population p-quantile q_p:
// a  = E[X 1{X>=q_p}]        a2 = E[X^2 1{X>=q_p}]      b2 = a2 - a^2
// a_tilde = mu - a           a_plus/a_minus: means of X+ 1{X>=q_p}, X- 1{X>=q_p}
// b2_plus/b2_minus: their variances.
struct TailMoments {
  double p = 0.0;
  double q_p = 0.0;
  double mu = 0.0;
  double sigma2 = 0.0;
  double a = 0.0;
  double a_tilde = 0.0;
  double a2 = 0.0;
  double b2 = 0.0;
  double a_plus = 0.0;
  double a_minus = 0.0;
  double b2_plus = 0.0;
  double b2_minus = 0.0;
};

double eval_cdf(const DistributionSpec& spec, double x);
double eval_pdf(const DistributionSpec& spec, double x);

// Inverse CDF for u in (0,1); round-trips through eval_cdf within 1e-10.
double eval_quantile(const DistributionSpec& spec, double u);

// Exact closed-form mean and variance.
struct Moments {
  double mu = 0.0;
  double sigma2 = 0.0;
};
Moments moments(const DistributionSpec& spec);

// Tail functionals at the p-quantile, 0 < p < 1. Closed forms where the
// family admits them; graded Gauss-Legendre panels in the survival variable
// otherwise (relative accuracy better than 1e-10).
TailMoments tail_moments(const DistributionSpec& spec, double p);

// i.i.d. draws; deterministic given the stream. Inverse transform for
// exponential/Rayleigh/GPD, Box-Muller for normal/lognormal, Marsaglia-Tsang
// for gamma.
void sample_into(const DistributionSpec& spec, std::span<double> out,
                 RandomStream& stream);
std::vector<double> sample(const DistributionSpec& spec, std::size_t count,
                           RandomStream& stream);

}  // namespace qcstat

#endif  // QCSTAT_DISTS_HPP
