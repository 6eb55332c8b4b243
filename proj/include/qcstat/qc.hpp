#ifndef QCSTAT_QC_HPP
#define QCSTAT_QC_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "qcstat/dists.hpp"
#include "qcstat/rng.hpp"

namespace qcstat {

// Parameters of the asymptotic law of the quantile-contribution statistic
// Lambda_n(p): numerator mean mu_n, numerator variance sigma2_n, the
// numerator/denominator covariance scale c_n, and their correlation rho_n.
struct AsymptoticParams {
  double p = 0.0;
  std::int64_t n = 0;
  double mu_n = 0.0;
  double sigma2_n = 0.0;
  double c_n = 0.0;
  double rho_n = 0.0;
};

enum class ExactCdfEstimator { direct, integral };

// Tail cutoff rank m = ceil(n*p), guarded against floating-point products
// like 1000*0.8 landing one ulp above the integer. Result is in [1, n].
std::int64_t ceil_np(std::int64_t n, double p);

// Lambda_n(p) = sum of the top n-m+1 order statistics over the total sum,
// m = ceil(n*p). No clamping: mixed-sign samples can leave [-1, 1].
// Throws domain_error on an empty sample or p outside (0, 1],
// degenerate_error when the sample sums to zero.
double lambda_hat(const std::vector<double>& sample, double p);

// Same statistic for input already sorted ascending (not re-checked).
double lambda_hat_sorted(const std::vector<double>& sorted_sample, double p);

// X_(ceil(n*p)) of the ascending-sorted sample.
double empirical_quantile(const std::vector<double>& sample, double p);

// Almost-sure limit of Lambda_n(p): tail mean a over the mean mu.
// Throws degenerate_error when mu == 0.
double as_limit(const DistributionSpec& spec, double p);

// Exact CDF of Lambda_n(p) at lambda by nested quadrature of the
// (n-1)-dimensional order-statistic integral. Supports 2 <= n <= 6
// (capacity error above), 0 < p <= 1 with ceil(n*p) >= 2, 0 < |lambda| < 1,
// and lambda * mean != 0. Absolute tolerance 1e-5.
double exact_cdf_quadrature(const DistributionSpec& spec, int n, double p,
                            double lambda);

// Monte Carlo estimate of the same CDF, with standard error. The direct
// estimator simulates Lambda_n and counts {Lambda_n <= lambda}; the integral
// estimator averages the integrand over sorted uniforms (factor n). Each
// replication r uses RandomStream(stream.seed(), stream.stream_id() + 1 + r),
// so the result is independent of any batch partitioning.
std::pair<double, double> exact_cdf_mc(const DistributionSpec& spec, int n,
                                       double p, double lambda,
                                       std::int64_t reps, RandomStream& stream,
                                       ExactCdfEstimator estimator);

// Asymptotic parameters from the tail moments at p. Throws degenerate_error
// when the mean is zero or the tail variance vanishes.
AsymptoticParams asymptotic_params(const DistributionSpec& spec, double p,
                                   std::int64_t n);

// Asymptotic density of Lambda_n(p) as a ratio of correlated Gaussians
// (Geary-Hinkley form), evaluated at t. mu and sigma2 are the sample mean
// and variance of the underlying distribution.
double hinkley_pdf(const AsymptoticParams& params, double mu, double sigma2,
                   double t);

// Lognormal asymptotic model: (mu_n/mu) * LogNormal(0, s^2/n) with
// s^2 = sigma2/mu^2 + sigma2_n/mu_n^2 - 2 c_n/(mu_n mu). Requires
// mu_n/mu > 0; density is 0 for t <= 0.
double lognormal_pdf(const AsymptoticParams& params, double mu, double sigma2,
                     double t);

}  // namespace qcstat

#endif  // QCSTAT_QC_HPP
