#include "qcstat/qc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "qcstat/errors.hpp"
#include "qcstat/quadrature.hpp"
#include "qcstat/specfun.hpp"

namespace qcstat {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_probability(double p, const char* who) {
  if (!(p > 0.0) || !(p <= 1.0)) {
    throw domain_error(std::string(who) + ": p must be in (0, 1]");
  }
}

// The exact-CDF integrand over the ordered uniforms u_2 < ... < u_n. The
// inner variable u_2 contributes to the tail sum when m == 2 and to the
// middle sum otherwise; the remaining coordinates arrive pre-aggregated.
struct ExactIntegrand {
  const DistributionSpec& spec;
  double c1;  // (1 - lambda) / lambda
  int m;
  int n;

  double w_of(double u2, double sum_top, double sum_mid) const {
    const double q = eval_quantile(spec, u2);
    if (m == 2) return c1 * (q + sum_top) - sum_mid;
    return c1 * sum_top - (sum_mid + q);
  }

  double g(double u2, double sum_top, double sum_mid) const {
    return std::min(eval_cdf(spec, w_of(u2, sum_top, sum_mid)), u2);
  }

  // Sign of F(W(u2)) - u2; its zero is the kink of g along the u_2 axis.
  double h(double u2, double sum_top, double sum_mid) const {
    return eval_cdf(spec, w_of(u2, sum_top, sum_mid)) - u2;
  }
};

double bisect_kink(const ExactIntegrand& ig, double lo, double hi, double h_lo,
                   double sum_top, double sum_mid) {
  for (int iter = 0; iter < 80 && hi - lo > 1e-15 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double h_mid = ig.h(mid, sum_top, sum_mid);
    if ((h_lo <= 0.0) == (h_mid <= 0.0)) {
      lo = mid;
      h_lo = h_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Integral of g over u_2 in (0, hi). g is smooth except where F(W) crosses
// u_2, so the axis is split at every crossing found by a sign scan; the
// pieces go to adaptive quadrature, which also absorbs the infinite-slope
// behavior quantile transforms produce at the interval ends.
double inner_integral(const ExactIntegrand& ig, double hi, double sum_top,
                      double sum_mid) {
  constexpr int kScan = 33;
  double cuts[kScan + 2];
  int n_cuts = 0;
  cuts[n_cuts++] = 0.0;
  double prev_u = hi * 0.5 / kScan;
  double prev_h = ig.h(prev_u, sum_top, sum_mid);
  for (int j = 1; j < kScan; ++j) {
    const double u = hi * (j + 0.5) / kScan;
    const double h = ig.h(u, sum_top, sum_mid);
    if ((prev_h <= 0.0) != (h <= 0.0)) {
      cuts[n_cuts++] = bisect_kink(ig, prev_u, u, prev_h, sum_top, sum_mid);
    }
    prev_u = u;
    prev_h = h;
  }
  cuts[n_cuts++] = hi;
  // Segment endpoints can land on u = 0 or u = 1 where the quantile diverges;
  // g stays bounded there, so evaluate at the nearest interior double.
  const double u_lo = std::numeric_limits<double>::min();
  const double u_hi = std::nextafter(1.0, 0.0);
  double total = 0.0;
  for (int s = 0; s + 1 < n_cuts; ++s) {
    total += adaptive_simpson(
        [&](double u) {
          return ig.g(std::min(std::max(u, u_lo), u_hi), sum_top, sum_mid);
        },
        cuts[s], cuts[s + 1], 1e-11);
  }
  return total;
}

// Nested integration over u_j in (0, hi) for j = n down to 3, accumulating
// the quantile sums, then the kink-split inner integral over u_2.
double outer_level(const ExactIntegrand& ig, int j, double hi, double sum_top,
                   double sum_mid) {
  if (j == 2) return inner_integral(ig, hi, sum_top, sum_mid);
  const GLTable& table = gauss_legendre(32);
  const double half = 0.5 * hi;
  double acc = 0.0;
  for (std::size_t i = 0; i < table.node.size(); ++i) {
    const double u = half * (table.node[i] + 1.0);
    const double q = eval_quantile(ig.spec, u);
    const double top = sum_top + (j >= ig.m ? q : 0.0);
    const double mid = sum_mid + (j < ig.m ? q : 0.0);
    acc += half * table.weight[i] * outer_level(ig, j - 1, u, top, mid);
  }
  return acc;
}

}  // namespace

std::int64_t ceil_np(std::int64_t n, double p) {
  const double product = static_cast<double>(n) * p;
  const double nearest = std::round(product);
  double m;
  if (std::fabs(product - nearest) <= 1e-9 + std::fabs(product) * 1e-12) {
    m = nearest;
  } else {
    m = std::ceil(product);
  }
  return std::min<std::int64_t>(n, std::max<std::int64_t>(
                                       1, static_cast<std::int64_t>(m)));
}

double lambda_hat_sorted(const std::vector<double>& sorted_sample, double p) {
  check_probability(p, "lambda_hat");
  if (sorted_sample.empty()) throw domain_error("lambda_hat: empty sample");
  const std::int64_t n = static_cast<std::int64_t>(sorted_sample.size());
  const std::int64_t m = ceil_np(n, p);
  double total = 0.0;
  for (const double x : sorted_sample) total += x;
  if (total == 0.0) {
    throw degenerate_error("lambda_hat: sample sums to zero");
  }
  double tail = 0.0;
  for (std::int64_t i = m - 1; i < n; ++i) tail += sorted_sample[i];
  return tail / total;
}

double lambda_hat(const std::vector<double>& sample, double p) {
  check_probability(p, "lambda_hat");
  if (sample.empty()) throw domain_error("lambda_hat: empty sample");
  std::vector<double> sorted = sample;
  std::sort(sorted.begin(), sorted.end());
  return lambda_hat_sorted(sorted, p);
}

double empirical_quantile(const std::vector<double>& sample, double p) {
  check_probability(p, "empirical_quantile");
  if (sample.empty()) throw domain_error("empirical_quantile: empty sample");
  const std::int64_t n = static_cast<std::int64_t>(sample.size());
  const std::int64_t m = ceil_np(n, p);
  std::vector<double> work = sample;
  std::nth_element(work.begin(), work.begin() + (m - 1), work.end());
  return work[m - 1];
}

double as_limit(const DistributionSpec& spec, double p) {
  const Moments mom = moments(spec);
  if (mom.mu == 0.0) throw degenerate_error("as_limit: mean is zero");
  return tail_moments(spec, p).a / mom.mu;
}

double exact_cdf_quadrature(const DistributionSpec& spec, int n, double p,
                            double lambda) {
  if (n > 6) {
    throw capacity_error(
        "exact_cdf_quadrature: n > 6 exceeds the quadrature budget; use "
        "exact_cdf_mc");
  }
  if (n < 2) throw domain_error("exact_cdf_quadrature: n must be at least 2");
  check_probability(p, "exact_cdf_quadrature");
  if (!(std::fabs(lambda) > 0.0) || !(std::fabs(lambda) < 1.0)) {
    throw domain_error("exact_cdf_quadrature: lambda must satisfy 0 < |lambda| < 1");
  }
  const double mu = moments(spec).mu;
  if (lambda * mu == 0.0) {
    throw domain_error("exact_cdf_quadrature: lambda * mean must be nonzero");
  }
  const int m = static_cast<int>(ceil_np(n, p));
  if (m < 2) {
    throw domain_error(
        "exact_cdf_quadrature: ceil(n*p) must be at least 2 (the statistic "
        "is identically 1 otherwise)");
  }
  const ExactIntegrand ig{spec, (1.0 - lambda) / lambda, m, n};
  const double integral =
      n == 2 ? inner_integral(ig, 1.0, 0.0, 0.0) : outer_level(ig, n, 1.0, 0.0, 0.0);
  double n_fact = 1.0;
  for (int i = 2; i <= n; ++i) n_fact *= i;
  const double value =
      lambda * mu > 0.0 ? 1.0 - n_fact * integral : n_fact * integral;
  return std::min(1.0, std::max(0.0, value));
}

std::pair<double, double> exact_cdf_mc(const DistributionSpec& spec, int n,
                                       double p, double lambda,
                                       std::int64_t reps, RandomStream& stream,
                                       ExactCdfEstimator estimator) {
  if (n < 1) throw domain_error("exact_cdf_mc: n must be positive");
  check_probability(p, "exact_cdf_mc");
  if (reps < 1) throw domain_error("exact_cdf_mc: reps must be positive");
  const double mu = moments(spec).mu;
  if (lambda * mu == 0.0) {
    throw domain_error("exact_cdf_mc: lambda * mean must be nonzero");
  }
  const std::uint64_t seed = stream.seed();
  const std::uint64_t base_id = stream.stream_id();

  if (estimator == ExactCdfEstimator::direct) {
    std::vector<double> buffer(n);
    std::int64_t hits = 0;
    for (std::int64_t r = 0; r < reps; ++r) {
      RandomStream rep_stream(seed, base_id + 1 + static_cast<std::uint64_t>(r));
      sample_into(spec, buffer, rep_stream);
      std::sort(buffer.begin(), buffer.end());
      if (lambda_hat_sorted(buffer, p) <= lambda) ++hits;
    }
    const double estimate = static_cast<double>(hits) / reps;
    const double se =
        std::sqrt(std::max(0.0, estimate * (1.0 - estimate) / reps));
    return {estimate, se};
  }

  const int m = static_cast<int>(ceil_np(n, p));
  if (n < 2 || m < 2) {
    throw domain_error(
        "exact_cdf_mc: the integral estimator needs n >= 2 and ceil(n*p) >= 2");
  }
  const ExactIntegrand ig{spec, (1.0 - lambda) / lambda, m, n};
  std::vector<double> u(n - 1);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::int64_t r = 0; r < reps; ++r) {
    RandomStream rep_stream(seed, base_id + 1 + static_cast<std::uint64_t>(r));
    for (double& v : u) v = rep_stream.uniform01();
    std::sort(u.begin(), u.end());
    // u[i-2] holds u_i; aggregate every coordinate except u_2 itself.
    double sum_top = 0.0;
    double sum_mid = 0.0;
    for (int i = 3; i <= n; ++i) {
      const double q = eval_quantile(spec, u[i - 2]);
      if (i >= m) {
        sum_top += q;
      } else {
        sum_mid += q;
      }
    }
    const double y = n * ig.g(u[0], sum_top, sum_mid);
    const double delta = y - mean;
    mean += delta / static_cast<double>(r + 1);
    m2 += delta * (y - mean);
  }
  const double se =
      reps > 1 ? std::sqrt(m2 / (static_cast<double>(reps - 1) *
                                 static_cast<double>(reps)))
               : 0.0;
  const double estimate = lambda * mu > 0.0 ? 1.0 - mean : mean;
  return {estimate, se};
}

AsymptoticParams asymptotic_params(const DistributionSpec& spec, double p,
                                   std::int64_t n) {
  if (n < 1) throw domain_error("asymptotic_params: n must be positive");
  const Moments mom = moments(spec);
  if (mom.mu == 0.0) throw degenerate_error("asymptotic_params: mean is zero");
  const TailMoments tm = tail_moments(spec, p);
  AsymptoticParams params;
  params.p = p;
  params.n = n;
  params.mu_n = tm.a;
  params.sigma2_n = tm.b2_plus + tm.b2_minus + 2.0 * tm.a_plus * tm.a_minus;
  params.c_n = tm.a2 - mom.mu * tm.a;
  const double sigma = std::sqrt(mom.sigma2);
  const double sigma_n = std::sqrt(params.sigma2_n);
  if (!(sigma > 0.0) || !(sigma_n > 0.0)) {
    throw degenerate_error("asymptotic_params: degenerate tail variance");
  }
  params.rho_n = params.c_n / (sigma * sigma_n);
  return params;
}

double hinkley_pdf(const AsymptoticParams& params, double mu, double sigma2,
                   double t) {
  if (!(sigma2 > 0.0)) throw domain_error("hinkley_pdf: sigma2 must be positive");
  // Decorrelate: the numerator splits into (c_n/sigma2) Z plus a residual
  // with mean mu_t and variance st2; the ratio shifts by c_n/sigma2.
  const double st2 = params.sigma2_n - params.c_n * params.c_n / sigma2;
  if (!(st2 > 0.0)) {
    throw degenerate_error("hinkley_pdf: degenerate correlation");
  }
  const double mu_t = params.mu_n - mu * params.c_n / sigma2;
  const double s = t - params.c_n / sigma2;
  const double a2 = s * s / st2 + 1.0 / sigma2;
  const double a = std::sqrt(a2);
  const double b = mu_t * s / st2 + mu / sigma2;
  const double r2 = mu_t * mu_t / st2 + mu * mu / sigma2;
  const double dn = static_cast<double>(params.n);
  const double dev = mu * s - mu_t;
  const double term1 =
      std::sqrt(dn / (2.0 * kPi * sigma2 * st2)) * (b / (a2 * a)) *
      std::exp(-0.5 * dn * dev * dev / (sigma2 * s * s + st2)) *
      erf((b / a) * std::sqrt(0.5 * dn));
  const double term2 =
      std::exp(-0.5 * dn * r2) / (kPi * std::sqrt(sigma2 * st2) * a2);
  return term1 + term2;
}

double lognormal_pdf(const AsymptoticParams& params, double mu, double sigma2,
                     double t) {
  if (mu == 0.0 || !(params.mu_n / mu > 0.0)) {
    throw domain_error(
        "lognormal_pdf: unsupported branch, mu_n/mu must be positive");
  }
  const double ratio = params.mu_n / mu;
  const double s2 = sigma2 / (mu * mu) +
                    params.sigma2_n / (params.mu_n * params.mu_n) -
                    2.0 * params.c_n / (params.mu_n * mu);
  if (!(s2 > 0.0)) {
    throw domain_error("lognormal_pdf: nonpositive log-variance");
  }
  if (!(t > 0.0)) return 0.0;
  const double v = s2 / static_cast<double>(params.n);
  const double z = std::log(t / ratio);
  return std::exp(-0.5 * z * z / v) / (t * std::sqrt(2.0 * kPi * v));
}

}  // namespace qcstat
