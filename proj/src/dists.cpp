#include "qcstat/dists.hpp"

#include <cmath>

#include "qcstat/errors.hpp"
#include "qcstat/quadrature.hpp"
#include "qcstat/specfun.hpp"

namespace qcstat {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt2Pi = 2.5066282746310002;

double std_normal_pdf(double z) { return std::exp(-0.5 * z * z) / kSqrt2Pi; }

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

double std_normal_sf(double z) { return 0.5 * std::erfc(z / kSqrt2); }

// Standard normal quantile: rational initial guess (Abramowitz-Stegun
// 26.2.23, error < 4.5e-4) polished by three Newton steps on erfc, which
// brings it to full double accuracy away from the extreme subnormal tail.
double std_normal_quantile(double u) {
  const bool lower = u < 0.5;
  const double tail = lower ? u : 1.0 - u;
  const double t = std::sqrt(-2.0 * std::log(tail));
  double x = t - (2.515517 + t * (0.802853 + t * 0.010328)) /
                     (1.0 + t * (1.432788 + t * (0.189269 + t * 0.001308)));
  for (int i = 0; i < 3; ++i) {
    const double pdf = std_normal_pdf(x);
    if (pdf <= 0.0) break;
    x -= (std_normal_sf(x) - tail) / -pdf;
  }
  return lower ? -x : x;
}

// E[X 1{X>=l}] and E[X^2 1{X>=l}] for Normal(mu, sigma).
void normal_partial_moments(double mu, double sigma, double l, double* m1,
                            double* m2) {
  const double z = (l - mu) / sigma;
  const double sf = std_normal_sf(z);
  const double pdf = std_normal_pdf(z);
  *m1 = mu * sf + sigma * pdf;
  *m2 = (mu * mu + sigma * sigma) * sf + sigma * (l + mu) * pdf;
}

// integral of x^power * f(x) dx over [q_p, support end), evaluated in the
// survival variable y = 1 - F(x) as integral_0^{1-p} quantile(1-y)^power dy.
// Graded dyadic Gauss-Legendre panels toward y = 0 resolve the power-law
// blowup of the quantile (GPD) to machine precision; plain u-space panels
// cannot, because u = 1 - y is not representable near 1. Panels are also
// graded toward y = 1 - p: for small p the lognormal quantile has an
// infinite-slope point at y = 1.
double tail_power_integral(const DistributionSpec& spec, double p, int power) {
  const GLTable& gl = gauss_legendre(16);
  const double y_top = 1.0 - p;
  // quantile evaluated from the survival probability, exact for small y
  auto quantile_sf = [&spec](double y) -> double {
    switch (spec.family) {
      case Family::lognormal:
        return std::exp(spec.p1 - spec.p2 * std_normal_quantile(y));
      case Family::gpd:
        return spec.p3 +
               spec.p2 / spec.p1 * (std::pow(y, -spec.p1) - 1.0);
      default:
        throw domain_error("tail_power_integral: unsupported family");
    }
  };
  auto integrand = [&](double y) {
    const double x = quantile_sf(y);
    return power == 1 ? x : x * x;
  };
  const double mid = 0.5 * y_top;
  double total = 0.0;
  double hi = mid;
  for (int panel = 0; panel < 220; ++panel) {
    const double lo = 0.5 * hi;
    const double piece = gl_integrate(gl, integrand, lo, hi);
    total += piece;
    if (piece < 1e-17 * total && panel > 8) break;
    hi = lo;
  }
  double width = y_top - mid;
  for (int panel = 0; panel < 220; ++panel) {
    const double half = 0.5 * width;
    const double piece =
        gl_integrate(gl, integrand, y_top - width, y_top - half);
    total += piece;
    if ((piece < 1e-17 * total && panel > 8) || y_top - half == y_top) break;
    width = half;
  }
  return total;
}

void validate_positive(double value, const char* what) {
  if (!(value > 0.0)) {
    throw domain_error(std::string(what) + " must be positive");
  }
}

}  // namespace

DistributionSpec normal_spec(double mean, double stddev) {
  validate_positive(stddev, "normal: sigma");
  return {Family::normal, mean, stddev, 0.0};
}

DistributionSpec lognormal_spec(double log_mean, double log_stddev) {
  validate_positive(log_stddev, "lognormal: sigma");
  return {Family::lognormal, log_mean, log_stddev, 0.0};
}

DistributionSpec exponential_spec(double mean) {
  validate_positive(mean, "exponential: mu");
  return {Family::exponential, mean, 0.0, 0.0};
}

DistributionSpec rayleigh_spec(double scale) {
  validate_positive(scale, "rayleigh: b");
  return {Family::rayleigh, scale, 0.0, 0.0};
}

DistributionSpec gpd_spec(double shape, double scale, double location) {
  validate_positive(shape, "gpd: k");
  validate_positive(scale, "gpd: s");
  return {Family::gpd, shape, scale, location};
}

DistributionSpec gamma_spec(double shape, double scale) {
  validate_positive(shape, "gamma: alpha");
  validate_positive(scale, "gamma: theta");
  return {Family::gamma, shape, scale, 0.0};
}

std::string family_name(Family family) {
  switch (family) {
    case Family::normal:
      return "Normal";
    case Family::lognormal:
      return "LogNormal";
    case Family::exponential:
      return "Exponential";
    case Family::rayleigh:
      return "Rayleigh";
    case Family::gpd:
      return "GeneralizedPareto";
    case Family::gamma:
      return "Gamma";
  }
  return "Unknown";
}

double eval_cdf(const DistributionSpec& spec, double x) {
  switch (spec.family) {
    case Family::normal:
      return std_normal_cdf((x - spec.p1) / spec.p2);
    case Family::lognormal:
      if (x <= 0.0) return 0.0;
      return std_normal_cdf((std::log(x) - spec.p1) / spec.p2);
    case Family::exponential:
      if (x <= 0.0) return 0.0;
      return -std::expm1(-x / spec.p1);
    case Family::rayleigh:
      if (x <= 0.0) return 0.0;
      return -std::expm1(-x * x / (2.0 * spec.p1 * spec.p1));
    case Family::gpd: {
      if (x <= spec.p3) return 0.0;
      const double z = 1.0 + spec.p1 * (x - spec.p3) / spec.p2;
      return 1.0 - std::pow(z, -1.0 / spec.p1);
    }
    case Family::gamma:
      if (x <= 0.0) return 0.0;
      return reg_inc_gamma(spec.p1, x / spec.p2);
  }
  throw domain_error("eval_cdf: bad family");
}

double eval_pdf(const DistributionSpec& spec, double x) {
  switch (spec.family) {
    case Family::normal:
      return std_normal_pdf((x - spec.p1) / spec.p2) / spec.p2;
    case Family::lognormal:
      if (x <= 0.0) return 0.0;
      return std_normal_pdf((std::log(x) - spec.p1) / spec.p2) /
             (x * spec.p2);
    case Family::exponential:
      if (x < 0.0) return 0.0;
      return std::exp(-x / spec.p1) / spec.p1;
    case Family::rayleigh: {
      if (x < 0.0) return 0.0;
      const double b2 = spec.p1 * spec.p1;
      return x / b2 * std::exp(-x * x / (2.0 * b2));
    }
    case Family::gpd: {
      if (x < spec.p3) return 0.0;
      const double z = 1.0 + spec.p1 * (x - spec.p3) / spec.p2;
      return std::pow(z, -1.0 / spec.p1 - 1.0) / spec.p2;
    }
    case Family::gamma: {
      if (x < 0.0) return 0.0;
      if (x == 0.0) return spec.p1 < 1.0 ? INFINITY
                           : spec.p1 == 1.0 ? 1.0 / spec.p2
                                            : 0.0;
      const double t = x / spec.p2;
      return std::exp((spec.p1 - 1.0) * std::log(t) - t -
                      std::lgamma(spec.p1)) /
             spec.p2;
    }
  }
  throw domain_error("eval_pdf: bad family");
}

double eval_quantile(const DistributionSpec& spec, double u) {
  if (!(u > 0.0) || !(u < 1.0)) {
    throw domain_error("eval_quantile: u must lie in (0,1)");
  }
  switch (spec.family) {
    case Family::normal:
      return spec.p1 + spec.p2 * std_normal_quantile(u);
    case Family::lognormal:
      return std::exp(spec.p1 + spec.p2 * std_normal_quantile(u));
    case Family::exponential:
      return -spec.p1 * std::log1p(-u);
    case Family::rayleigh:
      return spec.p1 * std::sqrt(-2.0 * std::log1p(-u));
    case Family::gpd:
      return spec.p3 +
             spec.p2 / spec.p1 * (std::pow(1.0 - u, -spec.p1) - 1.0);
    case Family::gamma: {
      // Newton on the regularized incomplete gamma with a Wilson-Hilferty
      // start and bisection safeguarding; monotone, tolerance 1e-12.
      const double alpha = spec.p1;
      const double z = std_normal_quantile(u);
      const double wh = 1.0 - 1.0 / (9.0 * alpha) + z / (3.0 * std::sqrt(alpha));
      double x = alpha * wh * wh * wh;
      if (!(x > 0.0)) x = alpha * std::exp(z / std::sqrt(alpha)) * 1e-2;
      double lo = 0.0;
      double hi = INFINITY;
      for (int i = 0; i < 200; ++i) {
        const double cdf = reg_inc_gamma(alpha, x);
        if (cdf > u) {
          hi = x;
        } else {
          lo = x;
        }
        const double pdf =
            std::exp((alpha - 1.0) * std::log(x) - x - std::lgamma(alpha));
        double next = pdf > 0.0 ? x - (cdf - u) / pdf : x;
        if (!(next > lo) || !(next < hi)) {
          next = std::isinf(hi) ? 2.0 * x : 0.5 * (lo + hi);
        }
        if (std::fabs(next - x) <= 1e-12 * (1.0 + std::fabs(x))) {
          x = next;
          break;
        }
        x = next;
      }
      return x * spec.p2;
    }
  }
  throw domain_error("eval_quantile: bad family");
}

Moments moments(const DistributionSpec& spec) {
  switch (spec.family) {
    case Family::normal:
      return {spec.p1, spec.p2 * spec.p2};
    case Family::lognormal: {
      const double s2 = spec.p2 * spec.p2;
      const double mean = std::exp(spec.p1 + 0.5 * s2);
      return {mean, (std::exp(s2) - 1.0) * mean * mean};
    }
    case Family::exponential:
      return {spec.p1, spec.p1 * spec.p1};
    case Family::rayleigh: {
      const double b = spec.p1;
      return {b * std::sqrt(M_PI / 2.0), (2.0 - M_PI / 2.0) * b * b};
    }
    case Family::gpd: {
      const double k = spec.p1;
      if (k >= 0.5) {
        throw domain_error("gpd: variance is infinite for k >= 1/2");
      }
      const double s = spec.p2;
      const double mean = spec.p3 + s / (1.0 - k);
      const double var = s * s / ((1.0 - k) * (1.0 - k) * (1.0 - 2.0 * k));
      return {mean, var};
    }
    case Family::gamma:
      return {spec.p1 * spec.p2, spec.p1 * spec.p2 * spec.p2};
  }
  throw domain_error("moments: bad family");
}

TailMoments tail_moments(const DistributionSpec& spec, double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw domain_error("tail_moments: p must lie in (0,1)");
  }
  TailMoments tm;
  tm.p = p;
  tm.q_p = eval_quantile(spec, p);
  const Moments m = moments(spec);
  tm.mu = m.mu;
  tm.sigma2 = m.sigma2;

  const double q = tm.q_p;
  switch (spec.family) {
    case Family::normal: {
      normal_partial_moments(spec.p1, spec.p2, q, &tm.a, &tm.a2);
      break;
    }
    case Family::exponential: {
      const double t = q / spec.p1;
      const double e = std::exp(-t);
      tm.a = spec.p1 * (1.0 + t) * e;
      tm.a2 = spec.p1 * spec.p1 * (t * t + 2.0 * t + 2.0) * e;
      break;
    }
    case Family::rayleigh: {
      const double b = spec.p1;
      const double e = std::exp(-q * q / (2.0 * b * b));
      tm.a = q * e + b * std::sqrt(M_PI / 2.0) * std::erfc(q / (b * kSqrt2));
      tm.a2 = (q * q + 2.0 * b * b) * e;
      break;
    }
    case Family::gamma: {
      const double alpha = spec.p1;
      const double theta = spec.p2;
      const double t = q / theta;
      tm.a = alpha * theta * (1.0 - reg_inc_gamma(alpha + 1.0, t));
      tm.a2 = alpha * (alpha + 1.0) * theta * theta *
              (1.0 - reg_inc_gamma(alpha + 2.0, t));
      break;
    }
    case Family::lognormal:
    case Family::gpd: {
      tm.a = tail_power_integral(spec, p, 1);
      tm.a2 = tail_power_integral(spec, p, 2);
      break;
    }
  }

  tm.a_tilde = tm.mu - tm.a;
  tm.b2 = tm.a2 - tm.a * tm.a;
  if (q >= 0.0) {
    tm.a_plus = tm.a;
    tm.a_minus = 0.0;
    tm.b2_plus = tm.b2;
    tm.b2_minus = 0.0;
  } else {
    // Only the normal family has support below zero; split at 0.
    double m1_0 = 0.0, m2_0 = 0.0;
    normal_partial_moments(spec.p1, spec.p2, 0.0, &m1_0, &m2_0);
    tm.a_plus = m1_0;
    tm.a_minus = -(tm.a - m1_0);
    const double a2_minus = tm.a2 - m2_0;
    tm.b2_plus = m2_0 - tm.a_plus * tm.a_plus;
    tm.b2_minus = a2_minus - tm.a_minus * tm.a_minus;
  }
  return tm;
}

void sample_into(const DistributionSpec& spec, std::span<double> out,
                 RandomStream& stream) {
  switch (spec.family) {
    case Family::normal:
    case Family::lognormal: {
      const double mu = spec.p1;
      const double sigma = spec.p2;
      const bool log_scale = spec.family == Family::lognormal;
      for (double& value : out) {
        const double u1 = stream.uniform01();
        const double u2 = stream.uniform01();
        const double z =
            std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
        const double x = mu + sigma * z;
        value = log_scale ? std::exp(x) : x;
      }
      return;
    }
    case Family::exponential:
      for (double& value : out) {
        value = -spec.p1 * std::log(stream.uniform01());
      }
      return;
    case Family::rayleigh:
      for (double& value : out) {
        value = spec.p1 * std::sqrt(-2.0 * std::log(stream.uniform01()));
      }
      return;
    case Family::gpd:
      for (double& value : out) {
        value = spec.p3 + spec.p2 / spec.p1 *
                              (std::pow(stream.uniform01(), -spec.p1) - 1.0);
      }
      return;
    case Family::gamma: {
      // Marsaglia-Tsang squeeze; shapes below 1 use the alpha+1 boost with
      // the u^(1/alpha) scaling.
      const double alpha = spec.p1;
      const double theta = spec.p2;
      const double shape = alpha < 1.0 ? alpha + 1.0 : alpha;
      const double d = shape - 1.0 / 3.0;
      const double c = 1.0 / (3.0 * std::sqrt(d));
      for (double& value : out) {
        double g = 0.0;
        for (;;) {
          const double u1 = stream.uniform01();
          const double u2 = stream.uniform01();
          const double z =
              std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
          const double t = 1.0 + c * z;
          if (t <= 0.0) continue;
          const double v = t * t * t;
          const double u = stream.uniform01();
          if (std::log(u) < 0.5 * z * z + d - d * v + d * std::log(v)) {
            g = d * v;
            break;
          }
        }
        if (alpha < 1.0) {
          g *= std::pow(stream.uniform01(), 1.0 / alpha);
        }
        value = g * theta;
      }
      return;
    }
  }
  throw domain_error("sample_into: bad family");
}

std::vector<double> sample(const DistributionSpec& spec, std::size_t count,
                           RandomStream& stream) {
  std::vector<double> out(count);
  sample_into(spec, out, stream);
  return out;
}

}  // namespace qcstat
