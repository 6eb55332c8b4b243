#include "qcstat/specfun.hpp"

#include <cmath>
#include <limits>

#include "qcstat/errors.hpp"

namespace qcstat {

namespace {

// Continued fraction for the incomplete beta (modified Lentz). Converges
// quickly for x < p/(p+q); the symmetric identity covers the rest.
double beta_cont_frac(double x, double p, double q) {
  const double eps = 1e-16;
  const double tiny = 1e-300;
  double c = 1.0;
  double d = 1.0 - (p + q) * x / (p + 1.0);
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    const double m2 = 2.0 * m;
    // even step
    double aa = m * (q - m) * x / ((p + m2 - 1.0) * (p + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    // odd step
    aa = -(p + m) * (p + q + m) * x / ((p + m2) * (p + m2 + 1.0));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-14) break;
  }
  return h;
}

// Series for the lower incomplete gamma, x < s+1.
double gamma_series(double s, double x) {
  double ap = s;
  double sum = 1.0 / s;
  double del = sum;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

// Continued fraction for the upper incomplete gamma, x >= s+1.
double gamma_cont_frac(double s, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

void check_multi_index(const MultiIndex& index) {
  std::int64_t sum = 0;
  for (const std::int64_t part : index.parts) {
    if (part < 0) throw domain_error("multinomial_coeff: negative part");
    sum += part;
  }
  if (sum != index.total) {
    throw domain_error("multinomial_coeff: parts must sum to total");
  }
}

}  // namespace

double log_beta(double p, double q) {
  if (!(p > 0.0) || !(q > 0.0)) {
    throw domain_error("log_beta: p and q must be positive");
  }
  return std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q);
}

double reg_inc_beta(double x, double p, double q) {
  if (!(p > 0.0) || !(q > 0.0)) {
    throw domain_error("reg_inc_beta: p and q must be positive");
  }
  if (!(x >= 0.0) || !(x <= 1.0)) {
    throw domain_error("reg_inc_beta: x must lie in [0,1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double front =
      std::exp(p * std::log(x) + q * std::log1p(-x) - log_beta(p, q));
  if (x < p / (p + q)) {
    return front * beta_cont_frac(x, p, q) / p;
  }
  return 1.0 - std::exp(q * std::log1p(-x) + p * std::log(x) - log_beta(q, p)) *
                   beta_cont_frac(1.0 - x, q, p) / q;
}

double gen_inc_beta(double y, int p, int q, double a, double b) {
  if (p < 1 || q < 1) {
    throw domain_error("gen_inc_beta: p and q must be positive integers");
  }
  if (!(a < b)) throw domain_error("gen_inc_beta: requires a < b");
  if (!(y >= a) || !(y <= b)) {
    throw domain_error("gen_inc_beta: y must lie in [a,b]");
  }
  const double scale = std::pow(b - a, p + q - 1);
  return scale * reg_inc_beta((y - a) / (b - a), p, q);
}

double erf(double x) { return std::erf(x); }

double multinomial_coeff(const MultiIndex& index) {
  check_multi_index(index);
  if (index.total <= 20) {
    // Build from exact binomials: total! / prod parts! = prod C(n_i, parts_i)
    // with n_i the running partial sums, each factor an exact integer.
    std::uint64_t result = 1;
    std::int64_t n = 0;
    for (const std::int64_t part : index.parts) {
      for (std::int64_t j = 1; j <= part; ++j) {
        ++n;
        result = result * static_cast<std::uint64_t>(n) /
                 static_cast<std::uint64_t>(j);
      }
    }
    return static_cast<double>(result);
  }
  return std::exp(log_multinomial_coeff(index));
}

double log_multinomial_coeff(const MultiIndex& index) {
  check_multi_index(index);
  double result = std::lgamma(static_cast<double>(index.total) + 1.0);
  for (const std::int64_t part : index.parts) {
    result -= std::lgamma(static_cast<double>(part) + 1.0);
  }
  return result;
}

double reg_inc_gamma(double s, double x) {
  if (!(s > 0.0)) throw domain_error("reg_inc_gamma: s must be positive");
  if (!(x >= 0.0)) throw domain_error("reg_inc_gamma: x must be nonnegative");
  if (x == 0.0) return 0.0;
  if (x < s + 1.0) return gamma_series(s, x);
  return 1.0 - gamma_cont_frac(s, x);
}

}  // namespace qcstat
