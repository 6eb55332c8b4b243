// Special functions underpinning the closed forms: log-beta, regularized
// incomplete beta (plus the generalized interval form), erf, regularized
// incomplete gamma, and multinomial coefficients.

#ifndef QCSTAT_SPECFUN_HPP
#define QCSTAT_SPECFUN_HPP

#include <cstdint>
#include <vector>

namespace qcstat {

// Ordered parts summing to `total`; holds the occupancy counts (J_0,...,J_k)
// of the joint order-statistic CDF.
struct MultiIndex {
  std::vector<std::int64_t> parts;
  std::int64_t total = 0;
};

// ln B(p,q) for p,q > 0.
double log_beta(double p, double q);

// Regularized incomplete beta I(x; p, q) for x in [0,1], p,q > 0.
// Continued-fraction evaluation with the symmetry switch at x = p/(p+q);
// for integer parameters it equals the binomial tail sum
// sum_{j=p}^{p+q-1} C(p+q-1,j) x^j (1-x)^{p+q-1-j}.
double reg_inc_beta(double x, double p, double q);

// Generalized incomplete beta on [a,b] with integer p,q >= 1:
// (1/B(p,q)) * integral_a^y (x-a)^{p-1} (b-x)^{q-1} dx
// = (b-a)^{p+q-1} * I((y-a)/(b-a); p, q).
double gen_inc_beta(double y, int p, int q, double a, double b);

// Error function, accurate to better than 1e-12 uniformly.
double erf(double x);

// total! / prod(parts_i!). Exact for total <= 20, via log-gamma above that
// (the result may then be too large for any integer type).
double multinomial_coeff(const MultiIndex& index);

// ln(total! / prod(parts_i!)), always via log-gamma.
double log_multinomial_coeff(const MultiIndex& index);

// Lower regularized incomplete gamma P(s,x), s > 0, x >= 0.
double reg_inc_gamma(double s, double x);

}  // namespace qcstat

#endif  // QCSTAT_SPECFUN_HPP
