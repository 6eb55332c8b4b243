// Marginal and joint distributions of order statistics from an i.i.d.
// sample: incomplete-beta closed forms for marginals, the ordered-product
// density and the multinomial occupancy sum for joint laws, plus a
// Monte Carlo oracle for the joint CDF.

#ifndef QCSTAT_ORDERSTATS_HPP
#define QCSTAT_ORDERSTATS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "qcstat/dists.hpp"
#include "qcstat/rng.hpp"

namespace qcstat {

// Strictly increasing ranks r_1 < ... < r_k within a sample of size n.
struct RankSet {
  int n = 0;
  std::vector<int> ranks;
};

// Throws domain_error unless 1 <= r_1 < ... < r_k <= n.
void validate_rank_set(const RankSet& rankset);

// P[X_(i) <= x] = I(F(x); i, n-i+1).
double marginal_cdf(const DistributionSpec& spec, int i, int n, double x);

// Density of X_(i): f(x) F(x)^{i-1} (1-F(x))^{n-i} / B(i, n-i+1).
double marginal_pdf(const DistributionSpec& spec, int i, int n, double x);

// Joint density of (X_(r_1),...,X_(r_k)) at strictly increasing xs;
// 0 for non-increasing xs.
double joint_pdf(const DistributionSpec& spec, const RankSet& rankset,
                 const std::vector<double>& xs);

// P[X_(r_1) <= y_1, ..., X_(r_k) <= y_k] by the nested multinomial occupancy
// sum. ys need not be sorted (the joint CDF at unsorted points equals the
// value at the sorted points). Throws capacity_error past the enumeration
// budget; mc_joint_cdf covers those cases.
double joint_cdf(const DistributionSpec& spec, const RankSet& rankset,
                 std::vector<double> ys);

// Empirical frequency of the joint event over simulated sorted samples,
// with the binomial standard error.
std::pair<double, double> mc_joint_cdf(const DistributionSpec& spec,
                                       const RankSet& rankset,
                                       std::vector<double> ys,
                                       std::int64_t reps,
                                       RandomStream& stream);

}  // namespace qcstat

#endif  // QCSTAT_ORDERSTATS_HPP
