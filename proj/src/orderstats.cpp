#include "qcstat/orderstats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qcstat/errors.hpp"
#include "qcstat/specfun.hpp"

namespace qcstat {

namespace {

constexpr double kMaxJointTerms = 1e7;

void check_rank(int i, int n, const char* who) {
  if (n < 1) throw domain_error(std::string(who) + ": n must be positive");
  if (i < 1 || i > n) {
    throw domain_error(std::string(who) + ": rank out of range");
  }
}

// Nested occupancy enumeration for the joint CDF. Chooses J_k..J_1 (counts
// of observations above/between the thresholds), with J_0 implied. All terms
// are nonnegative; accumulate with Neumaier compensation in linear space,
// individual terms formed in log space.
class JointCdfSum {
 public:
  JointCdfSum(int n, const std::vector<int>& ranks,
              const std::vector<double>& cells)
      : n_(n), ranks_(ranks), cells_(cells), log_cells_(cells.size()) {
    lgamma_.resize(n + 2);
    for (int j = 0; j <= n + 1; ++j) {
      lgamma_[j] = std::lgamma(static_cast<double>(j) + 1.0);
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      log_cells_[i] = cells[i] > 0.0 ? std::log(cells[i]) : 0.0;
    }
  }

  double run() {
    recurse(static_cast<int>(ranks_.size()), n_, lgamma_[n_], 0.0);
    return std::min(1.0, std::max(0.0, sum_ + comp_));
  }

 private:
  // level: which J index is being chosen (k down to 1); remaining: n minus
  // the J's already fixed; partial: log multinomial and cell factors so far.
  void recurse(int level, int remaining, double log_weight, double log_cells) {
    if (level == 0) {
      const int j0 = remaining;
      if (j0 < 0) {
        throw std::logic_error("joint_cdf: occupancy counts do not sum to n");
      }
      if (cells_[0] <= 0.0 && j0 > 0) return;
      const double log_term = log_weight - lgamma_[j0] +
                              (j0 > 0 ? j0 * log_cells_[0] : 0.0) + log_cells;
      add(std::exp(log_term));
      return;
    }
    const int cap = remaining - ranks_[level - 1];
    for (int j = 0; j <= cap; ++j) {
      if (cells_[level] <= 0.0 && j > 0) break;
      recurse(level - 1, remaining - j, log_weight - lgamma_[j],
              log_cells + (j > 0 ? j * log_cells_[level] : 0.0));
    }
  }

  void add(double term) {
    // Neumaier variant of compensated summation.
    const double t = sum_ + term;
    if (std::fabs(sum_) >= std::fabs(term)) {
      comp_ += (sum_ - t) + term;
    } else {
      comp_ += (term - t) + sum_;
    }
    sum_ = t;
  }

  int n_;
  const std::vector<int>& ranks_;
  const std::vector<double>& cells_;
  std::vector<double> log_cells_;
  std::vector<double> lgamma_;
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

void validate_rank_set(const RankSet& rankset) {
  if (rankset.n < 1) throw domain_error("rank set: n must be positive");
  if (rankset.ranks.empty()) throw domain_error("rank set: no ranks");
  int prev = 0;
  for (const int r : rankset.ranks) {
    if (r <= prev || r > rankset.n) {
      throw domain_error("rank set: ranks must be strictly increasing in [1,n]");
    }
    prev = r;
  }
}

double marginal_cdf(const DistributionSpec& spec, int i, int n, double x) {
  check_rank(i, n, "marginal_cdf");
  return reg_inc_beta(eval_cdf(spec, x), static_cast<double>(i),
                      static_cast<double>(n - i + 1));
}

double marginal_pdf(const DistributionSpec& spec, int i, int n, double x) {
  check_rank(i, n, "marginal_pdf");
  const double f = eval_pdf(spec, x);
  if (f <= 0.0) return 0.0;
  const double F = eval_cdf(spec, x);
  if ((F <= 0.0 && i > 1) || (F >= 1.0 && i < n)) return 0.0;
  double log_term = -log_beta(static_cast<double>(i),
                              static_cast<double>(n - i + 1));
  if (i > 1) log_term += (i - 1) * std::log(F);
  if (i < n) log_term += (n - i) * std::log1p(-F);
  return f * std::exp(log_term);
}

double joint_pdf(const DistributionSpec& spec, const RankSet& rankset,
                 const std::vector<double>& xs) {
  validate_rank_set(rankset);
  if (xs.size() != rankset.ranks.size()) {
    throw domain_error("joint_pdf: ranks and xs lengths differ");
  }
  const int k = static_cast<int>(xs.size());
  for (int i = 1; i < k; ++i) {
    if (!(xs[i - 1] < xs[i])) return 0.0;
  }
  const int n = rankset.n;
  double log_term = std::lgamma(static_cast<double>(n) + 1.0);
  for (const double x : xs) {
    const double f = eval_pdf(spec, x);
    if (f <= 0.0) return 0.0;
    log_term += std::log(f);
  }
  // Gap factors (F(x_{i+1}) - F(x_i))^{e_i} / e_i! with e_i the rank gaps,
  // including the outer gaps against F = 0 and F = 1.
  for (int i = 0; i <= k; ++i) {
    const int r_lo = i == 0 ? 0 : rankset.ranks[i - 1];
    const int r_hi = i == k ? n + 1 : rankset.ranks[i];
    const int gap = r_hi - r_lo - 1;
    if (gap == 0) continue;
    const double F_lo = i == 0 ? 0.0 : eval_cdf(spec, xs[i - 1]);
    const double F_hi = i == k ? 1.0 : eval_cdf(spec, xs[i]);
    const double dF = F_hi - F_lo;
    if (dF <= 0.0) return 0.0;
    log_term += gap * std::log(dF) -
                std::lgamma(static_cast<double>(gap) + 1.0);
  }
  return std::exp(log_term);
}

double joint_cdf(const DistributionSpec& spec, const RankSet& rankset,
                 std::vector<double> ys) {
  validate_rank_set(rankset);
  if (ys.size() != rankset.ranks.size()) {
    throw domain_error("joint_cdf: ranks and ys lengths differ");
  }
  // The joint CDF at arbitrary points equals its value at the sorted points.
  std::sort(ys.begin(), ys.end());
  const int k = static_cast<int>(ys.size());
  const int n = rankset.n;
  // C(n+k, k) bounds the number of occupancy vectors the sum enumerates.
  double predicted_terms = 1.0;
  for (int i = 1; i <= k; ++i) {
    predicted_terms *= static_cast<double>(n + i) / static_cast<double>(i);
  }
  if (predicted_terms > kMaxJointTerms) {
    throw capacity_error(
        "joint_cdf: enumeration would exceed the term budget; use "
        "mc_joint_cdf");
  }
  // Cell probabilities of the k+1 gaps cut by the thresholds.
  std::vector<double> cells(k + 1);
  std::vector<double> F(k);
  for (int i = 0; i < k; ++i) F[i] = eval_cdf(spec, ys[i]);
  cells[0] = F[0];
  for (int i = 1; i < k; ++i) cells[i] = std::max(0.0, F[i] - F[i - 1]);
  cells[k] = std::max(0.0, 1.0 - F[k - 1]);
  JointCdfSum sum(n, rankset.ranks, cells);
  return sum.run();
}

std::pair<double, double> mc_joint_cdf(const DistributionSpec& spec,
                                       const RankSet& rankset,
                                       std::vector<double> ys,
                                       std::int64_t reps,
                                       RandomStream& stream) {
  validate_rank_set(rankset);
  if (ys.size() != rankset.ranks.size()) {
    throw domain_error("mc_joint_cdf: ranks and ys lengths differ");
  }
  if (reps < 1) throw domain_error("mc_joint_cdf: reps must be positive");
  const int n = rankset.n;
  const int k = static_cast<int>(ys.size());
  std::vector<double> buffer(n);
  std::int64_t hits = 0;
  for (std::int64_t r = 0; r < reps; ++r) {
    sample_into(spec, buffer, stream);
    std::sort(buffer.begin(), buffer.end());
    bool inside = true;
    for (int i = 0; i < k; ++i) {
      if (!(buffer[rankset.ranks[i] - 1] <= ys[i])) {
        inside = false;
        break;
      }
    }
    hits += inside ? 1 : 0;
  }
  const double estimate = static_cast<double>(hits) / reps;
  const double std_error =
      std::sqrt(std::max(0.0, estimate * (1.0 - estimate) / reps));
  return {estimate, std_error};
}

}  // namespace qcstat
