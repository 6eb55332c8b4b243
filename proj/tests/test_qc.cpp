#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "doctest.h"
#include "qcstat/dists.hpp"
#include "qcstat/errors.hpp"
#include "qcstat/qc.hpp"
#include "qcstat/quadrature.hpp"
#include "qcstat/rng.hpp"

namespace {

struct ParamCase {
  const char* label;
  qcstat::DistributionSpec spec;
  double mu_n;
  double sigma2_n;
  double c_n;
  double s2;  // lognormal-model log-variance scale at p = 0.8
};

// p = 0.8 values frozen from closed forms / high-accuracy tail integrals.
std::vector<ParamCase> param_cases() {
  return {
      {"normal", qcstat::normal_spec(1.0, 0.25), 0.2699904801, 0.2943124694,
       0.0972168487, 3.37984260},
      {"lognormal", qcstat::lognormal_spec(1.0, 0.25), 0.7770119025,
       2.4633953793, 0.8879591047, 3.32972284},
      {"exponential", qcstat::exponential_spec(1.0), 0.5218875825,
       1.2894665950, 1.0399456613, 1.74897988},
      {"rayleigh", qcstat::rayleigh_spec(0.25), 0.1125144428, 0.0525764480,
       0.0299819624, 2.72544966},
      {"gpd", qcstat::gpd_spec(0.25, 0.25, 1.0), 0.3987596750, 0.7354179126,
       0.3627476243, 3.38546524},
      {"gamma", qcstat::gamma_spec(3.0, 1.0), 1.1428088246, 5.5879184577,
       3.4655039935, 2.59031571},
  };
}

double grid_l1(const qcstat::AsymptoticParams& params, double mu,
               double sigma2) {
  const double limit = params.mu_n / mu;
  const double width =
      std::sqrt(params.sigma2_n / static_cast<double>(params.n)) / std::abs(mu);
  const int g = 4001;
  const double lo = limit - 10.0 * width;
  const double hi = limit + 10.0 * width;
  const double step = (hi - lo) / (g - 1);
  double sum = 0.0;
  double prev = 0.0;
  for (int i = 0; i < g; ++i) {
    const double t = lo + i * step;
    const double d = std::abs(qcstat::hinkley_pdf(params, mu, sigma2, t) -
                              qcstat::lognormal_pdf(params, mu, sigma2, t));
    if (i > 0) sum += 0.5 * (prev + d) * step;
    prev = d;
  }
  return sum;
}

}  // namespace

TEST_CASE("tail cutoff rank") {
  CHECK(qcstat::ceil_np(4, 0.5) == 2);
  CHECK(qcstat::ceil_np(10, 0.8) == 8);
  CHECK(qcstat::ceil_np(1000, 0.8) == 800);  // 1000*0.8 lands one ulp high
  CHECK(qcstat::ceil_np(3, 1.0 / 3.0) == 1);
  CHECK(qcstat::ceil_np(5, 1.0) == 5);
  CHECK(qcstat::ceil_np(7, 1e-9) == 1);
  CHECK(qcstat::ceil_np(7, 0.7) == 5);
}

TEST_CASE("lambda_hat hand values") {
  CHECK(qcstat::lambda_hat({1.0, 2.0, 3.0, 4.0}, 0.5) ==
        doctest::Approx(0.9).epsilon(1e-15));
  const std::vector<double> ones(10, 1.0);
  CHECK(qcstat::lambda_hat(ones, 0.8) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(qcstat::lambda_hat({42.0}, 0.37) == 1.0);
  // Mixed signs escape [-1, 1]; the statistic is reported unclamped.
  CHECK(qcstat::lambda_hat({-1.0, 2.0}, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("lambda_hat argument errors") {
  CHECK_THROWS_AS(qcstat::lambda_hat({}, 0.5), qcstat::domain_error);
  CHECK_THROWS_AS(qcstat::lambda_hat({1.0}, 0.0), qcstat::domain_error);
  CHECK_THROWS_AS(qcstat::lambda_hat({1.0}, 1.2), qcstat::domain_error);
  CHECK_THROWS_AS(qcstat::lambda_hat({1.0, -1.0}, 0.5), qcstat::degenerate_error);
}

TEST_CASE("lambda_hat scale equivariance and positive-sample bounds") {
  qcstat::RandomStream stream(31, 0);
  const auto xs = qcstat::sample(qcstat::gamma_spec(3.0, 1.0), 257, stream);
  std::vector<double> scaled = xs;
  for (double& x : scaled) x *= 2.0;
  for (double p : {0.25, 0.8, 1.0}) {
    const double l = qcstat::lambda_hat(xs, p);
    CHECK(qcstat::lambda_hat(scaled, p) == l);
    CHECK(l > 0.0);
    CHECK(l <= 1.0);
  }
}

TEST_CASE("empirical quantile") {
  CHECK(qcstat::empirical_quantile({3.0, 1.0, 2.0}, 1.0) == 3.0);
  CHECK(qcstat::empirical_quantile({3.0, 1.0, 2.0}, 1.0 / 3.0) == 1.0);
  qcstat::RandomStream stream(88, 0);
  const auto xs = qcstat::sample(qcstat::exponential_spec(1.0), 1000, stream);
  CHECK(std::abs(qcstat::empirical_quantile(xs, 0.8) - std::log(5.0)) <= 0.1);
}

TEST_CASE("almost-sure limit") {
  CHECK(qcstat::as_limit(qcstat::exponential_spec(1.0), 0.8) ==
        doctest::Approx(0.5218875825).epsilon(1e-8));
  CHECK(qcstat::as_limit(qcstat::normal_spec(1.0, 0.25), 0.8) ==
        doctest::Approx(0.2699904801).epsilon(1e-8));
  CHECK(qcstat::as_limit(qcstat::gamma_spec(3.0, 1.0), 1e-9) ==
        doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(qcstat::as_limit(qcstat::normal_spec(0.0, 1.0), 0.5),
                  qcstat::degenerate_error);
}

TEST_CASE("exact cdf quadrature anchors") {
  // Top-share of two exponentials is Uniform(0.5, 1): F(lambda) = 2*lambda-1.
  const auto expo = qcstat::exponential_spec(1.0);
  for (double lambda : {0.55, 0.75, 0.95}) {
    CHECK(std::abs(qcstat::exact_cdf_quadrature(expo, 2, 1.0, lambda) -
                   (2.0 * lambda - 1.0)) <= 1e-6);
  }
  CHECK(qcstat::exact_cdf_quadrature(expo, 3, 0.6, 1.0 - 1e-6) ==
        doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("exact cdf quadrature argument errors") {
  const auto expo = qcstat::exponential_spec(1.0);
  CHECK_THROWS_AS(qcstat::exact_cdf_quadrature(expo, 7, 0.5, 0.5),
                  qcstat::capacity_error);
  CHECK_THROWS_AS(qcstat::exact_cdf_quadrature(expo, 1, 0.5, 0.5),
                  qcstat::domain_error);
  CHECK_THROWS_AS(qcstat::exact_cdf_quadrature(expo, 4, 0.5, 0.0),
                  qcstat::domain_error);
  CHECK_THROWS_AS(qcstat::exact_cdf_quadrature(expo, 4, 0.5, 1.0),
                  qcstat::domain_error);
  CHECK_THROWS_AS(qcstat::exact_cdf_quadrature(expo, 3, 0.1, 0.5),
                  qcstat::domain_error);
}

TEST_CASE("exact cdf quadrature is monotone in lambda") {
  const auto expo = qcstat::exponential_spec(1.0);
  double prev = -1.0;
  for (int i = 1; i <= 9; ++i) {
    const double f = qcstat::exact_cdf_quadrature(expo, 4, 0.5, i / 10.0);
    CHECK(f >= prev - 1e-12);
    prev = f;
  }
}

TEST_CASE("exact cdf monte carlo basics") {
  const auto expo = qcstat::exponential_spec(1.0);
  qcstat::RandomStream stream(12, 0);
  const auto [est, se] = qcstat::exact_cdf_mc(expo, 2, 1.0, 0.75, 1000000,
                                              stream, qcstat::ExactCdfEstimator::direct);
  CHECK(std::abs(est - 0.5) <= 3.0 * se);

  qcstat::RandomStream stream2(12, 0);
  const auto repeat = qcstat::exact_cdf_mc(expo, 2, 1.0, 0.75, 1000000, stream2,
                                           qcstat::ExactCdfEstimator::direct);
  CHECK(repeat.first == est);
  CHECK(repeat.second == se);

  qcstat::RandomStream stream3(12, 1);
  const auto [sup, sup_se] = qcstat::exact_cdf_mc(
      expo, 5, 0.8, 1.5, 1000, stream3, qcstat::ExactCdfEstimator::direct);
  CHECK(sup == 1.0);
  CHECK(sup_se == 0.0);
}

TEST_CASE("quadrature and both estimators form a consistent triangle") {
  struct Config {
    qcstat::DistributionSpec spec;
    int n;
    double p;
    double lambda;
  };
  const std::vector<Config> configs = {
      {qcstat::exponential_spec(1.0), 2, 1.0, 0.75},
      {qcstat::exponential_spec(1.0), 3, 0.6, 0.7},
      {qcstat::exponential_spec(1.0), 4, 0.5, 0.9},
      {qcstat::normal_spec(1.0, 0.25), 2, 1.0, 0.75},
      {qcstat::normal_spec(1.0, 0.25), 3, 0.6, 0.8},
      {qcstat::normal_spec(1.0, 0.25), 4, 0.5, 0.8},
  };
  std::uint64_t id = 0;
  for (const auto& c : configs) {
    CAPTURE(id);
    const double quad = qcstat::exact_cdf_quadrature(c.spec, c.n, c.p, c.lambda);
    qcstat::RandomStream sd(2218, id);
    const auto [direct, direct_se] = qcstat::exact_cdf_mc(
        c.spec, c.n, c.p, c.lambda, 100000, sd, qcstat::ExactCdfEstimator::direct);
    qcstat::RandomStream si(2218, 100 + id);
    const auto [integral, integral_se] =
        qcstat::exact_cdf_mc(c.spec, c.n, c.p, c.lambda, 100000, si,
                             qcstat::ExactCdfEstimator::integral);
    CHECK(std::abs(quad - direct) <= 4.0 * direct_se + 1e-5);
    CHECK(std::abs(quad - integral) <= 4.0 * integral_se + 1e-5);
    CHECK(std::abs(direct - integral) <=
          4.0 * (direct_se + integral_se) + 1e-5);
    ++id;
  }
}

TEST_CASE("asymptotic parameter values at p = 0.8") {
  for (const auto& pc : param_cases()) {
    CAPTURE(pc.label);
    const auto params = qcstat::asymptotic_params(pc.spec, 0.8, 1000);
    CHECK(params.mu_n == doctest::Approx(pc.mu_n).epsilon(5e-8));
    CHECK(params.sigma2_n == doctest::Approx(pc.sigma2_n).epsilon(5e-8));
    CHECK(params.c_n == doctest::Approx(pc.c_n).epsilon(5e-8));
    CHECK(std::abs(params.rho_n) <= 1.0);
    CHECK(params.sigma2_n >= 0.0);

    const auto t = qcstat::tail_moments(pc.spec, 0.8);
    if (t.q_p >= 0.0) CHECK(params.sigma2_n == t.b2);
  }
  CHECK_THROWS_AS(qcstat::asymptotic_params(qcstat::normal_spec(0.0, 1.0), 0.8, 10),
                  qcstat::degenerate_error);
}

TEST_CASE("covariance scale identity across families and quantiles") {
  for (const auto& pc : param_cases()) {
    CAPTURE(pc.label);
    for (double p : {0.5, 0.8, 0.95}) {
      const auto t = qcstat::tail_moments(pc.spec, p);
      const double lhs = t.a2 - t.mu * t.a;
      const double rhs = t.b2 - t.a_tilde * t.a;
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
  }
}

TEST_CASE("hinkley density shape") {
  const auto expo = qcstat::exponential_spec(1.0);
  const auto params = qcstat::asymptotic_params(expo, 0.8, 1000);
  const auto m = qcstat::moments(expo);
  const double limit = params.mu_n / m.mu;
  const double width = std::sqrt(params.sigma2_n / 1000.0) / std::abs(m.mu);

  double best_t = limit - 10.0 * width;
  double best_f = -1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double t = limit - 10.0 * width + i * (20.0 * width / 1000.0);
    const double f = qcstat::hinkley_pdf(params, m.mu, m.sigma2, t);
    CHECK(f >= 0.0);
    if (f > best_f) {
      best_f = f;
      best_t = t;
    }
  }
  CHECK(std::abs(best_t - 0.5219) <= 0.02);

  CHECK_THROWS_AS(qcstat::hinkley_pdf(params, 1.0, 0.0, 0.5), qcstat::domain_error);
}

TEST_CASE("hinkley density normalizes at every reference configuration") {
  for (const auto& pc : param_cases()) {
    CAPTURE(pc.label);
    const auto params = qcstat::asymptotic_params(pc.spec, 0.8, 1000);
    const auto m = qcstat::moments(pc.spec);
    const double limit = params.mu_n / m.mu;
    const double width = std::sqrt(params.sigma2_n / 1000.0) / std::abs(m.mu);
    const double mass = qcstat::adaptive_simpson(
        [&](double t) { return qcstat::hinkley_pdf(params, m.mu, m.sigma2, t); },
        limit - 10.0 * width, limit + 10.0 * width, 1e-9);
    CHECK(std::abs(mass - 1.0) <= 1e-3);
  }
}

TEST_CASE("lognormal density model") {
  const auto expo = qcstat::exponential_spec(1.0);
  const auto params = qcstat::asymptotic_params(expo, 0.8, 1000);
  const auto m = qcstat::moments(expo);
  const double ratio = params.mu_n / m.mu;
  const double log_sd = std::sqrt(1.74897988 / 1000.0);

  CHECK(qcstat::lognormal_pdf(params, m.mu, m.sigma2, -0.2) == 0.0);
  CHECK(qcstat::lognormal_pdf(params, m.mu, m.sigma2, 0.0) == 0.0);

  const double lo = ratio * std::exp(-12.0 * log_sd);
  const double hi = ratio * std::exp(12.0 * log_sd);
  const auto pdf = [&](double t) {
    return qcstat::lognormal_pdf(params, m.mu, m.sigma2, t);
  };
  CHECK(std::abs(qcstat::adaptive_simpson(pdf, lo, hi, 1e-10) - 1.0) <= 1e-6);
  CHECK(std::abs(qcstat::adaptive_simpson(pdf, lo, ratio, 1e-10) - 0.5) <= 1e-6);

  // Peak height encodes the log-scale: f(ratio) = 1/(ratio*sqrt(2*pi*s2/n)).
  const double s2 = 1000.0 / (2.0 * std::acos(-1.0) * ratio * ratio *
                              pdf(ratio) * pdf(ratio));
  CHECK(s2 == doctest::Approx(1.74897988).epsilon(1e-6));

  const auto neg = qcstat::asymptotic_params(qcstat::normal_spec(-1.0, 1.0), 0.8, 1000);
  CHECK_THROWS_AS(qcstat::lognormal_pdf(neg, -1.0, 1.0, 0.5), qcstat::domain_error);
}

TEST_CASE("lognormal model log-variance across families") {
  for (const auto& pc : param_cases()) {
    CAPTURE(pc.label);
    const auto params = qcstat::asymptotic_params(pc.spec, 0.8, 1000);
    const auto m = qcstat::moments(pc.spec);
    const double s2 = m.sigma2 / (m.mu * m.mu) +
                      params.sigma2_n / (params.mu_n * params.mu_n) -
                      2.0 * params.c_n / (params.mu_n * m.mu);
    CHECK(s2 == doctest::Approx(pc.s2).epsilon(1e-7));
  }
}

TEST_CASE("hinkley and lognormal models stay close") {
  for (const auto& pc : param_cases()) {
    CAPTURE(pc.label);
    const auto params = qcstat::asymptotic_params(pc.spec, 0.8, 1000);
    const auto m = qcstat::moments(pc.spec);
    CHECK(grid_l1(params, m.mu, m.sigma2) <= 0.05);
  }
}
