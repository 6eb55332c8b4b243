#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "doctest.h"
#include "qcstat/dists.hpp"
#include "qcstat/rng.hpp"

namespace {

using qcstat::DistributionSpec;

struct FamilyCase {
  const char* label;
  DistributionSpec spec;
  double mu;
  double var;
  // Tail functionals at p = 0.8.
  double q80;
  double a80;
  double a2_80;
  double b2_80;
};

// Reference values from closed forms where available and high-accuracy
// numeric tail integrals otherwise, frozen to ten decimals.
std::vector<FamilyCase> reference_cases() {
  return {
      {"normal", qcstat::normal_spec(1.0, 0.25), 1.0, 0.0625, 1.2104053084,
       0.2699904801, 0.3672073288, 0.2943124694},
      {"lognormal", qcstat::lognormal_spec(1.0, 0.25), 2.8045693562,
       0.5072882142, 3.3548441235, 0.7770119025, 3.0671428758, 2.4633953793},
      {"exponential", qcstat::exponential_spec(1.0), 1.0, 1.0, 1.6094379124,
       0.5218875825, 1.5618332438, 1.2894665950},
      {"rayleigh", qcstat::rayleigh_spec(0.25), 0.3133285343, 0.0268252296,
       0.4485306445, 0.1125144428, 0.0652359478, 0.0525764480},
      {"gpd", qcstat::gpd_spec(0.25, 0.25, 1.0), 4.0 / 3.0, 2.0 / 9.0,
       1.4953487812, 0.3987596750, 0.8944271910, 0.7354179126},
      {"gamma", qcstat::gamma_spec(3.0, 1.0), 3.0, 3.0, 4.2790298601,
       1.1428088246, 6.8939304673, 5.5879184577},
  };
}

double ks_distance(std::vector<double> draws, const DistributionSpec& spec) {
  std::sort(draws.begin(), draws.end());
  const double n = static_cast<double>(draws.size());
  double d = 0.0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const double f = qcstat::eval_cdf(spec, draws[i]);
    d = std::max(d, std::max(f - i / n, (i + 1) / n - f));
  }
  return d;
}

}  // namespace

TEST_CASE("cdf closed-form points") {
  CHECK(qcstat::eval_cdf(qcstat::exponential_spec(1.0), std::log(5.0)) ==
        doctest::Approx(0.8).epsilon(1e-13));
  CHECK(qcstat::eval_cdf(qcstat::normal_spec(1.0, 0.25), 1.0) ==
        doctest::Approx(0.5).epsilon(1e-13));
  CHECK(qcstat::eval_cdf(qcstat::gpd_spec(0.25, 0.25, 1.0), 1.0) == 0.0);
}

TEST_CASE("pdf closed-form points") {
  CHECK(qcstat::eval_pdf(qcstat::exponential_spec(1.0), 0.0) ==
        doctest::Approx(1.0).epsilon(1e-13));
  CHECK(qcstat::eval_pdf(qcstat::normal_spec(1.0, 0.25), 1.0) ==
        doctest::Approx(1.5957691216057308).epsilon(1e-12));
  CHECK(qcstat::eval_pdf(qcstat::rayleigh_spec(0.25), -0.5) == 0.0);
}

TEST_CASE("quantile closed-form points") {
  CHECK(qcstat::eval_quantile(qcstat::exponential_spec(1.0), 0.8) ==
        doctest::Approx(std::log(5.0)).epsilon(1e-12));
  CHECK(qcstat::eval_quantile(qcstat::normal_spec(1.0, 0.25), 0.5) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(qcstat::eval_quantile(qcstat::rayleigh_spec(0.25), 0.8) ==
        doctest::Approx(0.25 * std::sqrt(-2.0 * std::log(0.2))).epsilon(1e-12));
}

TEST_CASE("quantile-cdf roundtrip") {
  for (const auto& fc : reference_cases()) {
    CAPTURE(fc.label);
    for (int g = 1; g <= 99; ++g) {
      const double u = g / 100.0;
      const double x = qcstat::eval_quantile(fc.spec, u);
      CHECK(std::abs(qcstat::eval_cdf(fc.spec, x) - u) <= 1e-10);
    }
  }
}

TEST_CASE("moments closed forms") {
  for (const auto& fc : reference_cases()) {
    CAPTURE(fc.label);
    const auto m = qcstat::moments(fc.spec);
    CHECK(m.mu == doctest::Approx(fc.mu).epsilon(1e-9));
    CHECK(m.sigma2 == doctest::Approx(fc.var).epsilon(1e-9));
  }
}

TEST_CASE("tail moments at p = 0.8") {
  for (const auto& fc : reference_cases()) {
    CAPTURE(fc.label);
    const auto t = qcstat::tail_moments(fc.spec, 0.8);
    CHECK(t.q_p == doctest::Approx(fc.q80).epsilon(5e-9));
    CHECK(t.a == doctest::Approx(fc.a80).epsilon(5e-8));
    CHECK(t.a2 == doctest::Approx(fc.a2_80).epsilon(5e-8));
    CHECK(t.b2 == doctest::Approx(fc.b2_80).epsilon(5e-8));
    CHECK(t.a_tilde == doctest::Approx(t.mu - t.a).epsilon(1e-12));
    if (t.q_p >= 0.0) {
      CHECK(t.a_minus == 0.0);
      CHECK(t.a_plus == t.a);
    }
  }
}

TEST_CASE("tail moments collapse to plain moments as p -> 0") {
  for (const auto& fc : reference_cases()) {
    CAPTURE(fc.label);
    const auto t = qcstat::tail_moments(fc.spec, 1e-6);
    CHECK(t.a == doctest::Approx(fc.mu).epsilon(1e-6));
    CHECK(t.a2 == doctest::Approx(fc.mu * fc.mu + fc.var).epsilon(1e-6));
  }
}

TEST_CASE("negative-threshold split identities") {
  // Threshold below zero exercises the positive/negative part decomposition.
  const auto spec = qcstat::normal_spec(-1.0, 1.0);
  for (double p : {0.3, 0.8}) {
    const auto t = qcstat::tail_moments(spec, p);
    CAPTURE(p);
    CHECK(t.q_p < 0.0);
    CHECK(t.a_plus >= 0.0);
    CHECK(t.a_minus >= 0.0);
    CHECK(t.a == doctest::Approx(t.a_plus - t.a_minus).epsilon(1e-9));
    CHECK(t.a2 == doctest::Approx(t.b2_plus + t.a_plus * t.a_plus +
                                  t.b2_minus + t.a_minus * t.a_minus)
                      .epsilon(1e-9));
    CHECK(t.b2 == doctest::Approx(t.a2 - t.a * t.a).epsilon(1e-9));
  }
}

TEST_CASE("sampling basics") {
  qcstat::RandomStream empty_stream(1, 0);
  CHECK(qcstat::sample(qcstat::exponential_spec(1.0), 0, empty_stream).empty());

  qcstat::RandomStream s1(42, 7);
  qcstat::RandomStream s2(42, 7);
  const auto a = qcstat::sample(qcstat::gamma_spec(3.0, 1.0), 1000, s1);
  const auto b = qcstat::sample(qcstat::gamma_spec(3.0, 1.0), 1000, s2);
  CHECK(a == b);

  qcstat::RandomStream s3(9, 1);
  const auto big = qcstat::sample(qcstat::exponential_spec(1.0), 1000000, s3);
  double sum = 0.0;
  for (double x : big) sum += x;
  CHECK(std::abs(sum / static_cast<double>(big.size()) - 1.0) <= 4e-3);
}

TEST_CASE("samples match their distribution (Kolmogorov-Smirnov)") {
  const std::size_t n = 100000;
  const double critical = 1.63 / std::sqrt(static_cast<double>(n));
  std::uint64_t stream_id = 0;
  for (const auto& fc : reference_cases()) {
    CAPTURE(fc.label);
    qcstat::RandomStream stream(2024, stream_id++);
    CHECK(ks_distance(qcstat::sample(fc.spec, n, stream), fc.spec) < critical);
  }
}
