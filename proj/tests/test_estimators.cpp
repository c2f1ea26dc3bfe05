#include <doctest.h>

#include "bsdtest/estimators.hpp"
#include "bsdtest/model.hpp"
#include "oracles.hpp"

using namespace bsdtest;

TEST_CASE("estimate_p at zero data") {
  const auto e = estimate_p(VectorXd::Zero(100), {0.25});
  CHECK(e.raw == doctest::Approx(1.0 - std::pow(100.0, 0.25)).epsilon(1e-14));
  CHECK(e.raw == doctest::Approx(1.0 - 3.16227766016838).epsilon(1e-13));
  CHECK(e.clamped == 0.01);

  const auto single = estimate_p(VectorXd::Zero(1), {0.25});
  CHECK(single.raw == 0.0);
  CHECK(single.clamped == 0.5);
}

TEST_CASE("estimate_p is even in each coordinate") {
  std::mt19937_64 rng(1);
  const VectorXd x = oracle::random_vector(50, rng, 3.0);
  VectorXd flipped = x;
  for (Eigen::Index i = 0; i < 50; i += 3) flipped(i) = -flipped(i);
  CHECK(estimate_p(x).raw == doctest::Approx(estimate_p(flipped).raw).epsilon(1e-14));
}

TEST_CASE("estimate_v") {
  VectorXd x(4);
  // mean(x^2) = 1 + p V with p = 0.25, V = 8.
  x << 3, 1, 1, 1;
  const auto e = estimate_v(x, 0.25);
  CHECK(e.raw == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(e.clamped == e.raw);

  const auto low = estimate_v(VectorXd::Constant(4, 0.5), 0.25);
  CHECK(low.raw < 0.0);
  CHECK(low.clamped == 1e-6);

  CHECK_THROWS_AS(estimate_v(x, 0.0), DomainError);
}

TEST_CASE("estimator config validation and clamping range") {
  CHECK_THROWS_AS(estimate_p(VectorXd::Zero(3), {0.5}), DomainError);
  CHECK_THROWS_AS(estimate_p(VectorXd::Zero(3), {0.0}), DomainError);
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 200; ++rep) {
    const Eigen::Index m = 1 + static_cast<Eigen::Index>(rng() % 300);
    const VectorXd x = oracle::random_vector(m, rng, 1.0 + static_cast<double>(rep % 7));
    const auto p = estimate_p(x);
    CHECK(p.clamped > 0.0);
    CHECK(p.clamped < 1.0);
    const auto v = estimate_v(x, p.clamped);
    CHECK(v.clamped > 0.0);
    CHECK_NOTHROW((MixtureParams{p.clamped, v.clamped, 1.0}.validate()));
  }
}

TEST_CASE("Monte Carlo: estimators are close to the truth under independence") {
  const DatasetSampler sampler(CovarianceFamily::identity(10000), {0.1, 25.0, 1.0});
  double ratio_p = 0.0, ratio_v = 0.0;
  const int reps = 100;
  for (int r = 0; r < reps; ++r) {
    const auto d = sampler.sample(2024, static_cast<std::uint64_t>(r));
    ratio_p += estimate_p(d.x, {0.25}).raw / 0.1;
    ratio_v += estimate_v(d.x, 0.1).raw / 25.0;
  }
  ratio_p /= reps;
  ratio_v /= reps;
  CHECK(ratio_p >= 0.8);
  CHECK(ratio_p <= 1.2);
  CHECK(ratio_v >= 0.85);
  CHECK(ratio_v <= 1.15);
}

TEST_CASE("Monte Carlo: bias of p_hat is -p m^{-V gamma} under correlation") {
  const double p = 0.1, v = 2.0, gamma = 0.25;
  const Eigen::Index m = 1000;
  const DatasetSampler sampler(CovarianceFamily::intraclass(m, 0.3), {p, v, 1.0});
  std::vector<double> est;
  for (int r = 0; r < 10000; ++r)
    est.push_back(estimate_p(sampler.sample(55, static_cast<std::uint64_t>(r)).x, {gamma}).raw);
  double mean = 0.0;
  for (double e : est) mean += e;
  mean /= static_cast<double>(est.size());
  double ss = 0.0;
  for (double e : est) ss += (e - mean) * (e - mean);
  const double se = std::sqrt(ss / static_cast<double>(est.size() - 1) / static_cast<double>(est.size()));
  const double expected = p * (1.0 - std::pow(static_cast<double>(m), -v * gamma));
  CHECK(std::abs(mean - expected) < 3.0 * se);
}

TEST_CASE("cosine_moment") {
  CHECK(cosine_moment(1, 1, 0, 100, 0.25) == doctest::Approx(std::pow(100.0, -0.5)).epsilon(1e-14));
  CHECK(cosine_moment(1, 1, 1, 100, 0.25) == doctest::Approx(0.5 * (std::pow(100.0, -1.0) + 1.0)).epsilon(1e-14));

  // Bivariate normal draws, rho = 0.5, m = 100, gamma = 0.2.
  const double rho = 0.5, m = 100, gamma = 0.2;
  const double t = std::sqrt(2.0 * gamma * std::log(m));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  const int draws = 1000000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double z1 = n(rng);
    const double z2 = rho * z1 + std::sqrt(1.0 - rho * rho) * n(rng);
    const double c = std::cos(t * z1) * std::cos(t * z2);
    sum += c;
    sum_sq += c * c;
  }
  const double mean = sum / draws;
  const double se = std::sqrt((sum_sq / draws - mean * mean) / draws);
  CHECK(std::abs(mean - cosine_moment(1, 1, rho, m, gamma)) < 3.0 * se);
}

TEST_CASE("weak dependence condition") {
  CHECK(weak_dependence_condition(CovarianceFamily::identity(100), 0.1, 0.25) == 0.0);

  // Closed forms agree with the dense pairwise sum.
  for (const auto& fam : {CovarianceFamily::intraclass(40, 0.2), CovarianceFamily::block(40, 6, 0.4),
                          CovarianceFamily::ar1(40, 0.7)}) {
    const auto dense = CovarianceFamily::from_covariance(build_covariance(fam));
    CHECK(weak_dependence_condition(fam, 0.1, 0.25) ==
          doctest::Approx(weak_dependence_condition(dense, 0.1, 0.25)).epsilon(1e-10));
  }

  // Vanishing intraclass correlation and fixed-size blocks: the condition
  // shrinks along m = 1e3 .. 1e6 with p = m^{-0.3} (block is not yet
  // monotone below 1e3).
  double prev_ic = INFINITY, prev_block = INFINITY;
  for (double m : {1e3, 1e4, 1e5, 1e6}) {
    const auto n = static_cast<Eigen::Index>(m);
    const double p = std::pow(m, -0.3);
    const double ic = weak_dependence_condition(CovarianceFamily::intraclass(n, 1.0 / std::sqrt(m)), p, 0.25);
    const double bl = weak_dependence_condition(CovarianceFamily::block(n, 5, 0.5), p, 0.25);
    CHECK(ic < prev_ic);
    CHECK(bl < prev_block);
    prev_ic = ic;
    prev_block = bl;
  }
}
