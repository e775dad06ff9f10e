#include <random>

#include "collab/error.hpp"
#include "collab/stats.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace collab;

TEST_CASE("kendall tau-b matches pair counting, ties included") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 60;
    std::vector<double> x(n), y(n);
    const int levels = trial % 3 == 0 ? 4 : 1000;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(rng() % levels);
      y[i] = static_cast<double>(rng() % levels);
    }
    bool constant = std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; }) ||
                    std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; });
    if (constant) {
      CHECK_THROWS_AS(kendall_tau(x, y), DomainError);
      continue;
    }
    CHECK(std::fabs(kendall_tau(x, y).value - oracle::kendall_tau_b(x, y)) < 1e-12);
  }
}

TEST_CASE("kendall and pearson hand values") {
  std::vector<double> x{1, 2, 3, 4}, up{10, 20, 30, 40}, down{4, 3, 2, 1};
  CHECK(kendall_tau(x, up).value == doctest::Approx(1.0));
  CHECK(kendall_tau(x, down).value == doctest::Approx(-1.0));
  CHECK(pearson_r(x, up).value == doctest::Approx(1.0));
  CHECK(pearson_r(x, std::vector<double>{1, 3, 2, 4}).value == doctest::Approx(0.8));
  CHECK_THROWS_AS(kendall_tau(std::vector<double>{1}, std::vector<double>{2}), DomainError);
  CHECK_THROWS_AS(pearson_r(x, std::vector<double>{1, 1, 1, 1}), DomainError);
}

TEST_CASE("ks statistic matches exhaustive sup") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(1 + rng() % 40), b(1 + rng() % 40);
    const int levels = trial % 2 ? 5 : 10000;
    for (auto& v : a) v = static_cast<double>(rng() % levels);
    for (auto& v : b) v = static_cast<double>(rng() % levels) + (trial % 4 == 1 ? 2 : 0);
    auto r = ks_test(a, b);
    CHECK(std::fabs(r.d - oracle::ks_statistic(a, b)) < 1e-12);
    CHECK(r.p >= 0.0);
    CHECK(r.p <= 1.0);
  }
  std::vector<double> same{1, 2, 3};
  CHECK(ks_test(same, same).d == 0.0);
  CHECK(ks_test(same, same).p == 1.0);
  CHECK_THROWS_AS(ks_test(same, std::vector<double>{}), DomainError);
}

TEST_CASE("kolmogorov survival is continuous across the series switch") {
  CHECK(kolmogorov_survival(0.0) == 1.0);
  CHECK(kolmogorov_survival(1.17999) == doctest::Approx(kolmogorov_survival(1.18001)).epsilon(1e-4));
  CHECK(kolmogorov_survival(1.3580986) == doctest::Approx(0.05).epsilon(1e-4));
  CHECK(kolmogorov_survival(10.0) < 1e-80);
}

TEST_CASE("p stars") {
  CHECK(p_stars(0.0005) == "***");
  CHECK(p_stars(0.001) == "***");
  CHECK(p_stars(0.005) == "**");
  CHECK(p_stars(0.05) == "*");
  CHECK(p_stars(0.5) == "");
}

TEST_CASE("wilson interval") {
  auto w = wilson_interval(1, 4);
  CHECK(w.low == doctest::Approx(0.04558726));
  CHECK(w.high == doctest::Approx(0.69935514));
  CHECK(wilson_interval(0, 10).low == 0.0);
  CHECK(wilson_interval(10, 10).high == 1.0);
  CHECK_THROWS_AS(wilson_interval(0, 0), DomainError);
}

TEST_CASE("adjusted rand index matches pair counting") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> a(2 + rng() % 40), b(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = static_cast<int>(rng() % 4);
      b[i] = trial % 5 == 0 ? a[i] : static_cast<int>(rng() % 3);
    }
    CHECK(adjusted_rand_index(a, b) == doctest::Approx(oracle::adjusted_rand(a, b)).epsilon(1e-12));
  }
  std::vector<int> x{0, 0, 1, 1}, y{5, 5, 2, 2};
  CHECK(adjusted_rand_index(x, y) == doctest::Approx(1.0));
}
