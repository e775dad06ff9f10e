#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace collab {

struct CorrelationResult {
  std::string statistic;  // "kendall_tau_b" or "pearson_r"
  double value = 0.0;
  std::size_t n = 0;
};

/// Tie-corrected Kendall tau-b in O(n log n) (Knight's merge-sort method).
/// Throws DomainError for n < 2 or when either variable is constant.
CorrelationResult kendall_tau(std::span<const double> x, std::span<const double> y);

/// Product-moment correlation. Throws DomainError for n < 2 or zero variance.
CorrelationResult pearson_r(std::span<const double> x, std::span<const double> y);

struct KsResult {
  double d = 0.0;
  double p = 1.0;
};

/// Survival function of the Kolmogorov distribution, P(K > lambda).
double kolmogorov_survival(double lambda);

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value at
/// effective size n_a n_b / (n_a + n_b). Throws DomainError on an empty sample.
KsResult ks_test(std::span<const double> a, std::span<const double> b);

/// Significance marks: "***" p <= 0.001, "**" p <= 0.01, "*" p <= 0.1.
std::string p_stars(double p);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

/// Wilson score interval for a binomial proportion (default 95%).
Interval wilson_interval(std::size_t successes, std::size_t trials,
                         double z = 1.959963984540054);

/// Adjusted Rand index between two labelings of the same items.
double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

}  // namespace collab
