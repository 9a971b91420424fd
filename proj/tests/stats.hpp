#pragma once

// Test-only statistics: Welch's t-test and chi-square goodness of fit.

#include <cmath>
#include <span>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace qrmab::testing {

struct Welch {
  double diff = 0.0;  // mean_a - mean_b
  double se = 0.0;    // sqrt(var_a / n_a + var_b / n_b)
  double t = 0.0;
  double df = 0.0;
  double p_two_sided = 1.0;
};

inline Welch welch(double mean_a, double sd_a, double n_a, double mean_b, double sd_b,
                   double n_b) {
  Welch w;
  const double va = sd_a * sd_a / n_a;
  const double vb = sd_b * sd_b / n_b;
  w.diff = mean_a - mean_b;
  w.se = std::sqrt(va + vb);
  if (w.se == 0.0) {
    w.p_two_sided = w.diff == 0.0 ? 1.0 : 0.0;
    return w;
  }
  w.t = w.diff / w.se;
  w.df = (va + vb) * (va + vb) / (va * va / (n_a - 1.0) + vb * vb / (n_b - 1.0));
  const boost::math::students_t dist(w.df);
  w.p_two_sided = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(w.t)));
  return w;
}

/// p-value of Pearson's statistic for observed counts against expected counts.
inline double chi_square_p(std::span<const double> observed, std::span<const double> expected) {
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double d = observed[i] - expected[i];
    stat += d * d / expected[i];
  }
  const boost::math::chi_squared dist(static_cast<double>(observed.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace qrmab::testing
