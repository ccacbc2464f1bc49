#pragma once

#include <cstdint>
#include <vector>

namespace chordmix {

/// Thread-safe log-gamma.
double log_gamma(double x);

/// log C(n, j); -inf outside 0 <= j <= n.
double log_choose(int64_t n, int64_t j);

/// Log pmf of Binom(n, p) for j = 0..n, anchored at the mode and extended
/// outward with the ratio recurrence.
std::vector<double> binomial_log_pmf(int64_t n, double p);

double log_sum_exp(const std::vector<double>& terms);

/// log [Binom(a, pa) * Binom(b, pb)](s).
double conv_log_point_mass(int64_t a, double pa, int64_t b, double pb, int64_t s);

/// Full log pmf of Binom(a, pa) * Binom(b, pb), indices 0..a+b.
std::vector<double> conv_log_pmf(int64_t a, double pa, int64_t b, double pb);

/// Full pmf by direct convolution in linear scale (tails may underflow to 0).
std::vector<double> conv_pmf(int64_t a, double pa, int64_t b, double pb);

}  // namespace chordmix
