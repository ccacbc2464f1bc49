#include "chordmix/binomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chordmix/errors.hpp"

namespace chordmix {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double log_gamma(double x) {
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double log_choose(int64_t n, int64_t j) {
  if (n < 0 || j < 0 || j > n) return kNegInf;
  return log_gamma(static_cast<double>(n) + 1.0) -
         log_gamma(static_cast<double>(j) + 1.0) -
         log_gamma(static_cast<double>(n - j) + 1.0);
}

std::vector<double> binomial_log_pmf(int64_t n, double p) {
  if (n < 0) throw ValidationError("binomial size must be non-negative");
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("binomial p must lie in (0, 1)");
  std::vector<double> out(static_cast<std::size_t>(n) + 1);
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  const double odds = lp - lq;
  const int64_t mode = std::min<int64_t>(
      n, static_cast<int64_t>(std::floor(static_cast<double>(n + 1) * p)));
  out[static_cast<std::size_t>(mode)] = log_choose(n, mode) +
                                        static_cast<double>(mode) * lp +
                                        static_cast<double>(n - mode) * lq;
  for (int64_t j = mode; j < n; ++j) {
    out[static_cast<std::size_t>(j + 1)] =
        out[static_cast<std::size_t>(j)] +
        std::log(static_cast<double>(n - j) / static_cast<double>(j + 1)) + odds;
  }
  for (int64_t j = mode; j > 0; --j) {
    out[static_cast<std::size_t>(j - 1)] =
        out[static_cast<std::size_t>(j)] -
        std::log(static_cast<double>(n - j + 1) / static_cast<double>(j)) - odds;
  }
  return out;
}

double log_sum_exp(const std::vector<double>& terms) {
  double m = kNegInf;
  for (double t : terms) m = std::max(m, t);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - m);
  return m + std::log(s);
}

double conv_log_point_mass(int64_t a, double pa, int64_t b, double pb, int64_t s) {
  if (a < 0 || b < 0) throw ValidationError("binomial sizes must be non-negative");
  if (s < 0 || s > a + b) return kNegInf;
  const auto la = binomial_log_pmf(a, pa);
  const auto lb = binomial_log_pmf(b, pb);
  std::vector<double> terms;
  const int64_t lo = std::max<int64_t>(0, s - b);
  const int64_t hi = std::min(a, s);
  terms.reserve(static_cast<std::size_t>(std::max<int64_t>(0, hi - lo + 1)));
  for (int64_t j = lo; j <= hi; ++j) {
    terms.push_back(la[static_cast<std::size_t>(j)] + lb[static_cast<std::size_t>(s - j)]);
  }
  return log_sum_exp(terms);
}

std::vector<double> conv_log_pmf(int64_t a, double pa, int64_t b, double pb) {
  const auto la = binomial_log_pmf(a, pa);
  const auto lb = binomial_log_pmf(b, pb);
  std::vector<double> out(static_cast<std::size_t>(a + b) + 1);
  std::vector<double> terms;
  for (int64_t s = 0; s <= a + b; ++s) {
    terms.clear();
    for (int64_t j = std::max<int64_t>(0, s - b); j <= std::min(a, s); ++j) {
      terms.push_back(la[static_cast<std::size_t>(j)] + lb[static_cast<std::size_t>(s - j)]);
    }
    out[static_cast<std::size_t>(s)] = log_sum_exp(terms);
  }
  return out;
}

std::vector<double> conv_pmf(int64_t a, double pa, int64_t b, double pb) {
  const auto la = binomial_log_pmf(a, pa);
  const auto lb = binomial_log_pmf(b, pb);
  std::vector<double> fa(la.size()), fb(lb.size());
  std::transform(la.begin(), la.end(), fa.begin(), [](double x) { return std::exp(x); });
  std::transform(lb.begin(), lb.end(), fb.begin(), [](double x) { return std::exp(x); });
  std::vector<double> out(static_cast<std::size_t>(a + b) + 1, 0.0);
  for (std::size_t i = 0; i < fa.size(); ++i) {
    const double w = fa[i];
    if (w == 0.0) continue;
    double* dst = out.data() + i;
    for (std::size_t j = 0; j < fb.size(); ++j) dst[j] += w * fb[j];
  }
  return out;
}

}  // namespace chordmix
