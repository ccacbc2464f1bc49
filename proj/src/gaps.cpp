#include "chordmix/gaps.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace chordmix {

int64_t euler_phi(int64_t m) {
  if (m < 1) throw ValidationError("euler_phi needs m >= 1, got " + std::to_string(m));
  int64_t result = m;
  int64_t rest = m;
  for (int64_t p = 2; p * p <= rest; ++p) {
    if (rest % p != 0) continue;
    while (rest % p == 0) rest /= p;
    result -= result / p;
  }
  if (rest > 1) result -= result / rest;
  return result;
}

std::vector<int64_t> phi_table(int64_t M) {
  if (M < 0) throw ValidationError("phi_table needs M >= 0");
  std::vector<int64_t> phi(static_cast<std::size_t>(M) + 1);
  std::vector<int64_t> primes;
  if (M >= 1) phi[1] = 1;
  for (int64_t i = 2; i <= M; ++i) {
    auto& pi = phi[static_cast<std::size_t>(i)];
    if (pi == 0) {
      pi = i - 1;
      primes.push_back(i);
    }
    for (int64_t p : primes) {
      const int64_t ip = i * p;
      if (ip > M) break;
      if (i % p == 0) {
        phi[static_cast<std::size_t>(ip)] = pi * p;
        break;
      }
      phi[static_cast<std::size_t>(ip)] = pi * (p - 1);
    }
  }
  return phi;
}

PhiSumReport phi_ratio_sum(int64_t M) {
  if (M < 1) throw ValidationError("phi_ratio_sum needs M >= 1");
  const auto phi = phi_table(M);
  PhiSumReport rep;
  rep.M = M;
  // Kahan summation keeps the 1e5-term sum exact to a few ulps.
  double sum = 0.0;
  double carry = 0.0;
  for (int64_t m = 1; m <= M; ++m) {
    const double term =
        static_cast<double>(phi[static_cast<std::size_t>(m)]) / static_cast<double>(m) - carry;
    const double next = sum + term;
    carry = (next - sum) - term;
    sum = next;
  }
  rep.sum = sum;
  rep.leading = 6.0 / (std::numbers::pi * std::numbers::pi) * static_cast<double>(M);
  rep.deviation = std::abs(rep.sum - rep.leading);
  rep.ratio_to_log = M > 1 ? rep.deviation / std::log(static_cast<double>(M)) : 0.0;
  return rep;
}

int64_t cycle_residue(int64_t x, int64_t n) {
  const int64_t r = ((x % n) + n) % n;
  return std::min(r, n - r);
}

int64_t max_multiplier(int64_t n, double rho) {
  const auto width =
      static_cast<int64_t>(std::floor(std::sqrt(rho) * std::pow(static_cast<double>(n), 0.25)));
  return std::max<int64_t>(width - 1, 0);
}

double separation(int64_t n, double rho, double gamma3) {
  return gamma3 / std::sqrt(rho) * std::pow(static_cast<double>(n), 0.75);
}

bool is_good_k(int64_t n, int64_t k, double rho, double gamma3) {
  const int64_t top = max_multiplier(n, rho);
  const double delta = separation(n, rho, gamma3);
  for (int64_t m = 1; m <= top; ++m) {
    if (static_cast<double>(cycle_residue(m * k, n)) < delta) return false;
  }
  return true;
}

namespace {

void check_gap_inputs(int64_t n, double rho, double gamma3) {
  if (n < 10) throw ValidationError("gap analysis needs n >= 10, got " + std::to_string(n));
  if (!(rho > 0.0)) throw ValidationError("rho must be positive");
  if (!(gamma3 > 0.0)) throw ValidationError("gamma3 must be positive");
}

// Largest integer D with D < delta.
int64_t strict_floor(double delta) {
  return static_cast<int64_t>(std::ceil(delta)) - 1;
}

int64_t floor_div(int64_t a, int64_t b) {
  return a >= 0 ? a / b : -((-a + b - 1) / b);
}

}  // namespace

GapReport good_k_set(int64_t n, double rho, double gamma3) {
  check_gap_inputs(n, rho, gamma3);
  GapReport rep;
  rep.n = n;
  rep.rho = rho;
  rep.gamma3 = gamma3;
  rep.max_multiplier = max_multiplier(n, rho);
  rep.separation = separation(n, rho, gamma3);
  rep.bound = 1.0 - 12.0 * gamma3 / (std::numbers::pi * std::numbers::pi);
  if (gamma3 <= 0.5) {
    rep.warnings.push_back("gamma3 <= 1/2: the overlap argument for dbar needs gamma3 > 1/2");
  }
  if (gamma3 >= std::numbers::pi * std::numbers::pi / 12.0) {
    rep.warnings.push_back("gamma3 >= pi^2/12: the lower bound on the good fraction is not positive");
  }
  if (rep.max_multiplier < 1) {
    rep.warnings.push_back("no multiplier to test: every k is good");
  }
  for (int64_t k = 2; k <= n - 2; ++k) {
    if (is_good_k(n, k, rho, gamma3)) rep.good_k.push_back(k);
  }
  int64_t full = static_cast<int64_t>(rep.good_k.size());
  for (int64_t k : {int64_t{1}, n - 1, n}) {
    if (is_good_k(n, k, rho, gamma3)) ++full;
  }
  rep.fraction = static_cast<double>(rep.good_k.size()) / static_cast<double>(n - 3);
  rep.fraction_full = static_cast<double>(full) / static_cast<double>(n);
  return rep;
}

CoverReport exclusion_cover(int64_t n, double rho, double gamma3) {
  check_gap_inputs(n, rho, gamma3);
  const int64_t top = max_multiplier(n, rho);
  const double delta = separation(n, rho, gamma3);
  const int64_t reach = strict_floor(delta);
  const auto nd = static_cast<double>(n);

  CoverReport rep;
  std::vector<std::pair<double, double>> spans;
  std::vector<int64_t> hits(static_cast<std::size_t>(n) + 2, 0);
  for (int64_t m = 1; m <= top; ++m) {
    const auto md = static_cast<double>(m);
    for (int64_t i = 0; i <= m; ++i) {
      const double centre = static_cast<double>(i) * nd;
      const double lo = std::max((centre - delta) / md, 0.0);
      const double hi = std::min((centre + delta) / md, nd);
      if (hi > lo) spans.emplace_back(lo, hi);
      ++rep.intervals;
      // Integers k with |m k - i n| <= reach, i.e. strictly inside the span.
      const int64_t first = std::max<int64_t>(-floor_div(-(i * n - reach), m), 0);
      const int64_t last = std::min<int64_t>(floor_div(i * n + reach, m), n);
      if (first <= last) {
        hits[static_cast<std::size_t>(first)] += 1;
        hits[static_cast<std::size_t>(last) + 1] -= 1;
      }
    }
  }
  std::sort(spans.begin(), spans.end());
  double cur_lo = 0.0;
  double cur_hi = -1.0;
  for (const auto& [lo, hi] : spans) {
    if (lo > cur_hi) {
      if (cur_hi > cur_lo) rep.measure += cur_hi - cur_lo;
      cur_lo = lo;
      cur_hi = hi;
      ++rep.merged;
    } else {
      cur_hi = std::max(cur_hi, hi);
    }
  }
  if (cur_hi > cur_lo) rep.measure += cur_hi - cur_lo;

  int64_t covered = 0;
  for (int64_t k = 0; k <= n; ++k) {
    covered += hits[static_cast<std::size_t>(k)];
    if (k >= 2 && k <= n - 2 && covered == 0) rep.complement.push_back(k);
  }
  return rep;
}

}  // namespace chordmix
