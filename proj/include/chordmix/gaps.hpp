#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chordmix/errors.hpp"

namespace chordmix {

/// Euler's totient by trial-division factorization. Throws on m < 1.
int64_t euler_phi(int64_t m);

/// phi(0..M) by a linear sieve; entry 0 is 0.
std::vector<int64_t> phi_table(int64_t M);

struct PhiSumReport {
  int64_t M = 0;
  double sum = 0.0;        // S(M) = sum_{m<=M} phi(m)/m
  double leading = 0.0;    // (6/pi^2) M
  double deviation = 0.0;  // |S(M) - leading|
  double ratio_to_log = 0.0;  // deviation / log M, 0 at M = 1
};

PhiSumReport phi_ratio_sum(int64_t M);

/// min(x mod n, n - x mod n), the distance of x from 0 on the n-cycle.
int64_t cycle_residue(int64_t x, int64_t n);

/// Largest multiplier checked: floor(sqrt(rho) n^{1/4}) - 1.
int64_t max_multiplier(int64_t n, double rho);
/// Required separation (gamma3 / sqrt(rho)) n^{3/4}.
double separation(int64_t n, double rho, double gamma3);

/// True when every multiple m k, 1 <= m <= max_multiplier, keeps at least
/// the separation from 0 on the cycle.
bool is_good_k(int64_t n, int64_t k, double rho, double gamma3);

struct GapReport {
  int64_t n = 0;
  double rho = 1.0;
  double gamma3 = 0.6;
  int64_t max_multiplier = 0;
  double separation = 0.0;
  std::vector<int64_t> good_k;  // sorted, within [2, n-2]
  double fraction = 0.0;        // |good_k| / (n - 3)
  double fraction_full = 0.0;   // good share of [1, n]
  double bound = 0.0;           // 1 - 12 gamma3 / pi^2
  std::vector<std::string> warnings;
};

/// Rejects n < 10 and non-positive rho or gamma3; gamma3 outside
/// (1/2, pi^2/12) only adds a warning.
GapReport good_k_set(int64_t n, double rho, double gamma3);

struct CoverReport {
  double measure = 0.0;  // Lebesgue measure of the union within [0, n]
  int64_t intervals = 0;
  int64_t merged = 0;
  std::vector<int64_t> complement;  // integers of [2, n-2] outside the union
};

/// Union of the open intervals ((i n - delta)/m, (i n + delta)/m) over
/// 1 <= m <= max_multiplier, 0 <= i <= m.
CoverReport exclusion_cover(int64_t n, double rho, double gamma3);

}  // namespace chordmix
