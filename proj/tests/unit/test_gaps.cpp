#include <doctest.h>

#include <cmath>
#include <numbers>

#include "chordmix/gaps.hpp"
#include "oracles.hpp"

using namespace chordmix;

namespace {

// Per-k test written against the signed residue in (-n/2, n/2].
std::vector<int64_t> good_by_brute_force(int64_t n, double rho, double gamma3) {
  const int64_t M = static_cast<int64_t>(std::floor(std::sqrt(rho) * std::pow(n, 0.25))) - 1;
  const double delta = gamma3 / std::sqrt(rho) * std::pow(n, 0.75);
  std::vector<int64_t> out;
  for (int64_t k = 2; k <= n - 2; ++k) {
    bool ok = true;
    for (int64_t m = 1; m <= M && ok; ++m) {
      int64_t r = (m * k) % n;
      if (r > n / 2) r -= n;
      ok = std::abs(static_cast<double>(r)) >= delta;
    }
    if (ok) out.push_back(k);
  }
  return out;
}

}  // namespace

TEST_CASE("euler phi examples") {
  CHECK(euler_phi(1) == 1);
  CHECK(euler_phi(7) == 6);
  CHECK(euler_phi(12) == 4);
  CHECK_THROWS_AS(euler_phi(0), ValidationError);
}

TEST_CASE("euler phi agrees with gcd counting up to 10^4") {
  const auto table = phi_table(10'000);
  for (int64_t m = 1; m <= 10'000; ++m) {
    const int64_t expect = oracle::phi_by_gcd(m);
    CHECK(table[m] == expect);
    if (m % 97 == 0) CHECK(euler_phi(m) == expect);
  }
}

TEST_CASE("phi ratio sums") {
  CHECK(phi_ratio_sum(1).sum == doctest::Approx(1.0));
  double direct = 0.0;
  for (int64_t m = 1; m <= 10; ++m) direct += static_cast<double>(oracle::phi_by_gcd(m)) / m;
  CHECK(phi_ratio_sum(10).sum == doctest::Approx(direct).epsilon(1e-14));
  for (int64_t M : {100, 1000, 10'000, 100'000}) {
    const auto rep = phi_ratio_sum(M);
    CHECK(rep.leading == doctest::Approx(6.0 * M / (std::numbers::pi * std::numbers::pi)));
    CHECK(rep.ratio_to_log < 2.0);
  }
}

TEST_CASE("half chord is never good") {
  for (int64_t n : {100, 1000, 4096}) {
    CHECK_FALSE(is_good_k(n, n / 2, 1.0, 0.6));
    const auto rep = good_k_set(n, 1.0, 0.6);
    CHECK_FALSE(std::binary_search(rep.good_k.begin(), rep.good_k.end(), n / 2));
  }
}

TEST_CASE("good k set is symmetric and passes the brute-force test") {
  for (int64_t n : {100, 257, 1000, 3001}) {
    const auto rep = good_k_set(n, 1.0, 0.6);
    CHECK(rep.good_k == good_by_brute_force(n, 1.0, 0.6));
    for (int64_t k : rep.good_k) {
      CHECK(std::binary_search(rep.good_k.begin(), rep.good_k.end(), n - k));
    }
    CHECK(rep.fraction == doctest::Approx(static_cast<double>(rep.good_k.size()) / (n - 3)));
  }
}

TEST_CASE("interval union and per-k testing agree") {
  for (int64_t n = 10; n <= 2000; n += 37) {
    CHECK(exclusion_cover(n, 1.0, 0.6).complement == good_k_set(n, 1.0, 0.6).good_k);
  }
  for (int64_t n : {4096, 9973, 10'000}) {
    CHECK(exclusion_cover(n, 1.0, 0.6).complement == good_k_set(n, 1.0, 0.6).good_k);
  }
  CHECK(exclusion_cover(100, 1.0, 0.6).complement == good_by_brute_force(100, 1.0, 0.6));
}

TEST_CASE("good fraction stays above the lemma bound") {
  const double bound = 1.0 - 12.0 * 0.6 / (std::numbers::pi * std::numbers::pi);
  for (int64_t n : {1000, 10'000, 100'000}) {
    const auto rep = good_k_set(n, 1.0, 0.6);
    CHECK(rep.bound == doctest::Approx(bound));
    CHECK(rep.fraction >= 0.2);
    CHECK(rep.fraction >= bound - 0.05);
  }
}

TEST_CASE("cover measure follows the leading term") {
  for (int64_t n : {1000, 10'000, 100'000}) {
    const auto rep = exclusion_cover(n, 1.0, 0.6);
    const double leading = 2.0 * 0.6 * 6.0 / (std::numbers::pi * std::numbers::pi) * n;
    const double scale = std::pow(n, 0.75) * std::log(n);
    CHECK(rep.measure <= leading + 2.0 * scale);
    CHECK(rep.measure > 0.0);
    CHECK(rep.merged <= rep.intervals);
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(good_k_set(9, 1.0, 0.6), ValidationError);
  CHECK_THROWS_AS(good_k_set(100, 0.0, 0.6), ValidationError);
  CHECK_THROWS_AS(good_k_set(100, 1.0, -1.0), ValidationError);
  CHECK_FALSE(good_k_set(100, 1.0, 0.4).warnings.empty());
  CHECK_FALSE(good_k_set(100, 1.0, 0.9).warnings.empty());
  CHECK(good_k_set(100, 1.0, 0.6).warnings.empty());
}

TEST_CASE("residues and multipliers") {
  CHECK(cycle_residue(7, 10) == 3);
  CHECK(cycle_residue(-3, 10) == 3);
  CHECK(cycle_residue(20, 10) == 0);
  CHECK(max_multiplier(10'000, 1.0) == 9);
  CHECK(separation(10'000, 1.0, 0.6) == doctest::Approx(600.0));
}
