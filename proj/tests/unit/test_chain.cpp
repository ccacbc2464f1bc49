#include <doctest.h>

#include <random>

#include "chordmix/chain.hpp"
#include "chordmix/evolve.hpp"

using namespace chordmix;

TEST_CASE("drift-chord hub entries for n=10, k=4") {
  const auto k = build_kernel(ChainSpec::drift_chord(10, 4));
  CHECK(k.prob(4, 4) == 0.25);
  CHECK(k.prob(4, 10) == 0.25);
  CHECK(k.prob(10, 4) == 0.25);
  CHECK(k.prob(10, 10) == 0.25);
  CHECK(k.prob(4, 5) == 0.5);
  CHECK(k.prob(10, 1) == 0.5);
}

TEST_CASE("non-hub row has only the lazy drift entries") {
  const auto k = build_kernel(ChainSpec::drift_chord(10, 4));
  CHECK(k.prob(2, 3) == 0.5);
  CHECK(k.prob(2, 2) == 0.5);
  CHECK(k.row(2).size() == 2);
  for (int64_t v = 1; v <= 10; ++v) {
    if (v != 2 && v != 3) CHECK(k.prob(2, v) == 0.0);
  }
}

TEST_CASE("drift-chord support is 2n + 2") {
  for (int64_t n : {5, 10, 37, 200}) {
    for (int64_t kk : {int64_t{2}, n / 2, n - 2}) {
      const auto k = build_kernel(ChainSpec::drift_chord(n, kk));
      CHECK(k.nonzeros() == static_cast<std::size_t>(2 * n + 2));
      CHECK(k.max_row_support() <= 4);
    }
  }
}

TEST_CASE("every variant is doubly stochastic") {
  std::vector<ChainSpec> specs = {
      ChainSpec::drift_chord(100, 37), ChainSpec::lazy_cycle(64),
      ChainSpec::drift_no_chord(33),   ChainSpec::opposite_chords(64),
      ChainSpec::khub(50, {3, 17, 50}), ChainSpec::khub(12, {1, 2}),
  };
  for (const auto& s : specs) {
    const auto rep = verify_kernel(build_kernel(s), 1e-12);
    CAPTURE(s.describe());
    CHECK(rep.pass);
    CHECK(rep.max_row_deviation < 1e-12);
    CHECK(rep.max_col_deviation < 1e-12);
    CHECK(rep.min_entry >= 0.0);
    CHECK(rep.max_entry <= 1.0);
  }
}

TEST_CASE("random drift-chord kernels stay exact") {
  std::mt19937_64 gen(5);
  for (int i = 0; i < 40; ++i) {
    const int64_t n = std::uniform_int_distribution<int64_t>(5, 5000)(gen);
    const int64_t k = std::uniform_int_distribution<int64_t>(2, n - 2)(gen);
    const auto rep = verify_kernel(build_kernel(ChainSpec::drift_chord(n, k)));
    CHECK(rep.pass);
  }
}

TEST_CASE("corrupted kernel fails with the located deviation") {
  const auto good = build_kernel(ChainSpec::drift_chord(20, 7));
  auto trips = good.triplets();
  for (auto& t : trips) {
    if (t.row == 12 && t.col == 13) t.p += 1e-6;
  }
  const auto bad = Kernel::from_triplets(20, trips, good.spec());
  const auto rep = verify_kernel(bad, 1e-12);
  CHECK_FALSE(rep.pass);
  CHECK(rep.worst_row == 12);
  CHECK(rep.worst_col == 13);
  CHECK(rep.max_row_deviation == doctest::Approx(1e-6).epsilon(1e-3));
}

TEST_CASE("uniform is stationary") {
  for (const auto& s : {ChainSpec::drift_chord(100, 37), ChainSpec::opposite_chords(50)}) {
    const auto k = build_kernel(s);
    const auto u = Distribution::uniform(k.n());
    const auto next = step(k, u);
    for (int64_t v = 1; v <= k.n(); ++v) CHECK(std::abs(next.at(v) - u.at(v)) < 1e-12);
  }
}

TEST_CASE("two-hub khub at {k, n} equals drift-chord") {
  const auto a = build_kernel(ChainSpec::drift_chord(30, 11));
  const auto b = build_kernel(ChainSpec::khub(30, {11, 30}));
  for (int64_t u = 1; u <= 30; ++u) {
    for (int64_t v = 1; v <= 30; ++v) CHECK(a.prob(u, v) == b.prob(u, v));
  }
}

TEST_CASE("validation rejects bad specs") {
  CHECK_THROWS_AS(ChainSpec::drift_chord(4, 2).validate(), ValidationError);
  CHECK_THROWS_AS(ChainSpec::drift_chord(10, 1).validate(), ValidationError);
  CHECK_THROWS_AS(ChainSpec::drift_chord(10, 9).validate(), ValidationError);
  CHECK_THROWS_AS(build_kernel(ChainSpec::opposite_chords(11)), ValidationError);
  CHECK_THROWS_AS(build_kernel(ChainSpec::khub(10, {5})), ValidationError);
  CHECK_THROWS_AS(build_kernel(ChainSpec::khub(10, {5, 3})), ValidationError);
  CHECK_THROWS_AS(build_kernel(ChainSpec::khub(10, {0, 3})), ValidationError);
  CHECK_THROWS_AS(parse_variant("ring"), ValidationError);
}

TEST_CASE("kernel JSON round trip with exact dyadic strings") {
  const auto k = build_kernel(ChainSpec::drift_chord(10, 4));
  const std::string text = kernel_to_json(k);
  CHECK(text.find("\"0.25\"") != std::string::npos);
  CHECK(text.find("\"0.5\"") != std::string::npos);
  const auto back = kernel_from_json(text);
  CHECK(back.n() == 10);
  CHECK(back.spec().k == 4);
  for (int64_t u = 1; u <= 10; ++u) {
    for (int64_t v = 1; v <= 10; ++v) CHECK(back.prob(u, v) == k.prob(u, v));
  }
  CHECK_THROWS_AS(kernel_from_json("{not json"), ValidationError);
}
