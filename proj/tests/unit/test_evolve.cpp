#include <doctest.h>

#include <random>

#include "chordmix/evolve.hpp"
#include "oracles.hpp"

using namespace chordmix;

TEST_CASE("step from a delta follows the kernel") {
  const auto k = build_kernel(ChainSpec::drift_chord(10, 4));
  const auto a = step(k, Distribution::delta(10, 1));
  CHECK(a.at(1) == 0.5);
  CHECK(a.at(2) == 0.5);
  const auto h = step(k, Distribution::delta(10, 4));
  CHECK(h.at(5) == 0.5);
  CHECK(h.at(4) == 0.25);
  CHECK(h.at(10) == 0.25);
  CHECK(h.mass() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("uniform is a fixed point of step") {
  const auto k = build_kernel(ChainSpec::drift_chord(64, 20));
  const auto u = step(k, Distribution::uniform(64));
  for (int64_t v = 1; v <= 64; ++v) CHECK(u.at(v) == doctest::Approx(1.0 / 64).epsilon(1e-12));
}

TEST_CASE("dimension mismatch is rejected") {
  const auto k = build_kernel(ChainSpec::drift_chord(10, 4));
  CHECK_THROWS_AS(step(k, Distribution::uniform(11)), ValidationError);
  CHECK_THROWS_AS(tv_distance(Distribution::uniform(3), Distribution::uniform(4)), ValidationError);
}

TEST_CASE("total variation basics") {
  const auto mu = Distribution::delta(4, 1);
  CHECK(tv_distance(mu, mu) == 0.0);
  CHECK(tv_distance(Distribution::delta(4, 1), Distribution::delta(4, 2)) == 1.0);
  const Distribution half(std::vector<double>{0.5, 0.5, 0.0, 0.0});
  CHECK(tv_distance(half, mu) == 0.5);
  std::mt19937_64 gen(1);
  auto random_dist = [&] {
    std::vector<double> w(6);
    double s = 0;
    for (auto& x : w) s += (x = std::uniform_real_distribution<double>(0, 1)(gen));
    for (auto& x : w) x /= s;
    return Distribution(w);
  };
  for (int i = 0; i < 50; ++i) {
    const auto a = random_dist(), b = random_dist(), c = random_dist();
    CHECK(tv_distance(a, b) == doctest::Approx(tv_distance(b, a)));
    CHECK(tv_distance(a, c) <= tv_distance(a, b) + tv_distance(b, c) + 1e-15);
  }
}

TEST_CASE("mass is conserved over a million steps") {
  const auto k = build_kernel(ChainSpec::drift_chord(7, 3));
  const auto d = evolve(k, Distribution::delta(7, 2), 1'000'000);
  CHECK(std::abs(d.mass() - 1.0) <= 1e-9);
}

TEST_CASE("d(0) = 1 - 1/n") {
  const auto k = build_kernel(ChainSpec::drift_chord(12, 5));
  CHECK(distance_profile(k, 0, StartPolicy::exact()).value == doctest::Approx(1.0 - 1.0 / 12));
}

TEST_CASE("d and dbar match brute force at n=5, k=2") {
  const auto k = build_kernel(ChainSpec::drift_chord(5, 2));
  for (int64_t t : {1, 2, 3, 7}) {
    CAPTURE(t);
    CHECK(distance_profile(k, t, StartPolicy::exact()).value ==
          doctest::Approx(oracle::d_bruteforce(k, t)).epsilon(1e-12));
    CHECK(dbar(k, t, StartPolicy::exact()).value ==
          doctest::Approx(oracle::dbar_bruteforce(k, t)).epsilon(1e-12));
  }
}

TEST_CASE("mixing time matches a linear scan") {
  for (const auto& s : {ChainSpec::drift_chord(5, 2), ChainSpec::drift_chord(9, 4),
                        ChainSpec::lazy_cycle(8), ChainSpec::opposite_chords(10)}) {
    const auto k = build_kernel(s);
    for (double eps : {0.5, 0.25, 0.1}) {
      CAPTURE(s.describe());
      CAPTURE(eps);
      CHECK(mixing_time(k, eps, StartPolicy::exact()).t == oracle::tmix_scan(k, eps, 5000));
    }
  }
}

TEST_CASE("eps at least d(0) gives zero or one") {
  const auto k = build_kernel(ChainSpec::drift_chord(10, 4));
  const auto r = mixing_time(k, 0.95, StartPolicy::exact());
  CHECK(distance_profile(k, r.t, StartPolicy::exact()).value <= 0.95);
  CHECK(r.t <= 1);
}

TEST_CASE("bisection brackets the threshold") {
  const auto k = build_kernel(ChainSpec::drift_chord(40, 13));
  for (double eps : {0.3, 0.1, 0.01}) {
    const auto r = mixing_time(k, eps, StartPolicy::exact());
    CHECK(distance_profile(k, r.t, StartPolicy::exact()).value <= eps);
    CHECK(distance_profile(k, r.t - 1, StartPolicy::exact()).value > eps);
  }
}

TEST_CASE("sparse and dense engines agree") {
  const auto k = build_kernel(ChainSpec::drift_chord(60, 22));
  const auto dense = mixing_time(k, 0.1, StartPolicy::exact());
  std::vector<int64_t> all(60);
  for (int64_t v = 1; v <= 60; ++v) all[static_cast<std::size_t>(v - 1)] = v;
  const auto sparse = mixing_time(k, 0.1, StartPolicy::heuristic(all));
  CHECK(dense.t == sparse.t);
  CHECK(sparse.lower_bound);
  CHECK_FALSE(dense.lower_bound);
}

TEST_CASE("heuristic start set gives a lower bound") {
  const auto spec = ChainSpec::drift_chord(128, 45);
  const auto k = build_kernel(spec);
  const auto exact = mixing_time(k, 0.25, StartPolicy::exact());
  const auto heur = mixing_time(k, 0.25, StartPolicy::heuristic(heuristic_starts(spec)));
  CHECK(heur.t <= exact.t);
  CHECK(heur.policy == "heuristic");
}

TEST_CASE("default policy switches above 2048") {
  CHECK(default_policy(ChainSpec::drift_chord(2048, 700)).is_exact());
  CHECK_FALSE(default_policy(ChainSpec::drift_chord(2049, 700)).is_exact());
  const auto starts = heuristic_starts(ChainSpec::drift_chord(4096, 1000));
  CHECK(std::find(starts.begin(), starts.end(), 1000) != starts.end());
  CHECK(std::find(starts.begin(), starts.end(), 4096) != starts.end());
}

TEST_CASE("lazy cycle mixing scales quadratically") {
  const auto a = mixing_time(build_kernel(ChainSpec::lazy_cycle(64)), 0.25, StartPolicy::exact());
  const auto b = mixing_time(build_kernel(ChainSpec::lazy_cycle(128)), 0.25, StartPolicy::exact());
  const double ratio = static_cast<double>(b.t) / static_cast<double>(a.t);
  CHECK(ratio >= 3.4);
  CHECK(ratio <= 4.6);
}

TEST_CASE("profile relations on a sampled curve") {
  const auto k = build_kernel(ChainSpec::drift_chord(48, 17));
  double prev = 2.0;
  for (int64_t t = 0; t <= 300; t += 7) {
    const double d = distance_profile(k, t, StartPolicy::exact()).value;
    const double db = dbar(k, t, StartPolicy::exact()).value;
    CHECK(d <= prev + 1e-12);
    CHECK(d <= db + 1e-12);
    CHECK(db <= 2 * d + 1e-12);
    prev = d;
  }
  for (auto [s, t] : {std::pair<int64_t, int64_t>{10, 20}, {30, 45}, {60, 60}}) {
    const double lhs = dbar(k, s + t, StartPolicy::exact()).value;
    CHECK(lhs <= dbar(k, s, StartPolicy::exact()).value * dbar(k, t, StartPolicy::exact()).value + 1e-9);
  }
}

TEST_CASE("iteration cap reports the bracket") {
  const auto k = build_kernel(ChainSpec::lazy_cycle(64));
  MixingOptions opt;
  opt.iteration_cap = 100;
  try {
    mixing_time(k, 0.01, StartPolicy::exact(), opt);
    FAIL("expected the cap to be hit");
  } catch (const MixingCapExceeded& e) {
    CHECK(e.cap() == 100);
    CHECK(e.lower() == 64);
  }
}

TEST_CASE("curve CSV has the declared header") {
  const auto k = build_kernel(ChainSpec::drift_chord(10, 4));
  const auto r = mixing_time(k, 0.25, StartPolicy::exact());
  const auto csv = curve_to_csv(r.curve);
  CHECK(csv.rfind("t,d,policy\n", 0) == 0);
  for (std::size_t i = 1; i < r.curve.times.size(); ++i) {
    CHECK(r.curve.times[i] > r.curve.times[i - 1]);
    CHECK(r.curve.distances[i] <= r.curve.distances[i - 1] + 1e-12);
  }
}
