#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "chordmix/experiments.hpp"
#include "chordmix/gaps.hpp"

using namespace chordmix;

namespace {

std::vector<ExperimentRecord> synthetic(double c, double exponent, double noise, uint64_t seed,
                                        int64_t factor = 2) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> jitter(1.0 - noise, 1.0 + noise);
  std::vector<ExperimentRecord> out;
  for (int64_t n = 64; n <= 8192; n *= factor) {
    ExperimentRecord r;
    r.variant = "drift-chord";
    r.n = n;
    r.t_mix = std::llround(c * std::pow(static_cast<double>(n), exponent) *
                           (noise > 0 ? jitter(gen) : 1.0));
    r.policy = "exact";
    out.push_back(r);
  }
  return out;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("fits recover exact power laws") {
  const auto sq = fit_exponent(synthetic(1.0, 2.0, 0.0, 0));
  CHECK(std::abs(sq.slope - 2.0) <= 1e-9);
  CHECK(sq.n_min == 64);
  CHECK(sq.n_max == 8192);
  // Powers of 4 keep 7 n^{3/2} integral.
  const auto f = fit_exponent(synthetic(7.0, 1.5, 0.0, 0, 4));
  CHECK(std::abs(f.slope - 1.5) <= 1e-9);
  CHECK(f.residual_rms < 1e-9);
}

TEST_CASE("fits tolerate multiplicative noise") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    CHECK(std::abs(fit_exponent(synthetic(3.0, 1.5, 0.1, seed)).slope - 1.5) <= 0.1);
  }
}

TEST_CASE("fits need three distinct sizes") {
  auto recs = synthetic(1.0, 2.0, 0.0, 0);
  recs.resize(2);
  CHECK_THROWS(fit_exponent(recs));
  recs.push_back(recs[1]);
  CHECK_THROWS(fit_exponent(recs));
}

TEST_CASE("k policies") {
  CHECK(KPolicy::parse("good").kind == KPolicy::Kind::Good);
  CHECK(KPolicy::parse("half").kind == KPolicy::Kind::Half);
  const auto fixed = KPolicy::parse("fixed:17");
  CHECK(fixed.kind == KPolicy::Kind::Fixed);
  CHECK(fixed.fixed == 17);
  CHECK(fixed.text() == "fixed:17");
  CHECK_THROWS_AS(KPolicy::parse("fixed:"), ValidationError);
  CHECK_THROWS_AS(KPolicy::parse("best"), ValidationError);

  CHECK(choose_k(512, KPolicy::parse("half"), 0, 1.0, 0.6) == 256);
  CHECK(choose_k(512, fixed, 0, 1.0, 0.6) == 17);
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const int64_t k = choose_k(1024, KPolicy{}, seed, 1.0, 0.6);
    CHECK(is_good_k(1024, k, 1.0, 0.6));
    CHECK(k == choose_k(1024, KPolicy{}, seed, 1.0, 0.6));
  }
}

TEST_CASE("hub draws are distinct and sorted") {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const auto hubs = choose_hubs(100, 4, seed);
    REQUIRE(hubs.size() == 4);
    CHECK(std::set<int64_t>(hubs.begin(), hubs.end()).size() == 4);
    CHECK(std::is_sorted(hubs.begin(), hubs.end()));
    for (auto h : hubs) {
      CHECK(h >= 1);
      CHECK(h <= 100);
    }
  }
}

TEST_CASE("lazy cycle scaling is quadratic") {
  ScalingRequest req;
  req.variant = Variant::LazyReversibleCycle;
  req.n_grid = {16, 32, 64, 128};
  req.seeds = {0, 1};
  const auto res = scaling_run(req);
  CHECK(res.failures.empty());
  REQUIRE(res.records.size() == 4);
  for (const auto& r : res.records) {
    CHECK(r.k.empty());
    CHECK(r.t_mix >= 0);
    CHECK(r.wall_time_ms == 0);
    CHECK_FALSE(r.policy.empty());
  }
  const auto fit = fit_exponent(res.records);
  CHECK(fit.slope >= 1.8);
  CHECK(fit.slope <= 2.2);
}

TEST_CASE("drift chord scaling records good chords") {
  ScalingRequest req;
  req.n_grid = {64, 128, 256};
  req.seeds = {3, 4};
  const auto res = scaling_run(req);
  REQUIRE(res.records.size() == 6);
  for (const auto& r : res.records) {
    REQUIRE(r.k.size() == 1);
    CHECK(is_good_k(r.n, r.k[0], 1.0, 0.6));
  }
  CHECK(std::is_sorted(res.records.begin(), res.records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.n, a.seed) < std::tie(b.n, b.seed);
  }));
  CHECK(scaling_run(req).records == res.records);
}

TEST_CASE("iteration cap failures are recorded") {
  ScalingRequest req;
  req.variant = Variant::LazyReversibleCycle;
  req.n_grid = {32, 64};
  req.iteration_cap = 50;
  const auto res = scaling_run(req);
  CHECK(res.records.empty());
  CHECK(res.failures.size() == 2);
}

TEST_CASE("lower bound probe") {
  const auto rep = lower_bound_probe({64, 128, 256}, 0.05, 6, 1);
  REQUIRE(rep.min_scaled.size() == 3);
  for (std::size_t i = 0; i < rep.n_grid.size(); ++i) {
    CHECK(rep.min_scaled[i] > 0.0);
    CHECK(rep.half_scaled[i] >= rep.min_scaled[i]);
  }
  CHECK(rep.ratio >= 1.0);
  CHECK(rep.ratio <= 3.0);
  const auto ks = sample_ks(256, 6, 1);
  CHECK(ks.size() == 6);
  CHECK(std::find(ks.begin(), ks.end(), 128) != ks.end());
  CHECK(std::set<int64_t>(ks.begin(), ks.end()).size() == 6);
}

TEST_CASE("zigzag scan at n=200, k=37") {
  const auto c = GridConfig::for_scale(200, 37);
  SelectionParams p;
  p.clearance = 0.1;
  const auto rep = zigzag_scan(c, p);
  REQUIRE(rep.hits.size() == 200);
  CHECK(rep.orbits_exact);
  CHECK(rep.orbit_checked >= 1);
  CHECK(rep.total_hits >= static_cast<int64_t>(rep.R1_size * rep.I_size) - 10 * 200);
  REQUIRE(rep.selected_shift >= 0);
  CHECK(2 * rep.hits[static_cast<std::size_t>(rep.selected_shift)] >=
        static_cast<int64_t>(rep.R1_size));
  int64_t sum = 0;
  for (auto h : rep.hits) sum += h;
  CHECK(sum == rep.total_hits);
}

TEST_CASE("khub probe reports an exponent") {
  const auto rep = khub_probe(3, {64, 128, 256}, 0.25, {0});
  CHECK(rep.K == 3);
  CHECK(rep.conjectured == doctest::Approx(4.0 / 3.0));
  CHECK(rep.records.size() == 3);
  for (const auto& r : rep.records) CHECK(r.k.size() == 3);
  CHECK(rep.fit.slope > 0.5);
  CHECK_THROWS_AS(khub_probe(1, {64, 128, 256}, 0.25, {0}), ValidationError);
}

TEST_CASE("emission formats") {
  std::vector<ExperimentRecord> recs(3);
  recs[0] = {"drift-chord", 256, {97}, 0.25, 5000, "exact", 7, 0};
  recs[1] = {"lazy-cycle", 64, {}, 0.25, 1234, "exact", 0, 12};
  recs[2] = {"khub", 128, {3, 40, 99}, 0.1, 777, "heuristic", 18446744073709551615ULL, 0};
  Metadata meta;
  meta.add("command", "scaling");

  const auto jsonl = render(recs, Format::Jsonl, meta);
  CHECK(jsonl.rfind("{\"schema\":1", 0) == 0);
  CHECK(parse_jsonl(jsonl) == recs);
  CHECK(render(recs, Format::Jsonl, meta) == jsonl);

  const auto csv = render(recs, Format::Csv, meta);
  CHECK(csv.find("variant,n,k,eps,t_mix,policy,seed,wall_time_ms\n") != std::string::npos);
  CHECK(csv.find("khub,128,3;40;99,") != std::string::npos);

  const auto path = temp_path("chordmix_emit_test.jsonl");
  emit(recs, Format::Jsonl, path, meta);
  CHECK(read_jsonl(path) == recs);
  std::filesystem::remove(path);

  CHECK_THROWS_AS(emit({}, Format::Jsonl, path, meta), ValidationError);
  CHECK_THROWS_AS(emit(recs, Format::Csv, "/nonexistent-dir/x.csv", meta), ComputationError);
  CHECK(parse_format("csv") == Format::Csv);
  CHECK(parse_format("jsonl") == Format::Jsonl);
  CHECK_THROWS_AS(parse_format("xml"), ValidationError);
}
