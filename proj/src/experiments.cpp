#include "chordmix/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "chordmix/gaps.hpp"
#include "chordmix/montecarlo.hpp"
#include "chordmix/parallel.hpp"

namespace chordmix {

namespace {

constexpr uint32_t kChoiceStream = 3;
constexpr uint32_t kSampleStream = 5;

std::string number_text(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

std::string k_text(const std::vector<int64_t>& k) {
  std::string s;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(k[i]);
  }
  return s;
}

bool has_random_choice(Variant v, const KPolicy& policy) {
  if (v == Variant::KHub) return true;
  return v == Variant::DriftChord && policy.kind == KPolicy::Kind::Good;
}

ChainSpec spec_for(const ScalingRequest& req, int64_t n, uint64_t seed) {
  switch (req.variant) {
    case Variant::DriftChord:
      return ChainSpec::drift_chord(n, choose_k(n, req.k_policy, seed, req.rho, req.gamma3));
    case Variant::LazyReversibleCycle:
      return ChainSpec::lazy_cycle(n);
    case Variant::DriftNoChord:
      return ChainSpec::drift_no_chord(n);
    case Variant::OppositeChordsDrift:
      return ChainSpec::opposite_chords(n);
    case Variant::KHub:
      return ChainSpec::khub(n, choose_hubs(n, req.hubs, seed));
  }
  throw ValidationError("unknown variant");
}

std::vector<int64_t> k_field(const ChainSpec& spec) {
  if (spec.variant == Variant::KHub) return spec.hubs;
  if (spec.k) return {*spec.k};
  return {};
}

}  // namespace

KPolicy KPolicy::parse(const std::string& text) {
  if (text == "good") return {Kind::Good, 0};
  if (text == "half") return {Kind::Half, 0};
  if (text.rfind("fixed:", 0) == 0) {
    const std::string num = text.substr(6);
    int64_t k = 0;
    auto res = std::from_chars(num.data(), num.data() + num.size(), k);
    if (res.ec != std::errc{} || res.ptr != num.data() + num.size()) {
      throw ValidationError("bad fixed k in '" + text + "'");
    }
    return {Kind::Fixed, k};
  }
  throw ValidationError("k policy must be good, half or fixed:K, got '" + text + "'");
}

std::string KPolicy::text() const {
  switch (kind) {
    case Kind::Good:
      return "good";
    case Kind::Half:
      return "half";
    case Kind::Fixed:
      return "fixed:" + std::to_string(fixed);
  }
  return "good";
}

int64_t choose_k(int64_t n, const KPolicy& policy, uint64_t seed, double rho, double gamma3) {
  switch (policy.kind) {
    case KPolicy::Kind::Fixed:
      return policy.fixed;
    case KPolicy::Kind::Half:
      return n / 2;
    case KPolicy::Kind::Good: {
      const auto rep = good_k_set(n, rho, gamma3);
      if (rep.good_k.empty()) {
        throw ComputationError("no good k at n = " + std::to_string(n));
      }
      auto gen = trial_engine(seed, static_cast<uint64_t>(n), kChoiceStream);
      std::uniform_int_distribution<std::size_t> pick(0, rep.good_k.size() - 1);
      return rep.good_k[pick(gen)];
    }
  }
  throw ValidationError("unknown k policy");
}

std::vector<int64_t> choose_hubs(int64_t n, int K, uint64_t seed) {
  if (K < 2 || K > n) throw ValidationError("khub needs 2 <= K <= n");
  auto gen = trial_engine(seed, static_cast<uint64_t>(n), kChoiceStream);
  std::uniform_int_distribution<int64_t> pick(1, n);
  std::set<int64_t> hubs;
  while (static_cast<int>(hubs.size()) < K) hubs.insert(pick(gen));
  return {hubs.begin(), hubs.end()};
}

ScalingResult scaling_run(const ScalingRequest& req) {
  if (req.n_grid.empty()) throw ValidationError("n grid is empty");
  if (!std::is_sorted(req.n_grid.begin(), req.n_grid.end()) ||
      std::adjacent_find(req.n_grid.begin(), req.n_grid.end()) != req.n_grid.end()) {
    throw ValidationError("n grid must be strictly increasing");
  }
  if (!(req.eps > 0.0 && req.eps < 1.0)) throw ValidationError("eps must lie in (0, 1)");
  if (req.seeds.empty()) throw ValidationError("at least one seed is required");

  struct Task {
    int64_t n;
    uint64_t seed;
  };
  std::vector<Task> tasks;
  const bool random = has_random_choice(req.variant, req.k_policy);
  for (int64_t n : req.n_grid) {
    if (random) {
      for (uint64_t s : req.seeds) tasks.push_back({n, s});
    } else {
      tasks.push_back({n, req.seeds.front()});
    }
  }

  std::vector<std::optional<ExperimentRecord>> done(tasks.size());
  std::vector<std::optional<FailedPoint>> failed(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t i) {
    const auto [n, seed] = tasks[i];
    const ChainSpec spec = spec_for(req, n, seed);
    const auto kernel = build_kernel(spec);
    const auto policy = parse_policy(req.policy, spec);
    const auto start = std::chrono::steady_clock::now();
    try {
      MixingOptions opt;
      opt.iteration_cap = req.iteration_cap;
      const auto res = mixing_time(kernel, req.eps, policy, opt);
      ExperimentRecord rec;
      rec.variant = std::string(variant_name(spec.variant));
      rec.n = n;
      rec.k = k_field(spec);
      rec.eps = req.eps;
      rec.t_mix = res.t;
      rec.policy = res.policy;
      rec.seed = seed;
      if (req.record_timing) {
        rec.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                               std::chrono::steady_clock::now() - start)
                               .count();
      }
      done[i] = rec;
    } catch (const MixingCapExceeded& e) {
      failed[i] = FailedPoint{std::string(variant_name(spec.variant)), n, k_field(spec), seed,
                              e.what()};
    }
  });

  ScalingResult out;
  for (auto& r : done) {
    if (r) out.records.push_back(std::move(*r));
  }
  for (auto& f : failed) {
    if (f) out.failures.push_back(std::move(*f));
  }
  return out;
}

FitResult fit_exponent(const std::vector<ExperimentRecord>& records, bool exact_only) {
  std::vector<std::pair<double, double>> pts;
  std::set<int64_t> distinct;
  for (const auto& r : records) {
    if (exact_only && r.policy != "exact") continue;
    if (r.t_mix <= 0 || r.n <= 0) continue;
    pts.emplace_back(std::log(static_cast<double>(r.n)), std::log(static_cast<double>(r.t_mix)));
    distinct.insert(r.n);
  }
  if (distinct.size() < 3) {
    throw ValidationError("exponent fit needs at least 3 distinct n with positive t_mix");
  }
  const auto m = static_cast<double>(pts.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
  }
  const double mx = sx / m;
  const double my = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (const auto& [x, y] : pts) {
    const double e = y - (fit.intercept + fit.slope * x);
    ss += e * e;
  }
  fit.residual_rms = std::sqrt(ss / m);
  fit.n_min = *distinct.begin();
  fit.n_max = *distinct.rbegin();
  fit.points = pts.size();
  return fit;
}

std::vector<int64_t> sample_ks(int64_t n, int count, uint64_t seed) {
  if (count < 1) throw ValidationError("k sample must be at least 1");
  if (count - 1 > n - 4) throw ValidationError("k sample larger than the available positions");
  std::set<int64_t> ks{n / 2};
  auto gen = trial_engine(seed, static_cast<uint64_t>(n), kSampleStream);
  std::uniform_int_distribution<int64_t> pick(2, n - 2);
  while (static_cast<int>(ks.size()) < count) ks.insert(pick(gen));
  return {ks.begin(), ks.end()};
}

LowerBoundReport lower_bound_probe(const std::vector<int64_t>& n_grid, double eps_star,
                                   int k_sample, uint64_t seed) {
  if (n_grid.empty()) throw ValidationError("n grid is empty");
  if (!(eps_star > 0.0 && eps_star < 1.0)) throw ValidationError("eps_star must lie in (0, 1)");
  struct Task {
    int64_t n;
    int64_t k;
  };
  std::vector<Task> tasks;
  for (int64_t n : n_grid) {
    for (int64_t k : sample_ks(n, k_sample, seed)) tasks.push_back({n, k});
  }
  LowerBoundReport rep;
  rep.eps_star = eps_star;
  rep.rows.resize(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t i) {
    const auto [n, k] = tasks[i];
    const auto spec = ChainSpec::drift_chord(n, k);
    const auto kernel = build_kernel(spec);
    const auto res = mixing_time(kernel, eps_star, default_policy(spec));
    rep.rows[i] = {n, k, res.t,
                   static_cast<double>(res.t) / std::pow(static_cast<double>(n), 1.5), res.policy};
  });
  for (int64_t n : n_grid) {
    double lo = std::numeric_limits<double>::infinity();
    double half = 0.0;
    for (const auto& row : rep.rows) {
      if (row.n != n) continue;
      lo = std::min(lo, row.scaled);
      if (row.k == n / 2) half = row.scaled;
    }
    rep.n_grid.push_back(n);
    rep.min_scaled.push_back(lo);
    rep.half_scaled.push_back(half);
  }
  const auto [mn, mx] = std::minmax_element(rep.min_scaled.begin(), rep.min_scaled.end());
  rep.ratio = *mn > 0.0 ? *mx / *mn : std::numeric_limits<double>::infinity();
  return rep;
}

ZigzagReport zigzag_scan(const GridConfig& config, const SelectionParams& params) {
  config.validate();
  const auto R0 = restrict_R0(exit_set(config).points, config.rho, config.n);
  auto points = select_R1(R0, config.rho, config.n);
  const auto V1 = image(points, config);
  const auto sel = build_selection(V1, config, params);

  ZigzagReport rep;
  rep.n = config.n;
  rep.k = config.k;
  rep.R1_size = points.size();
  rep.I_size = sel.I.size();
  std::vector<char> in_I(static_cast<std::size_t>(config.n) + 1, 0);
  for (int64_t v : sel.I) in_I[static_cast<std::size_t>(v)] = 1;

  std::vector<std::vector<char>> seen(points.size(),
                                      std::vector<char>(static_cast<std::size_t>(config.n) + 1, 0));
  rep.hits.assign(static_cast<std::size_t>(config.n), 0);
  for (int64_t i = 0; i < config.n; ++i) {
    for (std::size_t j = 0; j < points.size(); ++j) {
      const int64_t v = map_to_vertex(points[j], config);
      if (seen[j][static_cast<std::size_t>(v)]) rep.orbits_exact = false;
      seen[j][static_cast<std::size_t>(v)] = 1;
      rep.hits[static_cast<std::size_t>(i)] += in_I[static_cast<std::size_t>(v)];
      points[j] = advance_zigzag(points[j], config);
    }
    rep.total_hits += rep.hits[static_cast<std::size_t>(i)];
  }
  rep.orbit_checked = points.size();
  for (int64_t i = 0; i < config.n; ++i) {
    if (2 * rep.hits[static_cast<std::size_t>(i)] >= static_cast<int64_t>(rep.R1_size)) {
      rep.selected_shift = i;
      break;
    }
  }
  if (rep.selected_shift < 0) {
    throw ComputationError("no time shift puts half of R1 into I (|I| = " +
                           std::to_string(rep.I_size) + " of n = " + std::to_string(config.n) +
                           "); lower the hub clearance");
  }
  return rep;
}

KHubReport khub_probe(int K, const std::vector<int64_t>& n_grid, double eps,
                      const std::vector<uint64_t>& seeds, const std::string& policy) {
  ScalingRequest req;
  req.variant = Variant::KHub;
  req.n_grid = n_grid;
  req.eps = eps;
  req.seeds = seeds;
  req.hubs = K;
  req.policy = policy;
  KHubReport rep;
  rep.K = K;
  rep.records = scaling_run(req).records;
  rep.fit = fit_exponent(rep.records);
  rep.conjectured = 1.0 + 1.0 / static_cast<double>(K);
  return rep;
}

Format parse_format(const std::string& text) {
  if (text == "csv") return Format::Csv;
  if (text == "jsonl") return Format::Jsonl;
  throw ValidationError("format must be csv or jsonl, got '" + text + "'");
}

std::string render(const std::vector<ExperimentRecord>& records, Format format,
                   const Metadata& meta) {
  if (records.empty()) throw ValidationError("no records to emit");
  std::ostringstream out;
  if (format == Format::Csv) {
    out << "# schema " << kSchemaVersion << '\n';
    for (const auto& [k, v] : meta.entries) out << "# " << k << ": " << v << '\n';
    out << "variant,n,k,eps,t_mix,policy,seed,wall_time_ms\n";
    for (const auto& r : records) {
      out << r.variant << ',' << r.n << ',' << k_text(r.k) << ',' << number_text(r.eps) << ','
          << r.t_mix << ',' << r.policy << ',' << r.seed << ',' << r.wall_time_ms << '\n';
    }
    return out.str();
  }
  nlohmann::ordered_json head;
  head["schema"] = kSchemaVersion;
  auto m = nlohmann::ordered_json::object();
  for (const auto& [k, v] : meta.entries) m[k] = v;
  head["meta"] = m;
  out << head.dump() << '\n';
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["variant"] = r.variant;
    j["n"] = r.n;
    if (r.k.empty()) {
      j["k"] = nullptr;
    } else if (r.variant == "khub") {
      j["k"] = r.k;
    } else {
      j["k"] = r.k.front();
    }
    j["eps"] = r.eps;
    j["t_mix"] = r.t_mix;
    j["policy"] = r.policy;
    j["seed"] = r.seed;
    j["wall_time_ms"] = r.wall_time_ms;
    out << j.dump() << '\n';
  }
  return out.str();
}

void emit(const std::vector<ExperimentRecord>& records, Format format, const std::string& path,
          const Metadata& meta) {
  const std::string text = render(records, format, meta);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ComputationError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw ComputationError("failed writing '" + path + "'");
}

std::vector<ExperimentRecord> parse_jsonl(const std::string& text) {
  std::vector<ExperimentRecord> out;
  std::istringstream in(text);
  std::string line;
  int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      if (j.contains("meta")) continue;
      ExperimentRecord r;
      r.variant = j.at("variant").get<std::string>();
      r.n = j.at("n").get<int64_t>();
      const auto& k = j.at("k");
      if (k.is_array()) {
        r.k = k.get<std::vector<int64_t>>();
      } else if (!k.is_null()) {
        r.k = {k.get<int64_t>()};
      }
      r.eps = j.at("eps").get<double>();
      r.t_mix = j.at("t_mix").get<int64_t>();
      r.policy = j.at("policy").get<std::string>();
      r.seed = j.at("seed").get<uint64_t>();
      r.wall_time_ms = j.at("wall_time_ms").get<int64_t>();
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<ExperimentRecord> read_jsonl(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_jsonl(ss.str());
}

}  // namespace chordmix
