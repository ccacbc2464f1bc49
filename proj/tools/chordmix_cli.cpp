// Command-line front end: one subcommand per library operation.
#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

#include "chordmix/chain.hpp"
#include "chordmix/evolve.hpp"
#include "chordmix/experiments.hpp"
#include "chordmix/gaps.hpp"
#include "chordmix/grid.hpp"
#include "chordmix/montecarlo.hpp"

using namespace chordmix;
using ojson = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "chordmix 0.1.0";

enum class Level { Error, Warn, Info };
Level g_level = Level::Warn;

void warn(const std::string& msg) {
  if (g_level >= Level::Warn) std::cerr << "warning: " << msg << '\n';
}
void info(const std::string& msg) {
  if (g_level >= Level::Info) std::cerr << msg << '\n';
}

std::string num(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

// Echo of every option of the subcommand, in declaration order.
Metadata metadata_for(const CLI::App* sub) {
  Metadata meta;
  meta.add("version", kVersion);
  meta.add("command", sub->get_name());
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help") continue;
    std::string value;
    if (!opt->results().empty()) {
      for (std::size_t i = 0; i < opt->results().size(); ++i) {
        if (i) value += ',';
        value += opt->results()[i];
      }
    } else {
      value = opt->get_default_str();
    }
    if (value.empty()) continue;
    meta.add(name, value);
  }
  return meta;
}

ojson meta_json(const Metadata& meta) {
  ojson m = ojson::object();
  for (const auto& [k, v] : meta.entries) m[k] = v;
  return m;
}

std::string csv_header(const Metadata& meta) {
  std::string s;
  for (const auto& [k, v] : meta.entries) s += "# " + k + ": " + v + "\n";
  return s;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ComputationError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw ComputationError("failed writing '" + path + "'");
}

std::vector<int64_t> parse_list(const std::string& text) {
  std::vector<int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    int64_t v = 0;
    auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (res.ec != std::errc{} || res.ptr != item.data() + item.size()) {
      throw ValidationError("bad integer '" + item + "' in list '" + text + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw ValidationError("empty list");
  return out;
}

struct ChainArgs {
  std::string variant = "drift-chord";
  int64_t n = 0;
  int64_t k = 0;
  std::string hubs;

  void add_to(CLI::App* app) {
    app->add_option("--variant", variant,
                    "drift-chord, lazy-cycle, drift-no-chord, opposite-chords or khub")
        ->capture_default_str();
    app->add_option("--n", n, "number of vertices")->required();
    app->add_option("--k", k, "chord hub position (drift-chord)");
    app->add_option("--hubs", hubs, "comma-separated hub list (khub)");
  }

  ChainSpec spec() const {
    switch (parse_variant(variant)) {
      case Variant::DriftChord:
        return ChainSpec::drift_chord(n, k);
      case Variant::LazyReversibleCycle:
        return ChainSpec::lazy_cycle(n);
      case Variant::DriftNoChord:
        return ChainSpec::drift_no_chord(n);
      case Variant::OppositeChordsDrift:
        return ChainSpec::opposite_chords(n);
      case Variant::KHub:
        return ChainSpec::khub(n, parse_list(hubs));
    }
    throw ValidationError("unknown variant");
  }
};

void check_gamma3(double gamma3) {
  if (!(gamma3 > 0.0) || gamma3 >= std::numbers::pi * std::numbers::pi / 12.0) {
    throw ValidationError("gamma3 must lie in (0, pi^2/12) = (0, " +
                          num(std::numbers::pi * std::numbers::pi / 12.0) + ")");
  }
  if (gamma3 <= 0.5) warn("gamma3 <= 1/2 is outside the range the gap lemma assumes");
}

ojson point_json(const ExitPoint& r) {
  ojson j;
  j["x"] = r.x;
  j["y"] = r.y;
  j["h"] = std::string(1, dir_char(r.h));
  j["x_prime"] = r.x_prime;
  j["y_prime"] = r.y_prime;
  return j;
}

std::string json_text(const ojson& body, const Metadata& meta) {
  ojson j;
  j["meta"] = meta_json(meta);
  for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
  return j.dump(2) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixing experiments for the drifting cycle with a chord"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  std::string level = "warn";
  app.add_option("--log-level", level, "error, warn or info")
      ->check(CLI::IsMember({"error", "warn", "info"}))
      ->capture_default_str();

  std::function<void()> run;
  const CLI::App* active = nullptr;
  auto activate = [&](CLI::App* sub, std::function<void()> fn) {
    sub->callback([&, sub, fn] {
      active = sub;
      run = fn;
    });
  };

  // kernel
  auto* kernel_cmd = app.add_subcommand("kernel", "Build a transition kernel and export it as JSON");
  ChainArgs kernel_args;
  std::string kernel_out;
  kernel_args.add_to(kernel_cmd);
  kernel_cmd->add_option("--out", kernel_out, "output path (stdout when omitted)");
  activate(kernel_cmd, [&] {
    const auto kernel = build_kernel(kernel_args.spec());
    const auto rep = verify_kernel(kernel);
    if (!rep.pass) throw ComputationError("kernel failed the stochasticity check");
    ojson body = ojson::parse(kernel_to_json(kernel));
    write_output(kernel_out, json_text(body, metadata_for(active)));
  });

  // mix
  auto* mix_cmd = app.add_subcommand("mix", "Mixing time by doubling and bisection");
  ChainArgs mix_args;
  double mix_eps = 0.25;
  std::string mix_policy = "auto";
  std::string mix_out;
  int64_t mix_cap = 0;
  mix_args.add_to(mix_cmd);
  mix_cmd->add_option("--eps", mix_eps, "distance threshold in (0,1)")->capture_default_str();
  mix_cmd->add_option("--policy", mix_policy, "exact, heuristic or auto")
      ->check(CLI::IsMember({"exact", "heuristic", "auto"}))
      ->capture_default_str();
  mix_cmd->add_option("--cap", mix_cap, "iteration cap (0: 64 n^2)")->capture_default_str();
  mix_cmd->add_option("--out", mix_out, "CSV of the evaluated curve (t,d,policy)");
  activate(mix_cmd, [&] {
    if (!(mix_eps > 0.0 && mix_eps < 1.0)) throw ValidationError("eps must lie in (0, 1)");
    const auto spec = mix_args.spec();
    const auto kernel = build_kernel(spec);
    MixingOptions opt;
    opt.iteration_cap = mix_cap;
    const auto res = mixing_time(kernel, mix_eps, parse_policy(mix_policy, spec), opt);
    std::cout << "t_mix=" << res.t << " policy=" << res.policy
              << (res.lower_bound ? " (lower bound)" : "") << '\n';
    if (!mix_out.empty()) {
      write_output(mix_out, csv_header(metadata_for(active)) + curve_to_csv(res.curve));
    }
  });

  // exitprobs
  auto* exit_cmd = app.add_subcommand("exitprobs", "Exit set with closed-form and oracle probabilities");
  GridConfig exit_cfg;
  std::string exit_dir = "A";
  std::string exit_out;
  exit_cmd->add_option("--n", exit_cfg.n, "number of vertices")->required();
  exit_cmd->add_option("--k", exit_cfg.k, "chord hub position")->required();
  auto* exit_L = exit_cmd->add_option("--L", exit_cfg.L, "track length (default ceil(rho n^1.5))");
  exit_cmd->add_option("--rho", exit_cfg.rho, "time scale")->capture_default_str();
  exit_cmd->add_option("--lambda", exit_cfg.lambda, "steps before the origin hub")
      ->capture_default_str();
  exit_cmd->add_option("--start-dir", exit_dir, "A or B")
      ->check(CLI::IsMember({"A", "B"}))
      ->capture_default_str();
  exit_cmd->add_option("--out", exit_out, "CSV output path");
  activate(exit_cmd, [&] {
    GridConfig c = exit_cfg;
    if (exit_L->count() == 0) c.L = GridConfig::for_scale(c.n, c.k, c.rho).L;
    c.start_dir = parse_dir(exit_dir);
    const auto R = exit_set(c);
    for (const auto& r : R.excluded) {
      info("excluded unreachable point (" + num(r.x) + ", " + num(r.y) + ", " + dir_char(r.h) + ")");
    }
    std::string text = csv_header(metadata_for(active));
    text += "x,y,h,x_prime,y_prime,p_closed,p_oracle,vertex\n";
    for (const auto& r : R.points) {
      text += num(r.x) + "," + num(r.y) + "," + dir_char(r.h) + "," + std::to_string(r.x_prime) +
              "," + std::to_string(r.y_prime) + "," + num(exit_probability(r, c.start_dir)) + "," +
              num(exit_probability_oracle(r, c.start_dir)) + "," +
              std::to_string(map_to_vertex(r, c)) + "\n";
    }
    write_output(exit_out, text);
  });

  // gaps
  auto* gaps_cmd = app.add_subcommand("gaps", "Good chord positions and the totient sum");
  int64_t gaps_n = 0;
  double gaps_rho = 1.0;
  double gaps_gamma3 = 0.6;
  int gaps_sample = 10;
  std::string gaps_out;
  gaps_cmd->add_option("--n", gaps_n, "number of vertices")->required();
  gaps_cmd->add_option("--rho", gaps_rho, "time scale")->capture_default_str();
  gaps_cmd->add_option("--gamma3", gaps_gamma3, "separation constant")->capture_default_str();
  gaps_cmd->add_option("--sample", gaps_sample, "good k values listed")->capture_default_str();
  gaps_cmd->add_option("--out", gaps_out, "JSON output path");
  activate(gaps_cmd, [&] {
    check_gamma3(gaps_gamma3);
    const auto rep = good_k_set(gaps_n, gaps_rho, gaps_gamma3);
    for (const auto& w : rep.warnings) warn(w);
    const auto cover = exclusion_cover(gaps_n, gaps_rho, gaps_gamma3);
    ojson body;
    body["n"] = rep.n;
    body["fraction"] = rep.fraction;
    body["fraction_full"] = rep.fraction_full;
    body["bound"] = rep.bound;
    body["good_k_count"] = rep.good_k.size();
    std::vector<int64_t> sample;
    const std::size_t want = std::min<std::size_t>(static_cast<std::size_t>(gaps_sample),
                                                   rep.good_k.size());
    for (std::size_t i = 0; i < want; ++i) sample.push_back(rep.good_k[i * rep.good_k.size() / want]);
    body["sample_good_k"] = sample;
    body["max_multiplier"] = rep.max_multiplier;
    body["separation"] = rep.separation;
    body["cover_measure"] = cover.measure;
    body["methods_agree"] = cover.complement == rep.good_k;
    const auto phi = phi_ratio_sum(std::max<int64_t>(rep.max_multiplier, 1));
    body["phi_sum"] = phi.sum;
    write_output(gaps_out, json_text(body, metadata_for(active)));
  });

  // mc
  auto* mc_cmd = app.add_subcommand("mc", "Seeded simulation: trajectories, coin procedure, hit bound");
  int64_t mc_n = 0, mc_k = 0, mc_T = 0, mc_trials = 1000, mc_lambda = 0;
  uint64_t mc_seed = 0;
  double mc_rho = 1.0, mc_gamma3 = 0.6, mc_clearance = 0.1;
  std::string mc_mode = "trajectory", mc_dir = "A", mc_out;
  mc_cmd->add_option("--n", mc_n, "number of vertices")->required();
  mc_cmd->add_option("--k", mc_k, "chord hub position")->required();
  auto* mc_T_opt = mc_cmd->add_option("--T", mc_T, "even time horizon (default 2 ceil(rho n^1.5) + 2 lambda)");
  mc_cmd->add_option("--trials", mc_trials, "number of trials")->capture_default_str();
  mc_cmd->add_option("--seed", mc_seed, "random seed")->required();
  mc_cmd->add_option("--mode", mc_mode, "trajectory, coin, tau or hitbound")
      ->check(CLI::IsMember({"trajectory", "coin", "tau", "hitbound"}))
      ->capture_default_str();
  mc_cmd->add_option("--rho", mc_rho, "time scale")->capture_default_str();
  mc_cmd->add_option("--lambda", mc_lambda, "start offset before the origin hub")->capture_default_str();
  mc_cmd->add_option("--start-dir", mc_dir, "A or B")->check(CLI::IsMember({"A", "B"}))->capture_default_str();
  mc_cmd->add_option("--gamma3", mc_gamma3, "separation constant")->capture_default_str();
  mc_cmd->add_option("--clearance", mc_clearance, "hub clearance coefficient")->capture_default_str();
  mc_cmd->add_option("--out", mc_out, "JSON output path");
  activate(mc_cmd, [&] {
    GridConfig c = GridConfig::for_scale(mc_n, mc_k, mc_rho);
    c.lambda = mc_lambda;
    c.start_dir = parse_dir(mc_dir);
    if (mc_T_opt->count() > 0) {
      if (mc_T % 2 != 0) throw ValidationError("T must be even");
      c.L = mc_T / 2 - mc_lambda;
    }
    c.validate();
    if (mc_trials < 1) throw ValidationError("trials must be positive");
    SelectionParams params{mc_gamma3, mc_clearance};
    ojson body;
    body["generator"] = std::string(kGeneratorName);
    body["T"] = c.T();
    body["L"] = c.L;
    body["start_vertex"] = c.start_vertex();
    if (mc_mode == "trajectory") {
      const auto kernel = build_kernel(ChainSpec::drift_chord(c.n, c.k));
      body["counts"] = trajectory_law(kernel, c.start_vertex(), c.T(), mc_trials, mc_seed);
    } else if (mc_mode == "coin") {
      CoinSampler sampler(c);
      const auto law = coin_law(sampler, mc_trials, mc_seed);
      const auto first = coin_procedure(c, mc_seed, false);
      ojson rec;
      rec["exit"] = point_json(first.exit);
      std::string track;
      for (Dir d : first.track) track += dir_char(d);
      rec["track"] = track;
      rec["c0_length"] = first.c0_length;
      rec["c0_ones"] = first.c0_ones;
      auto ins = ojson::array();
      for (const auto& s : first.inserted) {
        ins.push_back({s.position, s.bit, std::string(1, dir_char(s.dir)), s.beyond});
      }
      rec["inserted"] = ins;
      rec["tau"] = first.tau;
      rec["final_vertex"] = first.final_vertex;
      body["first_record"] = rec;
      body["tau_equal"] = law.tau_equal;
      body["bookkeeping_failures"] = law.bookkeeping_failures;
      body["bad_events"] = law.bad_events;
      body["counts"] = law.counts;
    } else if (mc_mode == "tau") {
      const auto t = tau_check(c, params, mc_trials, mc_seed);
      body["tau_equal"] = t.tau_equal;
      body["fraction"] = t.fraction;
      body["conditioned_points"] = t.conditioned_points;
      body["clearance"] = t.clearance;
      body["bookkeeping_failures"] = t.bookkeeping_failures;
    } else {
      const auto h = hit_bound_check(c, params, true);
      body["V2_size"] = h.V2_size;
      body["W_size"] = h.W_size;
      body["scaled_min"] = h.scaled_min;
      body["argmin"] = h.argmin;
      body["joint_min"] = h.joint_min ? ojson(*h.joint_min) : ojson(nullptr);
    }
    write_output(mc_out, json_text(body, metadata_for(active)));
  });

  // scaling
  auto* sc_cmd = app.add_subcommand("scaling", "Mixing times over a geometric n grid");
  std::string sc_variant = "drift-chord", sc_kpolicy = "good", sc_policy = "auto", sc_out, sc_format;
  int64_t sc_nmin = 64, sc_nmax = 1024, sc_factor = 2, sc_seeds = 1;
  uint64_t sc_seed = 0;
  double sc_eps = 0.25;
  int sc_hubs = 2;
  bool sc_timing = false;
  sc_cmd->add_option("--variant", sc_variant, "chain variant")->capture_default_str();
  sc_cmd->add_option("--nmin", sc_nmin, "smallest n")->capture_default_str();
  sc_cmd->add_option("--nmax", sc_nmax, "largest n")->capture_default_str();
  sc_cmd->add_option("--factor", sc_factor, "grid ratio")->capture_default_str();
  sc_cmd->add_option("--eps", sc_eps, "distance threshold")->capture_default_str();
  sc_cmd->add_option("--kpolicy", sc_kpolicy, "good, half or fixed:K")->capture_default_str();
  sc_cmd->add_option("--seeds", sc_seeds, "seeds per n (seed, seed+1, ...)")->capture_default_str();
  auto* sc_seed_opt = sc_cmd->add_option("--seed", sc_seed, "base seed (required for random k)");
  sc_cmd->add_option("--hubs", sc_hubs, "hub count for khub")->capture_default_str();
  sc_cmd->add_option("--policy", sc_policy, "exact, heuristic or auto")
      ->check(CLI::IsMember({"exact", "heuristic", "auto"}))
      ->capture_default_str();
  sc_cmd->add_option("--format", sc_format, "csv or jsonl (default from extension)");
  sc_cmd->add_flag("--record-timing", sc_timing, "store wall time (breaks byte-identical output)");
  sc_cmd->add_option("--out", sc_out, "output path")->required();
  activate(sc_cmd, [&] {
    ScalingRequest req;
    req.variant = parse_variant(sc_variant);
    req.k_policy = KPolicy::parse(sc_kpolicy);
    const bool random = req.variant == Variant::KHub ||
                        (req.variant == Variant::DriftChord && req.k_policy.kind == KPolicy::Kind::Good);
    if (random && sc_seed_opt->count() == 0) {
      throw ValidationError("--seed is required for randomized chord choices");
    }
    if (sc_factor < 2 || sc_nmin < 5 || sc_nmax < sc_nmin || sc_seeds < 1) {
      throw ValidationError("need factor >= 2, 5 <= nmin <= nmax and seeds >= 1");
    }
    for (int64_t n = sc_nmin; n <= sc_nmax; n *= sc_factor) req.n_grid.push_back(n);
    req.eps = sc_eps;
    req.hubs = sc_hubs;
    req.policy = sc_policy;
    req.record_timing = sc_timing;
    req.seeds.clear();
    for (int64_t i = 0; i < sc_seeds; ++i) req.seeds.push_back(sc_seed + static_cast<uint64_t>(i));
    const auto res = scaling_run(req);
    for (const auto& f : res.failures) warn("n=" + std::to_string(f.n) + ": " + f.message);
    Format fmt;
    if (!sc_format.empty()) {
      fmt = parse_format(sc_format);
    } else {
      fmt = sc_out.size() >= 4 && sc_out.substr(sc_out.size() - 4) == ".csv" ? Format::Csv : Format::Jsonl;
    }
    emit(res.records, fmt, sc_out, metadata_for(active));
  });

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "Least-squares exponent of t_mix against n");
  std::string fit_in;
  bool fit_exact = false;
  fit_cmd->add_option("--in", fit_in, "JSONL records")->required();
  fit_cmd->add_flag("--exact-only", fit_exact, "ignore heuristic-policy points");
  activate(fit_cmd, [&] {
    const auto fit = fit_exponent(read_jsonl(fit_in), fit_exact);
    ojson body;
    body["slope"] = fit.slope;
    body["intercept"] = fit.intercept;
    body["residual_rms"] = fit.residual_rms;
    body["n_min"] = fit.n_min;
    body["n_max"] = fit.n_max;
    body["points"] = fit.points;
    write_output("", json_text(body, metadata_for(active)));
  });

  // lower
  auto* low_cmd = app.add_subcommand("lower", "Minimum of t_mix(eps*)/n^1.5 over sampled chord positions");
  std::string low_grid = "256,512,1024", low_out;
  double low_eps = 0.05;
  int low_sample = 20;
  uint64_t low_seed = 0;
  low_cmd->add_option("--n-grid", low_grid, "comma-separated n values")->capture_default_str();
  low_cmd->add_option("--eps-star", low_eps, "distance threshold")->capture_default_str();
  low_cmd->add_option("--k-sample", low_sample, "chord positions per n, n/2 included")->capture_default_str();
  low_cmd->add_option("--seed", low_seed, "seed for the chord sample")->required();
  low_cmd->add_option("--out", low_out, "JSON output path");
  activate(low_cmd, [&] {
    const auto rep = lower_bound_probe(parse_list(low_grid), low_eps, low_sample, low_seed);
    ojson body;
    body["eps_star"] = rep.eps_star;
    auto rows = ojson::array();
    for (const auto& r : rep.rows) {
      rows.push_back({{"n", r.n}, {"k", r.k}, {"t_mix", r.t_mix}, {"scaled", r.scaled}, {"policy", r.policy}});
    }
    body["rows"] = rows;
    body["n_grid"] = rep.n_grid;
    body["min_scaled"] = rep.min_scaled;
    body["half_scaled"] = rep.half_scaled;
    body["ratio"] = rep.ratio;
    write_output(low_out, json_text(body, metadata_for(active)));
  });

  // zigzag
  auto* zz_cmd = app.add_subcommand("zigzag", "Time-shift scan of R1 hits in the hub-free set");
  int64_t zz_n = 0, zz_k = 0;
  double zz_rho = 1.0, zz_gamma3 = 0.6, zz_clearance = 0.1;
  std::string zz_out;
  zz_cmd->add_option("--n", zz_n, "number of vertices")->required();
  zz_cmd->add_option("--k", zz_k, "chord hub position")->required();
  zz_cmd->add_option("--rho", zz_rho, "time scale")->capture_default_str();
  zz_cmd->add_option("--gamma3", zz_gamma3, "separation constant")->capture_default_str();
  zz_cmd->add_option("--clearance", zz_clearance, "hub clearance coefficient")->capture_default_str();
  zz_cmd->add_option("--out", zz_out, "JSON output path");
  activate(zz_cmd, [&] {
    const auto c = GridConfig::for_scale(zz_n, zz_k, zz_rho);
    const auto rep = zigzag_scan(c, SelectionParams{zz_gamma3, zz_clearance});
    ojson body;
    body["R1_size"] = rep.R1_size;
    body["I_size"] = rep.I_size;
    body["total_hits"] = rep.total_hits;
    body["selected_shift"] = rep.selected_shift;
    body["orbits_exact"] = rep.orbits_exact;
    body["hits"] = rep.hits;
    write_output(zz_out, json_text(body, metadata_for(active)));
  });

  // khub
  auto* kh_cmd = app.add_subcommand("khub", "Exploratory exponent probe for chains with K hubs");
  int kh_K = 3;
  std::string kh_grid = "128,256,512", kh_policy = "auto", kh_out;
  double kh_eps = 0.25;
  int64_t kh_seeds = 1;
  uint64_t kh_seed = 0;
  kh_cmd->add_option("--K", kh_K, "number of hubs")->capture_default_str();
  kh_cmd->add_option("--n-grid", kh_grid, "comma-separated n values")->capture_default_str();
  kh_cmd->add_option("--eps", kh_eps, "distance threshold")->capture_default_str();
  kh_cmd->add_option("--seeds", kh_seeds, "hub draws per n")->capture_default_str();
  kh_cmd->add_option("--seed", kh_seed, "base seed")->required();
  kh_cmd->add_option("--policy", kh_policy, "exact, heuristic or auto")
      ->check(CLI::IsMember({"exact", "heuristic", "auto"}))
      ->capture_default_str();
  kh_cmd->add_option("--out", kh_out, "JSON output path");
  activate(kh_cmd, [&] {
    std::vector<uint64_t> seeds;
    for (int64_t i = 0; i < kh_seeds; ++i) seeds.push_back(kh_seed + static_cast<uint64_t>(i));
    const auto rep = khub_probe(kh_K, parse_list(kh_grid), kh_eps, seeds, kh_policy);
    ojson body;
    body["K"] = rep.K;
    body["slope"] = rep.fit.slope;
    body["residual_rms"] = rep.fit.residual_rms;
    body["conjectured"] = rep.conjectured;
    auto recs = ojson::array();
    for (const auto& r : rep.records) {
      recs.push_back({{"n", r.n}, {"hubs", r.k}, {"t_mix", r.t_mix}, {"policy", r.policy}, {"seed", r.seed}});
    }
    body["records"] = recs;
    write_output(kh_out, json_text(body, metadata_for(active)));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  g_level = level == "error" ? Level::Error : level == "info" ? Level::Info : Level::Warn;
  try {
    run();
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
