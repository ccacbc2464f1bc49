#include "chordmix/montecarlo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

#include "chordmix/binomial.hpp"
#include "chordmix/evolve.hpp"
#include "chordmix/parallel.hpp"

namespace chordmix {

namespace {

constexpr int64_t kAllLazy = std::numeric_limits<int64_t>::max() / 4;
constexpr uint32_t kTrajectoryStream = 0;
constexpr uint32_t kCoinStream = 1;
// Trials are split into this many fixed chunks so merged histograms do not
// depend on the worker count.
constexpr std::size_t kChunks = 256;

const double kLogQuarter = std::log(0.25);
const double kLogThreeQuarters = std::log(0.75);

bool is_lazy_drift(std::span<const Transition> row, int64_t v, int64_t n) {
  if (row.size() != 2) return false;
  const int64_t next = v % n + 1;
  bool self = false;
  bool adv = false;
  for (const auto& t : row) {
    if (t.p != 0.5) return false;
    if (t.to == v) self = true;
    if (t.to == next) adv = true;
  }
  return self && adv;
}

int64_t wrap(int64_t v, int64_t delta, int64_t n) { return (v - 1 + delta) % n + 1; }

double log_weight(Dir from, Dir to) { return from == to ? kLogQuarter : kLogThreeQuarters; }

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// Bit tape with positional queries.
class Tape {
 public:
  Tape(int64_t length, Engine& gen) : length_(length) {
    words_.resize(static_cast<std::size_t>((length + 63) / 64));
    for (auto& w : words_) w = gen();
    if (length % 64 != 0 && !words_.empty()) words_.back() &= (uint64_t{1} << (length % 64)) - 1;
  }

  int64_t length() const { return length_; }
  const std::vector<uint64_t>& words() const { return words_; }

  int64_t ones_from(int64_t i) const {
    if (i >= length_) return 0;
    auto w = static_cast<std::size_t>(i / 64);
    int64_t count = std::popcount(words_[w] & (~uint64_t{0} << (i % 64)));
    for (++w; w < words_.size(); ++w) count += std::popcount(words_[w]);
    return count;
  }

  /// Index of the `need`-th one at or after i (need >= 1), or -1.
  int64_t find_one(int64_t i, int64_t need) const {
    if (i >= length_) return -1;
    auto w = static_cast<std::size_t>(i / 64);
    uint64_t bits = words_[w] & (~uint64_t{0} << (i % 64));
    while (true) {
      const int64_t c = std::popcount(bits);
      if (c >= need) {
        for (int64_t j = 1; j < need; ++j) bits &= bits - 1;
        return static_cast<int64_t>(w) * 64 + std::countr_zero(bits);
      }
      need -= c;
      if (++w == words_.size()) return -1;
      bits = words_[w];
    }
  }

 private:
  int64_t length_;
  std::vector<uint64_t> words_;
};

template <class Body>
void for_each_trial_chunk(int64_t trials, Body&& body) {
  const auto count = static_cast<std::size_t>(trials);
  const std::size_t chunks = std::min(kChunks, std::max<std::size_t>(count, 1));
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t lo = count * c / chunks;
    const std::size_t hi = count * (c + 1) / chunks;
    body(c, lo, hi);
  });
}

}  // namespace

Engine trial_engine(uint64_t seed, uint64_t trial, uint32_t stream) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(trial), static_cast<uint32_t>(trial >> 32), stream};
  return Engine(seq);
}

TrajectorySampler::TrajectorySampler(const Kernel& kernel)
    : kernel_(&kernel), n_(kernel.n()), lazy_run_(static_cast<std::size_t>(kernel.n()), 0) {
  std::vector<char> lazy(static_cast<std::size_t>(n_));
  bool all = true;
  for (int64_t v = 1; v <= n_; ++v) {
    lazy[static_cast<std::size_t>(v - 1)] = is_lazy_drift(kernel.row(v), v, n_);
    all = all && lazy[static_cast<std::size_t>(v - 1)];
  }
  if (all) {
    std::fill(lazy_run_.begin(), lazy_run_.end(), kAllLazy);
    return;
  }
  // Two sweeps backwards handle runs that wrap past vertex n.
  int64_t run = 0;
  for (int pass = 0; pass < 2; ++pass) {
    for (int64_t v = n_; v >= 1; --v) {
      run = lazy[static_cast<std::size_t>(v - 1)] ? run + 1 : 0;
      lazy_run_[static_cast<std::size_t>(v - 1)] = run;
    }
  }
}

int64_t TrajectorySampler::step_categorical(int64_t v, Engine& gen) const {
  const auto row = kernel_->row(v);
  const double u = uniform01(gen);
  double acc = 0.0;
  for (const auto& t : row) {
    acc += t.p;
    if (u < acc) return t.to;
  }
  return row.back().to;
}

int64_t TrajectorySampler::run(int64_t start, int64_t T, Engine& gen,
                               std::vector<int64_t>* visits) const {
  if (start < 1 || start > n_) throw ValidationError("start vertex outside 1..n");
  if (T < 0) throw ValidationError("T must be non-negative");
  if (visits) visits->assign(static_cast<std::size_t>(n_), 0);
  auto visit = [&](int64_t v) {
    if (visits) ++(*visits)[static_cast<std::size_t>(v - 1)];
  };
  int64_t v = start;
  int64_t t = 0;
  while (t < T) {
    const int64_t run = lazy_run_[static_cast<std::size_t>(v - 1)];
    if (run == 0) {
      visit(v);
      v = step_categorical(v, gen);
      ++t;
      continue;
    }
    const uint64_t word = gen();
    const int64_t avail = std::min<int64_t>(64, T - t);
    const int64_t ones = std::popcount(word);
    if (!visits && avail == 64 && ones <= run - 1) {
      v = wrap(v, ones, n_);
      t += 64;
      continue;
    }
    // Bit by bit until the word, the time, or the lazy run ends; leftover
    // bits are independent of the future and can be dropped.
    for (int64_t b = 0; b < avail; ++b) {
      if (lazy_run_[static_cast<std::size_t>(v - 1)] == 0) break;
      visit(v);
      if ((word >> b) & 1U) v = v % n_ + 1;
      ++t;
    }
  }
  visit(v);
  return v;
}

TrajectoryResult simulate_trajectory(const Kernel& kernel, int64_t start, int64_t T,
                                     uint64_t seed, bool count_visits) {
  TrajectorySampler sampler(kernel);
  auto gen = trial_engine(seed, 0, kTrajectoryStream);
  TrajectoryResult res;
  res.final_vertex = sampler.run(start, T, gen, count_visits ? &res.visits : nullptr);
  return res;
}

std::vector<int64_t> trajectory_law(const Kernel& kernel, int64_t start, int64_t T,
                                    int64_t trials, uint64_t seed) {
  if (trials < 1) throw ValidationError("trials must be positive");
  TrajectorySampler sampler(kernel);
  const auto n = static_cast<std::size_t>(kernel.n());
  std::vector<std::vector<int64_t>> parts(kChunks);
  for_each_trial_chunk(trials, [&](std::size_t c, std::size_t lo, std::size_t hi) {
    auto& counts = parts[c];
    counts.assign(n, 0);
    for (std::size_t i = lo; i < hi; ++i) {
      auto gen = trial_engine(seed, i, kTrajectoryStream);
      ++counts[static_cast<std::size_t>(sampler.run(start, T, gen) - 1)];
    }
  });
  std::vector<int64_t> total(n, 0);
  for (const auto& p : parts) {
    for (std::size_t v = 0; v < p.size(); ++v) total[v] += p[v];
  }
  return total;
}

double concentration_threshold(int64_t n, double rho) {
  const auto nd = static_cast<double>(n);
  return 3.0 * std::sqrt(rho) * std::pow(nd, 0.75) * std::sqrt(std::log(nd));
}

// Suffix weights for sampling a track conditioned on its exit point:
// g[(a, b, p)] is the log weight of finishing with a A-moves and b B-moves
// left after arriving in direction p, then choosing h.
struct CoinSampler::TrackTable {
  int64_t xp = 0;
  int64_t yp = 0;
  std::vector<double> g;

  double at(int64_t a, int64_t b, Dir p) const {
    return g[static_cast<std::size_t>(((a * (yp + 1)) + b) * 2 + (p == Dir::A ? 0 : 1))];
  }

  TrackTable(const ExitPoint& r) : xp(r.x_prime), yp(r.y_prime) {
    g.assign(static_cast<std::size_t>((xp + 1) * (yp + 1) * 2),
             -std::numeric_limits<double>::infinity());
    for (int64_t a = 0; a <= xp; ++a) {
      for (int64_t b = 0; b <= yp; ++b) {
        for (Dir p : {Dir::A, Dir::B}) {
          double v;
          if (a == 0 && b == 0) {
            v = log_weight(p, r.h);
          } else {
            v = -std::numeric_limits<double>::infinity();
            if (a > 0) v = log_add(v, log_weight(p, Dir::A) + at(a - 1, b, Dir::A));
            if (b > 0) v = log_add(v, log_weight(p, Dir::B) + at(a, b - 1, Dir::B));
          }
          g[static_cast<std::size_t>(((a * (yp + 1)) + b) * 2 + (p == Dir::A ? 0 : 1))] = v;
        }
      }
    }
  }
};

CoinSampler::CoinSampler(GridConfig config) : config_(config) {
  config_.validate();
  exits_ = exit_set(config_).points;
  weights_.reserve(exits_.size());
  for (const auto& r : exits_) weights_.push_back(exit_probability(r, config_.start_dir));
  std::vector<std::size_t> all(exits_.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  tables_ = std::make_unique<std::vector<std::unique_ptr<TrackTable>>>(exits_.size());
  table_flags_ = std::make_unique<std::vector<std::once_flag>>(exits_.size());
  condition_on(all);
}

CoinSampler::~CoinSampler() = default;
CoinSampler::CoinSampler(CoinSampler&&) noexcept = default;

void CoinSampler::condition_on(std::span<const std::size_t> indices) {
  if (indices.empty()) throw ComputationError("cannot condition on an empty set of exit points");
  support_.assign(indices.begin(), indices.end());
  cumulative_.clear();
  double acc = 0.0;
  for (std::size_t i : support_) {
    if (i >= exits_.size()) throw ValidationError("exit index out of range");
    acc += weights_[i];
    cumulative_.push_back(acc);
  }
  for (double& c : cumulative_) c /= acc;
}

const CoinSampler::TrackTable& CoinSampler::table(std::size_t index) const {
  std::call_once((*table_flags_)[index], [&] {
    (*tables_)[index] = std::make_unique<TrackTable>(exits_[index]);
  });
  return *(*tables_)[index];
}

std::vector<Dir> CoinSampler::sample_track(std::size_t index, Engine& gen) const {
  const auto& tab = table(index);
  const ExitPoint& r = exits_[index];
  std::vector<Dir> track;
  track.reserve(static_cast<std::size_t>(r.x_prime + r.y_prime + 1));
  int64_t a = r.x_prime;
  int64_t b = r.y_prime;
  Dir prev = config_.start_dir;
  while (a + b > 0) {
    Dir d;
    if (a == 0) {
      d = Dir::B;
    } else if (b == 0) {
      d = Dir::A;
    } else {
      const double pa =
          std::exp(log_weight(prev, Dir::A) + tab.at(a - 1, b, Dir::A) - tab.at(a, b, prev));
      d = uniform01(gen) < pa ? Dir::A : Dir::B;
    }
    (d == Dir::A ? a : b) -= 1;
    track.push_back(d);
    prev = d;
  }
  track.push_back(r.h);
  return track;
}

CoinProcedureRecord CoinSampler::sample(Engine& gen, bool keep_tape) const {
  const double u = uniform01(gen);
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const auto pos = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()),
                                         support_.size() - 1);
  return sample_exit(support_[pos], gen, keep_tape);
}

CoinProcedureRecord CoinSampler::sample_exit(std::size_t index, Engine& gen,
                                             bool keep_tape) const {
  const GridConfig& c = config_;
  CoinProcedureRecord rec;
  rec.exit = exits_.at(index);
  rec.track = sample_track(index, gen);
  rec.T = c.T();
  const auto decisions = static_cast<int64_t>(rec.track.size());
  rec.c0_length = rec.T - decisions;
  if (rec.c0_length < 0) throw ComputationError("track longer than T");
  const Tape tape(rec.c0_length, gen);
  rec.c0_ones = tape.ones_from(0);
  rec.bad_event = std::abs(static_cast<double>(rec.c0_ones - (c.L + c.lambda))) >
                  concentration_threshold(c.n, c.rho);

  const int64_t kc = c.canonical_k();
  auto hub_of = [&](Dir d) { return d == Dir::A ? kc : c.n; };
  // Hub from which a walk leaves onto arc d.
  auto exit_hub = [&](Dir d) { return d == Dir::A ? c.n : kc; };
  auto vertex = [&](Dir d, int64_t p) { return d == Dir::A ? p : kc + p; };

  Dir d = c.start_dir;
  int64_t p = c.arc_length(d) - c.lambda;
  int64_t i = 0;   // next unread bit of c0
  int64_t c1 = 0;  // symbols of c1 produced so far
  std::size_t j = 0;
  int64_t final_canonical = 0;
  while (true) {
    const int64_t len = c.arc_length(d);
    if (p < len) {
      const int64_t at = tape.find_one(i, len - p);
      if (at < 0) {
        p += tape.ones_from(i);
        c1 += rec.c0_length - i;
        i = rec.c0_length;
        final_canonical = vertex(d, p);
        break;
      }
      c1 += at - i + 1;
      i = at + 1;
      p = len;
      continue;
    }
    if (i == rec.c0_length) {
      final_canonical = hub_of(d);
      break;
    }
    Dir next;
    int bit;
    const bool beyond = j >= rec.track.size();
    if (!beyond) {
      next = rec.track[j];
      bit = next != d && uniform01(gen) < 2.0 / 3.0 ? 1 : 0;
    } else {
      const double v = uniform01(gen);
      next = v < 0.25 ? d : other(d);
      bit = v >= 0.25 && v < 0.75 ? 1 : 0;
    }
    rec.inserted.push_back({c1, bit, next, beyond});
    ++c1;
    ++j;
    if (bit == 0) {
      const int64_t at = tape.find_one(i, 1);
      if (at < 0) {
        c1 += rec.c0_length - i;
        i = rec.c0_length;
        rec.ended_in_wait = true;
        final_canonical = uniform01(gen) < 0.75 ? exit_hub(next) : exit_hub(other(next));
        break;
      }
      c1 += at - i + 1;
      i = at + 1;
    }
    d = next;
    p = 1;
  }
  rec.tau = c1;
  rec.final_vertex = c.to_original(final_canonical);
  if (keep_tape) rec.c0 = tape.words();
  return rec;
}

CoinProcedureRecord coin_procedure(const GridConfig& config, uint64_t seed, bool keep_tape) {
  CoinSampler sampler(config);
  auto gen = trial_engine(seed, 0, kCoinStream);
  return sampler.sample(gen, keep_tape);
}

CoinLaw coin_law(const CoinSampler& sampler, int64_t trials, uint64_t seed) {
  if (trials < 1) throw ValidationError("trials must be positive");
  const auto n = static_cast<std::size_t>(sampler.config().n);
  std::vector<CoinLaw> parts(kChunks);
  for_each_trial_chunk(trials, [&](std::size_t c, std::size_t lo, std::size_t hi) {
    auto& part = parts[c];
    part.counts.assign(n, 0);
    for (std::size_t t = lo; t < hi; ++t) {
      auto gen = trial_engine(seed, t, kCoinStream);
      const auto rec = sampler.sample(gen);
      ++part.counts[static_cast<std::size_t>(rec.final_vertex - 1)];
      part.tau_equal += rec.tau == rec.T ? 1 : 0;
      part.bookkeeping_failures +=
          rec.tau != rec.c0_length + static_cast<int64_t>(rec.inserted.size()) ? 1 : 0;
      part.bad_events += rec.bad_event ? 1 : 0;
    }
  });
  CoinLaw law;
  law.trials = trials;
  law.counts.assign(n, 0);
  for (const auto& p : parts) {
    if (p.counts.empty()) continue;
    for (std::size_t v = 0; v < n; ++v) law.counts[v] += p.counts[v];
    law.tau_equal += p.tau_equal;
    law.bookkeeping_failures += p.bookkeeping_failures;
    law.bad_events += p.bad_events;
  }
  return law;
}

namespace {

bool same_point(const ExitPoint& a, const ExitPoint& b) {
  return a.kx == b.kx && a.nky == b.nky && a.h == b.h;
}

int64_t hub_distance(int64_t v, const GridConfig& c) {
  return std::min(cycle_distance(v, c.k, c.n), cycle_distance(v, c.n, c.n));
}

std::vector<ExitPoint> central_points(const std::vector<ExitPoint>& R, const GridConfig& c) {
  const auto R0 = restrict_R0(R, c.rho, c.n);
  return select_R1(R0, c.rho, c.n);
}

}  // namespace

std::vector<std::size_t> clear_exit_indices(const CoinSampler& sampler,
                                            const SelectionParams& params) {
  const auto& c = sampler.config();
  const auto& R = sampler.exits();
  const double clear = hub_clearance(c.n, c.rho, params.clearance);
  std::vector<std::size_t> out;
  for (const auto& r : central_points(R, c)) {
    if (!avoids_hubs(map_to_vertex(r, c), c, clear)) continue;
    for (std::size_t i = 0; i < R.size(); ++i) {
      if (same_point(R[i], r)) out.push_back(i);
    }
  }
  return out;
}

GridConfig centred_config(int64_t n, int64_t k, double rho, Dir start) {
  GridConfig base = GridConfig::for_scale(n, k, rho);
  base.start_dir = start;
  GridConfig best = base;
  int64_t best_dist = -1;
  for (int64_t L = base.L; L < base.L + n; ++L) {
    GridConfig c = base;
    c.L = L;
    std::vector<ExitPoint> R1;
    try {
      R1 = central_points(exit_set(c).points, c);
    } catch (const ComputationError&) {
      continue;
    }
    for (const auto& r : R1) {
      const int64_t dist = hub_distance(map_to_vertex(r, c), c);
      if (dist > best_dist) {
        best_dist = dist;
        best = c;
      }
    }
  }
  return best;
}

TauCheck tau_check(const GridConfig& config, const SelectionParams& params, int64_t trials,
                   uint64_t seed) {
  CoinSampler sampler(config);
  const auto idx = clear_exit_indices(sampler, params);
  TauCheck out;
  out.clearance = hub_clearance(config.n, config.rho, params.clearance);
  if (idx.empty()) {
    throw ComputationError("no exit point of R1 keeps the hub clearance " +
                           std::to_string(out.clearance) + "; R2 is empty");
  }
  sampler.condition_on(idx);
  const auto law = coin_law(sampler, trials, seed);
  out.trials = trials;
  out.tau_equal = law.tau_equal;
  out.fraction = static_cast<double>(law.tau_equal) / static_cast<double>(trials);
  out.bookkeeping_failures = law.bookkeeping_failures;
  out.conditioned_points = idx.size();
  return out;
}

RouteComparison compare_routes(const GridConfig& config, int64_t trials, uint64_t seed) {
  CoinSampler sampler(config);
  const auto law = coin_law(sampler, trials, seed);
  const auto kernel = build_kernel(ChainSpec::drift_chord(config.n, config.k));
  RouteComparison out;
  out.trials = trials;
  out.coin_counts = law.counts;
  out.trajectory_counts = trajectory_law(kernel, config.start_vertex(), config.T(), trials, seed);
  out.tau_equal_fraction = static_cast<double>(law.tau_equal) / static_cast<double>(trials);
  double diff = 0.0;
  for (std::size_t v = 0; v < out.coin_counts.size(); ++v) {
    diff += std::abs(static_cast<double>(out.coin_counts[v] - out.trajectory_counts[v]));
  }
  out.tv = 0.5 * diff / static_cast<double>(trials);
  return out;
}

HitBoundReport hit_bound_check(const GridConfig& config, const SelectionParams& params,
                               bool joint) {
  config.validate();
  const auto kernel = build_kernel(ChainSpec::drift_chord(config.n, config.k));
  const auto law =
      evolve(kernel, Distribution::delta(config.n, config.start_vertex()), config.T());
  const auto R1 = central_points(exit_set(config).points, config);
  const auto V1 = image(R1, config);
  const auto sel = build_selection(V1, config, params);
  if (sel.W.empty()) {
    throw ComputationError("W is empty: no image point keeps the hub clearance");
  }
  HitBoundReport rep;
  rep.n = config.n;
  rep.k = config.k;
  rep.T = config.T();
  rep.V2_size = sel.V2.size();
  rep.W_size = sel.W.size();
  const auto nd = static_cast<double>(config.n);
  rep.scaled_min = std::numeric_limits<double>::infinity();
  for (int64_t w : sel.W) {
    const double s = nd * law.at(w);
    if (s < rep.scaled_min) {
      rep.scaled_min = s;
      rep.argmin = w;
    }
  }
  if (joint) {
    const double radius =
        params.gamma3 * std::sqrt(config.rho) * std::pow(nd, 0.75) / 2.0;
    const double clear = hub_clearance(config.n, config.rho, params.clearance);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : R1) {
      const int64_t g = map_to_vertex(r, config);
      if (!avoids_hubs(g, config, clear)) continue;
      const int64_t m = r.x_prime + r.y_prime + 1;
      const int64_t Tp = config.T() - m;
      const double logr = exit_log_probability(r.x_prime, r.y_prime, r.h, config.start_dir);
      const auto reach = static_cast<int64_t>(std::ceil(radius)) - 1;
      for (int64_t delta = -reach; delta <= reach; ++delta) {
        // Half of the insertions are ones on average.
        const int64_t s = config.lambda + config.L + delta - m / 2;
        const double lp = logr + log_choose(Tp, s) - static_cast<double>(Tp) * std::log(2.0);
        best = std::min(best, nd * std::exp(lp));
      }
    }
    if (std::isfinite(best)) rep.joint_min = best;
  }
  return rep;
}

StirlingReport stirling_diagnostic(int64_t T_prime, int64_t s) {
  if (T_prime < 1 || s < 0 || s > T_prime) {
    throw ValidationError("stirling diagnostic needs 0 <= s <= T' and T' >= 1");
  }
  const auto t = static_cast<double>(T_prime);
  const auto sd = static_cast<double>(s);
  StirlingReport rep;
  rep.exact_log = log_choose(T_prime, s) - t * std::log(2.0);
  rep.approx_log = -0.5 * std::log(t * std::numbers::pi / 2.0) -
                   (t - 2.0 * sd) * (t - 2.0 * sd) / (2.0 * t);
  rep.ratio = std::exp(rep.exact_log - rep.approx_log);
  const double gap = std::abs(t / 2.0 - sd);
  rep.in_regime = gap <= std::pow(t, 2.0 / 3.0) / 4.0;
  if (!rep.in_regime) {
    rep.warning = "|T'/2 - s| exceeds T'^{2/3}/4; the asymptotic form is not expected to hold";
  }
  return rep;
}

ConcentrationReport concentration_check(const GridConfig& config, int64_t trials,
                                        uint64_t seed, double multiplier) {
  if (trials < 1) throw ValidationError("trials must be positive");
  CoinSampler sampler(config);
  const auto& R = sampler.exits();
  std::vector<double> cumulative;
  double acc = 0.0;
  for (double w : sampler.exit_weights()) cumulative.push_back(acc += w);
  ConcentrationReport rep;
  rep.trials = trials;
  rep.threshold = multiplier * concentration_threshold(config.n, config.rho);
  const auto target = static_cast<double>(config.L + config.lambda);
  std::vector<int64_t> parts(kChunks, 0);
  for_each_trial_chunk(trials, [&](std::size_t c, std::size_t lo, std::size_t hi) {
    for (std::size_t t = lo; t < hi; ++t) {
      auto gen = trial_engine(seed, t, kCoinStream);
      const double u = uniform01(gen) * acc;
      auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      const auto& r = R[std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                                              R.size() - 1)];
      const Tape tape(config.T() - (r.x_prime + r.y_prime + 1), gen);
      const auto ones = static_cast<double>(tape.ones_from(0));
      if (std::abs(ones - target) > rep.threshold) ++parts[c];
    }
  });
  for (int64_t p : parts) rep.exceed += p;
  rep.rate = static_cast<double>(rep.exceed) / static_cast<double>(trials);
  return rep;
}

}  // namespace chordmix
