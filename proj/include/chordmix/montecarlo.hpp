#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chordmix/chain.hpp"
#include "chordmix/grid.hpp"

namespace chordmix {

using Engine = std::mt19937_64;

/// Recorded in output metadata so runs can be reproduced.
inline constexpr std::string_view kGeneratorName = "mt19937_64 seed_seq(seed,trial,stream)";

/// Independent substream for one trial: seeded from (seed, trial, stream)
/// so results never depend on scheduling.
Engine trial_engine(uint64_t seed, uint64_t trial, uint32_t stream = 0);

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Engine& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Trajectory sampler with a 64-step block path through runs of
/// "stay 1/2, advance 1/2" vertices; other rows use categorical draws.
class TrajectorySampler {
 public:
  explicit TrajectorySampler(const Kernel& kernel);

  /// X(T) from `start`; visits[v-1] counts the times 0..T spent at v when given.
  int64_t run(int64_t start, int64_t T, Engine& gen,
              std::vector<int64_t>* visits = nullptr) const;

 private:
  int64_t step_categorical(int64_t v, Engine& gen) const;

  const Kernel* kernel_;
  int64_t n_;
  std::vector<int64_t> lazy_run_;  // lazy-drift vertices from v onward
};

struct TrajectoryResult {
  int64_t final_vertex = 0;
  std::vector<int64_t> visits;  // empty unless requested
};

/// One trajectory on trial substream 0 of `seed`.
TrajectoryResult simulate_trajectory(const Kernel& kernel, int64_t start, int64_t T,
                                     uint64_t seed, bool count_visits = false);

/// Histogram of X(T) over `trials` independent trajectories (index v-1).
std::vector<int64_t> trajectory_law(const Kernel& kernel, int64_t start, int64_t T,
                                    int64_t trials, uint64_t seed);

struct InsertedSymbol {
  int64_t position = 0;  // index within c1
  int bit = 0;
  Dir dir = Dir::A;     // direction taken at this hub
  bool beyond = false;  // hub past the chosen exit point
};

struct CoinProcedureRecord {
  ExitPoint exit;
  std::vector<Dir> track;  // directions chosen at the origin and each grid point up to r'
  int64_t T = 0;
  int64_t c0_length = 0;
  int64_t c0_ones = 0;
  std::vector<uint64_t> c0;  // packed bits, low bit first; kept on request
  std::vector<InsertedSymbol> inserted;
  int64_t tau = 0;  // |c1|
  bool ended_in_wait = false;
  bool bad_event = false;  // |sum c0 - (L + lambda)| above the concentration threshold
  int64_t final_vertex = 0;  // original labels
};

/// Threshold 3 sqrt(rho) n^{3/4} sqrt(log n) of the concentration event.
double concentration_threshold(int64_t n, double rho);

/// Regenerates X(tau) from fair coin tosses: exit point, track, tape c0 and
/// hub insertions.
class CoinSampler {
 public:
  explicit CoinSampler(GridConfig config);
  ~CoinSampler();
  CoinSampler(CoinSampler&&) noexcept;

  const GridConfig& config() const { return config_; }
  const std::vector<ExitPoint>& exits() const { return exits_; }
  std::span<const double> exit_weights() const { return weights_; }

  /// Samples r only among the given exit indices, proportional to P(E_r).
  void condition_on(std::span<const std::size_t> indices);

  CoinProcedureRecord sample(Engine& gen, bool keep_tape = false) const;
  CoinProcedureRecord sample_exit(std::size_t index, Engine& gen, bool keep_tape) const;

 private:
  struct TrackTable;
  const TrackTable& table(std::size_t index) const;
  std::vector<Dir> sample_track(std::size_t index, Engine& gen) const;

  GridConfig config_;
  std::vector<ExitPoint> exits_;
  std::vector<double> weights_;
  std::vector<std::size_t> support_;
  std::vector<double> cumulative_;
  std::unique_ptr<std::vector<std::unique_ptr<TrackTable>>> tables_;
  std::unique_ptr<std::vector<std::once_flag>> table_flags_;
};

/// Trial 0 of `seed`; T is config.T().
CoinProcedureRecord coin_procedure(const GridConfig& config, uint64_t seed,
                                   bool keep_tape = true);

struct CoinLaw {
  int64_t trials = 0;
  std::vector<int64_t> counts;  // histogram of final vertices (index v-1)
  int64_t tau_equal = 0;
  int64_t bookkeeping_failures = 0;  // tau != |c0| + |c_h|
  int64_t bad_events = 0;
};

CoinLaw coin_law(const CoinSampler& sampler, int64_t trials, uint64_t seed);

/// Exit points of R1 whose image keeps the hub clearance (R2).
std::vector<std::size_t> clear_exit_indices(const CoinSampler& sampler,
                                            const SelectionParams& params);

/// The L in [ceil(rho n^{3/2}), ceil(rho n^{3/2}) + n) whose R1 image point
/// lies farthest from both hubs. Ties keep the smallest L.
GridConfig centred_config(int64_t n, int64_t k, double rho, Dir start = Dir::A);

struct TauCheck {
  int64_t trials = 0;
  int64_t tau_equal = 0;
  double fraction = 0.0;
  int64_t bookkeeping_failures = 0;
  std::size_t conditioned_points = 0;
  double clearance = 0.0;
};

/// P(tau = T) conditioned on r in R2. Throws ComputationError when R2 is empty.
TauCheck tau_check(const GridConfig& config, const SelectionParams& params, int64_t trials,
                   uint64_t seed);

struct RouteComparison {
  int64_t trials = 0;
  double tv = 0.0;
  double tau_equal_fraction = 0.0;
  std::vector<int64_t> coin_counts;
  std::vector<int64_t> trajectory_counts;
};

/// Empirical X(tau) law of the coin procedure against simulated X(T) from
/// the same start.
RouteComparison compare_routes(const GridConfig& config, int64_t trials, uint64_t seed);

struct HitBoundReport {
  int64_t n = 0;
  int64_t k = 0;
  int64_t T = 0;
  std::size_t V2_size = 0;
  std::size_t W_size = 0;
  double scaled_min = 0.0;  // min over W of n P(X(T) = w)
  int64_t argmin = 0;
  /// min over r in R2 and w near g(r) of n P(E_r) C(T',s)/2^{T'}.
  std::optional<double> joint_min;
};

/// Exact evolution from config.start_vertex() for config.T() steps.
HitBoundReport hit_bound_check(const GridConfig& config, const SelectionParams& params,
                               bool joint = false);

struct StirlingReport {
  double exact_log = 0.0;   // log C(T',s) - T' log 2
  double approx_log = 0.0;  // -log sqrt(T' pi/2) - (T'-2s)^2/(2T')
  double ratio = 0.0;
  bool in_regime = true;
  std::string warning;
};

/// Regime: |T'/2 - s| <= T'^{2/3} / 4.
StirlingReport stirling_diagnostic(int64_t T_prime, int64_t s);

struct ConcentrationReport {
  int64_t trials = 0;
  int64_t exceed = 0;
  double rate = 0.0;
  double threshold = 0.0;
};

/// Empirical P(|sum c0 - (L + lambda)| > multiplier * threshold), with r
/// drawn from P(E_r) and c0 of length T - (x'+y'+1).
ConcentrationReport concentration_check(const GridConfig& config, int64_t trials,
                                        uint64_t seed, double multiplier = 1.0);

}  // namespace chordmix
