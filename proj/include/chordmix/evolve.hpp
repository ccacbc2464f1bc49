#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "chordmix/chain.hpp"

namespace chordmix {

/// Probability vector over vertices 1..n (stored 0-indexed).
class Distribution {
 public:
  explicit Distribution(std::vector<double> weights);

  static Distribution uniform(int64_t n);
  static Distribution delta(int64_t n, int64_t vertex);

  int64_t n() const { return static_cast<int64_t>(w_.size()); }
  /// Weight of 1-indexed vertex v.
  double at(int64_t v) const { return w_[static_cast<std::size_t>(v - 1)]; }
  std::span<const double> weights() const { return w_; }
  double mass() const;

  /// Clamps entries above -1e-15 that are negative to zero and rescales to
  /// unit mass.
  void renormalize();

 private:
  std::vector<double> w_;
};

/// One application of the kernel as a row vector: result(v) = sum_u d(u) P(u,v).
Distribution step(const Kernel& kernel, const Distribution& dist);

/// Propagates `steps` times, renormalizing every 10^4 steps.
Distribution evolve(const Kernel& kernel, Distribution dist, int64_t steps);

double tv_distance(std::span<const double> mu, std::span<const double> sigma);
double tv_distance(const Distribution& mu, const Distribution& sigma);

/// Which starting vertices the worst case is taken over.
struct StartPolicy {
  enum class Kind { ExactAllStarts, HeuristicStartSet };
  Kind kind = Kind::ExactAllStarts;
  std::vector<int64_t> starts;  // used by HeuristicStartSet

  static StartPolicy exact() { return {}; }
  static StartPolicy heuristic(std::vector<int64_t> starts);
  bool is_exact() const { return kind == Kind::ExactAllStarts; }
  std::string tag() const { return is_exact() ? "exact" : "heuristic"; }
};

/// Largest n for which ExactAllStarts is the default policy.
inline constexpr int64_t kExactPolicyLimit = 2048;
/// Largest n for which an explicit exact request uses dense matrix powers.
inline constexpr int64_t kDenseLimit = 4096;

/// Hubs, their successors, arc midpoints and the vertices antipodal to each
/// hub; a spread sample for hub-free chains.
std::vector<int64_t> heuristic_starts(const ChainSpec& spec);
StartPolicy default_policy(const ChainSpec& spec);
StartPolicy parse_policy(const std::string& name, const ChainSpec& spec);

/// Circulant chains, where one start is representative of all.
bool is_vertex_transitive(const ChainSpec& spec);

struct DistanceValue {
  double value = 0.0;
  /// True when only a start subset was examined: value is a lower bound.
  bool lower_bound = false;
  std::string policy;
};

/// d(t): worst-start total variation distance to uniform after t steps.
DistanceValue distance_profile(const Kernel& kernel, int64_t t,
                               const StartPolicy& policy);

/// d(t) for each start in `starts` (1-indexed), same order.
std::vector<double> distances_from(const Kernel& kernel, int64_t t,
                                   std::span<const int64_t> starts);

/// dbar(t): worst total variation distance between the time-t laws of two
/// starts. All n^2 pairs when exact and n <= kDbarExactLimit.
inline constexpr int64_t kDbarExactLimit = 512;
DistanceValue dbar(const Kernel& kernel, int64_t t, const StartPolicy& policy);

struct MixingCurve {
  std::vector<int64_t> times;
  std::vector<double> distances;
  std::string policy;
};

std::string curve_to_csv(const MixingCurve& curve);

struct MixingOptions {
  /// Largest t the search may examine; 0 means 64 n^2.
  int64_t iteration_cap = 0;
};

struct MixingResult {
  int64_t t = 0;
  bool lower_bound = false;
  std::string policy;
  MixingCurve curve;  // every evaluated (t, d(t)), increasing t
};

/// Thrown when d(t) > eps at the iteration cap; carries the bracket.
class MixingCapExceeded : public ComputationError {
 public:
  MixingCapExceeded(int64_t lo, int64_t cap, double d_lo);
  int64_t lower() const { return lo_; }
  int64_t cap() const { return cap_; }

 private:
  int64_t lo_;
  int64_t cap_;
};

/// Smallest t with d(t) <= eps, by doubling then bisection on the monotone
/// profile. Heuristic policies give a lower bound on the true value.
MixingResult mixing_time(const Kernel& kernel, double eps,
                         const StartPolicy& policy,
                         const MixingOptions& options = {});

}  // namespace chordmix
