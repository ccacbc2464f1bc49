#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chordmix/chain.hpp"
#include "chordmix/evolve.hpp"
#include "chordmix/grid.hpp"

namespace chordmix {

inline constexpr int kSchemaVersion = 1;

struct ExperimentRecord {
  std::string variant;
  int64_t n = 0;
  /// Empty for chord-free chains, {k} for drift-chord, the hub list for khub.
  std::vector<int64_t> k;
  double eps = 0.25;
  int64_t t_mix = 0;
  std::string policy;
  uint64_t seed = 0;
  int64_t wall_time_ms = 0;

  bool operator==(const ExperimentRecord&) const = default;
};

/// A grid point whose search hit the iteration cap.
struct FailedPoint {
  std::string variant;
  int64_t n = 0;
  std::vector<int64_t> k;
  uint64_t seed = 0;
  std::string message;
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  int64_t n_min = 0;
  int64_t n_max = 0;
  std::size_t points = 0;
};

struct KPolicy {
  enum class Kind { Good, Fixed, Half };
  Kind kind = Kind::Good;
  int64_t fixed = 0;

  /// "good", "half" or "fixed:K".
  static KPolicy parse(const std::string& text);
  std::string text() const;
};

struct ScalingRequest {
  Variant variant = Variant::DriftChord;
  std::vector<int64_t> n_grid;
  double eps = 0.25;
  KPolicy k_policy;
  std::vector<uint64_t> seeds{0};
  double rho = 1.0;
  double gamma3 = 0.6;
  int hubs = 2;                  // K for khub
  std::string policy = "auto";   // exact | heuristic | auto
  bool record_timing = false;    // wall_time_ms stays 0 otherwise
  int64_t iteration_cap = 0;
};

struct ScalingResult {
  std::vector<ExperimentRecord> records;
  std::vector<FailedPoint> failures;
};

/// Chord position for one grid point: a seeded draw from the good-k set,
/// a fixed k, or n/2.
int64_t choose_k(int64_t n, const KPolicy& policy, uint64_t seed, double rho, double gamma3);

/// K distinct hubs drawn from the seed, sorted.
std::vector<int64_t> choose_hubs(int64_t n, int K, uint64_t seed);

/// t_mix for every (n, seed); chains with no random choice run once per n
/// under the first seed. Records come back sorted by (n, seed).
ScalingResult scaling_run(const ScalingRequest& request);

/// Least squares of log t_mix on log n. Needs three distinct n.
FitResult fit_exponent(const std::vector<ExperimentRecord>& records, bool exact_only = false);

struct LowerBoundRow {
  int64_t n = 0;
  int64_t k = 0;
  int64_t t_mix = 0;
  double scaled = 0.0;  // t_mix / n^{3/2}
  std::string policy;
};

struct LowerBoundReport {
  double eps_star = 0.05;
  std::vector<LowerBoundRow> rows;
  std::vector<int64_t> n_grid;
  std::vector<double> min_scaled;  // per n, min over sampled k
  std::vector<double> half_scaled; // per n, value at k = n/2
  double ratio = 0.0;              // max/min of min_scaled over the grid
};

/// Sampled chord positions for the lower-bound probe: n/2 plus count-1
/// distinct seeded draws from [2, n-2].
std::vector<int64_t> sample_ks(int64_t n, int count, uint64_t seed);

LowerBoundReport lower_bound_probe(const std::vector<int64_t>& n_grid, double eps_star,
                                   int k_sample, uint64_t seed);

struct ZigzagReport {
  int64_t n = 0;
  int64_t k = 0;
  std::size_t R1_size = 0;
  std::size_t I_size = 0;
  std::vector<int64_t> hits;  // per shift i = 0..n-1
  int64_t total_hits = 0;
  int64_t selected_shift = -1;
  bool orbits_exact = true;   // every interior R1 orbit covers the cycle once
  std::size_t orbit_checked = 0;
};

/// Advances every R1 point one track move per shift and counts how many
/// land in I. Throws ComputationError if no shift reaches |R1|/2 hits.
ZigzagReport zigzag_scan(const GridConfig& config, const SelectionParams& params);

struct KHubReport {
  int K = 0;
  std::vector<ExperimentRecord> records;
  FitResult fit;
  double conjectured = 0.0;  // 1 + 1/K
};

KHubReport khub_probe(int K, const std::vector<int64_t>& n_grid, double eps,
                      const std::vector<uint64_t>& seeds, const std::string& policy = "auto");

/// Output metadata: key/value pairs echoed into every emitted file.
struct Metadata {
  std::vector<std::pair<std::string, std::string>> entries;
  void add(const std::string& key, const std::string& value) { entries.emplace_back(key, value); }
};

enum class Format { Csv, Jsonl };
Format parse_format(const std::string& text);

std::string render(const std::vector<ExperimentRecord>& records, Format format,
                   const Metadata& meta);
/// Writes render(...) to path; throws ValidationError on empty records and
/// ComputationError when the file cannot be written.
void emit(const std::vector<ExperimentRecord>& records, Format format, const std::string& path,
          const Metadata& meta);

std::vector<ExperimentRecord> parse_jsonl(const std::string& text);
std::vector<ExperimentRecord> read_jsonl(const std::string& path);

}  // namespace chordmix
