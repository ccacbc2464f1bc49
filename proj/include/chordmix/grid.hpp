#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "chordmix/errors.hpp"

namespace chordmix {

/// Arc direction of a track segment: A is the arc 1..k, B the arc k+1..n.
enum class Dir { A, B };

inline Dir other(Dir d) { return d == Dir::A ? Dir::B : Dir::A; }
char dir_char(Dir d);
Dir parse_dir(const std::string& s);

/// Track geometry for one chord position.
///
/// Grid coordinates and directions live in the canonical frame where the
/// A arc is the shorter one (k_c = min(k, n - k)); when k > n/2 the cycle is
/// rotated so that vertex k + 1 becomes vertex 1. Vertices returned by
/// map_to_vertex and start_vertex are in the caller's original labels.
struct GridConfig {
  int64_t n = 0;
  int64_t k = 0;
  int64_t L = 1;       // track length past the origin grid point
  double rho = 1.0;
  int64_t lambda = 0;  // vertex steps from X(0) to the origin hub
  Dir start_dir = Dir::A;

  /// L = ceil(rho n^{3/2}), the track length used for time T = 2L + 2 lambda.
  static GridConfig for_scale(int64_t n, int64_t k, double rho = 1.0);

  void validate() const;
  int64_t canonical_k() const { return k <= n - k ? k : n - k; }
  bool relabeled() const { return k > n - k; }
  int64_t arc_length(Dir d) const {
    return d == Dir::A ? canonical_k() : n - canonical_k();
  }
  /// lambda as a fraction of the start arc, in [0, 1).
  double lambda_fraction() const;
  int64_t T() const { return 2 * L + 2 * lambda; }
  int64_t start_vertex() const;
  int64_t to_original(int64_t canonical_vertex) const;
};

/// A point of the exit set: k_c x + (n - k_c) y = L with x integral on B
/// segments and y integral on A segments. Stored through the exact integer
/// products kx = k_c x and nky = (n - k_c) y.
struct ExitPoint {
  int64_t kx = 0;
  int64_t nky = 0;
  Dir h = Dir::A;
  int64_t x_prime = 0;  // preceding grid point
  int64_t y_prime = 0;
  int64_t offset = 0;  // moves along the current segment, in (0, arc length]
  double x = 0.0;
  double y = 0.0;
};

struct ExitSet {
  std::vector<ExitPoint> points;    // ordered by x, A before B at lattice points
  std::vector<ExitPoint> excluded;  // axis points with x' < 0 or y' < 0
};

ExitSet exit_set(const GridConfig& config);

/// P(E_r) from the Binomial-convolution closed form for start direction
/// `start`. The straight tracks AA with y' = 0 and BB with x' = 0 are
/// (1/4)^{x'+y'+1}.
double exit_probability(int64_t x_prime, int64_t y_prime, Dir h, Dir start);
double exit_probability(const ExitPoint& r, Dir start);
double exit_log_probability(int64_t x_prime, int64_t y_prime, Dir h, Dir start);

/// P(E_r) by summing the turn-count series directly.
double exit_probability_oracle(int64_t x_prime, int64_t y_prime, Dir h, Dir start);
double exit_probability_oracle(const ExitPoint& r, Dir start);

/// (1/4) [Binom(x',3/4) * Binom(y',1/4)](y'), the direction-free bound term.
double sandwich_term(const ExitPoint& r);

std::vector<ExitPoint> restrict_R0(std::span<const ExitPoint> R, double rho, int64_t n);
/// Central floor(sqrt(rho) n^{1/4}) points of R0, keeping R0's order.
std::vector<ExitPoint> select_R1(std::span<const ExitPoint> R0, double rho, int64_t n);

/// g: the vertex after L track moves along the arcs encoded by r.
int64_t map_to_vertex(const ExitPoint& r, const GridConfig& config);
std::vector<int64_t> image(std::span<const ExitPoint> R, const GridConfig& config);

/// R sorted by x in the caller's labels. The canonical order reverses when
/// the arcs are relabeled; in this order consecutive images step by -k.
std::vector<ExitPoint> original_order(std::span<const ExitPoint> R, const GridConfig& config);

/// The same exit point one track move further (L + 1): along its segment,
/// turning onto the other arc at grid points.
ExitPoint advance_zigzag(const ExitPoint& r, const GridConfig& config);

/// min(|a - b|, n - |a - b|).
int64_t cycle_distance(int64_t a, int64_t b, int64_t n);

struct SelectionParams {
  double gamma3 = 0.6;
  /// Coefficient c of the hub clearance c sqrt(rho) n^{3/4} sqrt(log n).
  double clearance = 4.0;
};

double hub_clearance(int64_t n, double rho, double coefficient);

struct VertexSelection {
  std::vector<int64_t> V1;
  std::vector<int64_t> V2;
  std::vector<int64_t> W;  // sorted
  std::vector<int64_t> I;  // sorted
};

/// True when v keeps more than the clearance from both hubs k and n.
bool avoids_hubs(int64_t v, const GridConfig& config, double clearance_distance);

VertexSelection build_selection(std::span<const int64_t> V1, const GridConfig& config,
                                const SelectionParams& params);

struct CltReport {
  double sup_distance = 0.0;
  double scaled = 0.0;  // sup_distance * sqrt(x' + y')
  int64_t argmax = 0;
};

/// Sup distance between the CDF of Binom(x',3/4) * Binom(y',1/4) and the
/// Gaussian with the same mean and variance.
CltReport clt_diagnostic(int64_t x_prime, int64_t y_prime);

/// Interior indices i where 2 log q_i < log q_{i-1} + log q_{i+1} - tol.
std::vector<int64_t> log_concavity_violations(int64_t x_prime, int64_t y_prime,
                                              double tol = 1e-9);

}  // namespace chordmix
