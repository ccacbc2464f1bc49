#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chordmix/errors.hpp"

namespace chordmix {

enum class Variant {
  DriftChord,
  LazyReversibleCycle,
  DriftNoChord,
  OppositeChordsDrift,
  KHub,
};

std::string_view variant_name(Variant v);
Variant parse_variant(std::string_view name);

/// Chain description. Vertices are 1..n; `k` is the chord hub for
/// DriftChord, `hubs` the sorted hub list for KHub.
struct ChainSpec {
  Variant variant = Variant::DriftChord;
  int64_t n = 0;
  std::optional<int64_t> k;
  std::vector<int64_t> hubs;

  static ChainSpec drift_chord(int64_t n, int64_t k);
  static ChainSpec lazy_cycle(int64_t n);
  static ChainSpec drift_no_chord(int64_t n);
  static ChainSpec opposite_chords(int64_t n);
  static ChainSpec khub(int64_t n, std::vector<int64_t> hubs);

  /// Throws ValidationError when the invariants for the variant fail.
  void validate() const;
  std::string describe() const;
};

struct Transition {
  int64_t to;  // 1-indexed
  double p;
};

struct Triplet {
  int64_t row;
  int64_t col;
  double p;
};

/// Sparse row-stochastic kernel. Rows are stored contiguously; interfaces
/// speak 1-indexed vertices.
class Kernel {
 public:
  Kernel() = default;

  /// Assembles a kernel from raw triplets without checking stochasticity.
  static Kernel from_triplets(int64_t n, std::span<const Triplet> triplets,
                              ChainSpec spec);

  int64_t n() const { return n_; }
  const ChainSpec& spec() const { return spec_; }
  std::span<const Transition> row(int64_t v) const;
  double prob(int64_t from, int64_t to) const;
  std::size_t nonzeros() const { return entries_.size(); }
  std::size_t max_row_support() const;
  std::vector<Triplet> triplets() const;

  /// Raw CSR view: row v (1-indexed) occupies entries()[offsets()[v-1] ..
  /// offsets()[v]).
  std::span<const std::size_t> offsets() const { return offsets_; }
  std::span<const Transition> entries() const { return entries_; }

 private:
  int64_t n_ = 0;
  ChainSpec spec_;
  std::vector<std::size_t> offsets_;
  std::vector<Transition> entries_;
};

Kernel build_kernel(const ChainSpec& spec);

struct KernelReport {
  double max_row_deviation = 0.0;
  double max_col_deviation = 0.0;
  int64_t worst_row = 0;  // 1-indexed, 0 when n == 0
  int64_t worst_col = 0;
  std::size_t support = 0;
  double min_entry = 0.0;
  double max_entry = 0.0;
  bool pass = false;
};

KernelReport verify_kernel(const Kernel& kernel, double tol = 1e-12);

/// Decimal text for a probability: exact for dyadic values like 0.25, 0.5,
/// shortest round-trip form otherwise.
std::string probability_text(double p);

std::string kernel_to_json(const Kernel& kernel);
Kernel kernel_from_json(const std::string& text);

}  // namespace chordmix
