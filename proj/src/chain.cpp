#include "chordmix/chain.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include <json.hpp>

namespace chordmix {

namespace {

struct NamedVariant {
  Variant variant;
  std::string_view name;
};

constexpr NamedVariant kVariantNames[] = {
    {Variant::DriftChord, "drift-chord"},
    {Variant::LazyReversibleCycle, "lazy-cycle"},
    {Variant::DriftNoChord, "drift-no-chord"},
    {Variant::OppositeChordsDrift, "opposite-chords"},
    {Variant::KHub, "khub"},
};

// Successor on the cycle, 1-indexed.
int64_t next_vertex(int64_t v, int64_t n) { return v == n ? 1 : v + 1; }
int64_t prev_vertex(int64_t v, int64_t n) { return v == 1 ? n : v - 1; }

}  // namespace

std::string_view variant_name(Variant v) {
  for (const auto& nv : kVariantNames) {
    if (nv.variant == v) return nv.name;
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  for (const auto& nv : kVariantNames) {
    if (nv.name == name) return nv.variant;
  }
  throw ValidationError("unknown variant '" + std::string(name) +
                        "' (expected drift-chord, lazy-cycle, drift-no-chord, "
                        "opposite-chords or khub)");
}

ChainSpec ChainSpec::drift_chord(int64_t n, int64_t k) {
  ChainSpec s;
  s.variant = Variant::DriftChord;
  s.n = n;
  s.k = k;
  return s;
}

ChainSpec ChainSpec::lazy_cycle(int64_t n) {
  ChainSpec s;
  s.variant = Variant::LazyReversibleCycle;
  s.n = n;
  return s;
}

ChainSpec ChainSpec::drift_no_chord(int64_t n) {
  ChainSpec s;
  s.variant = Variant::DriftNoChord;
  s.n = n;
  return s;
}

ChainSpec ChainSpec::opposite_chords(int64_t n) {
  ChainSpec s;
  s.variant = Variant::OppositeChordsDrift;
  s.n = n;
  return s;
}

ChainSpec ChainSpec::khub(int64_t n, std::vector<int64_t> hubs) {
  ChainSpec s;
  s.variant = Variant::KHub;
  s.n = n;
  s.hubs = std::move(hubs);
  return s;
}

void ChainSpec::validate() const {
  if (n < 5) {
    throw ValidationError("n must be at least 5, got " + std::to_string(n));
  }
  switch (variant) {
    case Variant::DriftChord:
      if (!k) throw ValidationError("drift-chord requires a hub position k");
      if (*k < 2 || *k > n - 2) {
        throw ValidationError("hub position k must lie in [2, n-2] = [2, " +
                              std::to_string(n - 2) + "], got " +
                              std::to_string(*k));
      }
      break;
    case Variant::OppositeChordsDrift:
      if (n % 2 != 0) {
        throw ValidationError("opposite-chords requires even n, got " +
                              std::to_string(n));
      }
      break;
    case Variant::KHub: {
      if (hubs.size() < 2) {
        throw ValidationError("khub requires at least 2 hubs");
      }
      for (std::size_t i = 0; i < hubs.size(); ++i) {
        if (hubs[i] < 1 || hubs[i] > n) {
          throw ValidationError("hub " + std::to_string(hubs[i]) +
                                " outside [1, n]");
        }
        if (i > 0 && hubs[i] <= hubs[i - 1]) {
          throw ValidationError("hubs must be strictly increasing");
        }
      }
      break;
    }
    case Variant::LazyReversibleCycle:
    case Variant::DriftNoChord:
      break;
  }
}

std::string ChainSpec::describe() const {
  std::ostringstream os;
  os << variant_name(variant) << "(n=" << n;
  if (k) os << ", k=" << *k;
  if (!hubs.empty()) {
    os << ", hubs=[";
    for (std::size_t i = 0; i < hubs.size(); ++i) {
      os << (i ? "," : "") << hubs[i];
    }
    os << "]";
  }
  os << ")";
  return os.str();
}

Kernel Kernel::from_triplets(int64_t n, std::span<const Triplet> triplets,
                             ChainSpec spec) {
  if (n < 1) throw ValidationError("kernel dimension must be positive");
  std::vector<std::map<int64_t, double>> rows(static_cast<std::size_t>(n));
  for (const auto& t : triplets) {
    if (t.row < 1 || t.row > n || t.col < 1 || t.col > n) {
      throw ValidationError("triplet (" + std::to_string(t.row) + ", " +
                            std::to_string(t.col) + ") outside 1.." +
                            std::to_string(n));
    }
    rows[static_cast<std::size_t>(t.row - 1)][t.col] += t.p;
  }
  Kernel k;
  k.n_ = n;
  k.spec_ = std::move(spec);
  k.offsets_.reserve(static_cast<std::size_t>(n) + 1);
  k.offsets_.push_back(0);
  for (const auto& r : rows) {
    for (const auto& [col, p] : r) {
      if (p != 0.0) k.entries_.push_back({col, p});
    }
    k.offsets_.push_back(k.entries_.size());
  }
  return k;
}

std::span<const Transition> Kernel::row(int64_t v) const {
  if (v < 1 || v > n_) {
    throw ValidationError("vertex " + std::to_string(v) + " outside 1.." +
                          std::to_string(n_));
  }
  const auto i = static_cast<std::size_t>(v - 1);
  return {entries_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
}

double Kernel::prob(int64_t from, int64_t to) const {
  for (const auto& t : row(from)) {
    if (t.to == to) return t.p;
  }
  return 0.0;
}

std::size_t Kernel::max_row_support() const {
  std::size_t best = 0;
  for (std::size_t i = 0; i + 1 < offsets_.size(); ++i) {
    best = std::max(best, offsets_[i + 1] - offsets_[i]);
  }
  return best;
}

std::vector<Triplet> Kernel::triplets() const {
  std::vector<Triplet> out;
  out.reserve(entries_.size());
  for (int64_t v = 1; v <= n_; ++v) {
    for (const auto& t : row(v)) out.push_back({v, t.to, t.p});
  }
  return out;
}

Kernel build_kernel(const ChainSpec& spec) {
  spec.validate();
  const int64_t n = spec.n;
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(3 * n));

  switch (spec.variant) {
    case Variant::DriftChord: {
      // a_i = i for 1 <= i <= k, b_j = k + j for 1 <= j <= n - k.
      const int64_t k = *spec.k;
      for (int64_t v = 1; v <= n; ++v) {
        if (v == k || v == n) {
          const int64_t other = (v == k) ? n : k;
          t.push_back({v, next_vertex(v, n), 0.5});
          t.push_back({v, v, 0.25});
          t.push_back({v, other, 0.25});
        } else {
          t.push_back({v, v, 0.5});
          t.push_back({v, v + 1, 0.5});
        }
      }
      break;
    }
    case Variant::LazyReversibleCycle:
      for (int64_t v = 1; v <= n; ++v) {
        t.push_back({v, v, 0.5});
        t.push_back({v, next_vertex(v, n), 0.25});
        t.push_back({v, prev_vertex(v, n), 0.25});
      }
      break;
    case Variant::DriftNoChord:
      for (int64_t v = 1; v <= n; ++v) {
        t.push_back({v, v, 0.5});
        t.push_back({v, next_vertex(v, n), 0.5});
      }
      break;
    case Variant::OppositeChordsDrift: {
      // Parallel chords v <-> n + 1 - v; with drift this is the lifted
      // walk on n/2 positions that reverses direction with rate 1/n.
      const double flip = 1.0 / static_cast<double>(n);
      for (int64_t v = 1; v <= n; ++v) {
        t.push_back({v, v, 0.5});
        t.push_back({v, next_vertex(v, n), 0.5 - flip});
        t.push_back({v, n + 1 - v, flip});
      }
      break;
    }
    case Variant::KHub: {
      const auto K = static_cast<double>(spec.hubs.size());
      const double share = 1.0 / (2.0 * K);
      for (int64_t v = 1; v <= n; ++v) {
        const bool is_hub =
            std::binary_search(spec.hubs.begin(), spec.hubs.end(), v);
        t.push_back({v, next_vertex(v, n), 0.5});
        if (!is_hub) {
          t.push_back({v, v, 0.5});
          continue;
        }
        for (int64_t h : spec.hubs) t.push_back({v, h, share});
      }
      break;
    }
  }
  return Kernel::from_triplets(n, t, spec);
}

KernelReport verify_kernel(const Kernel& kernel, double tol) {
  KernelReport rep;
  const int64_t n = kernel.n();
  rep.support = kernel.nonzeros();
  if (n == 0) return rep;
  std::vector<double> col_sums(static_cast<std::size_t>(n), 0.0);
  rep.min_entry = 1.0;
  rep.max_entry = 0.0;
  for (int64_t v = 1; v <= n; ++v) {
    double s = 0.0;
    for (const auto& e : kernel.row(v)) {
      s += e.p;
      col_sums[static_cast<std::size_t>(e.to - 1)] += e.p;
      rep.min_entry = std::min(rep.min_entry, e.p);
      rep.max_entry = std::max(rep.max_entry, e.p);
    }
    const double dev = std::abs(s - 1.0);
    if (rep.worst_row == 0 || dev > rep.max_row_deviation) {
      rep.max_row_deviation = dev;
      rep.worst_row = v;
    }
  }
  for (int64_t v = 1; v <= n; ++v) {
    const double dev = std::abs(col_sums[static_cast<std::size_t>(v - 1)] - 1.0);
    if (rep.worst_col == 0 || dev > rep.max_col_deviation) {
      rep.max_col_deviation = dev;
      rep.worst_col = v;
    }
  }
  rep.pass = rep.max_row_deviation < tol && rep.max_col_deviation < tol &&
             rep.min_entry >= 0.0 && rep.max_entry <= 1.0;
  return rep;
}

std::string probability_text(double p) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), p);
  if (ec != std::errc()) throw ComputationError("cannot format probability");
  return std::string(buf, end);
}

std::string kernel_to_json(const Kernel& kernel) {
  nlohmann::ordered_json j;
  const auto& spec = kernel.spec();
  j["n"] = kernel.n();
  if (spec.k) {
    j["k"] = *spec.k;
  } else {
    j["k"] = nullptr;
  }
  j["variant"] = std::string(variant_name(spec.variant));
  if (!spec.hubs.empty()) j["hubs"] = spec.hubs;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& t : kernel.triplets()) {
    arr.push_back({t.row, t.col, probability_text(t.p)});
  }
  j["triplets"] = std::move(arr);
  return j.dump();
}

Kernel kernel_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("kernel JSON: ") + e.what());
  }
  try {
    ChainSpec spec;
    spec.variant = parse_variant(j.at("variant").get<std::string>());
    spec.n = j.at("n").get<int64_t>();
    if (j.contains("k") && !j["k"].is_null()) spec.k = j["k"].get<int64_t>();
    if (j.contains("hubs")) spec.hubs = j["hubs"].get<std::vector<int64_t>>();
    std::vector<Triplet> t;
    for (const auto& e : j.at("triplets")) {
      const auto& ptxt = e.at(2);
      const double p = ptxt.is_string() ? std::stod(ptxt.get<std::string>())
                                        : ptxt.get<double>();
      t.push_back({e.at(0).get<int64_t>(), e.at(1).get<int64_t>(), p});
    }
    return Kernel::from_triplets(spec.n, t, spec);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("kernel JSON: ") + e.what());
  }
}

}  // namespace chordmix
