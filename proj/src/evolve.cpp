#include "chordmix/evolve.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "chordmix/parallel.hpp"

namespace chordmix {

namespace {

constexpr int64_t kRenormalizeEvery = 10000;

void check_vertex(int64_t n, int64_t v) {
  if (v < 1 || v > n) {
    throw ValidationError("vertex " + std::to_string(v) + " outside 1.." +
                          std::to_string(n));
  }
}

double tv_to_uniform(std::span<const double> w) {
  const double u = 1.0 / static_cast<double>(w.size());
  double s = 0.0;
  for (double x : w) s += std::abs(x - u);
  return 0.5 * s;
}

// out = in * P, both 0-indexed dense rows.
void apply_kernel(const Kernel& kernel, std::span<const double> in,
                  std::span<double> out) {
  const auto offsets = kernel.offsets();
  const auto entries = kernel.entries();
  std::fill(out.begin(), out.end(), 0.0);
  const std::size_t n = in.size();
  for (std::size_t v = 0; v < n; ++v) {
    const double w = in[v];
    if (w == 0.0) continue;
    for (std::size_t e = offsets[v]; e < offsets[v + 1]; ++e) {
      out[static_cast<std::size_t>(entries[e].to - 1)] += w * entries[e].p;
    }
  }
}

void renormalize_row(std::span<double> w) {
  double s = 0.0;
  for (double& x : w) {
    if (x < 0.0) x = 0.0;
    s += x;
  }
  if (s > 0.0) {
    for (double& x : w) x /= s;
  }
}

// Laws of X(t) for a fixed list of starts, advanced by sparse propagation.
struct SparseLaws {
  std::vector<int64_t> starts;
  int64_t n = 0;
  std::vector<double> rows;  // starts.size() x n, row-major

  std::span<double> row(std::size_t i) {
    return {rows.data() + i * static_cast<std::size_t>(n),
            static_cast<std::size_t>(n)};
  }
  std::span<const double> row(std::size_t i) const {
    return {rows.data() + i * static_cast<std::size_t>(n),
            static_cast<std::size_t>(n)};
  }
};

SparseLaws initial_laws(const Kernel& kernel, std::span<const int64_t> starts) {
  SparseLaws laws;
  laws.n = kernel.n();
  laws.starts.assign(starts.begin(), starts.end());
  laws.rows.assign(starts.size() * static_cast<std::size_t>(laws.n), 0.0);
  for (std::size_t i = 0; i < starts.size(); ++i) {
    check_vertex(laws.n, starts[i]);
    laws.row(i)[static_cast<std::size_t>(starts[i] - 1)] = 1.0;
  }
  return laws;
}

void advance(const Kernel& kernel, SparseLaws& laws, int64_t steps) {
  parallel_for(laws.starts.size(), [&](std::size_t i) {
    auto cur = laws.row(i);
    std::vector<double> buf(cur.size());
    std::span<double> a = cur;
    std::span<double> b = buf;
    for (int64_t s = 1; s <= steps; ++s) {
      apply_kernel(kernel, a, b);
      std::swap(a, b);
      if (s % kRenormalizeEvery == 0) renormalize_row(a);
    }
    if (a.data() != cur.data()) std::copy(a.begin(), a.end(), cur.begin());
  });
}

std::vector<double> row_distances(const SparseLaws& laws) {
  std::vector<double> out(laws.starts.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = tv_to_uniform(laws.row(i));
  return out;
}

double worst_distance(const SparseLaws& laws) {
  double best = 0.0;
  for (double d : row_distances(laws)) best = std::max(best, d);
  return best;
}

Eigen::MatrixXd dense_kernel(const Kernel& kernel) {
  const auto n = static_cast<Eigen::Index>(kernel.n());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (const auto& t : kernel.triplets()) p(t.row - 1, t.col - 1) += t.p;
  return p;
}

// Max over rows of the distance to uniform, column-major friendly.
double worst_row_distance(const Eigen::MatrixXd& m) {
  const Eigen::Index n = m.cols();
  const double u = 1.0 / static_cast<double>(n);
  std::vector<double> acc(static_cast<std::size_t>(m.rows()), 0.0);
  for (Eigen::Index c = 0; c < n; ++c) {
    const double* col = m.col(c).data();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      acc[static_cast<std::size_t>(r)] += std::abs(col[r] - u);
    }
  }
  return 0.5 * *std::max_element(acc.begin(), acc.end());
}

void renormalize_rows(Eigen::MatrixXd& m) {
  m = m.cwiseMax(0.0);
  const Eigen::VectorXd sums = m.rowwise().sum();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    if (sums(r) > 0.0) m.row(r) /= sums(r);
  }
}

Eigen::MatrixXd multiply(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd c(a.rows(), b.cols());
  c.noalias() = a * b;
  renormalize_rows(c);
  return c;
}

// Full P^t for all starts, cached powers of two.
class DenseEngine {
 public:
  using State = Eigen::MatrixXd;

  explicit DenseEngine(const Kernel& kernel) { pows_.push_back(dense_kernel(kernel)); }

  const State& doubled(int j) {
    while (static_cast<int>(pows_.size()) <= j) {
      pows_.push_back(multiply(pows_.back(), pows_.back()));
    }
    return pows_[static_cast<std::size_t>(j)];
  }

  State extend(const State& s, int j) { return multiply(s, doubled(j)); }

  void release_above(int j) {
    if (static_cast<int>(pows_.size()) > j + 1) {
      pows_.resize(static_cast<std::size_t>(j + 1));
    }
  }

  double worst(const State& s) const { return worst_row_distance(s); }

  State power(int64_t t) {
    const auto n = pows_.front().rows();
    State acc = State::Identity(n, n);
    for (int j = 0; (int64_t{1} << j) <= t; ++j) {
      if (t & (int64_t{1} << j)) acc = multiply(acc, doubled(j));
    }
    return acc;
  }

 private:
  std::vector<State> pows_;
};

class SparseEngine {
 public:
  using State = SparseLaws;

  SparseEngine(const Kernel& kernel, std::span<const int64_t> starts)
      : kernel_(kernel), last_(initial_laws(kernel, starts)) {}

  // State at t = 2^j; calls must use non-decreasing j.
  const State& doubled(int j) {
    while (last_t_ < (int64_t{1} << j)) {
      const int64_t steps = last_t_ == 0 ? 1 : last_t_;
      advance(kernel_, last_, steps);
      last_t_ += steps;
    }
    return last_;
  }

  State extend(const State& s, int j) {
    State out = s;
    advance(kernel_, out, int64_t{1} << j);
    return out;
  }

  void release_above(int) {}

  double worst(const State& s) const { return worst_distance(s); }

 private:
  const Kernel& kernel_;
  State last_;
  int64_t last_t_ = 0;
};

struct CurveBuilder {
  std::vector<std::pair<int64_t, double>> points;
  void add(int64_t t, double d) { points.emplace_back(t, d); }
  MixingCurve finish(std::string policy) {
    std::sort(points.begin(), points.end());
    MixingCurve c;
    c.policy = std::move(policy);
    for (const auto& [t, d] : points) {
      c.times.push_back(t);
      c.distances.push_back(d);
    }
    return c;
  }
};

// Doubling to find 2^j with d(2^j) <= eps, then bisection inside
// (2^(j-1), 2^j] by descending powers of two.
template <class Engine>
int64_t search(Engine& eng, double eps, int64_t cap, CurveBuilder& curve) {
  int j = 0;
  double d = eng.worst(eng.doubled(0));
  curve.add(1, d);
  if (d <= eps) return 1;
  typename Engine::State state;
  while (d > eps) {
    const int64_t next = int64_t{1} << (j + 1);
    if (next > cap) throw MixingCapExceeded(int64_t{1} << j, cap, d);
    state = eng.doubled(j);
    ++j;
    d = eng.worst(eng.doubled(j));
    curve.add(next, d);
  }
  int64_t lo = int64_t{1} << (j - 1);
  for (int i = j - 2; i >= 0; --i) {
    eng.release_above(i);
    typename Engine::State cand = eng.extend(state, i);
    const double dc = eng.worst(cand);
    curve.add(lo + (int64_t{1} << i), dc);
    if (dc > eps) {
      state = std::move(cand);
      lo += int64_t{1} << i;
    }
  }
  return lo + 1;
}

std::vector<int64_t> all_vertices(int64_t n) {
  std::vector<int64_t> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), int64_t{1});
  return v;
}

// Starts to propagate for a policy, and whether the result is certified.
std::pair<std::vector<int64_t>, bool> effective_starts(const Kernel& kernel,
                                                       const StartPolicy& policy) {
  if (!policy.is_exact()) {
    if (policy.starts.empty()) throw ValidationError("heuristic start set is empty");
    for (int64_t s : policy.starts) check_vertex(kernel.n(), s);
    return {policy.starts, false};
  }
  if (is_vertex_transitive(kernel.spec())) return {{1}, true};
  return {all_vertices(kernel.n()), true};
}

bool use_dense(const Kernel& kernel, const StartPolicy& policy) {
  return policy.is_exact() && !is_vertex_transitive(kernel.spec()) &&
         kernel.n() <= kDenseLimit;
}

double pair_tv(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

}  // namespace

Distribution::Distribution(std::vector<double> weights) : w_(std::move(weights)) {
  if (w_.empty()) throw ValidationError("distribution must be non-empty");
}

Distribution Distribution::uniform(int64_t n) {
  if (n < 1) throw ValidationError("n must be positive");
  return Distribution(std::vector<double>(static_cast<std::size_t>(n),
                                          1.0 / static_cast<double>(n)));
}

Distribution Distribution::delta(int64_t n, int64_t vertex) {
  if (n < 1) throw ValidationError("n must be positive");
  check_vertex(n, vertex);
  std::vector<double> w(static_cast<std::size_t>(n), 0.0);
  w[static_cast<std::size_t>(vertex - 1)] = 1.0;
  return Distribution(std::move(w));
}

double Distribution::mass() const {
  return std::accumulate(w_.begin(), w_.end(), 0.0);
}

void Distribution::renormalize() {
  for (double x : w_) {
    if (x < -1e-15) {
      throw ComputationError("distribution has a negative weight " +
                             std::to_string(x));
    }
  }
  renormalize_row(w_);
}

Distribution step(const Kernel& kernel, const Distribution& dist) {
  if (dist.n() != kernel.n()) {
    throw ValidationError("dimension mismatch: distribution has " +
                          std::to_string(dist.n()) + " entries, kernel " +
                          std::to_string(kernel.n()));
  }
  std::vector<double> out(static_cast<std::size_t>(kernel.n()));
  apply_kernel(kernel, dist.weights(), out);
  return Distribution(std::move(out));
}

Distribution evolve(const Kernel& kernel, Distribution dist, int64_t steps) {
  if (steps < 0) throw ValidationError("steps must be non-negative");
  for (int64_t s = 1; s <= steps; ++s) {
    dist = step(kernel, dist);
    if (s % kRenormalizeEvery == 0) dist.renormalize();
  }
  return dist;
}

double tv_distance(std::span<const double> mu, std::span<const double> sigma) {
  if (mu.size() != sigma.size()) {
    throw ValidationError("dimension mismatch in total variation distance");
  }
  return pair_tv(mu.data(), sigma.data(), mu.size());
}

double tv_distance(const Distribution& mu, const Distribution& sigma) {
  return tv_distance(mu.weights(), sigma.weights());
}

StartPolicy StartPolicy::heuristic(std::vector<int64_t> starts) {
  StartPolicy p;
  p.kind = Kind::HeuristicStartSet;
  std::sort(starts.begin(), starts.end());
  starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
  p.starts = std::move(starts);
  return p;
}

bool is_vertex_transitive(const ChainSpec& spec) {
  return spec.variant == Variant::LazyReversibleCycle ||
         spec.variant == Variant::DriftNoChord;
}

std::vector<int64_t> heuristic_starts(const ChainSpec& spec) {
  const int64_t n = spec.n;
  auto wrap = [n](int64_t v) { return ((v - 1) % n + n) % n + 1; };
  std::vector<int64_t> hubs;
  if (spec.variant == Variant::DriftChord) {
    hubs = {*spec.k, n};
  } else if (spec.variant == Variant::KHub) {
    hubs = spec.hubs;
  }
  std::set<int64_t> out;
  if (hubs.empty()) {
    for (int64_t q = 0; q < 4; ++q) out.insert(wrap(1 + q * n / 4));
    out.insert(n);
  } else {
    for (std::size_t i = 0; i < hubs.size(); ++i) {
      const int64_t h = hubs[i];
      const int64_t next_hub = hubs[(i + 1) % hubs.size()];
      int64_t arc = next_hub - h;
      if (arc <= 0) arc += n;
      out.insert(h);
      out.insert(wrap(h + 1));           // first vertex of the next arc
      out.insert(wrap(h + (arc + 1) / 2));  // arc midpoint
      out.insert(wrap(h + n / 2));       // antipode
    }
  }
  return {out.begin(), out.end()};
}

StartPolicy default_policy(const ChainSpec& spec) {
  if (spec.n <= kExactPolicyLimit || is_vertex_transitive(spec)) {
    return StartPolicy::exact();
  }
  return StartPolicy::heuristic(heuristic_starts(spec));
}

StartPolicy parse_policy(const std::string& name, const ChainSpec& spec) {
  if (name == "exact") return StartPolicy::exact();
  if (name == "heuristic") return StartPolicy::heuristic(heuristic_starts(spec));
  if (name == "auto" || name.empty()) return default_policy(spec);
  throw ValidationError("unknown policy '" + name +
                        "' (expected exact, heuristic or auto)");
}

std::vector<double> distances_from(const Kernel& kernel, int64_t t,
                                   std::span<const int64_t> starts) {
  if (t < 0) throw ValidationError("t must be non-negative");
  SparseLaws laws = initial_laws(kernel, starts);
  advance(kernel, laws, t);
  return row_distances(laws);
}

DistanceValue distance_profile(const Kernel& kernel, int64_t t,
                               const StartPolicy& policy) {
  if (t < 0) throw ValidationError("t must be non-negative");
  const auto [starts, exact] = effective_starts(kernel, policy);
  DistanceValue out;
  out.policy = policy.tag();
  out.lower_bound = !exact;
  if (t == 0) {
    out.value = 1.0 - 1.0 / static_cast<double>(kernel.n());
    return out;
  }
  if (use_dense(kernel, policy)) {
    DenseEngine eng(kernel);
    out.value = eng.worst(eng.power(t));
    return out;
  }
  const auto d = distances_from(kernel, t, starts);
  out.value = *std::max_element(d.begin(), d.end());
  return out;
}

DistanceValue dbar(const Kernel& kernel, int64_t t, const StartPolicy& policy) {
  if (t < 0) throw ValidationError("t must be non-negative");
  const int64_t n = kernel.n();
  const auto un = static_cast<std::size_t>(n);
  DistanceValue out;
  out.policy = policy.tag();

  if (policy.is_exact() && is_vertex_transitive(kernel.spec())) {
    // Row s of P^t is row 1 shifted by s - 1.
    SparseLaws laws = initial_laws(kernel, std::vector<int64_t>{1});
    advance(kernel, laws, t);
    const auto f = laws.row(0);
    double best = 0.0;
    for (std::size_t shift = 1; shift < un; ++shift) {
      double s = 0.0;
      for (std::size_t v = 0; v < un; ++v) s += std::abs(f[v] - f[(v + un - shift) % un]);
      best = std::max(best, 0.5 * s);
    }
    out.value = best;
    return out;
  }

  if (policy.is_exact() && n <= kDbarExactLimit) {
    DenseEngine eng(kernel);
    // Row-major copy so rows are contiguous.
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> m =
        eng.power(t);
    std::vector<double> best(un, 0.0);
    parallel_for(un, [&](std::size_t i) {
      for (std::size_t j = i + 1; j < un; ++j) {
        best[i] = std::max(best[i], pair_tv(m.row(static_cast<Eigen::Index>(i)).data(),
                                            m.row(static_cast<Eigen::Index>(j)).data(), un));
      }
    });
    out.value = *std::max_element(best.begin(), best.end());
    return out;
  }

  const std::vector<int64_t> starts =
      policy.is_exact() ? heuristic_starts(kernel.spec()) : policy.starts;
  SparseLaws laws = initial_laws(kernel, starts);
  advance(kernel, laws, t);
  double best = 0.0;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    for (std::size_t j = i + 1; j < starts.size(); ++j) {
      best = std::max(best, tv_distance(laws.row(i), laws.row(j)));
    }
  }
  out.value = best;
  out.lower_bound = true;
  return out;
}

std::string curve_to_csv(const MixingCurve& curve) {
  std::ostringstream os;
  os.precision(17);
  os << "t,d,policy\n";
  for (std::size_t i = 0; i < curve.times.size(); ++i) {
    os << curve.times[i] << ',' << curve.distances[i] << ',' << curve.policy << '\n';
  }
  return os.str();
}

MixingCapExceeded::MixingCapExceeded(int64_t lo, int64_t cap, double d_lo)
    : ComputationError("mixing time exceeds the iteration cap " + std::to_string(cap) +
                       ": d(" + std::to_string(lo) + ") = " + std::to_string(d_lo) +
                       ", bracket (" + std::to_string(lo) + ", inf)"),
      lo_(lo),
      cap_(cap) {}

MixingResult mixing_time(const Kernel& kernel, double eps, const StartPolicy& policy,
                         const MixingOptions& options) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw ValidationError("eps must lie in (0, 1), got " + std::to_string(eps));
  }
  const int64_t n = kernel.n();
  const int64_t cap = options.iteration_cap > 0 ? options.iteration_cap : 64 * n * n;
  const auto [starts, exact] = effective_starts(kernel, policy);

  MixingResult res;
  res.policy = policy.tag();
  res.lower_bound = !exact;
  CurveBuilder curve;
  const double d0 = 1.0 - 1.0 / static_cast<double>(n);
  curve.add(0, d0);
  if (d0 <= eps) {
    res.t = 0;
  } else if (use_dense(kernel, policy)) {
    DenseEngine eng(kernel);
    res.t = search(eng, eps, cap, curve);
  } else {
    SparseEngine eng(kernel, starts);
    res.t = search(eng, eps, cap, curve);
  }
  res.curve = curve.finish(res.policy);
  return res;
}

}  // namespace chordmix
