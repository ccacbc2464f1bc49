#pragma once
// Independent reference computations used only by the tests.

#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <tuple>
#include <vector>

#include "chordmix/chain.hpp"
#include "chordmix/grid.hpp"

namespace oracle {

using u128 = unsigned __int128;

inline int64_t phi_by_gcd(int64_t m) {
  int64_t c = 0;
  for (int64_t j = 1; j <= m; ++j) c += std::gcd(j, m) == 1 ? 1 : 0;
  return c;
}

inline u128 choose_exact(int64_t n, int64_t j) {
  if (j < 0 || j > n) return 0;
  u128 r = 1;
  for (int64_t i = 1; i <= j; ++i) r = r * static_cast<u128>(n - j + i) / static_cast<u128>(i);
  return r;
}

inline u128 pow_exact(u128 b, int64_t e) {
  u128 r = 1;
  while (e-- > 0) r *= b;
  return r;
}

/// 4^{a+b} [Binom(a,3/4) * Binom(b,1/4)](s) as an exact integer (a+b <= 60).
inline u128 conv_numerator(int64_t a, int64_t b, int64_t s) {
  u128 total = 0;
  for (int64_t i = 0; i <= a; ++i) {
    const int64_t j = s - i;
    if (j < 0 || j > b) continue;
    total += choose_exact(a, i) * pow_exact(3, i) * choose_exact(b, j) * pow_exact(3, b - j);
  }
  return total;
}

inline double u128_to_double(u128 x) {
  return static_cast<double>(static_cast<uint64_t>(x >> 64)) * 0x1.0p64 +
         static_cast<double>(static_cast<uint64_t>(x));
}

/// Exact conv point mass rounded once to double.
inline double conv_exact(int64_t a, int64_t b, int64_t s) {
  return std::ldexp(u128_to_double(conv_numerator(a, b, s)), static_cast<int>(-2 * (a + b)));
}

struct TrackExit {
  int64_t kx;
  int64_t nky;
  chordmix::Dir h;
  bool operator<(const TrackExit& o) const {
    return std::tie(kx, nky, h) < std::tie(o.kx, o.nky, o.h);
  }
};

/// Enumerates every turn sequence of the track from the origin and records
/// the segment on which it crosses track length L, with its probability.
inline std::map<TrackExit, double> enumerate_exits(const chordmix::GridConfig& c,
                                                   chordmix::Dir start) {
  using chordmix::Dir;
  const int64_t la = c.arc_length(Dir::A);
  const int64_t lb = c.arc_length(Dir::B);
  std::map<TrackExit, double> out;
  struct Node {
    int64_t kx, nky;
    Dir prev;
    double p;
  };
  std::vector<Node> stack{{0, 0, start, 1.0}};
  while (!stack.empty()) {
    const Node cur = stack.back();
    stack.pop_back();
    for (Dir d : {Dir::A, Dir::B}) {
      const double p = cur.p * (d == cur.prev ? 0.25 : 0.75);
      const int64_t seg = d == Dir::A ? la : lb;
      const int64_t used = cur.kx + cur.nky;
      if (used + seg >= c.L) {
        const int64_t rest = c.L - used;
        TrackExit e{cur.kx + (d == Dir::A ? rest : 0), cur.nky + (d == Dir::B ? rest : 0), d};
        out[e] += p;
      } else {
        stack.push_back({cur.kx + (d == Dir::A ? seg : 0), cur.nky + (d == Dir::B ? seg : 0), d, p});
      }
    }
  }
  return out;
}

/// Same law as enumerate_exits, summed over grid points by forward dynamic
/// programming instead of per-sequence enumeration. Polynomial in L.
inline std::map<TrackExit, double> grid_dp_exits(const chordmix::GridConfig& c,
                                                 chordmix::Dir start) {
  using chordmix::Dir;
  const int64_t la = c.arc_length(Dir::A);
  const int64_t lb = c.arc_length(Dir::B);
  const int64_t amax = c.L / la + 1;
  const int64_t bmax = c.L / lb + 1;
  // mass[a][b][d]: probability of standing at grid point (a, b) after a
  // segment in direction d (the origin counts as arriving in `start`).
  std::vector<double> mass(static_cast<std::size_t>((amax + 1) * (bmax + 1) * 2), 0.0);
  auto at = [&](int64_t a, int64_t b, Dir d) -> double& {
    return mass[static_cast<std::size_t>((a * (bmax + 1) + b) * 2 + (d == Dir::A ? 0 : 1))];
  };
  at(0, 0, start) = 1.0;
  std::map<TrackExit, double> out;
  for (int64_t a = 0; a <= amax; ++a) {
    for (int64_t b = 0; b <= bmax; ++b) {
      const int64_t used = a * la + b * lb;
      if (used >= c.L) continue;
      for (Dir prev : {Dir::A, Dir::B}) {
        const double p0 = at(a, b, prev);
        if (p0 == 0.0) continue;
        for (Dir d : {Dir::A, Dir::B}) {
          const double p = p0 * (d == prev ? 0.25 : 0.75);
          const int64_t seg = d == Dir::A ? la : lb;
          if (used + seg >= c.L) {
            const int64_t rest = c.L - used;
            out[{a * la + (d == Dir::A ? rest : 0), b * lb + (d == Dir::B ? rest : 0), d}] += p;
          } else {
            at(a + (d == Dir::A ? 1 : 0), b + (d == Dir::B ? 1 : 0), d) += p;
          }
        }
      }
    }
  }
  return out;
}

/// Walks L single-vertex moves along the original cycle following a track
/// to r (x' arcs of A, y' arcs of B, then h) and returns the vertex reached.
inline int64_t walk_track(const chordmix::ExitPoint& r, const chordmix::GridConfig& c) {
  using chordmix::Dir;
  // Original arc A is 1..k (entered from hub n), arc B is k+1..n (from hub k).
  auto original = [&](Dir d) { return c.relabeled() ? chordmix::other(d) : d; };
  auto first_vertex = [&](Dir orig) { return orig == Dir::A ? int64_t{1} : c.k + 1; };
  auto arc_len = [&](Dir orig) { return orig == Dir::A ? c.k : c.n - c.k; };
  std::vector<Dir> arcs;
  for (int64_t i = 0; i < r.x_prime; ++i) arcs.push_back(Dir::A);
  for (int64_t i = 0; i < r.y_prime; ++i) arcs.push_back(Dir::B);
  arcs.push_back(r.h);
  int64_t moves = 0;
  int64_t v = 0;
  for (Dir d : arcs) {
    const Dir od = original(d);
    v = first_vertex(od);
    ++moves;
    if (moves == c.L) return v;
    for (int64_t s = 1; s < arc_len(od); ++s) {
      v = v % c.n + 1;
      ++moves;
      if (moves == c.L) return v;
    }
  }
  return -1;
}

/// Dense laws of every start by repeated single steps.
inline std::vector<std::vector<double>> all_laws(const chordmix::Kernel& k, int64_t t) {
  const int64_t n = k.n();
  std::vector<std::vector<double>> laws(static_cast<std::size_t>(n),
                                        std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int64_t s = 0; s < n; ++s) laws[static_cast<std::size_t>(s)][static_cast<std::size_t>(s)] = 1.0;
  for (int64_t step = 0; step < t; ++step) {
    for (auto& law : laws) {
      std::vector<double> next(law.size(), 0.0);
      for (int64_t u = 1; u <= n; ++u) {
        for (const auto& tr : k.row(u)) {
          next[static_cast<std::size_t>(tr.to - 1)] += law[static_cast<std::size_t>(u - 1)] * tr.p;
        }
      }
      law = std::move(next);
    }
  }
  return laws;
}

inline double d_bruteforce(const chordmix::Kernel& k, int64_t t) {
  const auto laws = all_laws(k, t);
  const double u = 1.0 / static_cast<double>(k.n());
  double worst = 0.0;
  for (const auto& law : laws) {
    double s = 0.0;
    for (double x : law) s += std::abs(x - u);
    worst = std::max(worst, 0.5 * s);
  }
  return worst;
}

inline double dbar_bruteforce(const chordmix::Kernel& k, int64_t t) {
  const auto laws = all_laws(k, t);
  double worst = 0.0;
  for (std::size_t a = 0; a < laws.size(); ++a) {
    for (std::size_t b = a + 1; b < laws.size(); ++b) {
      double s = 0.0;
      for (std::size_t v = 0; v < laws[a].size(); ++v) s += std::abs(laws[a][v] - laws[b][v]);
      worst = std::max(worst, 0.5 * s);
    }
  }
  return worst;
}

/// First t with d(t) <= eps by scanning t = 0, 1, 2, ...
inline int64_t tmix_scan(const chordmix::Kernel& k, double eps, int64_t limit) {
  for (int64_t t = 0; t <= limit; ++t) {
    if (d_bruteforce(k, t) <= eps) return t;
  }
  return -1;
}

}  // namespace oracle
