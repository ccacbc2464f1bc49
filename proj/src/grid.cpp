#include "chordmix/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chordmix/binomial.hpp"

namespace chordmix {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kLogQuarter = std::log(0.25);
const double kLogThreeQuarters = std::log(0.75);

int64_t ceil_div(int64_t a, int64_t b) { return (a + b - 1) / b; }

// log C(n, j) with C(-1, -1) = 1, which is the empty composition.
double log_compositions(int64_t n, int64_t j) {
  if (n == -1 && j == -1) return 0.0;
  return log_choose(n, j);
}

std::string case_name(Dir start, Dir h) {
  return std::string{dir_char(start), dir_char(h)};
}

void check_case(int64_t xp, int64_t yp, Dir h, Dir start) {
  if (xp < 0 || yp < 0) {
    throw ValidationError("exit case " + case_name(start, h) +
                          " needs a non-negative preceding grid point, got (" +
                          std::to_string(xp) + ", " + std::to_string(yp) + ")");
  }
}

void fill_doubles(ExitPoint& r, const GridConfig& c) {
  r.x = static_cast<double>(r.kx) / static_cast<double>(c.arc_length(Dir::A));
  r.y = static_cast<double>(r.nky) / static_cast<double>(c.arc_length(Dir::B));
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

char dir_char(Dir d) { return d == Dir::A ? 'A' : 'B'; }

Dir parse_dir(const std::string& s) {
  if (s == "A" || s == "a") return Dir::A;
  if (s == "B" || s == "b") return Dir::B;
  throw ValidationError("direction must be A or B, got '" + s + "'");
}

GridConfig GridConfig::for_scale(int64_t n, int64_t k, double rho) {
  GridConfig c;
  c.n = n;
  c.k = k;
  c.rho = rho;
  c.L = static_cast<int64_t>(std::ceil(rho * std::pow(static_cast<double>(n), 1.5)));
  return c;
}

void GridConfig::validate() const {
  if (n < 5) throw ValidationError("n must be at least 5");
  if (k < 2 || k > n - 2) {
    throw ValidationError("hub position k must lie in [2, n-2], got " + std::to_string(k));
  }
  if (L < 1) throw ValidationError("track length L must be at least 1");
  if (!(rho > 0.0)) throw ValidationError("rho must be positive");
  if (lambda < 0 || lambda >= arc_length(start_dir)) {
    throw ValidationError("lambda must lie in [0, arc length) = [0, " +
                          std::to_string(arc_length(start_dir)) + "), got " +
                          std::to_string(lambda));
  }
}

double GridConfig::lambda_fraction() const {
  return static_cast<double>(lambda) / static_cast<double>(arc_length(start_dir));
}

int64_t GridConfig::to_original(int64_t v) const {
  if (!relabeled()) return v;
  return (v + k - 1) % n + 1;
}

int64_t GridConfig::start_vertex() const {
  const int64_t hub = start_dir == Dir::A ? canonical_k() : n;
  return to_original(hub - lambda);
}

ExitSet exit_set(const GridConfig& config) {
  config.validate();
  const int64_t ka = config.arc_length(Dir::A);
  const int64_t kb = config.arc_length(Dir::B);
  const int64_t L = config.L;
  ExitSet out;

  auto place = [&](ExitPoint r) {
    fill_doubles(r, config);
    if (r.x_prime < 0 || r.y_prime < 0) {
      out.excluded.push_back(r);
    } else {
      out.points.push_back(r);
    }
  };

  for (int64_t x = 0; x * ka <= L; ++x) {
    ExitPoint r;
    r.h = Dir::B;
    r.kx = x * ka;
    r.nky = L - r.kx;
    r.x_prime = x;
    r.y_prime = ceil_div(r.nky, kb) - 1;
    r.offset = r.nky - kb * r.y_prime;
    place(r);
  }
  for (int64_t y = 0; y * kb <= L; ++y) {
    ExitPoint r;
    r.h = Dir::A;
    r.nky = y * kb;
    r.kx = L - r.nky;
    r.y_prime = y;
    r.x_prime = ceil_div(r.kx, ka) - 1;
    r.offset = r.kx - ka * r.x_prime;
    place(r);
  }
  auto order = [](const ExitPoint& a, const ExitPoint& b) {
    if (a.kx != b.kx) return a.kx < b.kx;
    return a.h == Dir::A && b.h == Dir::B;
  };
  std::sort(out.points.begin(), out.points.end(), order);
  std::sort(out.excluded.begin(), out.excluded.end(), order);
  return out;
}

double exit_log_probability(int64_t xp, int64_t yp, Dir h, Dir start) {
  check_case(xp, yp, h, start);
  if (start != h) {
    return kLogThreeQuarters + conv_log_point_mass(xp, 0.75, yp, 0.25, yp);
  }
  if (h == Dir::A) {
    if (yp == 0) return static_cast<double>(xp + 1) * kLogQuarter;
    return kLogThreeQuarters + conv_log_point_mass(xp + 1, 0.75, yp - 1, 0.25, yp);
  }
  if (xp == 0) return static_cast<double>(yp + 1) * kLogQuarter;
  return kLogThreeQuarters + conv_log_point_mass(xp - 1, 0.75, yp + 1, 0.25, yp);
}

double exit_probability(int64_t xp, int64_t yp, Dir h, Dir start) {
  return std::exp(exit_log_probability(xp, yp, h, start));
}

double exit_probability(const ExitPoint& r, Dir start) {
  return exit_probability(r.x_prime, r.y_prime, r.h, start);
}

double exit_probability_oracle(int64_t xp, int64_t yp, Dir h, Dir start) {
  check_case(xp, yp, h, start);
  // Each of the x'+y'+1 decisions (origin through r') costs 3/4 for a turn
  // and 1/4 for going straight; sum over the number of turns.
  const int64_t decisions = xp + yp + 1;
  std::vector<double> terms;
  if (start != h) {
    // 2i+1 turns: i+1 runs on each side.
    const int64_t same = start == Dir::A ? xp : yp;
    const int64_t opp = start == Dir::A ? yp : xp;
    for (int64_t i = 0; i <= std::min(xp, yp); ++i) {
      const int64_t turns = 2 * i + 1;
      terms.push_back(log_choose(same, i) + log_choose(opp, i) +
                      static_cast<double>(turns) * kLogThreeQuarters +
                      static_cast<double>(decisions - turns) * kLogQuarter);
    }
  } else {
    // 2i turns: i+1 runs of the start direction, i runs of the other.
    const int64_t same = h == Dir::A ? xp : yp;
    const int64_t opp = h == Dir::A ? yp : xp;
    for (int64_t i = 0; i <= opp; ++i) {
      const int64_t turns = 2 * i;
      const double lc = log_choose(same + 1, i) + log_compositions(opp - 1, i - 1);
      if (lc == kNegInf) continue;
      terms.push_back(lc + static_cast<double>(turns) * kLogThreeQuarters +
                      static_cast<double>(decisions - turns) * kLogQuarter);
    }
  }
  return std::exp(log_sum_exp(terms));
}

double exit_probability_oracle(const ExitPoint& r, Dir start) {
  return exit_probability_oracle(r.x_prime, r.y_prime, r.h, start);
}

double sandwich_term(const ExitPoint& r) {
  check_case(r.x_prime, r.y_prime, r.h, r.h);
  return 0.25 * std::exp(conv_log_point_mass(r.x_prime, 0.75, r.y_prime, 0.25, r.y_prime));
}

std::vector<ExitPoint> restrict_R0(std::span<const ExitPoint> R, double rho, int64_t n) {
  const double width = std::sqrt(rho) * std::pow(static_cast<double>(n), 0.25);
  std::vector<ExitPoint> out;
  for (const auto& r : R) {
    if (static_cast<double>(std::abs(r.x_prime - r.y_prime)) <= width) out.push_back(r);
  }
  if (out.empty()) {
    throw ComputationError("R0 is empty: no exit point has |x'-y'| <= " +
                           std::to_string(width));
  }
  return out;
}

std::vector<ExitPoint> select_R1(std::span<const ExitPoint> R0, double rho, int64_t n) {
  const auto want = static_cast<std::size_t>(
      std::floor(std::sqrt(rho) * std::pow(static_cast<double>(n), 0.25)));
  if (want >= R0.size()) return {R0.begin(), R0.end()};
  const std::size_t first = (R0.size() - want) / 2;
  return {R0.begin() + static_cast<std::ptrdiff_t>(first),
          R0.begin() + static_cast<std::ptrdiff_t>(first + want)};
}

int64_t map_to_vertex(const ExitPoint& r, const GridConfig& config) {
  const int64_t canonical =
      r.h == Dir::A ? r.offset : config.arc_length(Dir::A) + r.offset;
  return config.to_original(canonical);
}

std::vector<int64_t> image(std::span<const ExitPoint> R, const GridConfig& config) {
  std::vector<int64_t> out;
  out.reserve(R.size());
  for (const auto& r : R) out.push_back(map_to_vertex(r, config));
  return out;
}

std::vector<ExitPoint> original_order(std::span<const ExitPoint> R, const GridConfig& config) {
  std::vector<ExitPoint> out(R.begin(), R.end());
  if (config.relabeled()) std::reverse(out.begin(), out.end());
  return out;
}

ExitPoint advance_zigzag(const ExitPoint& r, const GridConfig& config) {
  ExitPoint s = r;
  if (r.offset < config.arc_length(r.h)) {
    (r.h == Dir::A ? s.kx : s.nky) += 1;
    s.offset += 1;
  } else if (r.h == Dir::A) {
    // Reached grid point (x'+1, y'); continue upward on B.
    s.h = Dir::B;
    s.x_prime = r.x_prime + 1;
    s.nky += 1;
    s.offset = 1;
  } else {
    s.h = Dir::A;
    s.y_prime = r.y_prime + 1;
    s.kx += 1;
    s.offset = 1;
  }
  fill_doubles(s, config);
  return s;
}

int64_t cycle_distance(int64_t a, int64_t b, int64_t n) {
  const int64_t d = std::abs(a - b) % n;
  return std::min(d, n - d);
}

double hub_clearance(int64_t n, double rho, double coefficient) {
  const auto nd = static_cast<double>(n);
  return coefficient * std::sqrt(rho) * std::pow(nd, 0.75) * std::sqrt(std::log(nd));
}

bool avoids_hubs(int64_t v, const GridConfig& config, double clearance_distance) {
  return static_cast<double>(cycle_distance(v, config.k, config.n)) > clearance_distance &&
         static_cast<double>(cycle_distance(v, config.n, config.n)) > clearance_distance;
}

VertexSelection build_selection(std::span<const int64_t> V1, const GridConfig& config,
                                const SelectionParams& params) {
  const int64_t n = config.n;
  const double clear = hub_clearance(n, config.rho, params.clearance);
  const double radius = params.gamma3 * std::sqrt(config.rho) *
                        std::pow(static_cast<double>(n), 0.75) / 2.0;
  VertexSelection sel;
  sel.V1.assign(V1.begin(), V1.end());
  for (int64_t v : V1) {
    if (avoids_hubs(v, config, clear)) sel.V2.push_back(v);
  }
  std::vector<char> in_w(static_cast<std::size_t>(n) + 1, 0);
  // |w - v| < radius  <=>  |w - v| <= reach
  const auto reach = static_cast<int64_t>(std::ceil(radius)) - 1;
  for (int64_t v : sel.V2) {
    for (int64_t d = -reach; d <= reach; ++d) {
      const int64_t w = ((v - 1 + d) % n + n) % n + 1;
      in_w[static_cast<std::size_t>(w)] = 1;
    }
  }
  for (int64_t w = 1; w <= n; ++w) {
    if (in_w[static_cast<std::size_t>(w)]) sel.W.push_back(w);
    if (avoids_hubs(w, config, clear)) sel.I.push_back(w);
  }
  return sel;
}

CltReport clt_diagnostic(int64_t xp, int64_t yp) {
  if (xp < 0 || yp < 0 || xp + yp < 1) {
    throw ValidationError("clt diagnostic needs x', y' >= 0 with x' + y' >= 1");
  }
  const auto q = conv_pmf(xp, 0.75, yp, 0.25);
  const double mean = (3.0 * static_cast<double>(xp) + static_cast<double>(yp)) / 4.0;
  const double sd = std::sqrt(3.0 * static_cast<double>(xp + yp) / 16.0);
  auto phi = [&](double xi) { return normal_cdf((xi - mean) / sd); };

  CltReport rep;
  auto consider = [&](double gap, int64_t where) {
    if (gap > rep.sup_distance) {
      rep.sup_distance = gap;
      rep.argmax = where;
    }
  };
  consider(phi(0.0), 0);  // left limit at 0, where F_Q jumps from 0
  double cdf = 0.0;
  const auto top = static_cast<int64_t>(q.size()) - 1;
  for (int64_t j = 0; j <= top; ++j) {
    cdf += q[static_cast<std::size_t>(j)];
    const double c = std::min(cdf, 1.0);
    consider(std::abs(c - phi(static_cast<double>(j))), j);
    if (j < top) consider(std::abs(c - phi(static_cast<double>(j + 1))), j + 1);
  }
  consider(1.0 - phi(static_cast<double>(top)), top);
  rep.scaled = rep.sup_distance * std::sqrt(static_cast<double>(xp + yp));
  return rep;
}

std::vector<int64_t> log_concavity_violations(int64_t xp, int64_t yp, double tol) {
  const auto lq = conv_log_pmf(xp, 0.75, yp, 0.25);
  std::vector<int64_t> bad;
  for (std::size_t i = 1; i + 1 < lq.size(); ++i) {
    if (2.0 * lq[i] < lq[i - 1] + lq[i + 1] - tol) bad.push_back(static_cast<int64_t>(i));
  }
  return bad;
}

}  // namespace chordmix
