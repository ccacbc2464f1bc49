#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "chordmix/chain.hpp"
#include "chordmix/evolve.hpp"
#include "chordmix/experiments.hpp"
#include "chordmix/gaps.hpp"
#include "chordmix/grid.hpp"
#include "chordmix/montecarlo.hpp"

namespace py = pybind11;
using namespace chordmix;

namespace {

ChainSpec make_spec(const std::string& variant, int64_t n, std::optional<int64_t> k,
                    std::vector<int64_t> hubs) {
  ChainSpec spec;
  spec.variant = parse_variant(variant);
  spec.n = n;
  spec.k = k;
  spec.hubs = std::move(hubs);
  spec.validate();
  return spec;
}

GridConfig make_config(int64_t n, int64_t k, std::optional<int64_t> L, double rho,
                       int64_t lambda, const std::string& start_dir) {
  GridConfig c = GridConfig::for_scale(n, k, rho);
  if (L) c.L = *L;
  c.lambda = lambda;
  c.start_dir = parse_dir(start_dir);
  c.validate();
  return c;
}

py::dict exit_point_dict(const ExitPoint& r) {
  py::dict d;
  d["x"] = r.x;
  d["y"] = r.y;
  d["h"] = std::string(1, dir_char(r.h));
  d["x_prime"] = r.x_prime;
  d["y_prime"] = r.y_prime;
  d["kx"] = r.kx;
  d["nky"] = r.nky;
  return d;
}

py::dict record_dict(const ExperimentRecord& r) {
  py::dict d;
  d["variant"] = r.variant;
  d["n"] = r.n;
  d["k"] = r.k;
  d["eps"] = r.eps;
  d["t_mix"] = r.t_mix;
  d["policy"] = r.policy;
  d["seed"] = r.seed;
  d["wall_time_ms"] = r.wall_time_ms;
  return d;
}

ExperimentRecord record_from(const py::dict& d) {
  ExperimentRecord r;
  r.variant = d["variant"].cast<std::string>();
  r.n = d["n"].cast<int64_t>();
  if (d.contains("k")) r.k = d["k"].cast<std::vector<int64_t>>();
  r.t_mix = d["t_mix"].cast<int64_t>();
  if (d.contains("policy")) r.policy = d["policy"].cast<std::string>();
  return r;
}

}  // namespace

PYBIND11_MODULE(_chordmix, m) {
  m.doc() = "Cycle-with-chord Markov chains: kernels, mixing times, grid exits and experiments";

  py::class_<Kernel>(m, "Kernel")
      .def_property_readonly("n", &Kernel::n)
      .def_property_readonly("description", [](const Kernel& k) { return k.spec().describe(); })
      .def("prob", &Kernel::prob, py::arg("frm"), py::arg("to"))
      .def("row",
           [](const Kernel& k, int64_t v) {
             std::vector<std::pair<int64_t, double>> out;
             for (const auto& t : k.row(v)) out.emplace_back(t.to, t.p);
             return out;
           })
      .def("max_row_support", &Kernel::max_row_support)
      .def("to_json", &kernel_to_json)
      .def_static("from_json", &kernel_from_json);

  m.def(
      "build_kernel",
      [](const std::string& variant, int64_t n, std::optional<int64_t> k,
         std::vector<int64_t> hubs) { return build_kernel(make_spec(variant, n, k, std::move(hubs))); },
      py::arg("variant"), py::arg("n"), py::arg("k") = py::none(),
      py::arg("hubs") = std::vector<int64_t>{});

  m.def("verify_kernel", [](const Kernel& k) {
    const auto r = verify_kernel(k);
    py::dict d;
    d["pass"] = r.pass;
    d["max_row_deviation"] = r.max_row_deviation;
    d["max_col_deviation"] = r.max_col_deviation;
    d["support"] = r.support;
    return d;
  });

  m.def(
      "evolve",
      [](const Kernel& k, int64_t start, int64_t steps) {
        const auto d = evolve(k, Distribution::delta(k.n(), start), steps);
        return std::vector<double>(d.weights().begin(), d.weights().end());
      },
      py::arg("kernel"), py::arg("start"), py::arg("steps"));

  m.def(
      "distance",
      [](const Kernel& k, int64_t t, const std::string& policy) {
        return distance_profile(k, t, parse_policy(policy, k.spec())).value;
      },
      py::arg("kernel"), py::arg("t"), py::arg("policy") = "auto");

  m.def(
      "mixing_time",
      [](const Kernel& k, double eps, const std::string& policy, int64_t cap) {
        MixingOptions opts;
        opts.iteration_cap = cap;
        py::gil_scoped_release release;
        const auto r = mixing_time(k, eps, parse_policy(policy, k.spec()), opts);
        py::gil_scoped_acquire acquire;
        py::dict d;
        d["t"] = r.t;
        d["lower_bound"] = r.lower_bound;
        d["policy"] = r.policy;
        return d;
      },
      py::arg("kernel"), py::arg("eps") = 0.25, py::arg("policy") = "auto", py::arg("cap") = 0);

  m.def(
      "exit_set",
      [](int64_t n, int64_t k, std::optional<int64_t> L, double rho, int64_t lambda,
         const std::string& start_dir) {
        const auto c = make_config(n, k, L, rho, lambda, start_dir);
        py::list out;
        for (const auto& r : exit_set(c).points) {
          auto d = exit_point_dict(r);
          d["probability"] = exit_probability(r, c.start_dir);
          d["vertex"] = map_to_vertex(r, c);
          out.append(d);
        }
        return out;
      },
      py::arg("n"), py::arg("k"), py::arg("L") = py::none(), py::arg("rho") = 1.0,
      py::arg("lam") = 0, py::arg("start_dir") = "A");

  m.def(
      "exit_probability",
      [](int64_t xp, int64_t yp, const std::string& h, const std::string& start) {
        return exit_probability(xp, yp, parse_dir(h), parse_dir(start));
      },
      py::arg("x_prime"), py::arg("y_prime"), py::arg("h"), py::arg("start") = "A");

  m.def("euler_phi", &euler_phi, py::arg("m"));
  m.def(
      "phi_ratio_sum", [](int64_t M) { return phi_ratio_sum(M).sum; }, py::arg("M"));
  m.def("is_good_k", &is_good_k, py::arg("n"), py::arg("k"), py::arg("rho") = 1.0,
        py::arg("gamma3") = 0.6);
  m.def(
      "good_k_set",
      [](int64_t n, double rho, double gamma3) {
        const auto r = good_k_set(n, rho, gamma3);
        py::dict d;
        d["n"] = r.n;
        d["good_k"] = r.good_k;
        d["fraction"] = r.fraction;
        d["bound"] = r.bound;
        d["warnings"] = r.warnings;
        return d;
      },
      py::arg("n"), py::arg("rho") = 1.0, py::arg("gamma3") = 0.6);

  m.def(
      "trajectory_law",
      [](const Kernel& k, int64_t start, int64_t T, int64_t trials, uint64_t seed) {
        py::gil_scoped_release release;
        return trajectory_law(k, start, T, trials, seed);
      },
      py::arg("kernel"), py::arg("start"), py::arg("T"), py::arg("trials"), py::arg("seed"));

  m.def(
      "coin_procedure",
      [](int64_t n, int64_t k, uint64_t seed, double rho) {
        const auto c = GridConfig::for_scale(n, k, rho);
        const auto r = coin_procedure(c, seed, false);
        py::dict d;
        d["exit"] = exit_point_dict(r.exit);
        d["T"] = r.T;
        d["tau"] = r.tau;
        d["c0_length"] = r.c0_length;
        d["c0_ones"] = r.c0_ones;
        d["inserted"] = static_cast<int64_t>(r.inserted.size());
        d["bad_event"] = r.bad_event;
        d["final_vertex"] = r.final_vertex;
        return d;
      },
      py::arg("n"), py::arg("k"), py::arg("seed"), py::arg("rho") = 1.0);

  m.def(
      "scaling_run",
      [](const std::string& variant, std::vector<int64_t> n_grid, double eps,
         const std::string& kpolicy, std::vector<uint64_t> seeds, const std::string& policy) {
        ScalingRequest req;
        req.variant = parse_variant(variant);
        req.n_grid = std::move(n_grid);
        req.eps = eps;
        req.k_policy = KPolicy::parse(kpolicy);
        req.seeds = std::move(seeds);
        req.policy = policy;
        ScalingResult res;
        {
          py::gil_scoped_release release;
          res = scaling_run(req);
        }
        py::list out;
        for (const auto& r : res.records) out.append(record_dict(r));
        return out;
      },
      py::arg("variant"), py::arg("n_grid"), py::arg("eps") = 0.25, py::arg("kpolicy") = "good",
      py::arg("seeds") = std::vector<uint64_t>{0}, py::arg("policy") = "auto");

  m.def(
      "fit_exponent",
      [](const py::list& records) {
        std::vector<ExperimentRecord> recs;
        for (const auto& item : records) recs.push_back(record_from(item.cast<py::dict>()));
        const auto f = fit_exponent(recs);
        py::dict d;
        d["slope"] = f.slope;
        d["intercept"] = f.intercept;
        d["residual_rms"] = f.residual_rms;
        d["n_min"] = f.n_min;
        d["n_max"] = f.n_max;
        return d;
      },
      py::arg("records"));
}
