#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cpcsim/monte_carlo.hpp"
#include "cpcsim/order_stats.hpp"
#include "cpcsim/racer.hpp"

namespace py = pybind11;
using namespace cpcsim;

namespace {

// pybind11's stl.h claims std::variant for value conversion, so the
// Distribution variant is exposed through a thin holder class instead.
struct PyDist {
    Distribution d;
};

PyDist dist_from_spec(const std::string& spec) { return PyDist{parse_distribution(spec)}; }

}  // namespace

PYBIND11_MODULE(_cpcsim, m) {
    m.doc() = "Competitive (first-wins) parallel computing: speedup prediction, "
              "Monte Carlo simulation, and an empirical racing harness";

    py::register_exception<QuadratureError>(m, "QuadratureError", PyExc_ArithmeticError);
    py::register_exception<CalibrationError>(m, "CalibrationError", PyExc_RuntimeError);
    py::register_exception<CancelTimeout>(m, "CancelTimeout", PyExc_RuntimeError);
    py::register_exception<CommandFailure>(m, "CommandFailure", PyExc_RuntimeError);

    py::class_<PyDist>(m, "Distribution")
        .def(py::init(&dist_from_spec),
             "Build from a spec string: exp:<l> | erlang:<k>:<l> | hyper:<a>:<l> | "
             "uniform:<lo>:<hi>")
        .def("__repr__",
             [](const PyDist& p) { return "Distribution('" + to_string(p.d) + "')"; })
        .def("__str__", [](const PyDist& p) { return to_string(p.d); });

    m.def("exponential", [](double lam) { return PyDist{Exponential{lam}}; },
          py::arg("lam"));
    m.def("erlang", [](int k, double lam) { return PyDist{Erlang{k, lam}}; },
          py::arg("k"), py::arg("lam"));
    m.def("hyperexponential",
          [](double a, double lam) { return PyDist{Hyperexponential{a, lam}}; },
          py::arg("a"), py::arg("lam"));
    m.def("uniform", [](double lo, double hi) { return PyDist{Uniform{lo, hi}}; },
          py::arg("lo"), py::arg("hi"));
    m.def("parse", &dist_from_spec, py::arg("spec"));

    m.def("cdf", [](const PyDist& p, double x) { return cdf(p.d, x); },
          py::arg("dist"), py::arg("x"));
    m.def("pdf", [](const PyDist& p, double x) { return pdf(p.d, x); },
          py::arg("dist"), py::arg("x"));
    m.def("survival", [](const PyDist& p, double x) { return survival(p.d, x); },
          py::arg("dist"), py::arg("x"));
    m.def("mean", [](const PyDist& p) { return mean(p.d); }, py::arg("dist"));
    m.def("variance", [](const PyDist& p) { return variance(p.d); }, py::arg("dist"));
    m.def("cv", [](const PyDist& p) { return cv(p.d); }, py::arg("dist"));

    m.def(
        "min_cdf",
        [](const PyDist& p, std::int64_t n, double y) {
            return min_cdf(MinQuery{p.d, n}, y);
        },
        py::arg("dist"), py::arg("n"), py::arg("y"));
    m.def(
        "min_pdf",
        [](const PyDist& p, std::int64_t n, double y) {
            return min_pdf(MinQuery{p.d, n}, y);
        },
        py::arg("dist"), py::arg("n"), py::arg("y"));
    m.def(
        "expected_min",
        [](const PyDist& p, std::int64_t n) { return expected_min(MinQuery{p.d, n}); },
        py::arg("dist"), py::arg("n"));
    m.def(
        "speedup",
        [](const PyDist& p, std::int64_t n) { return speedup(MinQuery{p.d, n}); },
        py::arg("dist"), py::arg("n"));

    py::class_<SimResult>(m, "SimResult")
        .def_readonly("mean_min", &SimResult::mean_min)
        .def_readonly("stderr", &SimResult::stderr_est)
        .def_readonly("speedup", &SimResult::speedup_estimate)
        .def_readonly("speedup_stderr", &SimResult::speedup_stderr)
        .def_readonly("steps", &SimResult::steps)
        .def_readonly("seed", &SimResult::seed);

    m.def(
        "simulate",
        [](const PyDist& p, std::int64_t cores, std::uint64_t steps, std::uint64_t seed,
           bool simulated_mean) {
            SimConfig cfg{steps, p.d, cores, seed,
                          simulated_mean ? DenominatorMode::SimulatedMean
                                         : DenominatorMode::AnalyticMean};
            return simulate(cfg);
        },
        py::arg("dist"), py::arg("cores"), py::arg("steps") = 100000, py::arg("seed") = 0,
        py::arg("simulated_mean") = false);

    py::class_<CurvePoint>(m, "CurvePoint")
        .def_readonly("x", &CurvePoint::x)
        .def_readonly("cv", &CurvePoint::cv)
        .def_readonly("analytic_speedup", &CurvePoint::analytic_speedup)
        .def_readonly("mc_speedup", &CurvePoint::mc_speedup)
        .def_readonly("mc_stderr", &CurvePoint::mc_stderr)
        .def("__repr__", [](const CurvePoint& p) {
            return "CurvePoint(x=" + std::to_string(p.x) +
                   ", speedup=" + std::to_string(p.analytic_speedup) + ")";
        });

    auto make_sim = [](const Distribution& d, std::int64_t cores, std::uint64_t steps,
                       std::uint64_t seed, bool mc) -> std::optional<SimConfig> {
        if (!mc) return std::nullopt;
        return SimConfig{steps, d, cores, seed, DenominatorMode::AnalyticMean};
    };
    m.def(
        "sweep_cores",
        [make_sim](const PyDist& p, const std::vector<std::int64_t>& ns, bool mc,
                   std::uint64_t steps, std::uint64_t seed) {
            return sweep_cores(p.d, ns, make_sim(p.d, 1, steps, seed, mc));
        },
        py::arg("dist"), py::arg("n_values"), py::arg("mc") = false,
        py::arg("steps") = 100000, py::arg("seed") = 0);
    m.def(
        "sweep_erlang_k",
        [make_sim](const std::vector<int>& ks, double lam, std::int64_t cores, bool mc,
                   std::uint64_t steps, std::uint64_t seed) {
            return sweep_erlang_k(ks, lam, cores,
                                  make_sim(Distribution{Erlang{1, lam}}, cores, steps, seed, mc));
        },
        py::arg("k_values"), py::arg("lam") = 1.0, py::arg("cores") = 100,
        py::arg("mc") = false, py::arg("steps") = 100000, py::arg("seed") = 0);
    m.def(
        "sweep_hyper_a",
        [make_sim](const std::vector<double>& as, double lam, std::int64_t cores, bool mc,
                   std::uint64_t steps, std::uint64_t seed) {
            return sweep_hyper_a(as, lam, cores,
                                 make_sim(Distribution{Exponential{lam}}, cores, steps, seed, mc));
        },
        py::arg("a_values"), py::arg("lam") = 1.0, py::arg("cores") = 100,
        py::arg("mc") = false, py::arg("steps") = 100000, py::arg("seed") = 0);
    m.def("hyper_a_for_cv", &hyper_a_for_cv, py::arg("cv"));

    py::class_<RoundResult>(m, "RoundResult")
        .def_readonly("winner", &RoundResult::winner)
        .def_readonly("winner_ms", &RoundResult::winner_ms);

    py::class_<RaceResult>(m, "RaceResult")
        .def_readonly("rounds", &RaceResult::rounds)
        .def_readonly("mean_winner_ms", &RaceResult::mean_winner_ms)
        .def_readonly("mean_single_ms", &RaceResult::mean_single_ms)
        .def_readonly("empirical_speedup", &RaceResult::empirical_speedup)
        .def_readonly("model_speedup", &RaceResult::model_speedup)
        .def_readonly("overhead_ms", &RaceResult::overhead_ms)
        .def_readonly("discarded_rounds", &RaceResult::discarded_rounds);

    m.def("calibrate", [] { return calibrate().count(); },
          "Per-replica spawn+cancel overhead in milliseconds");
    m.def(
        "race",
        [](const PyDist& p, int replicas, int rounds, double unit_ms, std::uint64_t seed,
           double grace_ms, bool pin) {
            RaceConfig cfg;
            cfg.replicas = replicas;
            cfg.rounds = rounds;
            cfg.seed = seed;
            cfg.cancel_grace =
                std::chrono::milliseconds(static_cast<std::int64_t>(grace_ms));
            cfg.pin_cores = pin;
            cfg.task = SyntheticTask{p.d, unit_ms};
            py::gil_scoped_release release;
            return race(cfg);
        },
        py::arg("dist"), py::arg("replicas"), py::arg("rounds") = 50,
        py::arg("unit_ms") = 20.0, py::arg("seed") = 0, py::arg("grace_ms") = 2000.0,
        py::arg("pin") = false);
    m.def(
        "race_command",
        [](const std::vector<std::string>& argv, int replicas, int rounds,
           double grace_ms) {
            RaceConfig cfg;
            cfg.replicas = replicas;
            cfg.rounds = rounds;
            cfg.cancel_grace =
                std::chrono::milliseconds(static_cast<std::int64_t>(grace_ms));
            cfg.task = CommandTask{argv};
            py::gil_scoped_release release;
            return race(cfg);
        },
        py::arg("argv"), py::arg("replicas"), py::arg("rounds") = 1,
        py::arg("grace_ms") = 2000.0);
}
