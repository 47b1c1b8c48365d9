#include "evobench/dominance.hpp"
#include "evobench/harness.hpp"
#include "evobench/metrics.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace evobench;

namespace {

Problem make_problem(const std::string& name, std::size_t dim, std::size_t n_obj) {
    return Problem(parse_problem_id(name), dim, n_obj);
}

ExperimentSpec spec_from(const std::string& algo, const std::string& problem, std::size_t dim, std::size_t n_obj,
                         std::size_t pop, const std::string& budget, std::size_t reps, const std::string& backend,
                         std::size_t workers, std::uint64_t seed, const Config& overrides, bool record_diversity) {
    ExperimentSpec e;
    e.algo = algo;
    e.problem = problem;
    e.dim = dim;
    e.n_obj = n_obj;
    e.pop = pop;
    e.budget = Budget::parse(budget);
    e.reps = reps;
    if (backend == "parallel") {
        e.backend = BackendSpec::parallel(workers);
    } else if (backend != "serial") {
        throw ContractViolation("backend must be 'serial' or 'parallel'");
    }
    e.seed = seed;
    e.overrides = overrides;
    e.record_diversity = record_diversity;
    return e;
}

} // namespace

PYBIND11_MODULE(_evobench, m) {
    m.doc() = "Evolutionary algorithm benchmark core";

    py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);
    py::register_exception<UnknownId>(m, "UnknownId", PyExc_ValueError);
    py::register_exception<IncompatibleArity>(m, "IncompatibleArity", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);
    py::register_exception<EvaluationError>(m, "EvaluationError", PyExc_RuntimeError);

    m.def("problems", [] {
        std::vector<std::string> out;
        for (ProblemId id : all_problem_ids()) out.emplace_back(to_string(id));
        return out;
    });
    m.def("algorithms", [] {
        std::vector<std::string> out;
        for (AlgoId id : all_algo_ids()) out.emplace_back(to_string(id));
        return out;
    });
    m.def("default_config", [](const std::string& algo) { return default_config(parse_algo_id(algo)); },
          py::arg("algo"));

    m.def("problem_info", [](const std::string& name, std::size_t dim, std::size_t n_obj) {
        const Problem p = make_problem(name, dim, n_obj);
        py::dict d;
        d["name"] = std::string(p.name());
        d["dim"] = p.dim();
        d["n_obj"] = p.n_obj();
        d["lower"] = Vector(p.bounds().lower);
        d["upper"] = Vector(p.bounds().upper);
        return d;
    }, py::arg("problem"), py::arg("dim") = 0, py::arg("n_obj") = 0);

    m.def("evaluate", [](const std::string& name, const Matrix& x, std::size_t n_obj) {
        const Problem p = make_problem(name, static_cast<std::size_t>(x.cols()), n_obj);
        py::gil_scoped_release release;
        return evaluate_batch(p, x);
    }, py::arg("problem"), py::arg("x"), py::arg("n_obj") = 0, "Objective matrix for the rows of x.");

    m.def("pareto_front", [](const std::string& name, std::size_t dim, std::size_t n_obj, std::size_t n_points) {
        return pareto_front_reference(make_problem(name, dim, n_obj), n_points);
    }, py::arg("problem"), py::arg("dim") = 0, py::arg("n_obj") = 0, py::arg("n_points") = 1000);

    m.def("non_dominated_sort", &non_dominated_sort, py::arg("f"));
    m.def("crowding_distance", &crowding_distance, py::arg("f"));
    m.def("hypervolume", &hypervolume, py::arg("points"), py::arg("ref"));
    m.def("igd", &igd, py::arg("solutions"), py::arg("reference"));
    m.def("diversity", py::overload_cast<const Matrix&>(&diversity), py::arg("x"));

    m.def("run_json", [](const std::string& algo, const std::string& problem, std::size_t dim, std::size_t n_obj,
                         std::size_t pop, const std::string& budget, std::size_t reps, const std::string& backend,
                         std::size_t workers, std::uint64_t seed, const Config& overrides, bool record_diversity) {
        const ExperimentSpec e = spec_from(algo, problem, dim, n_obj, pop, budget, reps, backend, workers, seed,
                                           overrides, record_diversity);
        std::string out;
        {
            py::gil_scoped_release release;
            out = to_json(run(e)).dump();
        }
        return out;
    }, py::arg("algo"), py::arg("problem"), py::arg("dim") = 0, py::arg("n_obj") = 0, py::arg("pop") = 100,
       py::arg("budget") = "gen:100", py::arg("reps") = 15, py::arg("backend") = "serial", py::arg("workers") = 1,
       py::arg("seed") = 1, py::arg("overrides") = Config{}, py::arg("record_diversity") = true,
       "Runs repeated experiments and returns the JSON record as text.");

    m.def("render_svg_json", [](const std::string& record, const std::string& kind) {
        const auto j = nlohmann::json::parse(record);
        if (j.value("kind", std::string("runs")) == "sweep") {
            return render_svg(plot_from_sweep(sweep_from_json(j), parse_plot_kind(kind)));
        }
        const RunSet rs = run_set_from_json(j);
        return render_svg(plot_from_aggregate(aggregate(rs.runs), parse_plot_kind(kind), rs.spec.algo));
    }, py::arg("record"), py::arg("kind") = "convergence");

    m.def("csv_json", [](const std::string& record) { return to_csv(run_set_from_json(nlohmann::json::parse(record))); },
          py::arg("record"));
}
