#include "eqstates/cli.hpp"
#include "eqstates/decomposition.hpp"
#include "eqstates/natural_extension.hpp"
#include "eqstates/pressure.hpp"
#include "eqstates/solenoid.hpp"
#include "eqstates/specification.hpp"
#include "eqstates/transfer_oracle.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace eqs;

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Equilibrium-state checks for non-uniformly expanding circle maps";

    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

    py::class_<MapSystem>(m, "MapSystem")
        .def_static("doubling", &MapSystem::doubling)
        .def_static("manneville_pomeau", &MapSystem::manneville_pomeau, py::arg("alpha"))
        .def_static("perturbed", &MapSystem::perturbed, py::arg("delta"))
        .def_static("tabulated", &MapSystem::tabulated, py::arg("knots"))
        .def_static("parse", &parse_map, py::arg("spec"))
        .def("__call__", [](const MapSystem& g, double x) { return g(x); })
        .def("iterate", &MapSystem::iterate, py::arg("x"), py::arg("n"))
        .def("epsilon0", &MapSystem::epsilon0)
        .def("degree", &MapSystem::degree)
        .def("branch_inverse", &MapSystem::branch_inverse, py::arg("branch"), py::arg("y"))
        .def_property_readonly("name", &MapSystem::name);

    m.def("mixing_time", &mixing_time, py::arg("map"), py::arg("eps"), py::arg("cap") = 64, py::arg("grid") = 4096);

    py::class_<Potential>(m, "Potential")
        .def_static("zero", &Potential::zero)
        .def_static("constant", &Potential::constant, py::arg("c"))
        .def_static("geometric", &Potential::geometric, py::arg("map"), py::arg("t"))
        .def_static("cosine", &Potential::cosine, py::arg("amplitude"))
        .def_static("parse", &parse_potential, py::arg("spec"), py::arg("map"))
        .def("__call__", [](const Potential& p, double x) { return p(x); })
        .def_property_readonly("holder_constant", &Potential::holder_constant)
        .def_property_readonly("holder_exponent", &Potential::holder_exponent);

    py::class_<DecompositionConfig>(m, "DecompositionConfig")
        .def(py::init<double>(), py::arg("sigma") = 0.9)
        .def_readonly("sigma", &DecompositionConfig::sigma);

    py::class_<OrbitSegment>(m, "OrbitSegment")
        .def(py::init([](double x, int n) { return OrbitSegment{x, n}; }), py::arg("x"), py::arg("n"))
        .def_readwrite("x", &OrbitSegment::start)
        .def_readwrite("n", &OrbitSegment::length);

    py::class_<Decomposition>(m, "Decomposition")
        .def_readonly("p_len", &Decomposition::p_len)
        .def_readonly("g_len", &Decomposition::g_len)
        .def_readonly("s_len", &Decomposition::s_len);

    m.def("classify_segment", [](const MapSystem& g, const DecompositionConfig& c, double x, int n) {
        return std::string(to_string(classify_segment(g, c, {x, n})));
    });
    m.def("decompose", [](const MapSystem& g, const DecompositionConfig& c, double x, int n) {
        return decompose(g, c, {x, n});
    });
    m.def("birkhoff_sum", [](const MapSystem& g, const Potential& phi, double x, int n) {
        return birkhoff_sum(g, phi, {x, n});
    });
    m.def("bowen_distance", &bowen_distance, py::arg("map"), py::arg("x"), py::arg("y"), py::arg("n"));

    py::class_<PressureEstimate>(m, "PressureEstimate")
        .def_readonly("eps", &PressureEstimate::eps)
        .def_readonly("n_values", &PressureEstimate::n_values)
        .def_readonly("log_partition_sums", &PressureEstimate::log_partition_sums)
        .def_readonly("set_sizes", &PressureEstimate::set_sizes)
        .def_readonly("rate", &PressureEstimate::rate)
        .def_readonly("rate_uncertainty", &PressureEstimate::rate_uncertainty)
        .def_readonly("limsup_proxy", &PressureEstimate::limsup_proxy)
        .def_readonly("empty", &PressureEstimate::empty);

    m.def(
        "pressure",
        [](const MapSystem& g, const Potential& phi, double eps, int n_max, const std::string& collection,
           double sigma) {
            const DecompositionConfig dec(sigma);
            SegmentCollection coll = SegmentCollection::full();
            if (collection == "good") {
                coll = good_collection(g, dec);
            } else if (collection == "bad") {
                coll = bad_collection(g, dec);
            } else if (collection != "full") {
                throw ValidationError("collection", "must be full, good or bad");
            }
            py::gil_scoped_release release;
            return pressure_at_scale(g, phi, coll, eps, n_max);
        },
        py::arg("map"), py::arg("phi"), py::arg("eps"), py::arg("n_max"), py::arg("collection") = "full",
        py::arg("sigma") = 0.9);

    py::class_<GapReport>(m, "GapReport")
        .def_readonly("sigma", &GapReport::sigma)
        .def_readonly("n_max", &GapReport::n_max)
        .def_readonly("p_full", &GapReport::p_full)
        .def_readonly("p_bad", &GapReport::p_bad)
        .def_readonly("gap", &GapReport::gap)
        .def_readonly("combined_uncertainty", &GapReport::combined_uncertainty)
        .def_readonly("hypothesis_holds", &GapReport::hypothesis_holds);

    m.def(
        "gap_report",
        [](const MapSystem& g, const Potential& phi, const std::vector<double>& sigmas, double eps, int n_max) {
            py::gil_scoped_release release;
            return gap_report(g, phi, sigmas, eps, n_max);
        },
        py::arg("map"), py::arg("phi"), py::arg("sigmas"), py::arg("eps"), py::arg("n_max"));

    py::class_<EigenData>(m, "EigenData")
        .def_readonly("lambda_", &EigenData::lambda)
        .def_readonly("log_lambda", &EigenData::log_lambda)
        .def_readonly("nodes", &EigenData::nodes)
        .def_readonly("eigenfunction", &EigenData::eigenfunction)
        .def_readonly("eigenmeasure", &EigenData::eigenmeasure)
        .def_readonly("equilibrium_density", &EigenData::equilibrium_density)
        .def_readonly("residual", &EigenData::residual)
        .def_readonly("iterations", &EigenData::iterations);

    m.def(
        "leading_eigen",
        [](const MapSystem& g, const Potential& phi, int grid_size, double tol) {
            return leading_eigen(build_operator(g, phi, grid_size), tol);
        },
        py::arg("map"), py::arg("phi"), py::arg("grid_size") = 1024, py::arg("tol") = 1e-13);

    py::class_<GluingPlan>(m, "GluingPlan")
        .def_readonly("eps", &GluingPlan::eps)
        .def_readonly("tau_cap", &GluingPlan::tau_cap)
        .def_readonly("transitions", &GluingPlan::transitions)
        .def_readonly("starts", &GluingPlan::starts)
        .def_readonly("schedule", &GluingPlan::schedule)
        .def_readonly("glue_point", &GluingPlan::glue_point)
        .def_readonly("orbit", &GluingPlan::orbit);

    m.def(
        "glue",
        [](const MapSystem& g, double sigma, const std::vector<std::pair<double, int>>& segs, double eps) {
            std::vector<OrbitSegment> s;
            for (const auto& [x, n] : segs) {
                s.push_back({x, n});
            }
            return glue_base(g, DecompositionConfig(sigma), s, eps);
        },
        py::arg("map"), py::arg("sigma"), py::arg("segments"), py::arg("eps"));
    m.def("verify_shadow", py::overload_cast<const MapSystem&, const GluingPlan&>(&verify_shadow));

    py::class_<ExtensionConfig>(m, "ExtensionConfig")
        .def(py::init<double, int>(), py::arg("a") = 2.0, py::arg("K") = 20)
        .def_readonly("a", &ExtensionConfig::a)
        .def_readonly("K", &ExtensionConfig::K)
        .def("tail_bound", &ExtensionConfig::tail_bound);

    py::class_<ExtPoint>(m, "ExtPoint")
        .def_readonly("coords", &ExtPoint::coords)
        .def("depth", &ExtPoint::depth);

    m.def("extend", [](const MapSystem& g, double x, int K) { return extend(g, x, K); }, py::arg("map"),
          py::arg("x"), py::arg("K"));
    m.def("hat_g", &hat_g, py::arg("map"), py::arg("p"));
    m.def("hat_distance", &hat_distance, py::arg("cfg"), py::arg("p"), py::arg("q"));

    py::class_<BowenCheck>(m, "BowenCheck")
        .def_readonly("empirical_max", &BowenCheck::empirical_max)
        .def_readonly("bound", &BowenCheck::bound)
        .def_readonly("slack", &BowenCheck::slack)
        .def_readonly("samples", &BowenCheck::samples)
        .def("holds", &BowenCheck::holds);

    m.def(
        "verify_bowen",
        [](const MapSystem& g, const ExtensionConfig& cfg, double sigma, const Potential& psi, double eps,
           int n_samples, std::uint64_t seed) {
            BowenSampling sampling;
            sampling.seed = seed;
            return verify_bowen(g, cfg, DecompositionConfig(sigma), LiftedPotential::projection(psi), eps, n_samples,
                                sampling);
        },
        py::arg("map"), py::arg("cfg"), py::arg("sigma"), py::arg("phi"), py::arg("eps"), py::arg("n_samples"),
        py::arg("seed") = 1);

    py::class_<SolenoidSystem>(m, "SolenoidSystem")
        .def(py::init<double, double>(), py::arg("lambda_s") = 0.25, py::arg("r") = 0.5)
        .def_readonly("lambda_s", &SolenoidSystem::lambda_s)
        .def_readonly("r", &SolenoidSystem::r)
        .def("holonomy_lipschitz", &SolenoidSystem::holonomy_lipschitz);

    py::class_<AttractorPoint>(m, "AttractorPoint")
        .def_readonly("theta", &AttractorPoint::theta)
        .def_readonly("disk", &AttractorPoint::disk)
        .def_readonly("backward", &AttractorPoint::backward);

    m.def("attractor_point",
          py::overload_cast<const SolenoidSystem&, double, const std::vector<int>&, Disk>(&attractor_point),
          py::arg("sys"), py::arg("theta"), py::arg("itinerary"), py::arg("seed") = Disk{0.0, 0.0});
    m.def("apply_f", &apply_f, py::arg("sys"), py::arg("p"));
    m.def("fiber_sample", &fiber_sample, py::arg("sys"), py::arg("y"), py::arg("depth"), py::arg("max_depth") = 22);
    m.def("holonomy", &holonomy, py::arg("sys"), py::arg("p"), py::arg("y"));
    m.def(
        "metric_equivalence",
        [](const SolenoidSystem& sys, int samples, std::uint64_t seed) {
            const auto b = metric_equivalence(sys, samples, seed);
            return std::make_pair(b.c_low, b.c_high);
        },
        py::arg("sys"), py::arg("samples"), py::arg("seed") = 1);

    m.def(
        "run",
        [](const std::string& sub, const std::string& config_json) {
            const auto cfg = config_from_json(config_json);
            std::ostringstream out;
            const int code = run_subcommand(sub, cfg, out);
            return std::make_pair(code, out.str());
        },
        py::arg("subcommand"), py::arg("config_json") = "{}",
        "Runs a CLI subcommand in process and returns (exit code, report text).");
}
