#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fmt/format.h>

#include "minmaxlab/serialize.hpp"
#include "minmaxlab/version.hpp"

namespace py = pybind11;
using namespace minmaxlab;

namespace {

PyObject* error_type = nullptr;

template <typename T>
std::string json_text(const T& value, const char* kind) {
  return document(kind, to_json(value)).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Minimax risk under power losses in the Gaussian location model";
  m.attr("__version__") = kVersion;

  error_type = PyErr_NewException("minmaxlab.Error", PyExc_ValueError, nullptr);
  m.attr("Error") = py::handle(error_type);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::reinterpret_borrow<py::object>(error_type)(e.what());
      inst.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(error_type, inst.ptr());
    }
  });

  // Model
  py::class_<Interval>(m, "Interval")
      .def(py::init<double, double>(), py::arg("lo"), py::arg("hi"))
      .def_readonly("lo", &Interval::lo)
      .def_readonly("hi", &Interval::hi)
      .def("width", &Interval::width)
      .def("contains", &Interval::contains)
      .def("__repr__", [](const Interval& i) { return fmt::format("Interval({}, {})", i.lo, i.hi); });
  m.def("default_theta_interval", &default_theta_interval);

  py::class_<GaussianLocationModel>(m, "GaussianLocationModel")
      .def(py::init<int, double>(), py::arg("n") = 1, py::arg("sigma") = 1.0)
      .def_readonly("n", &GaussianLocationModel::n)
      .def_readonly("sigma", &GaussianLocationModel::sigma)
      .def("mean_sd", &GaussianLocationModel::mean_sd);

  py::class_<AffineMean>(m, "AffineMean")
      .def(py::init([](double g, double b) { return AffineMean{g, b}; }), py::arg("gamma") = 1.0,
           py::arg("beta") = 0.0)
      .def_readwrite("gamma", &AffineMean::gamma)
      .def_readwrite("beta", &AffineMean::beta)
      .def("__repr__", [](const AffineMean& e) { return describe(EstimatorSpec{e}); });
  py::class_<SampleMedian>(m, "SampleMedian")
      .def(py::init([](double b) { return SampleMedian{b}; }), py::arg("beta") = 0.0)
      .def_readwrite("beta", &SampleMedian::beta)
      .def("__repr__", [](const SampleMedian& e) { return describe(EstimatorSpec{e}); });
  py::class_<SignPerturbed>(m, "SignPerturbed")
      .def(py::init([](BaseEstimator base, double eps, double star) {
             return SignPerturbed{std::move(base), eps, star};
           }),
           py::arg("base"), py::arg("epsilon"), py::arg("theta_star"))
      .def_readwrite("base", &SignPerturbed::base)
      .def_readwrite("epsilon", &SignPerturbed::epsilon)
      .def_readwrite("theta_star", &SignPerturbed::theta_star)
      .def("__repr__", [](const SignPerturbed& e) { return describe(EstimatorSpec{e}); });

  m.def("simulate_estimates", &simulate_estimates, py::arg("model"), py::arg("estimator"),
        py::arg("theta"), py::arg("count"), py::arg("seed"));
  m.def("derive_seed", &derive_seed, py::arg("master"), py::arg("counter"));

  // Losses
  py::class_<LossSpec>(m, "LossSpec")
      .def_static("power", &LossSpec::power, py::arg("p"), py::arg("c") = 1.0)
      .def_static("huber", &LossSpec::huber, py::arg("k"))
      .def_static("scaled", &LossSpec::scaled, py::arg("lam"), py::arg("inner"))
      .def_static("sum", &LossSpec::sum, py::arg("terms"))
      .def("__call__", [](const LossSpec& l, double t) { return eval_error(l, t); }, py::arg("t"))
      .def("kinks", [](const LossSpec& l) { return kinks(l); })
      .def("__repr__", [](const LossSpec& l) { return describe(l); });
  m.def("eval_loss", &eval_loss, py::arg("loss"), py::arg("theta"), py::arg("a"));
  m.def("scale_loss", &scale_loss, py::arg("loss"), py::arg("lam"));

  py::class_<ExponentWindow>(m, "ExponentWindow")
      .def(py::init([](double lo, double hi) { return ExponentWindow{lo, hi}; }),
           py::arg("h_min") = 1e-5, py::arg("h_max") = 1e-2)
      .def_readwrite("h_min", &ExponentWindow::h_min)
      .def_readwrite("h_max", &ExponentWindow::h_max);
  py::class_<ExponentClassification>(m, "ExponentClassification")
      .def_readonly("p_hat", &ExponentClassification::p_hat)
      .def_readonly("c_hat", &ExponentClassification::c_hat)
      .def_readonly("window", &ExponentClassification::window)
      .def_readonly("fit_residual", &ExponentClassification::fit_residual);
  m.def("classify_exponent", &classify_exponent, py::arg("loss"), py::arg("theta0") = 0.0,
        py::arg("window") = ExponentWindow{}, py::arg("points") = kDefaultClassifierPoints);
  m.def("same_class", &same_class, py::arg("a"), py::arg("b"), py::arg("tol"));

  // Risk
  py::class_<Quadrature>(m, "Quadrature")
      .def(py::init([](int nodes) { return Quadrature{nodes}; }), py::arg("nodes") = kDefaultQuadratureNodes)
      .def_readwrite("nodes", &Quadrature::nodes);
  py::class_<MonteCarlo>(m, "MonteCarlo")
      .def(py::init([](std::size_t n, std::uint64_t seed) { return MonteCarlo{n, seed}; }),
           py::arg("samples") = 100000, py::arg("seed") = 0)
      .def_readwrite("samples", &MonteCarlo::samples)
      .def_readwrite("seed", &MonteCarlo::seed);
  py::class_<RiskEstimate>(m, "RiskEstimate")
      .def_readonly("value", &RiskEstimate::value)
      .def_readonly("method", &RiskEstimate::method)
      .def_readonly("std_error", &RiskEstimate::std_error);
  py::class_<RiskCrossCheck>(m, "RiskCrossCheck")
      .def_readonly("quad", &RiskCrossCheck::quad)
      .def_readonly("mc", &RiskCrossCheck::mc)
      .def_readonly("z_score", &RiskCrossCheck::z_score);

  m.def("risk", &risk, py::arg("model"), py::arg("estimator"), py::arg("loss"), py::arg("theta"),
        py::arg("method") = RiskMethod{Quadrature{}}, py::call_guard<py::gil_scoped_release>());
  m.def("crosscheck_risk", &crosscheck_risk, py::arg("model"), py::arg("estimator"),
        py::arg("loss"), py::arg("theta"), py::arg("mc_samples"), py::arg("seed"),
        py::call_guard<py::gil_scoped_release>());
  m.def("gaussian_error_risk", &gaussian_error_risk, py::arg("loss"), py::arg("mu"), py::arg("s"),
        py::arg("nodes") = kDefaultQuadratureNodes);

  py::enum_<RiskEvaluation>(m, "RiskEvaluation")
      .value("Auto", RiskEvaluation::Auto)
      .value("MonteCarlo", RiskEvaluation::MonteCarlo);
  py::class_<WorstCaseOptions>(m, "WorstCaseOptions")
      .def(py::init<>())
      .def_readwrite("grid", &WorstCaseOptions::grid)
      .def_readwrite("refine_tol", &WorstCaseOptions::refine_tol)
      .def_readwrite("nodes", &WorstCaseOptions::nodes)
      .def_readwrite("mc_samples", &WorstCaseOptions::mc_samples)
      .def_readwrite("seed", &WorstCaseOptions::seed)
      .def_readwrite("evaluation", &WorstCaseOptions::evaluation);
  py::class_<WorstCaseResult>(m, "WorstCaseResult")
      .def_readonly("sup_value", &WorstCaseResult::sup_value)
      .def_readonly("argmax_theta", &WorstCaseResult::argmax_theta)
      .def_readonly("grid_points", &WorstCaseResult::grid_points)
      .def_readonly("refinement_tol", &WorstCaseResult::refinement_tol)
      .def_readonly("constant_in_theta", &WorstCaseResult::constant_in_theta)
      .def_readonly("std_error", &WorstCaseResult::std_error)
      .def("to_json", [](const WorstCaseResult& r) { return json_text(r, "worst_case"); });
  m.def("worst_case_risk", &worst_case_risk, py::arg("model"), py::arg("estimator"),
        py::arg("loss"), py::arg("theta_interval"), py::arg("opts") = WorstCaseOptions{},
        py::call_guard<py::gil_scoped_release>());

  // Minimax
  py::class_<AffineMeanFamily>(m, "AffineMeanFamily")
      .def(py::init([](Interval g, Interval b) { return AffineMeanFamily{g, b}; }),
           py::arg("gamma_range") = Interval(0.0, 1.5), py::arg("beta_range") = Interval(-1.0, 1.0))
      .def_readwrite("gamma_range", &AffineMeanFamily::gamma_range)
      .def_readwrite("beta_range", &AffineMeanFamily::beta_range);
  py::class_<MedianShiftFamily>(m, "MedianShiftFamily")
      .def(py::init([](Interval b) { return MedianShiftFamily{b}; }),
           py::arg("beta_range") = Interval(-1.0, 1.0))
      .def_readwrite("beta_range", &MedianShiftFamily::beta_range);
  m.def("param_names", &param_names, py::arg("family"));
  m.def("worst_case_value", &worst_case_value, py::arg("model"), py::arg("family"),
        py::arg("params"), py::arg("loss"), py::arg("theta_interval"),
        py::arg("inner") = WorstCaseOptions{}, py::call_guard<py::gil_scoped_release>());

  py::class_<NelderMeadOptions>(m, "NelderMeadOptions")
      .def(py::init<>())
      .def_readwrite("xtol", &NelderMeadOptions::xtol)
      .def_readwrite("ftol", &NelderMeadOptions::ftol)
      .def_readwrite("max_iterations", &NelderMeadOptions::max_iterations);
  py::class_<MinimaxOptions>(m, "MinimaxOptions")
      .def(py::init<>())
      .def_readwrite("restarts", &MinimaxOptions::restarts)
      .def_readwrite("seed", &MinimaxOptions::seed)
      .def_readwrite("inner", &MinimaxOptions::inner)
      .def_readwrite("simplex", &MinimaxOptions::simplex)
      .def_readwrite("step_tol", &MinimaxOptions::step_tol)
      .def_readwrite("agreement_tol", &MinimaxOptions::agreement_tol);
  py::class_<MinimaxResult>(m, "MinimaxResult")
      .def_readonly("best_params", &MinimaxResult::best_params)
      .def_readonly("param_names", &MinimaxResult::param_names)
      .def_readonly("minimax_value", &MinimaxResult::minimax_value)
      .def_readonly("inner", &MinimaxResult::inner)
      .def_readonly("outer_iterations", &MinimaxResult::outer_iterations)
      .def_readonly("converged", &MinimaxResult::converged)
      .def_readonly("final_step", &MinimaxResult::final_step)
      .def_readonly("restart_spread", &MinimaxResult::restart_spread)
      .def_readonly("restart_values", &MinimaxResult::restart_values)
      .def("to_json", [](const MinimaxResult& r) { return json_text(r, "minimax"); });
  m.def("solve_minimax", &solve_minimax, py::arg("model"), py::arg("family"), py::arg("loss"),
        py::arg("theta_interval"), py::arg("opts") = MinimaxOptions{},
        py::call_guard<py::gil_scoped_release>());

  py::class_<RealizabilityReport>(m, "RealizabilityReport")
      .def_readonly("rows", &RealizabilityReport::rows)
      .def_readonly("distances", &RealizabilityReport::distances)
      .def("to_json", [](const RealizabilityReport& r) { return json_text(r, "realizability"); });
  m.def("realizability_report", &realizability_report, py::arg("model"), py::arg("family"),
        py::arg("losses"), py::arg("theta_interval"), py::arg("opts") = MinimaxOptions{},
        py::call_guard<py::gil_scoped_release>());

  // Exclusivity
  m.def("grad_worst_case", &grad_worst_case, py::arg("model"), py::arg("family"),
        py::arg("params"), py::arg("loss"), py::arg("theta_interval"), py::arg("h") = 1e-4,
        py::arg("inner") = WorstCaseOptions{}, py::call_guard<py::gil_scoped_release>());

  py::enum_<Verdict>(m, "Verdict")
      .value("Refuted", Verdict::Refuted)
      .value("NoDescentInFamily", Verdict::NoDescentInFamily)
      .value("StationaryBoth", Verdict::StationaryBoth);
  py::class_<LadderStep>(m, "LadderStep")
      .def_readonly("alpha", &LadderStep::alpha)
      .def_readonly("delta_Rp", &LadderStep::delta_Rp)
      .def_readonly("delta_Rq", &LadderStep::delta_Rq);
  py::class_<RefuteOptions>(m, "RefuteOptions")
      .def(py::init<>())
      .def_readwrite("minimax", &RefuteOptions::minimax)
      .def_readwrite("fd_step", &RefuteOptions::fd_step)
      .def_readwrite("stationarity_tol", &RefuteOptions::stationarity_tol)
      .def_readwrite("alpha0", &RefuteOptions::alpha0)
      .def_readwrite("halvings", &RefuteOptions::halvings)
      .def_readwrite("taylor_points", &RefuteOptions::taylor_points)
      .def_readwrite("slope_lo", &RefuteOptions::slope_lo)
      .def_readwrite("slope_hi", &RefuteOptions::slope_hi)
      .def_readwrite("exponent_gap", &RefuteOptions::exponent_gap);
  py::class_<RefutationCertificate>(m, "RefutationCertificate")
      .def_readonly("p", &RefutationCertificate::p)
      .def_readonly("q", &RefutationCertificate::q)
      .def_readonly("delta_star_params", &RefutationCertificate::delta_star_params)
      .def_readonly("param_names", &RefutationCertificate::param_names)
      .def_readonly("delta_star_converged", &RefutationCertificate::delta_star_converged)
      .def_readonly("Rp_star", &RefutationCertificate::Rp_star)
      .def_readonly("Rq_star", &RefutationCertificate::Rq_star)
      .def_readonly("gradient_q", &RefutationCertificate::gradient_q)
      .def_readonly("gradient_p_norm", &RefutationCertificate::gradient_p_norm)
      .def_readonly("direction", &RefutationCertificate::direction)
      .def_readonly("alpha", &RefutationCertificate::alpha)
      .def_readonly("delta_Rq", &RefutationCertificate::delta_Rq)
      .def_readonly("delta_Rp", &RefutationCertificate::delta_Rp)
      .def_readonly("taylor_slope_p", &RefutationCertificate::taylor_slope_p)
      .def_readonly("verdict", &RefutationCertificate::verdict)
      .def_readonly("ladder", &RefutationCertificate::ladder)
      .def_readonly("note", &RefutationCertificate::note)
      .def("to_json", [](const RefutationCertificate& c) { return json_text(c, "refutation"); });
  m.def("refute_joint_minimaxity", &refute_joint_minimaxity, py::arg("model"), py::arg("family"),
        py::arg("loss_p"), py::arg("loss_q"), py::arg("theta_interval"),
        py::arg("opts") = RefuteOptions{}, py::call_guard<py::gil_scoped_release>());

  py::class_<SignPerturbationResult>(m, "SignPerturbationResult")
      .def_readonly("base", &SignPerturbationResult::base)
      .def_readonly("perturbed", &SignPerturbationResult::perturbed);
  m.def("sign_perturbation_risk", &sign_perturbation_risk, py::arg("model"), py::arg("base"),
        py::arg("epsilon"), py::arg("theta_star"), py::arg("loss"), py::arg("theta_interval"),
        py::arg("mc_samples"), py::arg("seed"), py::arg("opts") = WorstCaseOptions{},
        py::call_guard<py::gil_scoped_release>());

  m.def("appendix_f", &appendix_f, py::arg("alpha"), py::arg("n"), py::arg("q"),
        py::arg("nodes") = kDefaultQuadratureNodes);
  py::enum_<FPrimeMode>(m, "FPrimeMode")
      .value("Analytic", FPrimeMode::Analytic)
      .value("FiniteDifference", FPrimeMode::FiniteDifference);
  m.def("appendix_fprime", &appendix_fprime, py::arg("alpha"), py::arg("n"), py::arg("q"),
        py::arg("mode") = FPrimeMode::Analytic, py::arg("nodes") = kDefaultQuadratureNodes);

  py::class_<PartitionClass>(m, "PartitionClass")
      .def_readonly("exponent", &PartitionClass::exponent)
      .def_readonly("params", &PartitionClass::params)
      .def_readonly("value", &PartitionClass::value)
      .def_readonly("converged", &PartitionClass::converged);
  py::class_<PartitionReport>(m, "PartitionReport")
      .def_readonly("classes", &PartitionReport::classes)
      .def_readonly("param_names", &PartitionReport::param_names)
      .def_readonly("pairwise_disjoint", &PartitionReport::pairwise_disjoint)
      .def_readonly("witnesses", &PartitionReport::witnesses)
      .def("to_json", [](const PartitionReport& r) { return json_text(r, "exclusivity"); });
  m.def("exclusivity_partition_check", &exclusivity_partition_check, py::arg("model"),
        py::arg("family"), py::arg("exponents"), py::arg("theta_interval"),
        py::arg("opts") = RefuteOptions{}, py::call_guard<py::gil_scoped_release>());
}
