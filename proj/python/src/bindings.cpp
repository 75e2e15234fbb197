#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "orthlip/beta.hpp"
#include "orthlip/error.hpp"
#include "orthlip/exponents.hpp"
#include "orthlip/grid.hpp"
#include "orthlip/model.hpp"
#include "orthlip/solver.hpp"
#include "orthlip/verify.hpp"

namespace py = pybind11;
using namespace orthlip;

namespace {

// Copy of the nodal values shaped (n_1, ..., n_N); axis 0 varies fastest in
// the flat layout, so the array is Fortran-ordered.
py::array_t<double> as_array(const NodalField& f) {
  const Grid& g = f.grid();
  std::vector<py::ssize_t> shape, strides;
  py::ssize_t step = sizeof(double);
  for (std::size_t a = 0; a < g.dim(); ++a) {
    shape.push_back(static_cast<py::ssize_t>(g.nodes(a)));
    strides.push_back(step);
    step *= shape.back();
  }
  py::array_t<double> out(shape, strides);
  std::copy(f.values().begin(), f.values().end(), out.mutable_data());
  return out;
}

NodalField from_array(const Grid& g, py::array_t<double, py::array::f_style | py::array::forcecast> a) {
  if (static_cast<std::size_t>(a.size()) != g.size())
    throw InvalidArgument("array has " + std::to_string(a.size()) + " entries, grid has " + std::to_string(g.size()));
  return NodalField(g, std::vector<double>(a.data(), a.data() + a.size()));
}

py::dict report_dict(const EstimateReport& r) {
  py::dict params, terms;
  for (const auto& [k, v] : r.params) params[py::str(k)] = v;
  for (const auto& [k, v] : r.terms) terms[py::str(k)] = v;
  py::dict d;
  d["check"] = r.check;
  d["lhs"] = r.lhs;
  d["rhs_core"] = r.rhs_core;
  d["constant"] = r.empirical_constant;
  d["pass"] = r.pass;
  d["params"] = params;
  d["terms"] = terms;
  d["note"] = r.note;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Orthotropic regularized problems: exponent schedules, solver and estimate checks";

  // The module keeps these alive; the translator only borrows them.
  static PyObject* const error = py::exception<Error>(m, "Error", PyExc_RuntimeError).ptr();
  static PyObject* const invalid = py::exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError).ptr();
  static PyObject* const range = py::exception<RangeError>(m, "RangeError", error).ptr();
  static PyObject* const convergence = py::exception<ConvergenceError>(m, "ConvergenceError", error).ptr();
  static PyObject* const not_stabilized = py::exception<NotStabilizedError>(m, "NotStabilizedError", error).ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConvergenceError& e) {
      py::object exc = py::reinterpret_borrow<py::object>(convergence)(e.what());
      exc.attr("final_residual") = e.final_residual();
      exc.attr("iterations") = e.iterations();
      PyErr_SetObject(convergence, exc.ptr());
    } catch (const NotStabilizedError& e) {
      py::object exc = py::reinterpret_borrow<py::object>(not_stabilized)(e.what());
      exc.attr("levels") = e.partial().states.size();
      PyErr_SetObject(not_stabilized, exc.ptr());
    } catch (const InvalidArgument& e) {
      PyErr_SetString(invalid, e.what());
    } catch (const RangeError& e) {
      PyErr_SetString(range, e.what());
    } catch (const Error& e) {
      PyErr_SetString(error, e.what());
    }
  });

  // exponents
  py::class_<ExponentVector>(m, "ExponentVector")
      .def(py::init<std::vector<double>>(), py::arg("p"))
      .def_property_readonly("dim", &ExponentVector::dim)
      .def_property_readonly("min", &ExponentVector::min)
      .def_property_readonly("max", &ExponentVector::max)
      .def_property_readonly("standard_growth", &ExponentVector::standard_growth)
      .def("values", [](const ExponentVector& p) { return std::vector<double>(p.values().begin(), p.values().end()); })
      .def("__len__", &ExponentVector::dim)
      .def("__getitem__", [](const ExponentVector& p, std::size_t i) {
        if (i >= p.dim()) throw py::index_error();
        return p[i];
      });
  py::implicitly_convertible<py::list, ExponentVector>();
  py::implicitly_convertible<py::tuple, ExponentVector>();

  py::class_<QSequence>(m, "QSequence")
      .def_readonly("q0", &QSequence::q0)
      .def_readonly("q", &QSequence::q)
      .def("order", &QSequence::order, py::arg("k"));
  m.def("compute_q_sequence", &compute_q_sequence, py::arg("p"), py::arg("q0") = 2.0);

  py::class_<MoserSchedule>(m, "MoserSchedule")
      .def_readonly("dim", &MoserSchedule::dim)
      .def_readonly("sobolev2star", &MoserSchedule::sobolev2star)
      .def_readonly("j0", &MoserSchedule::j0)
      .def_readonly("j1", &MoserSchedule::j1)
      .def_readonly("J", &MoserSchedule::J)
      .def_readonly("jmax", &MoserSchedule::jmax)
      .def_readonly("theta", &MoserSchedule::theta)
      .def_readonly("theta_tail", &MoserSchedule::theta_tail)
      .def("gamma", &MoserSchedule::gamma, py::arg("j"))
      .def("tau", &MoserSchedule::tau, py::arg("j"))
      .def("eps", &MoserSchedule::eps, py::arg("j"))
      .def("absorption_ratio", &MoserSchedule::absorption_ratio, py::arg("j"));
  m.def("compute_moser_schedule", &compute_moser_schedule, py::arg("p"), py::arg("jmax"));
  m.def("minimum_jmax", &minimum_jmax, py::arg("p"));
  m.def("epsilon_asymptote", &epsilon_asymptote, py::arg("p"));
  m.def("moser_gamma", &moser_gamma, py::arg("p_max"), py::arg("j"));

  py::class_<HoleFilling>(m, "HoleFilling")
      .def(py::init([](double A, double B, double C, double alpha0, double beta0, double theta) {
             return HoleFilling{A, B, C, alpha0, beta0, theta};
           }),
           py::arg("A"), py::arg("B"), py::arg("C"), py::arg("alpha0"), py::arg("beta0"), py::arg("theta"))
      .def_readwrite("A", &HoleFilling::A)
      .def_readwrite("B", &HoleFilling::B)
      .def_readwrite("C", &HoleFilling::C)
      .def_readwrite("alpha0", &HoleFilling::alpha0)
      .def_readwrite("beta0", &HoleFilling::beta0)
      .def_readwrite("theta", &HoleFilling::theta);
  m.def("iteration_lemma_bound", &iteration_lemma_bound, py::arg("h"), py::arg("r"), py::arg("R"),
        py::arg("lam") = py::none());

  // beta
  py::class_<BetaState>(m, "BetaState")
      .def_readonly("j", &BetaState::j)
      .def_readonly("level", &BetaState::level)
      .def_readonly("beta", &BetaState::beta)
      .def_readonly("target", &BetaState::target)
      .def_readonly("stabilized", &BetaState::stabilized);
  py::class_<BetaTrace>(m, "BetaTrace")
      .def_readonly("states", &BetaTrace::states)
      .def_readonly("ell0", &BetaTrace::ell0)
      .def_readonly("delta", &BetaTrace::delta);
  m.def("beta_run", &beta_run, py::arg("p"), py::arg("q0"), py::arg("j"), py::arg("max_levels") = 10000);

  // grid
  py::class_<Grid>(m, "Grid")
      .def_static("unit", &Grid::unit, py::arg("dim"), py::arg("nodes_per_axis"))
      .def_property_readonly("dim", &Grid::dim)
      .def_property_readonly("size", &Grid::size)
      .def_property_readonly("max_h", &Grid::max_h)
      .def("nodes", &Grid::nodes, py::arg("axis"))
      .def("h", &Grid::h, py::arg("axis"))
      .def("coord", [](const Grid& g, std::size_t k) {
        const Point x = g.coord(k);
        return std::vector<double>(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(g.dim()));
      })
      .def("is_boundary", &Grid::is_boundary);

  py::class_<NodalField>(m, "NodalField")
      .def(py::init(&from_array), py::arg("grid"), py::arg("values"))
      .def_property_readonly("grid", &NodalField::grid)
      .def("array", &as_array)
      .def("max_abs", &NodalField::max_abs)
      .def("max_abs_boundary", &NodalField::max_abs_boundary)
      .def("max_abs_interior", &NodalField::max_abs_interior);

  py::class_<CutoffSpec>(m, "CutoffSpec")
      .def(py::init([](std::vector<double> center, double inner, double outer) {
             if (center.size() > 3) throw InvalidArgument("center has more than three coordinates");
             CutoffSpec s;
             std::copy(center.begin(), center.end(), s.center.begin());
             s.inner = inner;
             s.outer = outer;
             return s;
           }),
           py::arg("center"), py::arg("inner"), py::arg("outer"))
      .def_readwrite("inner", &CutoffSpec::inner)
      .def_readwrite("outer", &CutoffSpec::outer);

  // model
  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<ExponentVector, double, double>(), py::arg("p"), py::arg("eps"), py::arg("eps0") = 0.5)
      .def_readonly("p", &ModelParams::p)
      .def_readonly("eps", &ModelParams::eps)
      .def_readonly("eps0", &ModelParams::eps0);
  m.def("g_eval", &g_eval, py::arg("axis"), py::arg("t"), py::arg("params"));
  m.def("g_first", &g_first, py::arg("axis"), py::arg("t"), py::arg("params"));
  m.def("g_second", &g_second, py::arg("axis"), py::arg("t"), py::arg("params"));
  m.def("energy", py::overload_cast<const NodalField&, const ModelParams&>(&energy), py::arg("u"), py::arg("params"));

  py::class_<BoundaryData>(m, "BoundaryData")
      .def_static("affine", &BoundaryData::affine, py::arg("slope"), py::arg("offset") = 0.0)
      .def_static("random_smooth", &BoundaryData::random_smooth, py::arg("dim"), py::arg("seed"), py::arg("modes") = 6,
                  py::arg("max_frequency") = 3, py::arg("amplitude") = 1.0)
      .def_static("from_keys", &BoundaryData::from_keys, py::arg("keys"), py::arg("base_dir") = ".")
      .def("to_keys", &BoundaryData::to_keys, py::arg("values_path") = "tabulated.csv")
      .def_property_readonly("dim", &BoundaryData::dim)
      .def_property_readonly("kind", &BoundaryData::kind_name)
      .def("__call__", [](const BoundaryData& d, std::vector<double> x) {
        Point pt{};
        std::copy_n(x.begin(), std::min<std::size_t>(x.size(), 3), pt.begin());
        return d(pt);
      });
  m.def("sample", &sample, py::arg("data"), py::arg("grid"));

  // solver
  py::enum_<InitialGuess>(m, "InitialGuess")
      .value("interpolation", InitialGuess::Interpolation)
      .value("harmonic", InitialGuess::HarmonicExtension)
      .value("zero", InitialGuess::ZeroInterior)
      .value("data", InitialGuess::DataExtension)
      .value("given", InitialGuess::Given);
  py::enum_<Preconditioner>(m, "Preconditioner")
      .value("jacobi", Preconditioner::Jacobi)
      .value("spectral", Preconditioner::Spectral)
      .value("scaled_spectral", Preconditioner::ScaledSpectral)
      .value("hessian", Preconditioner::Hessian);

  py::class_<SolveConfig>(m, "SolveConfig")
      .def(py::init<>())
      .def_readwrite("tol", &SolveConfig::tol)
      .def_readwrite("max_iters", &SolveConfig::max_iters)
      .def_readwrite("initial", &SolveConfig::initial)
      .def_readwrite("given", &SolveConfig::given)
      .def_readwrite("preconditioner", &SolveConfig::preconditioner)
      .def_readwrite("refresh", &SolveConfig::refresh)
      .def_readwrite("mollify_data", &SolveConfig::mollify_data)
      .def_readwrite("throw_on_failure", &SolveConfig::throw_on_failure);

  py::class_<SolveResult>(m, "SolveResult")
      .def_readonly("u", &SolveResult::u)
      .def_readonly("energy", &SolveResult::energy)
      .def_readonly("initial_energy", &SolveResult::initial_energy)
      .def_readonly("residual_max", &SolveResult::residual_max)
      .def_readonly("iterations", &SolveResult::iterations)
      .def_readonly("converged", &SolveResult::converged)
      .def_readonly("energy_history", &SolveResult::energy_history);
  m.def("solve", &solve, py::arg("params"), py::arg("data"), py::arg("grid"), py::arg("cfg") = SolveConfig{},
        py::call_guard<py::gil_scoped_release>());
  m.def("scaled_residual", &scaled_residual, py::arg("u"), py::arg("params"));
  m.def("residual_floor", &residual_floor, py::arg("u"), py::arg("params"));

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("eps", &SweepRow::eps)
      .def_readonly("energy", &SweepRow::energy)
      .def_readonly("residual_max", &SweepRow::residual_max)
      .def_readonly("iterations", &SweepRow::iterations)
      .def_readonly("competitor_energy", &SweepRow::competitor_energy)
      .def_readonly("diff_lp1", &SweepRow::diff_lp1)
      .def_readonly("diff_grad", &SweepRow::diff_grad);
  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("solutions", &SweepResult::solutions)
      .def_readonly("table", &SweepResult::table)
      .def_readonly("energy_bound_holds", &SweepResult::energy_bound_holds);
  m.def("sweep_eps", &sweep_eps, py::arg("params"), py::arg("eps_list"), py::arg("data"), py::arg("grid"),
        py::arg("cfg") = SolveConfig{}, py::call_guard<py::gil_scoped_release>());

  // verify
  py::enum_<CheckKind>(m, "CheckKind")
      .value("caccioppoli", CheckKind::Caccioppoli)
      .value("caccioppoli_negative", CheckKind::CaccioppoliNegative)
      .value("weird_caccioppoli", CheckKind::WeirdCaccioppoli)
      .value("power_caccioppoli", CheckKind::PowerCaccioppoli)
      .value("self_improving", CheckKind::SelfImproving)
      .value("lipschitz", CheckKind::Lipschitz)
      .value("higher_integrability", CheckKind::HigherIntegrability)
      .value("higher_differentiability", CheckKind::HigherDifferentiability);
  m.def("parse_check_kind", &parse_check_kind, py::arg("name"));

  py::class_<CheckSpec>(m, "CheckSpec")
      .def(py::init<>())
      .def(py::init([](CheckKind kind) {
             CheckSpec s;
             s.kind = kind;
             return s;
           }),
           py::arg("kind"))
      .def_readwrite("kind", &CheckSpec::kind)
      .def_readwrite("j", &CheckSpec::j, "axis, zero-based")
      .def_readwrite("k", &CheckSpec::k, "axis, zero-based")
      .def_readwrite("phi_power", &CheckSpec::phi_power)
      .def_readwrite("alpha", &CheckSpec::alpha)
      .def_readwrite("s", &CheckSpec::s)
      .def_readwrite("m", &CheckSpec::m)
      .def_readwrite("ell0", &CheckSpec::ell0)
      .def_readwrite("q0", &CheckSpec::q0)
      .def_readwrite("gamma", &CheckSpec::gamma)
      .def_readwrite("theta", &CheckSpec::theta)
      .def_readwrite("balls", &CheckSpec::balls)
      .def_readwrite("acceptance", &CheckSpec::acceptance);

  py::class_<EstimateReport>(m, "EstimateReport")
      .def_readonly("check", &EstimateReport::check)
      .def_readonly("lhs", &EstimateReport::lhs)
      .def_readonly("rhs_core", &EstimateReport::rhs_core)
      .def_readonly("constant", &EstimateReport::empirical_constant)
      .def_readonly("pass_", &EstimateReport::pass)
      .def_readonly("note", &EstimateReport::note)
      .def("param", &EstimateReport::param, py::arg("key"))
      .def("term", &EstimateReport::term, py::arg("key"))
      .def("to_dict", &report_dict)
      .def("to_json", &report_json, py::arg("indent") = -1);
  m.def("run_check", &run_check, py::arg("spec"), py::arg("u"), py::arg("params"));

  py::class_<StudyConfig>(m, "StudyConfig")
      .def(py::init<>())
      .def_readwrite("dim", &StudyConfig::dim)
      .def_readwrite("resolutions", &StudyConfig::resolutions)
      .def_readwrite("final_tolerance", &StudyConfig::final_tolerance)
      .def_readwrite("spread_tolerance", &StudyConfig::spread_tolerance)
      .def_readwrite("threads", &StudyConfig::threads);
  py::class_<RefinementLevel>(m, "RefinementLevel")
      .def_readonly("h", &RefinementLevel::h)
      .def_readonly("report", &RefinementLevel::report);
  py::class_<RefinementStudy>(m, "RefinementStudy")
      .def_readonly("check", &RefinementStudy::check)
      .def_readonly("levels", &RefinementStudy::levels)
      .def_readonly("trend", &RefinementStudy::trend)
      .def_readonly("ratios", &RefinementStudy::ratios)
      .def_readonly("final_growth", &RefinementStudy::final_growth)
      .def_readonly("spread", &RefinementStudy::spread)
      .def_readonly("pass_", &RefinementStudy::pass)
      .def("to_json", &study_json, py::arg("indent") = -1);
  m.def(
      "refinement_study",
      [](const ModelParams& params, const BoundaryData& data, const SolveConfig& cfg, const StudyConfig& study,
         const std::vector<CheckSpec>& checks) { return refinement_study(params, data, cfg, study, checks); },
      py::arg("params"), py::arg("data"), py::arg("cfg"), py::arg("study"), py::arg("checks"),
      py::call_guard<py::gil_scoped_release>());
  m.def("check_lipschitz_estimate", &check_lipschitz_estimate, py::arg("params"), py::arg("data"), py::arg("cfg"),
        py::arg("gamma"), py::arg("theta"), py::arg("balls"), py::arg("study"),
        py::call_guard<py::gil_scoped_release>());
}
