#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <variant>
#include <vector>

#include "ncrat/idtest.hpp"
#include "ncrat/lab.hpp"
#include "ncrat/parse.hpp"
#include "ncrat/realization.hpp"
#include "ncrat/serialize.hpp"

namespace py = pybind11;
using namespace ncrat;
using nlohmann::json;

namespace {

/// Raised when an evaluation leaves the expression's domain.
class DomainException : public std::runtime_error {
 public:
  explicit DomainException(const DomainError& err)
      : std::runtime_error("domain error at " + pretty_print(err.failing_subexpression) +
                           ": sigma_min=" + format_double(err.sigma_min) +
                           " sigma_max=" + format_double(err.sigma_max)) {}
};

class SingularMatrixException : public std::runtime_error {
 public:
  explicit SingularMatrixException(const SingularError& err)
      : std::runtime_error("matrix is singular at tolerance: sigma_min=" +
                           format_double(err.sigma_min) +
                           " sigma_max=" + format_double(err.sigma_max)) {}
};

MatrixTuple tuple_from_list(const std::vector<ComplexMatrix>& matrices, Eigen::Index dim_hint) {
  if (matrices.empty()) {
    if (dim_hint < 1)
      throw std::invalid_argument("an empty tuple needs dim= to fix the matrix size");
    return MatrixTuple::empty(dim_hint);
  }
  return MatrixTuple::of(matrices);
}

py::object json_to_py(const json& j) {
  switch (j.type()) {
    case json::value_t::null:
      return py::none();
    case json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case json::value_t::number_integer:
      return py::int_(j.get<long long>());
    case json::value_t::number_unsigned:
      return py::int_(j.get<unsigned long long>());
    case json::value_t::number_float:
      return py::float_(j.get<double>());
    case json::value_t::string:
      return py::str(j.get<std::string>());
    case json::value_t::array: {
      py::list out;
      for (const json& item : j) out.append(json_to_py(item));
      return out;
    }
    case json::value_t::object: {
      py::dict out;
      for (const auto& [key, value] : j.items()) out[py::str(key)] = json_to_py(value);
      return out;
    }
    default:
      return py::none();
  }
}

json py_to_json(const py::handle& obj) {
  if (obj.is_none()) return nullptr;
  if (py::isinstance<py::bool_>(obj)) return obj.cast<bool>();
  if (py::isinstance<py::int_>(obj)) return obj.cast<long long>();
  if (py::isinstance<py::float_>(obj)) return obj.cast<double>();
  if (py::isinstance<py::str>(obj)) return obj.cast<std::string>();
  if (py::isinstance<py::dict>(obj)) {
    json out = json::object();
    for (const auto& item : obj.cast<py::dict>())
      out[item.first.cast<std::string>()] = py_to_json(item.second);
    return out;
  }
  if (py::isinstance<py::list>(obj) || py::isinstance<py::tuple>(obj)) {
    json out = json::array();
    for (const auto& item : obj.cast<py::sequence>()) out.push_back(py_to_json(item));
    return out;
  }
  throw std::invalid_argument("cannot convert python object to JSON");
}

ConvergenceConfig config_from_py(const py::object& config) {
  if (py::isinstance<py::str>(config))
    return io::config_from_json(json::parse(config.cast<std::string>()));
  return io::config_from_json(py_to_json(config));
}

ComplexMatrix evaluate_or_raise(const Expression& e, const MatrixTuple& t, double tol) {
  EvalOutcome out = evaluate(e, t, tol);
  if (auto* err = std::get_if<DomainError>(&out)) throw DomainException(*err);
  return std::move(std::get<ComplexMatrix>(out));
}

}  // namespace

PYBIND11_MODULE(_ncrat, m) {
  m.doc() = "non-commutative rational expressions over complex matrices";

  py::register_exception<ParseException>(m, "ParseError", PyExc_ValueError);
  py::register_exception<DomainException>(m, "DomainError", PyExc_ArithmeticError);
  py::register_exception<SingularMatrixException>(m, "SingularMatrixError", PyExc_ArithmeticError);

  py::class_<Expression>(m, "Expression")
      .def_property_readonly("level", [](const Expression& e) { return level(e); })
      .def_property_readonly("num_variables",
                             [](const Expression& e) { return inventory(e).num_variables; })
      .def_property_readonly("adjoint_variables",
                             [](const Expression& e) {
                               std::vector<int> out;
                               const VariableInventory inv = inventory(e);
                               for (int i = 1; i <= inv.num_variables; ++i)
                                 if (inv.adjoint_used(i)) out.push_back(i);
                               return out;
                             })
      .def("__str__", [](const Expression& e) { return pretty_print(e); })
      .def("__repr__",
           [](const Expression& e) { return "Expression(\"" + pretty_print(e) + "\")"; })
      .def("__eq__", [](const Expression& a, const Expression& b) { return a == b; },
           py::is_operator())
      .def("ast", [](const Expression& e) { return json_to_py(io::expression_ast_to_json(e)); },
           "nested dict mirroring the syntax tree");

  m.def("parse", &parse, py::arg("text"),
        "parse the expression grammar (x1, x2', ^-1, +, -, *, complex literals)");

  m.def(
      "evaluate",
      [](const Expression& e, const std::vector<ComplexMatrix>& matrices, double tol,
         Eigen::Index dim) { return evaluate_or_raise(e, tuple_from_list(matrices, dim), tol); },
      py::arg("expression"), py::arg("matrices"), py::arg("tol") = kDefaultInvertTol,
      py::arg("dim") = 0, "evaluate on a tuple (matrix i is variable x<i+1>)");

  m.def(
      "in_domain",
      [](const Expression& e, const std::vector<ComplexMatrix>& matrices, double tol,
         Eigen::Index dim) {
        const DomainCheck check = in_domain(e, tuple_from_list(matrices, dim), tol);
        py::list diags;
        for (const InverseDiagnostic& d : check.inverses) {
          py::dict entry;
          entry["inverse"] = pretty_print(d.node);
          entry["reached"] = d.reached;
          entry["invertible"] = d.invertible;
          entry["sigma_min"] = d.sigma_min;
          entry["sigma_max"] = d.sigma_max;
          diags.append(entry);
        }
        return py::make_tuple(check.in_domain, diags);
      },
      py::arg("expression"), py::arg("matrices"), py::arg("tol") = kDefaultInvertTol,
      py::arg("dim") = 0, "(bool, per-inverse sigma margins)");

  m.def(
      "inverse_norm_via_gap",
      [](const Expression& e, const std::vector<ComplexMatrix>& matrices, double tol,
         Eigen::Index dim) {
        auto out = inverse_norm_via_gap(e, tuple_from_list(matrices, dim), tol);
        if (auto* err = std::get_if<DomainError>(&out)) throw DomainException(*err);
        return std::get<double>(out);
      },
      py::arg("expression"), py::arg("matrices"), py::arg("tol") = kDefaultInvertTol,
      py::arg("dim") = 0, "||r(t)^-1|| through the two-operator-norm spectral gap identity");

  m.def("operator_norm", &operator_norm, py::arg("matrix"));
  m.def("normalized_trace", &normalized_trace, py::arg("matrix"));
  m.def("smallest_spectral_point_psd", &smallest_spectral_point_psd, py::arg("matrix"));

  m.def(
      "invert",
      [](const ComplexMatrix& a, double tol) {
        InvertOutcome out = invert(a, tol);
        if (auto* err = std::get_if<SingularError>(&out)) throw SingularMatrixException(*err);
        auto& res = std::get<InversionResult>(out);
        return py::make_tuple(std::move(res.inverse), res.smallest_singular_value,
                              res.reciprocal_condition);
      },
      py::arg("matrix"), py::arg("tol") = kDefaultInvertTol,
      "(inverse, sigma_min, reciprocal condition); raises SingularMatrixError");

  m.def(
      "schur_block_inverse",
      [](const ComplexMatrix& A, const ComplexMatrix& B, const ComplexMatrix& C,
         const ComplexMatrix& D, double tol) {
        SchurOutcome out = schur_block_inverse(A, B, C, D, tol);
        if (auto* err = std::get_if<SingularError>(&out)) throw SingularMatrixException(*err);
        return std::get<ComplexMatrix>(out);
      },
      py::arg("A"), py::arg("B"), py::arg("C"), py::arg("D"), py::arg("tol") = kDefaultInvertTol,
      "inverse of [[A,B],[C,D]] via the Schur-complement factorization");

  py::class_<Realization>(m, "Realization")
      .def_property_readonly("dim", [](const Realization& r) { return r.dim; })
      .def_property_readonly("expression",
                             [](const Realization& r) { return pretty_print(r.source); })
      .def("to_json", [](const Realization& r) { return io::realization_to_json(r).dump(2); })
      .def("as_dict", [](const Realization& r) { return json_to_py(io::realization_to_json(r)); })
      .def(
          "evaluate",
          [](const Realization& r, const std::vector<ComplexMatrix>& matrices, double tol,
             Eigen::Index dim) {
            auto out = evaluate_realization(r, tuple_from_list(matrices, dim), tol);
            if (auto* err = std::get_if<DomainError>(&out)) throw DomainException(*err);
            return std::get<ComplexMatrix>(out);
          },
          py::arg("matrices"), py::arg("tol") = kDefaultInvertTol, py::arg("dim") = 0)
      .def(
          "verify",
          [](const Realization& r, int trials, Eigen::Index dim, std::uint64_t seed, double tol) {
            const VerificationReport rep = verify_realization(r.source, r, trials, dim, seed, tol);
            py::dict out;
            out["trials"] = rep.trials;
            out["both_defined"] = rep.both_defined;
            out["eval_only"] = rep.eval_only;
            out["realization_only"] = rep.realization_only;
            out["max_rel_error"] = rep.max_rel_error;
            return out;
          },
          py::arg("trials") = 20, py::arg("dim") = 5, py::arg("seed") = kDefaultSeed,
          py::arg("tol") = kDefaultInvertTol)
      .def("__repr__", [](const Realization& r) {
        return "Realization(dim=" + std::to_string(r.dim) + ", expression=\"" +
               pretty_print(r.source) + "\")";
      });

  m.def("realize", &realize, py::arg("expression"),
        "build the u A^-1 v realization by structural recursion");

  m.def(
      "sample",
      [](const std::string& kind, Eigen::Index dim, std::uint64_t seed, std::uint64_t index,
         std::uint64_t trial, Complex param) {
        const auto k = kind_from_name(kind);
        if (!k) throw std::invalid_argument("unknown ensemble kind: " + kind);
        return sample(EnsembleSpec{*k, dim, seed, param}, index, trial);
      },
      py::arg("kind"), py::arg("dim"), py::arg("seed") = kDefaultSeed, py::arg("index") = 1,
      py::arg("trial") = 0, py::arg("param") = Complex{0.0, 0.0},
      "draw from gue | ginibre | haar | shifted_gue | diag_const");

  m.def(
      "test_identity",
      [](const Expression& e1, const Expression& e2, Eigen::Index max_size, int trials_per_size,
         double tol, std::uint64_t seed) {
        return json_to_py(
            io::verdict_to_json(test_identity(e1, e2, max_size, trials_per_size, tol, seed)));
      },
      py::arg("e1"), py::arg("e2"), py::arg("max_size") = kIdTestDefaultMaxSize,
      py::arg("trials_per_size") = kIdTestDefaultTrials, py::arg("tol") = kIdTestDefaultTol,
      py::arg("seed") = kDefaultSeed, "randomized rational-identity verdict as a dict");

  m.def(
      "zero_test",
      [](const Expression& e, Eigen::Index max_size, int trials_per_size, double tol,
         std::uint64_t seed) {
        return json_to_py(io::verdict_to_json(zero_test(e, max_size, trials_per_size, tol, seed)));
      },
      py::arg("e"), py::arg("max_size") = kIdTestDefaultMaxSize,
      py::arg("trials_per_size") = kIdTestDefaultTrials, py::arg("tol") = kIdTestDefaultTol,
      py::arg("seed") = kDefaultSeed);

  m.def("stieltjes_semicircle", &stieltjes_semicircle, py::arg("z"),
        "G(z) = (z - sqrt(z^2 - 4))/2 on the G ~ 1/z branch");

  m.def(
      "run_convergence",
      [](const py::object& config) {
        return json_to_py(io::report_to_json(run_convergence(config_from_py(config))));
      },
      py::arg("config"), "config dict/JSON -> trace & norm convergence report dict");

  m.def(
      "eventual_domain_curve",
      [](const py::object& config) {
        const ConvergenceConfig cfg = config_from_py(config);
        return json_to_py(io::domain_curve_to_json(cfg, eventual_domain_curve(cfg)));
      },
      py::arg("config"));

  m.def(
      "run_outlier_experiment",
      [](const py::object& config, const std::string& rule) {
        OutlierRule r;
        if (rule == "one")
          r.kind = OutlierRule::Kind::ConstantOne;
        else if (rule == "reciprocal")
          r.kind = OutlierRule::Kind::ReciprocalNPlusOne;
        else
          throw std::invalid_argument("rule must be \"reciprocal\" or \"one\"");
        return json_to_py(
            io::outlier_report_to_json(run_outlier_experiment(config_from_py(config), r)));
      },
      py::arg("config"), py::arg("rule") = "reciprocal");

  m.def("fixture_catalog", [] {
    py::list out;
    for (const LabFixture& f : fixture_catalog()) {
      py::dict entry;
      entry["name"] = f.name;
      entry["expression"] = f.expression;
      py::list ensembles;
      for (const VariableEnsemble& e : f.ensembles) {
        py::dict je;
        je["kind"] = std::string(kind_name(e.kind));
        je["param"] = e.param;
        ensembles.append(je);
      }
      entry["ensembles"] = ensembles;
      entry["trace_oracle"] = f.trace_oracle ? py::cast(*f.trace_oracle) : py::object(py::none());
      entry["norm_oracle"] = f.norm_oracle ? py::cast(*f.norm_oracle) : py::object(py::none());
      entry["trace_tol"] = f.trace_tol;
      entry["norm_tol"] = f.norm_tol;
      out.append(entry);
    }
    return out;
  });

  m.def("realization_fixtures", [] { return realization_fixture_expressions(); });

  m.attr("DEFAULT_SEED") = kDefaultSeed;
  m.attr("DEFAULT_TOL") = kDefaultInvertTol;
}
