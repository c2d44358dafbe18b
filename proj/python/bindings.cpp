#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "relcausal/citest.hpp"
#include "relcausal/dataset.hpp"
#include "relcausal/errors.hpp"
#include "relcausal/graph.hpp"
#include "relcausal/interpret.hpp"
#include "relcausal/relevance.hpp"
#include "relcausal/scm.hpp"

namespace py = pybind11;
namespace rc = relcausal;

namespace {

std::vector<rc::Variable> to_variables(
    const std::vector<std::pair<std::string, std::string>>& items) {
    std::vector<rc::Variable> out;
    for (const auto& [name, role] : items) out.emplace_back(name, rc::role_from_name(role));
    return out;
}

std::vector<rc::StructuralConstraint> to_constraints(
    const std::vector<std::string>& randomized_roots,
    const std::vector<std::string>& no_outgoing_to_features, bool sufficiency,
    int max_hidden) {
    std::vector<rc::StructuralConstraint> out;
    for (const auto& v : randomized_roots) {
        out.push_back(rc::StructuralConstraint::randomized_root(v));
    }
    for (const auto& v : no_outgoing_to_features) {
        out.push_back(rc::StructuralConstraint::no_outgoing_to_features(v));
    }
    if (sufficiency) out.push_back(rc::StructuralConstraint::causal_sufficiency());
    if (max_hidden > 0) out.push_back(rc::StructuralConstraint::max_hidden(max_hidden));
    return out;
}

rc::CiStatement to_statement(const std::string& a, const std::string& b,
                             const std::vector<std::string>& given, bool independent) {
    return {a, b, given,
            independent ? rc::CiVerdict::Independent : rc::CiVerdict::Dependent};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "causal interpretation of encoding/decoding feature relevance";

    py::register_exception<rc::InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<rc::CapacityError>(m, "CapacityError", PyExc_RuntimeError);
    py::register_exception<rc::DegenerateDataError>(m, "DegenerateDataError",
                                                    PyExc_RuntimeError);
    py::register_exception<rc::FaithfulnessError>(m, "FaithfulnessError", PyExc_RuntimeError);

    py::class_<rc::Dag>(m, "Dag")
        .def(py::init([](const std::vector<std::pair<std::string, std::string>>& variables,
                         const std::vector<std::pair<std::string, std::string>>& edges,
                         bool randomized_stimulus) {
                 return rc::Dag(to_variables(variables), edges, randomized_stimulus);
             }),
             py::arg("variables"), py::arg("edges"), py::arg("randomized_stimulus") = true)
        .def("variables",
             [](const rc::Dag& d) {
                 std::vector<std::pair<std::string, std::string>> out;
                 for (const auto& [name, role] : d.variables()) {
                     out.emplace_back(name, rc::role_name(role));
                 }
                 return out;
             })
        .def("edges", &rc::Dag::edges)
        .def("observed", &rc::Dag::observed_names)
        .def("has_edge",
             py::overload_cast<const std::string&, const std::string&>(
                 &rc::Dag::has_edge, py::const_),
             py::arg("parent"), py::arg("child"))
        .def("has_directed_path",
             py::overload_cast<const std::string&, const std::string&>(
                 &rc::Dag::has_directed_path, py::const_),
             py::arg("source"), py::arg("target"))
        .def("serialize", [](const rc::Dag& d) { return rc::serialize_dag(d); })
        .def("__repr__", [](const rc::Dag& d) {
            return "<Dag " + std::to_string(d.size()) + " variables, " +
                   std::to_string(d.edge_count()) + " edges>";
        });

    m.def("parse_dag", &rc::parse_dag, py::arg("text"));

    m.def(
        "d_separated",
        [](const rc::Dag& dag, const std::string& a, const std::string& b,
           const std::vector<std::string>& given) { return rc::d_separated(dag, a, b, given); },
        py::arg("dag"), py::arg("a"), py::arg("b"),
        py::arg("given") = std::vector<std::string>{});

    m.def(
        "implied_ci_statements",
        [](const rc::Dag& dag) {
            std::vector<std::tuple<std::string, std::string, std::vector<std::string>, bool>>
                out;
            for (const auto& st : rc::implied_ci_statements(dag)) {
                out.emplace_back(st.lhs, st.rhs, st.given, st.independent());
            }
            return out;
        },
        py::arg("dag"), "List of (lhs, rhs, given, independent) over all observed pairs");

    m.def(
        "enumerate_dags",
        [](const std::vector<std::pair<std::string, std::string>>& variables,
           const std::vector<std::string>& randomized_roots,
           const std::vector<std::string>& no_outgoing_to_features) {
            return rc::enumerate_dags(
                to_variables(variables),
                to_constraints(randomized_roots, no_outgoing_to_features, false, 0));
        },
        py::arg("variables"), py::arg("randomized_roots") = std::vector<std::string>{},
        py::arg("no_outgoing_to_features") = std::vector<std::string>{});

    m.def(
        "count_dags",
        [](const std::vector<std::pair<std::string, std::string>>& variables) {
            return rc::count_dags(to_variables(variables));
        },
        py::arg("variables"));

    m.def(
        "consistent_structures",
        [](const std::vector<std::pair<std::string, std::string>>& variables,
           const std::vector<std::tuple<std::string, std::string, std::vector<std::string>,
                                        bool>>& statements,
           const std::vector<std::string>& randomized_roots,
           const std::vector<std::string>& no_outgoing_to_features, bool sufficiency,
           int max_hidden) {
            std::vector<rc::CiStatement> stmts;
            for (const auto& [a, b, given, independent] : statements) {
                stmts.push_back(to_statement(a, b, given, independent));
            }
            return rc::consistent_structures(
                to_variables(variables), stmts,
                to_constraints(randomized_roots, no_outgoing_to_features, sufficiency,
                               sufficiency ? 0 : max_hidden));
        },
        py::arg("variables"), py::arg("statements"),
        py::arg("randomized_roots") = std::vector<std::string>{},
        py::arg("no_outgoing_to_features") = std::vector<std::string>{},
        py::arg("sufficiency") = true, py::arg("max_hidden") = 0);

    m.def("shared_edges", &rc::shared_edges, py::arg("dags"));

    py::class_<rc::Dataset>(m, "Dataset")
        .def("n_rows", &rc::Dataset::n_rows)
        .def("column_names", &rc::Dataset::column_names)
        .def("feature_names", &rc::Dataset::feature_names)
        .def("condition_name",
             [](const rc::Dataset& d) -> py::object {
                 if (auto c = d.condition_name()) return py::cast(*c);
                 return py::none();
             })
        .def("column_values",
             [](const rc::Dataset& d, const std::string& name) {
                 return d.column(name).values;
             })
        .def("to_csv", &rc::Dataset::to_csv)
        .def("save_csv", &rc::Dataset::save_csv, py::arg("path"))
        .def_static("load_csv", &rc::Dataset::load_csv, py::arg("path"))
        .def_static("from_csv_text", &rc::Dataset::from_csv_text, py::arg("text"));

    m.def("binarize", &rc::binarize, py::arg("data"),
          py::arg("columns") = std::vector<std::string>{}, py::arg("threshold") = 0.0);

    py::class_<rc::Scm>(m, "Scm")
        .def("dag", &rc::Scm::dag)
        .def("experiment_kind",
             [](const rc::Scm& s) { return rc::experiment_kind_name(s.experiment_kind()); })
        .def("condition_name", &rc::Scm::condition_name)
        .def("serialize", [](const rc::Scm& s) { return rc::serialize_scm(s); });

    m.def("canonical_fixture", &rc::canonical_fixture, py::arg("name"));
    m.def("canonical_fixture_names", &rc::canonical_fixture_names);
    m.def("parse_scm", &rc::parse_scm, py::arg("text"));
    m.def("load_scm", &rc::load_scm, py::arg("path"));

    m.def("sample", &rc::sample, py::arg("scm"), py::arg("n"), py::arg("seed"));

    py::class_<rc::CiProvider, std::shared_ptr<rc::CiProvider>>(m, "CiProvider")
        .def(
            "independent",
            [](const rc::CiProvider& p, const std::string& a, const std::string& b,
               const std::vector<std::string>& given) {
                return p.verdict(a, b, given) == rc::CiVerdict::Independent;
            },
            py::arg("a"), py::arg("b"), py::arg("given") = std::vector<std::string>{})
        .def("observed", &rc::CiProvider::observed);

    m.def(
        "oracle",
        [](const rc::Scm& scm) -> std::shared_ptr<rc::CiProvider> { return rc::oracle(scm); },
        py::arg("scm"));
    m.def(
        "graph_oracle",
        [](const rc::Dag& dag) -> std::shared_ptr<rc::CiProvider> {
            return std::make_shared<rc::OracleCiProvider>(dag);
        },
        py::arg("dag"));
    m.def(
        "ci_provider",
        [](const rc::Dataset& data, double alpha, int bonferroni_divisor)
            -> std::shared_ptr<rc::CiProvider> {
            return rc::ci_provider(data, alpha, bonferroni_divisor);
        },
        py::arg("data"), py::arg("alpha") = 0.01, py::arg("bonferroni_divisor") = 1);

    m.def(
        "partial_correlation",
        [](const rc::Dataset& data, const std::string& a, const std::string& b,
           const std::vector<std::string>& given) {
            const rc::TestResult r = rc::partial_correlation(data, a, b, given);
            return std::make_pair(r.statistic, r.p_value);
        },
        py::arg("data"), py::arg("a"), py::arg("b"),
        py::arg("given") = std::vector<std::string>{});
    m.def(
        "conditional_g_test",
        [](const rc::Dataset& data, const std::string& a, const std::string& b,
           const std::vector<std::string>& given) {
            const rc::TestResult r = rc::conditional_g_test(data, a, b, given);
            return std::make_pair(r.statistic, r.p_value);
        },
        py::arg("data"), py::arg("a"), py::arg("b"),
        py::arg("given") = std::vector<std::string>{});

    m.def("encoding_relevant_set",
          [](const rc::CiProvider& ci, const std::string& condition,
             const std::vector<std::string>& features) {
              return rc::encoding_relevant_set(ci, condition, features);
          },
          py::arg("ci"), py::arg("condition"), py::arg("features"));
    m.def("decoding_relevant_set",
          [](const rc::CiProvider& ci, const std::string& condition,
             const std::vector<std::string>& features) {
              return rc::decoding_relevant_set(ci, condition, features);
          },
          py::arg("ci"), py::arg("condition"), py::arg("features"));

    m.def(
        "rfe_decoding_set",
        [](const rc::Dataset& data, const std::string& condition, double ridge_lambda,
           int folds, int permutations, double level) {
            rc::RfeParams params{ridge_lambda, folds, permutations, level};
            return rc::rfe_decoding_set(data, condition, params).relevant;
        },
        py::arg("data"), py::arg("condition"), py::arg("ridge_lambda") = 1.0,
        py::arg("folds") = 5, py::arg("permutations") = 200, py::arg("level") = 0.05);

    m.def(
        "analyze",
        [](const rc::CiProvider& ci, const std::string& kind, const std::string& condition,
           const std::vector<std::string>& features, bool sufficiency, int max_hidden,
           bool want_combine) {
            rc::Assumptions assumptions;
            assumptions.sufficiency = sufficiency;
            assumptions.max_hidden = max_hidden;
            return rc::analyze(ci, rc::experiment_kind_from_name(kind), condition, features,
                               assumptions, want_combine)
                .to_json();
        },
        py::arg("ci"), py::arg("kind"), py::arg("condition"), py::arg("features"),
        py::arg("sufficiency") = true, py::arg("max_hidden") = 1,
        py::arg("want_combine") = true,
        "Run the full pipeline and return the JSON report as a string");

    m.def(
        "calibrate",
        [](const std::string& test, int trials, double alpha, std::uint64_t seed,
           int conditioning) {
            const rc::CalibrationResult r =
                rc::calibrate_test(test, trials, alpha, seed, conditioning);
            py::dict out;
            out["trials"] = r.trials;
            out["rejections"] = r.rejections;
            out["rate"] = r.rate;
            out["ci_low"] = r.ci_low;
            out["ci_high"] = r.ci_high;
            out["within_band"] = r.within_band;
            return out;
        },
        py::arg("test"), py::arg("trials") = 2000, py::arg("alpha") = 0.01,
        py::arg("seed") = 1, py::arg("conditioning") = 0);

#ifdef VERSION_INFO
#define RELCAUSAL_STR(x) #x
#define RELCAUSAL_XSTR(x) RELCAUSAL_STR(x)
    m.attr("__version__") = RELCAUSAL_XSTR(VERSION_INFO);
#else
    m.attr("__version__") = "dev";
#endif
}
