#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "qjorg/dynamics.hpp"
#include "qjorg/io.hpp"
#include "qjorg/moebius.hpp"

namespace py = pybind11;
using namespace qjorg;

namespace {

template <class T>
std::string repr(const T& value) {
    std::ostringstream os;
    os << value;
    return os.str();
}

// The point at infinity travels as None.
std::optional<Quaternion> from_ext(const ExtQuaternion& p) {
    if (p.is_infinite()) {
        return std::nullopt;
    }
    return p.value();
}

ExtQuaternion to_ext(const std::optional<Quaternion>& q) { return q ? ExtQuaternion(*q) : ExtQuaternion::infinity(); }

TestOptions options(double tol, double shape_tol) {
    TestOptions o;
    o.tol = tol;
    o.shape_tol = shape_tol;
    return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Quaternionic Moebius transformations and Jorgensen-type discreteness tests";

    py::class_<Quaternion>(m, "Quaternion")
        .def(py::init<>())
        .def(py::init<double>(), py::arg("w"))
        .def(py::init<double, double, double, double>(), py::arg("w"), py::arg("x"), py::arg("y"), py::arg("z"))
        .def(py::init([](const std::array<double, 4>& c) { return Quaternion{c[0], c[1], c[2], c[3]}; }))
        .def_readwrite("w", &Quaternion::w)
        .def_readwrite("x", &Quaternion::x)
        .def_readwrite("y", &Quaternion::y)
        .def_readwrite("z", &Quaternion::z)
        .def_static("i", &Quaternion::i)
        .def_static("j", &Quaternion::j)
        .def_static("k", &Quaternion::k)
        .def(py::self + py::self)
        .def(py::self - py::self)
        .def(py::self * py::self)
        .def(float() * py::self)
        .def(py::self * float())
        .def(py::self / float())
        .def(-py::self)
        .def(py::self == py::self)
        .def("__abs__", [](const Quaternion& q) { return norm(q); })
        .def("conj", [](const Quaternion& q) { return conj(q); })
        .def("inverse", [](const Quaternion& q) { return inverse(q); })
        .def("re", [](const Quaternion& q) { return re(q); })
        .def("im", [](const Quaternion& q) { return im(q); })
        .def("arg", [](const Quaternion& q) { return arg(q); })
        .def("to_list", [](const Quaternion& q) { return std::array<double, 4>{q.w, q.x, q.y, q.z}; })
        .def("__repr__", [](const Quaternion& q) { return "Quaternion" + repr(q); });
    py::implicitly_convertible<py::float_, Quaternion>();
    py::implicitly_convertible<py::int_, Quaternion>();
    py::implicitly_convertible<py::list, Quaternion>();
    py::implicitly_convertible<py::tuple, Quaternion>();

    m.def("similar", &similar, py::arg("p"), py::arg("q"), py::arg("tol") = kDefaultTol);
    m.def("complex_representative", &complex_representative);

    py::class_<MatH2>(m, "MatH2")
        .def(py::init<>())
        .def(py::init<Quaternion, Quaternion, Quaternion, Quaternion>(), py::arg("a"), py::arg("b"), py::arg("c"),
             py::arg("d"))
        .def_readwrite("a", &MatH2::a)
        .def_readwrite("b", &MatH2::b)
        .def_readwrite("c", &MatH2::c)
        .def_readwrite("d", &MatH2::d)
        .def_static("identity", &MatH2::identity)
        .def_static("diagonal", &MatH2::diagonal, py::arg("lam"), py::arg("mu"))
        .def(py::self * py::self)
        .def(float() * py::self)
        .def(py::self - py::self)
        .def(py::self == py::self)
        .def("__repr__", [](const MatH2& x) { return "MatH2" + repr(x); });

    py::class_<ForemanInvariants>(m, "ForemanInvariants")
        .def_readonly("beta", &ForemanInvariants::beta)
        .def_readonly("gamma", &ForemanInvariants::gamma)
        .def_readonly("delta", &ForemanInvariants::delta);
    py::class_<ParkerShort>(m, "ParkerShort")
        .def_readonly("sigma", &ParkerShort::sigma)
        .def_readonly("tau", &ParkerShort::tau);
    py::class_<InvariantSet>(m, "InvariantSet")
        .def_readonly("alpha", &InvariantSet::alpha)
        .def_readonly("beta", &InvariantSet::beta)
        .def_readonly("gamma", &InvariantSet::gamma)
        .def_readonly("delta", &InvariantSet::delta)
        .def_readonly("sigma", &InvariantSet::sigma)
        .def_readonly("tau", &InvariantSet::tau);
    py::class_<KellerhalsFactors>(m, "KellerhalsFactors")
        .def_readonly("l", &KellerhalsFactors::l)
        .def_readonly("r", &KellerhalsFactors::r);

    m.def("alpha", &alpha);
    m.def("det", &det);
    m.def("in_sigma", &in_sigma, py::arg("m"), py::arg("tol") = kDefaultTol);
    m.def("inverse", py::overload_cast<const MatH2&>(&inverse));
    m.def("inverse_rform", &inverse_rform);
    m.def("kellerhals_factors", &kellerhals_factors);
    m.def("foreman_invariants", &foreman_invariants);
    m.def("parker_short", &parker_short);
    m.def("invariants", &invariants);
    m.def("normalize_to_sigma", &normalize_to_sigma);
    m.def("commutator", &commutator);

    m.def("apply", [](const MatH2& x, const std::optional<Quaternion>& z) { return from_ext(apply(x, to_ext(z))); },
          py::arg("m"), py::arg("z").none(true), "Moebius action; None stands for the point at infinity.");
    m.def("classify", [](const MatH2& x, double tol) { return std::string(to_string(classify_normal_form(x, tol))); },
          py::arg("m"), py::arg("tol") = kDefaultTol);
    m.def(
        "fixed_points",
        [](const MatH2& x, double tol) -> py::object {
            const FixedPoints fp = fixed_points_normal_form(x, tol);
            if (fp.all_points) {
                return py::str("all");
            }
            py::list out;
            for (const auto& p : fp.points) {
                out.append(py::cast(from_ext(p)));
            }
            return out;
        },
        py::arg("m"), py::arg("tol") = kDefaultTol);
    m.def("solve_sylvester", &solve_sylvester, py::arg("l"), py::arg("m"), py::arg("rhs"),
          py::arg("tol") = kDefaultTol);

    py::class_<TestReport>(m, "TestReport")
        .def_readonly("test_name", &TestReport::test_name)
        .def_readonly("lhs", &TestReport::lhs)
        .def_readonly("threshold", &TestReport::threshold)
        .def_readonly("margin", &TestReport::margin)
        .def_readonly("tol", &TestReport::tol)
        .def_property_readonly("verdict", [](const TestReport& r) { return std::string(to_string(r.verdict)); })
        .def_readonly("preconditions_met", &TestReport::preconditions_met)
        .def_readonly("diagnostics", &TestReport::diagnostics)
        .def_readonly("notes", &TestReport::notes)
        .def("to_json", [](const TestReport& r) { return nlohmann::json(r).dump(); })
        .def("__repr__", [](const TestReport& r) {
            return "<TestReport " + r.test_name + " " + std::string(to_string(r.verdict)) + ">";
        });

    m.def("k_value", &k_value);
    m.def("kellerhals_form", &kellerhals_form, py::arg("lam"), py::arg("mu"), py::arg("tol") = kDefaultTol);
    m.def("beta_T", &beta_T);
    m.def("s_value", &s_value);

    using PairTest = TestReport (*)(const MatH2&, const MatH2&, const TestOptions&);
    const std::pair<const char*, PairTest> pair_tests[] = {
        {"jss_test", &jss_test},         {"jss2_test", &jss2_test},
        {"jssc2_test", &jssc2_test},     {"hyperbolic_commutator_test", &hyperbolic_commutator_test},
        {"jg_test", &jg_test},           {"rez_test", &rez_test},
        {"eta_normalized_test", &eta_normalized_test}, {"waterman_test", &waterman_test},
        {"extremality_criteria", &extremality_criteria},
    };
    for (const auto& [name, fn] : pair_tests) {
        m.def(
            name, [fn](const MatH2& s, const MatH2& t, double tol, double shape_tol) {
                return fn(s, t, options(tol, shape_tol));
            },
            py::arg("s"), py::arg("t"), py::arg("tol") = 1e-7, py::arg("shape_tol") = kDefaultTol);
    }
    m.def(
        "jlt_test",
        [](const MatH2& s, const MatH2& t, const std::string& pivot, double tol, double shape_tol) {
            if (pivot != "b" && pivot != "c") {
                throw py::value_error("pivot must be 'b' or 'c'");
            }
            return jlt_test(s, t, options(tol, shape_tol), pivot == "b" ? JltPivot::B : JltPivot::C);
        },
        py::arg("s"), py::arg("t"), py::arg("pivot") = "b", py::arg("tol") = 1e-7,
        py::arg("shape_tol") = kDefaultTol);
    m.def(
        "non_extreme_tau_test",
        [](const MatH2& s, const MatH2& t, const std::string& side, double tol, double shape_tol) {
            if (side != "upper" && side != "lower") {
                throw py::value_error("side must be 'upper' or 'lower'");
            }
            return non_extreme_tau_test(s, t, side == "upper" ? TriangularSide::Upper : TriangularSide::Lower,
                                        options(tol, shape_tol));
        },
        py::arg("s"), py::arg("t"), py::arg("side") = "upper", py::arg("tol") = 1e-7,
        py::arg("shape_tol") = kDefaultTol);

    py::enum_<IterationMode>(m, "IterationMode")
        .value("Diagonal", IterationMode::Diagonal)
        .value("Upper", IterationMode::Upper)
        .value("Lower", IterationMode::Lower);

    py::class_<IterationStep>(m, "IterationStep")
        .def_readonly("n", &IterationStep::n)
        .def_readonly("s", &IterationStep::s)
        .def_readonly("bc_norm", &IterationStep::bc_norm)
        .def_readonly("det", &IterationStep::det)
        .def_readonly("has_displacements", &IterationStep::has_displacements)
        .def_readonly("tau", &IterationStep::tau)
        .def_readonly("t", &IterationStep::t)
        .def_readonly("tau_c", &IterationStep::tau_c)
        .def_readonly("t_c", &IterationStep::t_c)
        .def_readonly("extremal_lhs", &IterationStep::extremal_lhs);

    py::class_<IterationTrace>(m, "IterationTrace")
        .def_readonly("mode", &IterationTrace::mode)
        .def_readonly("t_matrix", &IterationTrace::t_matrix)
        .def_readonly("steps", &IterationTrace::steps)
        .def_readonly("truncated", &IterationTrace::truncated)
        .def_readonly("truncation_reason", &IterationTrace::truncation_reason)
        .def("__len__", [](const IterationTrace& tr) { return tr.steps.size(); })
        .def("to_json", [](const IterationTrace& tr) { return trace_to_json(tr).dump(); })
        .def("to_csv", [](const IterationTrace& tr, bool full) {
            std::ostringstream os;
            write_trace_csv(os, tr, full);
            return os.str();
        }, py::arg("full") = false);

    py::class_<RecurrenceCheck>(m, "RecurrenceCheck")
        .def_readonly("passed", &RecurrenceCheck::passed)
        .def_readonly("max_deviation", &RecurrenceCheck::max_deviation)
        .def_readonly("steps_checked", &RecurrenceCheck::steps_checked);

    py::class_<ConvergenceResult>(m, "ConvergenceResult")
        .def_property_readonly("verdict", [](const ConvergenceResult& c) { return std::string(to_string(c.verdict)); })
        .def_readonly("rate", &ConvergenceResult::rate)
        .def_readonly("extremal_variation", &ConvergenceResult::extremal_variation);

    m.def("mode_for", &mode_for, py::arg("t"), py::arg("tol") = kDefaultTol);
    m.def(
        "iterate",
        [](const MatH2& s, const MatH2& t, int n_steps, std::optional<IterationMode> mode) {
            return iterate(s, t, n_steps, mode.value_or(mode_for(t)));
        },
        py::arg("s"), py::arg("t"), py::arg("n_steps"), py::arg("mode") = py::none());
    m.def("verify_recurrence", &verify_recurrence, py::arg("trace"), py::arg("tol") = 1e-7);
    m.def(
        "classify_convergence", [](const IterationTrace& tr) { return classify_convergence(tr); }, py::arg("trace"));
    m.def(
        "extremal_invariance_check",
        [](const MatH2& s, const MatH2& t, int n_steps, std::optional<IterationMode> mode) {
            return extremal_invariance_check(s, t, n_steps, mode.value_or(mode_for(t)));
        },
        py::arg("s"), py::arg("t"), py::arg("n_steps"), py::arg("mode") = py::none());

    m.def("parse_pair", [](const std::string& text) {
        const MatrixPair p = parse_pair(parse_json(text));
        return std::make_pair(p.s, p.t);
    });
    m.def("pair_to_json", [](const MatH2& s, const MatH2& t) { return pair_to_json({s, t}).dump(); });

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
}
