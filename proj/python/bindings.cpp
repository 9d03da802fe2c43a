#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "simplab/bench.hpp"
#include "simplab/determinant.hpp"
#include "simplab/errors.hpp"
#include "simplab/expr.hpp"
#include "simplab/int_matrix.hpp"
#include "simplab/permanent.hpp"
#include "simplab/recurrence.hpp"
#include "simplab/rewrite.hpp"

namespace py = pybind11;
using namespace simplab;

namespace {

// Big integers cross the boundary as decimal text.
Integer to_integer(const py::handle& value) {
    if (!py::isinstance<py::int_>(value)) throw py::type_error("expected an int");
    return Integer(py::str(value).cast<std::string>());
}

py::int_ to_py(const Integer& value) {
    return py::reinterpret_steal<py::int_>(PyLong_FromString(value.get_str().c_str(), nullptr, 10));
}

CostModel weights_of(const std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>& w) {
    CostModel m{std::get<0>(w), std::get<1>(w), std::get<2>(w)};
    m.validate();
    return m;
}

SaturationBudget budget_of(const std::tuple<std::size_t, std::size_t, std::size_t>& b) {
    SaturationBudget s{std::get<0>(b), std::get<1>(b), std::get<2>(b)};
    s.validate();
    return s;
}

IntMatrix matrix_of(const py::sequence& rows) {
    std::vector<std::vector<Integer>> out;
    for (const auto& row : rows) {
        auto& r = out.emplace_back();
        for (const auto& v : row.cast<py::sequence>()) r.push_back(to_integer(v));
    }
    return IntMatrix::from_rows(out);
}

py::dict report_dict(const EvalReport& r) {
    py::dict d;
    d["value"] = to_py(r.value);
    d["op_count"] = r.op_count;
    d["calls"] = r.calls;
    return d;
}

using Weights = std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>;
using Budget = std::tuple<std::size_t, std::size_t, std::size_t>;
const Weights kUnit{1, 1, 0};
const Budget kBudget{30, 50'000, 20'000};

}  // namespace

PYBIND11_MODULE(_simplab, m) {
    m.doc() = "Cost-based expression simplification and exact permanents/determinants";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<GuardError>(m, "GuardError", PyExc_ValueError);
    py::register_exception<UnboundVariableError>(m, "UnboundVariableError", PyExc_KeyError);
    py::register_exception<ConsistencyError>(m, "ConsistencyError", PyExc_RuntimeError);

    m.attr("EQUIVALENCE_PRIME") = kEquivalencePrime;

    m.def("render", [](const std::string& text) { return render(parse(text)); }, py::arg("expr"),
          "Canonical fully parenthesized form.");
    m.def("cost", [](const std::string& text, const Weights& w) { return cost(parse(text), weights_of(w)); },
          py::arg("expr"), py::arg("weights") = kUnit);
    m.def("dag_cost", [](const std::string& text, const Weights& w) { return dag_cost(parse(text), weights_of(w)); },
          py::arg("expr"), py::arg("weights") = kUnit);
    m.def(
        "evaluate",
        [](const std::string& text, const py::dict& values, const py::object& modulus) {
            std::map<std::string, Integer> bound;
            for (const auto& [k, v] : values) bound[k.cast<std::string>()] = to_integer(v);
            std::optional<Integer> mod;
            if (!modulus.is_none()) mod = to_integer(modulus);
            return to_py(evaluate(parse(text), Assignment(bound, mod)));
        },
        py::arg("expr"), py::arg("values") = py::dict(), py::arg("modulus") = py::none());
    m.def(
        "probably_equivalent",
        [](const std::string& a, const std::string& b, unsigned trials, std::uint64_t seed) {
            return probably_equivalent(parse(a), parse(b), trials, seed).equivalent;
        },
        py::arg("a"), py::arg("b"), py::arg("trials") = 16, py::arg("seed") = 0);

    m.def(
        "simplify",
        [](const std::string& text, const Weights& w, const Budget& b, std::uint64_t seed) {
            SaturationOptions options;
            options.seed = seed;
            const SimplifyResult r = simplify(parse(text), default_rules(), weights_of(w), budget_of(b), options);
            py::dict d;
            d["best"] = render(r.best);
            d["original_cost"] = r.original_cost;
            d["best_cost"] = r.best_cost;
            d["dag_cost"] = r.best_dag_cost;
            d["saturated"] = r.saturated;
            d["stop"] = std::string(stop_reason_name(r.stop));
            d["iterations"] = r.iterations_used;
            d["nodes"] = r.nodes_used;
            d["classes"] = r.classes_used;
            return d;
        },
        py::arg("expr"), py::arg("weights") = kUnit, py::arg("budget") = kBudget, py::arg("seed") = 0);
    m.def(
        "certify_locally_minimal",
        [](const std::string& text, const Weights& w, const Budget& b) {
            const auto c = certify_locally_minimal(parse(text), default_rules(), weights_of(w), budget_of(b));
            py::dict d;
            d["minimal"] = c.minimal;
            d["saturated"] = c.saturated;
            d["cost"] = c.cost;
            d["witness"] = c.witness ? py::object(py::str(render(*c.witness))) : py::object(py::none());
            d["witness_cost"] = c.witness_cost ? py::object(py::int_(*c.witness_cost)) : py::object(py::none());
            return d;
        },
        py::arg("expr"), py::arg("weights") = kUnit, py::arg("budget") = kBudget);
    m.def("default_rules", [] { return render_rules(default_rules()); }, "Built-in rules in rule-file format.");

    m.def(
        "permanent",
        [](const py::sequence& rows, const std::string& algorithm, std::size_t row) {
            const IntMatrix a = matrix_of(rows);
            if (algorithm == "naive") return to_py(perm_naive(a));
            if (algorithm == "expand") return to_py(perm_expand(a, row));
            if (algorithm == "subset-dp" || algorithm == "subset_dp") return to_py(perm_subset_dp(a));
            if (algorithm == "ryser") return to_py(perm_ryser(a));
            throw py::value_error("unknown permanent algorithm '" + algorithm + "'");
        },
        py::arg("rows"), py::arg("algorithm") = "ryser", py::arg("row") = 1);
    m.def(
        "determinant",
        [](const py::sequence& rows, const std::string& algorithm, std::size_t row) {
            const IntMatrix a = matrix_of(rows);
            if (algorithm == "cofactor") return to_py(det_cofactor(a, row));
            if (algorithm == "elimination") return to_py(det_elimination(a));
            throw py::value_error("unknown determinant algorithm '" + algorithm + "'");
        },
        py::arg("rows"), py::arg("algorithm") = "elimination", py::arg("row") = 1);
    m.def(
        "bench",
        [](const std::string& algorithm, const std::vector<std::size_t>& sizes, std::size_t reps,
           std::uint64_t seed) {
            const auto alg = parse_algorithm(algorithm);
            if (!alg) throw py::value_error("unknown algorithm '" + algorithm + "'");
            py::list out;
            for (const auto& r : bench(*alg, sizes, reps, seed)) {
                py::dict d;
                d["algorithm"] = r.algorithm;
                d["n"] = r.n;
                d["rep"] = r.rep;
                d["wall_seconds"] = r.wall_seconds;
                d["digest"] = r.digest;
                out.append(d);
            }
            return out;
        },
        py::arg("algorithm"), py::arg("sizes"), py::arg("reps") = 3, py::arg("seed") = 1);

    m.def(
        "fib",
        [](std::int64_t n, const std::string& method) {
            if (n < 0) throw py::value_error("n must be non-negative");
            if (method == "doubling") return to_py(fib_fast_doubling(static_cast<std::uint64_t>(n)));
            if (method == "binet") {
                if (n < 1 || n > kBinetMaxN) throw GuardError("fib binet", kBinetMaxN, static_cast<std::size_t>(n));
                return to_py(fib_binet_rounded(static_cast<int>(n)));
            }
            if (n == 0) return to_py(0);
            if (method == "naive") return to_py(eval_naive(fibonacci_recurrence(), n).value);
            if (method == "memo") return to_py(eval_memo(fibonacci_recurrence(), n).value);
            throw py::value_error("unknown method '" + method + "'");
        },
        py::arg("n"), py::arg("method") = "doubling");
    m.def(
        "eval_recurrence",
        [](const std::string& text, std::int64_t n, const std::string& method, const Weights& w) {
            const Recurrence r = parse_recurrence(text);
            if (method == "naive") return report_dict(eval_naive(r, n, weights_of(w)));
            if (method == "memo") return report_dict(eval_memo(r, n, weights_of(w)));
            throw py::value_error("unknown method '" + method + "'");
        },
        py::arg("recurrence"), py::arg("n"), py::arg("method") = "memo", py::arg("weights") = kUnit);
}
