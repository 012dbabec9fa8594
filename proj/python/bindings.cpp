#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "concat/bigseq.hpp"
#include "concat/contfrac.hpp"
#include "concat/prover.hpp"
#include "concat/realexpr.hpp"
#include "concat/search.hpp"

namespace py = pybind11;
using namespace concat;

namespace {

py::int_ to_py(const BigNat& v) { return py::int_(py::module_::import("builtins").attr("int")(to_decimal(v))); }

BigNat from_py(const py::int_& v) { return parse_bignat(py::str(static_cast<py::handle>(v)).cast<std::string>()); }

py::dict record_dict(const SolutionRecord& r) {
  py::dict d;
  d["equation"] = static_cast<int>(r.equation);
  d["n"] = r.n;
  d["m"] = r.m;
  d["k"] = r.k;
  d["d"] = r.d;
  d["value"] = to_py(r.value);
  d["degenerate"] = r.degenerate;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Certified replay of the Fibonacci/Lucas concatenation proofs";
  m.attr("__version__") = CONCAT_VERSION;

  m.def("fib", [](SeqIndex n) { return to_py(fib(n)); }, py::arg("n"));
  m.def("lucas", [](SeqIndex n) { return to_py(lucas(n)); }, py::arg("n"));
  m.def("pisano_period", &pisano_period, py::arg("modulus"));
  m.def("is_fibonacci", [](const py::int_& v) { return is_fibonacci(from_py(v)); }, py::arg("value"));

  m.def(
      "eval_interval",
      [](const std::string& expr, long bits) {
        const Interval iv = eval(parse_expr(expr), bits);
        return py::make_tuple(iv.lower_decimal(), iv.upper_decimal());
      },
      py::arg("expr"), py::arg("bits") = 128);

  m.def(
      "continued_fraction",
      [](const std::string& expr, std::size_t terms) {
        const ContinuedFraction cf = expand(parse_expr(expr), terms);
        py::list out;
        for (std::size_t i = 1; i <= cf.size(); ++i) out.append(to_py(cf.a(i)));
        return out;
      },
      py::arg("expr"), py::arg("terms") = 20);

  m.def(
      "search",
      [](int eq, SeqIndex m_max, SeqIndex k_max) {
        if (eq != 1 && eq != 2) throw py::value_error("eq must be 1 or 2");
        std::vector<SolutionRecord> recs;
        {
          py::gil_scoped_release nogil;
          recs = search_range(static_cast<Equation>(eq), m_max, k_max);
        }
        py::list out;
        for (const auto& r : recs) out.append(record_dict(r));
        return out;
      },
      py::arg("eq"), py::arg("m_max"), py::arg("k_max"));

  m.def(
      "certify_json",
      [](int theorem, long precision_cap, unsigned threads) {
        if (theorem != 1 && theorem != 2) throw py::value_error("theorem must be 1 or 2");
        CertifyOptions opts;
        opts.precision_cap = precision_cap;
        opts.threads = threads;
        py::gil_scoped_release nogil;
        return certify(theorem, opts).to_json().dump();
      },
      py::arg("theorem"), py::arg("precision_cap") = kDefaultPrecisionCap, py::arg("threads") = 0);

  m.def(
      "check_json",
      [](const std::string& text, long precision_cap) {
        CheckReport rep;
        {
          py::gil_scoped_release nogil;
          rep = check_certificate(Json::parse(text), precision_cap);
        }
        py::dict d;
        d["ok"] = rep.ok;
        d["failures"] = rep.failures;
        py::list values;
        for (const auto& v : rep.conclusion) values.append(to_py(v));
        d["conclusion"] = values;
        return d;
      },
      py::arg("certificate"), py::arg("precision_cap") = kDefaultPrecisionCap);

  py::register_exception<StepFailed>(m, "StepFailed", PyExc_RuntimeError);
}
