#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "persistra/checks.hpp"
#include "persistra/cli.hpp"
#include "persistra/diagram_io.hpp"
#include "persistra/metrics.hpp"

namespace py = pybind11;
using namespace persistra;

namespace {

// Python-facing interval record: (birth, birth_dec, death, death_dec, mult)
// with values as exact rational strings and "-inf"/"+inf".
using PyInterval = std::tuple<std::string, std::string, std::string, std::string, long long>;

DecoratedValue value_from(const std::string& v, const std::string& dec) {
    Dec d;
    if (dec == "-")
        d = Dec::minus;
    else if (dec == "+")
        d = Dec::plus;
    else
        throw std::invalid_argument("decoration must be '-' or '+'");
    return DecoratedValue(parse_xreal(v), d);
}

Barcode barcode_from(const std::vector<PyInterval>& intervals, unsigned field) {
    Barcode b((FieldSpec(field)));
    for (const auto& [bv, bd, dv, dd, mult] : intervals)
        b.intervals.add(Interval(value_from(bv, bd), value_from(dv, dd)), mult);
    return b;
}

std::vector<PyInterval> intervals_of(const Barcode& b) {
    std::vector<PyInterval> out;
    for (auto& [iv, mult] : b.intervals)
        out.push_back({to_string(iv.birth.value), std::string(1, dec_char(iv.birth.dec)),
                       to_string(iv.death.value), std::string(1, dec_char(iv.death.dec)), mult});
    return out;
}

Rect rect_from(const std::string& a, const std::string& b, const std::string& c,
               const std::string& d) {
    return Rect(parse_xreal(a), parse_xreal(b), parse_xreal(c), parse_xreal(d));
}

std::map<int, Rational> values_from(const std::map<int, std::string>& vals) {
    std::map<int, Rational> out;
    for (auto& [k, v] : vals) out[k] = parse_rational(v);
    return out;
}

}  // namespace

PYBIND11_MODULE(_persistra, m) {
    m.doc() = "persistence diagrams as rectangle measures, with exact rational arithmetic";
    m.attr("__version__") = "0.1.0";

    py::class_<Barcode>(m, "Barcode")
        .def(py::init([](const std::vector<PyInterval>& intervals, unsigned field) {
                 return barcode_from(intervals, field);
             }),
             py::arg("intervals") = std::vector<PyInterval>{}, py::arg("field") = 2)
        .def("intervals", &intervals_of)
        .def("cardinality", [](const Barcode& b) { return b.intervals.cardinality(); })
        .def("__eq__", [](const Barcode& a, const Barcode& b) { return a == b; })
        .def("__len__", [](const Barcode& b) { return b.intervals.cardinality(); })
        .def("__repr__", [](const Barcode& b) {
            std::ostringstream os;
            os << "Barcode(" << b.intervals.cardinality() << " bars over GF(" << b.field.p
               << "))";
            return os.str();
        });

    m.def("sublevel_persistence",
          [](const std::string& filtration_text, std::size_t degree, unsigned field) {
              return sublevel_persistence(parse_filtration(filtration_text), degree,
                                          FieldSpec(field));
          },
          py::arg("filtration_text"), py::arg("degree"), py::arg("field") = 2,
          "barcode of the sublevelset filtration given in the text format");

    m.def("lower_star_persistence",
          [](const std::vector<std::vector<int>>& complex,
             const std::map<int, std::string>& values, std::size_t degree, unsigned field) {
              return sublevel_persistence(lower_star(values_from(values), complex), degree,
                                          FieldSpec(field));
          },
          py::arg("complex"), py::arg("vertex_values"), py::arg("degree"), py::arg("field") = 2);

    m.def("extended_persistence",
          [](const std::vector<std::vector<int>>& complex,
             const std::map<int, std::string>& values, std::size_t degree, unsigned field) {
              auto ep = extended_persistence(complex, values_from(values), degree,
                                             FieldSpec(field));
              return py::make_tuple(ep.ord, ep.rel, ep.ext,
                                    to_string(Rational(2 * ep.critical.back() + 1)));
          },
          py::arg("complex"), py::arg("vertex_values"), py::arg("degree"), py::arg("field") = 2,
          "returns (ord, rel, ext, mirror_origin); backwards stages sit at mirror_origin - t");

    m.def("bottleneck",
          [](const Barcode& a, const Barcode& b) {
              return to_string(bottleneck(undecorate(diagram_of_barcode(a)),
                                          undecorate(diagram_of_barcode(b))));
          },
          "exact bottleneck distance of the undecorated diagrams, as a rational string");

    m.def("smooth",
          [](const Barcode& b, const std::string& eps) { return smooth(b, parse_rational(eps)); },
          py::arg("barcode"), py::arg("epsilon"));

    m.def("truncate",
          [](const Barcode& b, const std::string& t) { return truncate(b, parse_rational(t)); },
          py::arg("barcode"), py::arg("at"));

    m.def("measure_probe",
          [](const Barcode& b, const std::string& a, const std::string& bb, const std::string& c,
             const std::string& d) {
              return to_string(measure_of_barcode(b)(rect_from(a, bb, c, d)));
          },
          py::arg("barcode"), py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"),
          "count of diagram points in [a,b] x [c,d]; 'inf' when infinite");

    m.def("webb_probe",
          [](const std::string& a, const std::string& b, const std::string& c,
             const std::string& d) { return to_string(webb_measure()(rect_from(a, b, c, d))); },
          py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"),
          "evaluate the Webb measure on a rectangle");

    m.def("extract",
          [](const Barcode& b, const std::string& a, const std::string& bb, const std::string& c,
             const std::string& d, const std::string& resolution) {
              auto got = extract_diagram(measure_of_barcode(b), rect_from(a, bb, c, d),
                                         parse_rational(resolution));
              return barcode_of_diagram(got, b.field);
          },
          py::arg("barcode"), py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"),
          py::arg("resolution") = "1/8",
          "recover the decorated diagram from the barcode's measure oracle");

    m.def("interpolate",
          [](const Barcode& u, const Barcode& v, const std::string& delta_s,
             const std::vector<std::string>& xs_s, const std::string& variant) {
              Rational delta = parse_rational(delta_s);
              InterpolationVariant var;
              if (variant == "image")
                  var = InterpolationVariant::image;
              else if (variant == "kernel")
                  var = InterpolationVariant::kernel;
              else if (variant == "cokernel")
                  var = InterpolationVariant::cokernel;
              else
                  throw std::invalid_argument("variant must be image|kernel|cokernel");
              std::vector<Rational> xs;
              for (auto& x : xs_s) xs.push_back(parse_rational(x));
              auto [phi, psi] = matched_interleaving(u, v, delta);
              auto fam = interpolate(u, v, phi, psi, delta, xs, var);
              std::vector<std::pair<std::string, Barcode>> out;
              for (auto& [x, bc] : fam.samples) out.push_back({to_string(x), bc});
              return out;
          },
          py::arg("u"), py::arg("v"), py::arg("delta"), py::arg("xs"),
          py::arg("variant") = "image");

    m.def("parse_diagram",
          [](const std::string& text, unsigned field) {
              std::istringstream is(text);
              return barcode_of_diagram(read_decorated_diagram(is), FieldSpec(field));
          },
          py::arg("text"), py::arg("field") = 2);

    m.def("diagram_text", [](const Barcode& b) {
        std::ostringstream os;
        write_diagram(os, diagram_of_barcode(b));
        return os.str();
    });

    m.def("check",
          [](const std::string& suite, std::uint64_t seed, int cases) {
              CheckOptions opt;
              opt.seed = seed;
              opt.cases = cases;
              std::vector<std::tuple<std::string, bool, std::string>> out;
              for (auto& r : run_checks(suite, opt)) out.push_back({r.name, r.passed, r.detail});
              return out;
          },
          py::arg("suite") = "all", py::arg("seed") = 0, py::arg("cases") = 200);

    m.def("cli", [](const std::vector<std::string>& args) { return cli::run(args); },
          "run the command line surface in-process; returns the exit status");

    py::register_exception<parse_error>(m, "ParseError", PyExc_ValueError);
    py::register_exception<contract_error>(m, "ContractError", PyExc_RuntimeError);
}
