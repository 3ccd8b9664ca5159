#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hplus/charfactor.hpp"
#include "hplus/errors.hpp"
#include "hplus/pipeline.hpp"

namespace py = pybind11;
using namespace hplus;

namespace {

py::object to_int(const mpz_class& v) { return py::module_::import("builtins").attr("int")(v.get_str()); }

py::object to_fraction(const mpq_class& v) {
    return py::module_::import("fractions").attr("Fraction")(to_int(v.get_num()), to_int(v.get_den()));
}

IntPoly from_ints(const py::list& coeffs) {
    IntPoly f;
    for (const auto& c : coeffs) f.emplace_back(py::str(c).cast<std::string>());
    return f;
}

py::dict factored_dict(const Factored& f) {
    py::dict d;
    d["sign"] = f.sign;
    d["primes"] = f.primes;
    d["cofactor"] = to_fraction(f.cofactor);
    d["odd_small"] = f.odd_small_text();
    return d;
}

RingShape shape_of(u64 p, u64 q, u64 l, unsigned k, u64 d1, u64 d2) { return RingShape::make(p, q, l, k, d1, d2); }

GroebnerBasis ideal_from_text(const RingShape& s, const std::vector<std::string>& gens) {
    std::vector<GroupRingElement> g;
    for (const auto& t : gens) g.push_back(GroupRingElement::parse(s, t));
    return GroebnerBasis::compute(s, g);
}

}  // namespace

PYBIND11_MODULE(hplus, m) {
    m.doc() = "l-parts of the class number h+ of real cyclotomic fields of conductor pq";

    static py::exception<Error> base(m, "Error");
    py::register_exception_translator([](std::exception_ptr e) {
        try {
            if (e) std::rethrow_exception(e);
        } catch (const Error& err) {
            base(err.what());
        }
    });

    m.def("is_prime", &is_prime);
    m.def("all_primitive_roots", &all_primitive_roots);
    m.def("character_product", [](u64 p, u64 q, u64 g) { return to_int(character_product(p, q, g)); });
    m.def("index_factor", [](u64 p, u64 q, u64 g, u64 h) {
        const IndexFactor f = index_factor(p, q, g, h);
        py::dict d;
        d["value"] = to_fraction(f.value);
        d["group_order"] = f.group_order;
        d["factored"] = factored_dict(f.factored());
        return d;
    });
    m.def(
        "gcd_over_pairs",
        [](u64 p, u64 q, u64 bound) {
            const GcdReport r = gcd_over_pairs(p, q, bound);
            py::dict d;
            d["gcd"] = to_fraction(r.gcd);
            d["gcd_odd_small"] = r.gcd_odd_small();
            d["best_pair"] = r.best_pair;
            py::dict pairs;
            for (const auto& [pair, fac] : r.per_pair) pairs[py::cast(pair)] = factored_dict(fac);
            d["per_pair"] = pairs;
            return d;
        },
        py::arg("p"), py::arg("q"), py::arg("bound") = 10000);

    m.def("factor_x_pow_minus_one", &factor_x_pow_minus_one, py::arg("m"), py::arg("l"));
    m.def("degree_grid", [](u64 p, u64 q, u64 l) {
        std::vector<std::pair<u64, u64>> out;
        for (const auto& c : degree_grid(p, q, l)) out.emplace_back(c.d1, c.d2);
        return out;
    });

    m.def(
        "frobenius_polynomial",
        [](u64 p, u64 q, u64 g, u64 h, u64 r, u64 l, unsigned k, u64 d1, u64 d2) {
            u64 M = 1;
            for (unsigned i = 0; i < k; ++i) M *= l;
            const auto eta = EtaSetup::make(p, q, g, h);
            const auto full = frobenius_full(make_witness(p, q, M, r), eta);
            return frobenius_restricted(full, shape_of(p, q, l, k, d1, d2)).poly.to_text();
        },
        py::arg("p"), py::arg("q"), py::arg("g"), py::arg("h"), py::arg("r"), py::arg("l"), py::arg("k"),
        py::arg("d1"), py::arg("d2"));
    m.def(
        "ideal_equal",
        [](u64 p, u64 q, u64 l, unsigned k, u64 d1, u64 d2, const std::vector<std::string>& a,
           const std::vector<std::string>& b) {
            const auto s = shape_of(p, q, l, k, d1, d2);
            return ideal_equal(ideal_from_text(s, a), ideal_from_text(s, b));
        },
        py::arg("p"), py::arg("q"), py::arg("l"), py::arg("k"), py::arg("d1"), py::arg("d2"), py::arg("a"),
        py::arg("b"));
    m.def(
        "quotient_exponent",
        [](u64 p, u64 q, u64 l, unsigned k, u64 d1, u64 d2, const std::vector<std::string>& gens) {
            return ideal_from_text(shape_of(p, q, l, k, d1, d2), gens).quotient_exponent();
        },
        py::arg("p"), py::arg("q"), py::arg("l"), py::arg("k"), py::arg("d1"), py::arg("d2"), py::arg("gens"));
    m.def(
        "verify_power", [](const py::list& P, const py::list& Q, u64 M) { return verify_power(from_ints(P), from_ints(Q), M); },
        py::arg("P"), py::arg("Q"), py::arg("M"));

    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def(py::init([](u64 p, u64 q, u64 l_bound) {
                 RunConfig c;
                 c.p = p;
                 c.q = q;
                 c.l_bound = l_bound;
                 return c;
             }),
             py::arg("p"), py::arg("q"), py::arg("l_bound") = 10000)
        .def_static("from_text", py::overload_cast<const std::string&>(&RunConfig::from_text))
        .def("validate", &RunConfig::validate)
        .def_readwrite("p", &RunConfig::p)
        .def_readwrite("q", &RunConfig::q)
        .def_readwrite("l_bound", &RunConfig::l_bound)
        .def_readwrite("only_l", &RunConfig::only_l)
        .def_readwrite("m_cap", &RunConfig::m_cap)
        .def_readwrite("prime_budget", &RunConfig::prime_budget)
        .def_readwrite("stabilization_window", &RunConfig::stabilization_window)
        .def_readwrite("r_start", &RunConfig::r_start)
        .def_readwrite("r_cap", &RunConfig::r_cap)
        .def_readwrite("precision_cap", &RunConfig::precision_cap)
        .def_readwrite("min_digits", &RunConfig::min_digits)
        .def_readwrite("threads", &RunConfig::threads)
        .def_readwrite("cache_path", &RunConfig::cache_path)
        .def_readwrite("format", &RunConfig::format);

    py::class_<PhiPair>(m, "PhiPair")
        .def_property_readonly("text", &PhiPair::text)
        .def_readonly("exponent", &PhiPair::exponent);

    py::class_<CellReport>(m, "CellReport")
        .def_property_readonly("cell", [](const CellReport& c) { return std::make_pair(c.cell.d1, c.cell.d2); })
        .def_property_readonly("shape", [](const CellReport& c) { return std::make_pair(c.D1, c.D2); })
        .def_readonly("history", &CellReport::history)
        .def_readonly("stable_M", &CellReport::stable_M)
        .def_readonly("pairs", &CellReport::pairs)
        .def_readonly("owned_exponent", &CellReport::owned_exponent)
        .def_readonly("ideal", &CellReport::ideal);

    py::class_<LReport>(m, "LReport")
        .def_readonly("l", &LReport::l)
        .def_property_readonly("status", [](const LReport& r) { return to_string(r.status); })
        .def_readonly("pair", &LReport::pair)
        .def_readonly("flagged_step1", &LReport::flagged_step1)
        .def_readonly("rescreened", &LReport::rescreened)
        .def_readonly("survived_rescreen", &LReport::survived_rescreen)
        .def_readonly("cells", &LReport::cells)
        .def_readonly("B_exponent", &LReport::B_exponent)
        .def_readonly("P_exponent", &LReport::P_exponent)
        .def_readonly("gcd_exponent", &LReport::gcd_exponent)
        .def_readonly("h_plus_exponent", &LReport::h_plus_exponent)
        .def_readonly("certificate", &LReport::certificate)
        .def_readonly("note", &LReport::note);

    py::class_<Report>(m, "Report")
        .def_readonly("p", &Report::p)
        .def_readonly("q", &Report::q)
        .def_readonly("gcd", &Report::gcd_text)
        .def_readonly("gcd_odd", &Report::gcd_odd)
        .def_readonly("best_pair", &Report::best_pair)
        .def_readonly("l_reports", &Report::l_reports)
        .def("all_resolved", &Report::all_resolved)
        .def_property_readonly("h_plus", &Report::h_plus_text)
        .def_property_readonly("l_column", &Report::l_column)
        .def_property_readonly("degree_column", &Report::degree_column)
        .def("to_json", &Report::to_json)
        .def("to_csv", &Report::to_csv)
        .def("to_table", &Report::to_table);

    m.def("run", &run, py::arg("config"), py::call_guard<py::gil_scoped_release>());
}
