#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qplocal/btree.hpp"
#include "qplocal/classify.hpp"
#include "qplocal/density.hpp"
#include "qplocal/eislocal.hpp"
#include "qplocal/lengths.hpp"
#include "qplocal/verify.hpp"

namespace py = pybind11;
using namespace qpl;

namespace {

PrimeContext ctx_of(long p, long delta) { return PrimeContext::make(p, delta); }

NamedForm space_of(const std::string& s) {
    if (s == "splus") return NamedForm::SPlus;
    if (s == "h4") return NamedForm::H4;
    if (s == "slattice") return NamedForm::SLattice;
    if (s == "sminus") return NamedForm::SMinus;
    if (s == "saniso") return NamedForm::SAniso;
    throw std::invalid_argument("unknown space name " + s);
}

std::vector<std::pair<long, std::string>> diag_out(const DiagonalForm& T) {
    std::vector<std::pair<long, std::string>> out;
    for (const DiagTerm& d : T.d) out.emplace_back(d.a, d.delta ? "D" : "1");
    return out;
}

}  // namespace

PYBIND11_MODULE(_qplocal, m) {
    m.doc() =
        "Exact local invariants of ternary quadratic forms at an odd prime: "
        "representation densities, intersection lengths, lattice tube counts, "
        "cycle classification, and local Whittaker factors.";

    m.def(
        "chi",
        [](long p, const std::string& u, long delta) {
            return chi(ctx_of(p, delta), parse_rat(u));
        },
        py::arg("p"), py::arg("u"), py::arg("delta") = 0,
        "quadratic residue character of a unit, +-1");

    m.def(
        "hilbert",
        [](const std::string& a, const std::string& b, const std::string& place) {
            Place v = place == "infinity" ? Place::infinite() : Place::finite(std::stol(place));
            return hilbert_symbol(parse_rat(a), parse_rat(b), v);
        },
        py::arg("a"), py::arg("b"), py::arg("place"), "Hilbert symbol (a, b) at a place");

    m.def(
        "diagonalize",
        [](long p, const std::string& form, long delta) {
            PrimeContext ctx = ctx_of(p, delta);
            return diag_out(parse_form(ctx, form));
        },
        py::arg("p"), py::arg("form"), py::arg("delta") = 0,
        "normal form as a list of (exponent, unit-class) pairs");

    m.def(
        "represents",
        [](long p, const std::string& form, const std::string& space, long delta) {
            PrimeContext ctx = ctx_of(p, delta);
            Space s = space == "minus" ? Space::VMinus : Space::VPlus;
            return represents_locally(ctx, parse_form(ctx, form), s);
        },
        py::arg("p"), py::arg("form"), py::arg("space") = "plus", py::arg("delta") = 0,
        "does the chosen quaternary space represent the rank-3 target");

    m.def(
        "density",
        [](long p, const std::string& space, const std::string& form, long delta) {
            PrimeContext ctx = ctx_of(p, delta);
            DiagonalForm T = parse_form(ctx, form);
            if (T.rank() == 1) {
                DensityPolynomial cf = closed_form_unary(ctx, space_of(space), T.d[0].delta);
                return py::make_tuple(rat_str(cf.at_one()), rat_str(cf.derivative_at_one()),
                                      true);
            }
            ReducedDensity rd = reduce(ctx, space_of(space), T);
            return py::make_tuple(rat_str(rd.value.at_one()),
                                  rat_str(rd.value.derivative_at_one()),
                                  bool(rd.represented));
        },
        py::arg("p"), py::arg("space"), py::arg("form"), py::arg("delta") = 0,
        "(value at X=1, derivative at X=1, represented) for the closed-form density");

    m.def(
        "density_brute",
        [](long p, const std::string& space, const std::string& form, int t, long delta) {
            PrimeContext ctx = ctx_of(p, delta);
            DiagonalForm T = parse_form(ctx, form);
            CountResult r = density_bruteforce(
                ctx, SymForm::diagonal(named_entries(ctx, space_of(space))), T.to_sym(ctx), t,
                false);
            return rat_str(r.density);
        },
        py::arg("p"), py::arg("space"), py::arg("form"), py::arg("t") = 2, py::arg("delta") = 0,
        "counting-oracle density at precision t");

    m.def(
        "length",
        [](long p, const std::string& form, long delta) {
            PrimeContext ctx = ctx_of(p, delta);
            LengthResult r = intersection_length(ctx, parse_form(ctx, form));
            return py::make_tuple(rat_str(r.value), r.in_domain, r.case_tag);
        },
        py::arg("p"), py::arg("form"), py::arg("delta") = 0,
        "(e_p, in_domain, case) for a rank-3 target");

    m.def(
        "tube",
        [](long p, const std::string& form, long delta) {
            PrimeContext ctx = ctx_of(p, delta);
            DiagonalForm T = parse_form(ctx, form);
            TripleSpec sp;
            for (const DiagTerm& d : T.d) {
                if (d.a < 1) throw std::invalid_argument("tube targets must be divisible by p");
                sp.r.push_back(d.a - 1);
                sp.delta.push_back(d.delta);
            }
            QuadCtx qc(ctx, suggested_precision(sp));
            auto tr = construct_triple(ctx, qc, sp);
            if (!tr) return py::make_tuple(std::string("0"), std::string("0"), false);
            TubeReport rep = tube_report_bfs(qc, tr->b, sp.r);
            return py::make_tuple(rep.vertices.get_str(), rep.edges.get_str(), true);
        },
        py::arg("p"), py::arg("form"), py::arg("delta") = 0,
        "(vertex count, edge count, represented) of the lattice tube");

    m.def(
        "classify",
        [](long p, const std::string& form, const std::string& local_case, long delta) {
            PrimeContext ctx = ctx_of(p, delta);
            DiagonalForm T = parse_form(ctx, form);
            CycleCase cc = local_case == "split" ? CycleCase::Split : CycleCase::Inert;
            CycleClassification r = classify_cycle(ctx, T.to_sym(ctx), cc);
            std::string locus;
            switch (r.locus) {
                case CycleLocus::Empty: locus = "empty"; break;
                case CycleLocus::IsolatedSuperspecial: locus = "isolated-points"; break;
                case CycleLocus::ContainsComponents: locus = "contains-components"; break;
                case CycleLocus::OrdinaryPossible: locus = "ordinary-possible"; break;
            }
            return py::make_tuple(locus, r.reasons);
        },
        py::arg("p"), py::arg("form"), py::arg("case") = "inert", py::arg("delta") = 0,
        "(locus, reasons) of the special-cycle support");

    m.def(
        "whittaker",
        [](long p, const std::string& form, const std::string& local_case, long delta) {
            PrimeContext ctx = ctx_of(p, delta);
            DiagonalForm T = parse_form(ctx, form);
            WhittakerCase wc =
                local_case == "split" ? WhittakerCase::Split : WhittakerCase::Inert;
            WhittakerValue v = whittaker_value(ctx, T, wc);
            return py::make_tuple(rat_str(v.magnitude), v.gamma_token, v.log_p_power);
        },
        py::arg("p"), py::arg("form"), py::arg("case") = "inert", py::arg("delta") = 0,
        "(magnitude, gamma token, log-p power) of the local Whittaker value");

    m.def(
        "whittaker_derivative",
        [](long p, const std::string& form, const std::string& local_case, long delta) {
            PrimeContext ctx = ctx_of(p, delta);
            DiagonalForm T = parse_form(ctx, form);
            WhittakerCase wc =
                local_case == "split" ? WhittakerCase::Split : WhittakerCase::Inert;
            WhittakerValue v = whittaker_derivative(ctx, T, wc);
            return py::make_tuple(rat_str(v.magnitude), v.gamma_token, v.log_p_power);
        },
        py::arg("p"), py::arg("form"), py::arg("case") = "inert", py::arg("delta") = 0,
        "(magnitude, gamma token, log-p power) of the central derivative");

    m.def(
        "diff",
        [](const std::vector<std::string>& t, const std::vector<std::string>& ambient,
           const std::string& level) {
            std::vector<mpq_class> tv, av;
            for (const auto& s : t) tv.push_back(parse_rat(s));
            for (const auto& s : ambient) av.push_back(parse_rat(s));
            RegularityResult r = is_regular(tv, av, mpz_class(level));
            std::vector<std::string> places;
            for (const Place& v : r.diff) places.push_back(v.str());
            return py::make_tuple(places, r.regular, r.reason);
        },
        py::arg("t"), py::arg("ambient"), py::arg("level") = "1",
        "(failure places, regular flag, reason)");

    m.def(
        "verify",
        [](unsigned long seed, const std::string& suite) {
            std::vector<std::tuple<std::string, std::string, std::string>> out;
            for (const CheckResult& r : run_verify(seed, suite))
                out.emplace_back(r.name, r.status, r.detail);
            return out;
        },
        py::arg("seed") = 1, py::arg("suite") = "all",
        "run the cross-validation suite; list of (name, status, detail)");
}
