#include "verify.hpp"

#include <chrono>
#include <functional>
#include <random>
#include <sstream>

#include "btree.hpp"
#include "classify.hpp"
#include "density.hpp"
#include "eislocal.hpp"
#include "lengths.hpp"

namespace qpl {

namespace {

struct Failure {
    std::string detail;
};

void expect_eq(const mpq_class& lhs, const mpq_class& rhs, const std::string& what) {
    if (lhs != rhs)
        throw Failure{what + ": lhs = " + rat_str(lhs) + ", rhs = " + rat_str(rhs)};
}

void expect(bool cond, const std::string& what) {
    if (!cond) throw Failure{what};
}

DiagonalForm df3(long a1, bool d1, long a2, bool d2, long a3, bool d3) {
    DiagonalForm T;
    T.d = {DiagTerm{a1, d1}, DiagTerm{a2, d2}, DiagTerm{a3, d3}};
    return T;
}

// sorted rank-3 sweep a1 = 0, a2 <= a3, a2 + a3 <= bound, all unit patterns
std::vector<DiagonalForm> unit_lead_sweep(long bound) {
    std::vector<DiagonalForm> out;
    for (long a2 = 0; a2 <= bound; ++a2)
        for (long a3 = a2; a2 + a3 <= bound; ++a3)
            for (int d1 = 0; d1 < 2; ++d1)
                for (int d2 = 0; d2 < 2; ++d2)
                    for (int d3 = 0; d3 < 2; ++d3) {
                        if (a2 == 0 && d2 < d1) continue;
                        if (a2 == a3 && d3 < d2) continue;
                        out.push_back(df3(0, d1, a2, d2, a3, d3));
                    }
    return out;
}

std::string check_unary_densities() {
    int cases = 0;
    for (long p : {3L, 5L}) {
        PrimeContext ctx = PrimeContext::make(p);
        for (NamedForm f : {NamedForm::SPlus, NamedForm::H4}) {
            std::vector<mpq_class> s4 = named_entries(ctx, f);
            std::vector<mpq_class> s6 = s4;
            s6.push_back(1);
            s6.push_back(-1);  // extra hyperbolic plane evaluates X at p^{-1}
            for (int ed = 0; ed < 2; ++ed) {
                DensityPolynomial cf = closed_form_unary(ctx, f, ed);
                SymForm T = SymForm::diagonal({ed ? mpq_class(ctx.delta) : mpq_class(1)});
                CountResult b4 = density_bruteforce(ctx, SymForm::diagonal(s4), T, 3);
                expect(b4.stabilized, "rank-4 unary count did not stabilize");
                expect_eq(b4.density, cf.eval(1), "unary density at X=1");
                CountResult b6 = density_bruteforce(ctx, SymForm::diagonal(s6), T, 3);
                expect(b6.stabilized, "rank-6 unary count did not stabilize");
                expect_eq(b6.density, cf.eval(mpq_class(1, p)), "unary density at X=1/p");
                cases += 2;
            }
        }
    }
    return std::to_string(cases) + " brute-force/closed-form pairs agree";
}

std::string check_ramified_pipeline() {
    int nonzero = 0;
    for (long p : {3L, 5L}) {
        PrimeContext ctx = PrimeContext::make(p);
        mpq_class want = 2 * mpq_class(p * p - 1, p);
        for (const DiagonalForm& T : unit_lead_sweep(3)) {
            if (T.d[1].a < 1) continue;  // pipeline regime: p divides the lower block
            ReducedDensity rd = reduce(ctx, NamedForm::SMinus, T);
            mpq_class expected = represents_locally(ctx, T, Space::VMinus) ? want : 0;
            expect_eq(rd.value.at_one(), expected, "ramified pipeline value for " + T.str());
            if (expected != 0) ++nonzero;
        }
        expect(nonzero >= 4, "fewer than 4 nonzero pipeline instances");
    }
    PrimeContext c3 = PrimeContext::make(3);
    DiagonalForm T = df3(0, false, 1, false, 1, false);
    CountResult br = density_bruteforce(c3, SymForm::diagonal(named_entries(c3, NamedForm::SMinus)),
                                        T.to_sym(c3), 2, false);
    expect_eq(br.density, mpq_class(16, 3), "n=3 brute-force cross-check of the pipeline value");
    return std::to_string(nonzero) + " nonzero instances plus brute-force cross-check";
}

std::string check_derivative(NamedForm f) {
    int cases = 0;
    for (long p : {3L, 5L}) {
        PrimeContext ctx = PrimeContext::make(p);
        mpq_class ip2 = mpq_class(1, p * p);
        for (const DiagonalForm& T : unit_lead_sweep(4)) {
            bool twisted = f == NamedForm::SPlus
                               ? represents_locally(ctx, T, Space::VMinus)
                               : !represents_ternary_in_quaternary(
                                     T.entries(ctx), named_entries(ctx, NamedForm::H4),
                                     Place::finite(p));
            if (!twisted) continue;
            LengthResult len = intersection_length(ctx, T);
            expect(len.in_domain, "length out of domain for " + T.str());
            mpq_class factor = f == NamedForm::SPlus ? mpq_class((1 + ip2) * (1 - ip2))
                                                     : mpq_class((1 - ip2) * (1 - ip2));
            mpq_class lhs = reduce(ctx, f, T).value.derivative_at_one();
            expect_eq(lhs, -factor * len.value, "derivative relation for " + T.str());
            ++cases;
        }
    }
    return std::to_string(cases) + " non-represented targets match the length formula";
}

mpz_class tube_count_for(const PrimeContext& ctx, const TripleSpec& sp) {
    QuadCtx qc(ctx, suggested_precision(sp));
    auto tr = construct_triple(ctx, qc, sp);
    if (!tr) return 0;
    return tube_count_bfs(qc, tr->b, sp.r);
}

std::string check_tube_calibration() {
    PrimeContext ctx = PrimeContext::make(3);
    mpz_class c0 = tube_count_for(ctx, TripleSpec{{0, 0, 0}, {false, false, false}});
    expect(c0 == 1, "unit-radius tube count is " + c0.get_str() + ", want 1");
    mpz_class c1 = tube_count_for(ctx, TripleSpec{{1, 1, 2}, {false, true, true}});
    expect_eq(mpq_class(c1), mpq_class(closed_count_odd_r1(ctx, 1)), "odd leading exponent 1");
    mpz_class c3 = tube_count_for(ctx, TripleSpec{{3, 3, 4}, {false, true, false}});
    expect_eq(mpq_class(c3), mpq_class(closed_count_odd_r1(ctx, 3)), "odd leading exponent 3");
    return "counts 1, " + c1.get_str() + ", " + c3.get_str() + " match the closed formulas";
}

std::string check_case1_counts() {
    PrimeContext ctx = PrimeContext::make(3);
    const std::vector<std::vector<long>> rs = {{0, 0, 0}, {0, 0, 2}, {2, 2, 2}, {0, 2, 4}};
    std::string seen;
    for (const auto& r : rs) {
        // case-(1) units at p=3: chi(-e1 e2) = -1, chi(-e1 e3) = +1
        TripleSpec sp{r, {false, false, true}};
        mpz_class bfs = tube_count_for(ctx, sp);
        mpz_class closed = closed_count_case1(ctx, r[0], r[1], r[2]);
        expect_eq(mpq_class(bfs), mpq_class(closed),
                  "case-1 count for exponents " + std::to_string(r[0]) + "," +
                      std::to_string(r[1]) + "," + std::to_string(r[2]));
        seen += (seen.empty() ? "" : ", ") + bfs.get_str();
    }
    return "enumerated counts " + seen + " match the closed sums";
}

std::string check_density_limit() {
    PrimeContext ctx = PrimeContext::make(3);
    SymForm SL = SymForm::diagonal(named_entries(ctx, NamedForm::SLattice));
    mpq_class fac = 1 - mpq_class(1, 81);
    int cases = 0;
    for (int d1 = 0; d1 < 2; ++d1)
        for (int d2 = 0; d2 < 2; ++d2)
            for (int d3 = 0; d3 < 2; ++d3)
                for (long r2 = 0; r2 < 2; ++r2)
                    for (long r3 = r2; r3 < 2; ++r3) {
                        if (r2 == 0 && d2 < d1) continue;
                        if (r2 == r3 && d3 < d2) continue;
                        TripleSpec sp{{0, r2, r3}, {(bool)d1, (bool)d2, (bool)d3}};
                        mpz_class cnt = tube_count_for(ctx, sp);
                        CountResult br =
                            density_bruteforce(ctx, SL, sp.target().to_sym(ctx), 2, false);
                        expect_eq(fac * cnt, br.density,
                                  "tube/density limit for " + sp.target().str());
                        ++cases;
                    }
    expect(cases >= 5, "fewer than 5 targets exercised");
    return std::to_string(cases) + " targets: count times (1 - p^-4) equals the density";
}

std::string check_irreducibility() {
    PrimeContext ctx = PrimeContext::make(3);
    int cases = 0;
    for (long a1 = 1; a1 <= 3; ++a1)
        for (long a2 = a1; a2 <= 3; ++a2)
            for (long a3 = a2; a3 <= 3; ++a3)
                for (int d1 = 0; d1 < 2; ++d1)
                    for (int d2 = 0; d2 < 2; ++d2)
                        for (int d3 = 0; d3 < 2; ++d3) {
                            if (a1 == a2 && d2 < d1) continue;
                            if (a2 == a3 && d3 < d2) continue;
                            TripleSpec sp{{a1 - 1, a2 - 1, a3 - 1},
                                          {(bool)d1, (bool)d2, (bool)d3}};
                            if (!represents_locally(ctx, sp.target(), Space::VPlus)) continue;
                            mpz_class cnt = tube_count_for(ctx, sp);
                            bool irr = hz_irreducible(ctx, df3(a1, d1, a2, d2, a3, d3));
                            expect(irr == (cnt == 1),
                                   "irreducibility mismatch at exponents " + std::to_string(a1) +
                                       "," + std::to_string(a2) + "," + std::to_string(a3) +
                                       " count " + cnt.get_str());
                            ++cases;
                        }
    return std::to_string(cases) + " representable targets: predicate matches count = 1";
}

std::string check_property_suites(unsigned long seed) {
    std::mt19937_64 rng(seed);
    auto rnd = [&](long lo, long hi) {
        return std::uniform_int_distribution<long>(lo, hi)(rng);
    };
    // Hilbert symbol product formula over all candidate places
    for (int i = 0; i < 200; ++i) {
        mpq_class a(rnd(-60, 60), rnd(1, 60));
        mpq_class b(rnd(-60, 60), rnd(1, 60));
        a.canonicalize();
        b.canonicalize();
        if (a == 0 || b == 0) {
            --i;
            continue;
        }
        int prod = 1;
        for (const Place& v : candidate_places(a, b)) prod *= hilbert_symbol(a, b, v);
        expect(prod == 1,
               "Hilbert product formula fails for a=" + rat_str(a) + " b=" + rat_str(b));
    }
    // invariance of the diagonalization invariants under unimodular congruence
    PrimeContext ctx = PrimeContext::make(3);
    for (int i = 0; i < 50; ++i) {
        SymForm T(3);
        for (int r = 0; r < 3; ++r)
            T.at(r, r) = (rnd(0, 1) ? mpq_class(ctx.delta) : mpq_class(1)) *
                         pow_q(ctx.p, rnd(0, 3));
        std::vector<std::vector<long>> U(3, std::vector<long>(3));
        while (true) {
            for (auto& row : U)
                for (long& e : row) e = rnd(0, 26);
            long det = U[0][0] * (U[1][1] * U[2][2] - U[1][2] * U[2][1]) -
                       U[0][1] * (U[1][0] * U[2][2] - U[1][2] * U[2][0]) +
                       U[0][2] * (U[1][0] * U[2][1] - U[1][1] * U[2][0]);
            if (det % 3 != 0) break;
        }
        SymForm T2(3);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                mpq_class acc = 0;
                for (int k = 0; k < 3; ++k)
                    for (int l = 0; l < 3; ++l) acc += U[k][r] * T.at(k, l) * U[l][c];
                T2.at(r, c) = acc;
            }
        LocalInvariants i1 = local_invariants(ctx, diagonalize(ctx, T));
        LocalInvariants i2 = local_invariants(ctx, diagonalize(ctx, T2));
        expect(i1.rank == i2.rank && i1.det_ord == i2.det_ord &&
                   i1.det_delta == i2.det_delta && i1.hasse == i2.hasse,
               "diagonalization invariants changed under unimodular congruence");
    }
    // lattice stability vs displacement bound, and fixed-set shape vs search
    std::vector<TripleSpec> specs = {
        TripleSpec{{0, 0, 2}, {false, false, true}},
        TripleSpec{{1, 1, 2}, {false, true, true}},
        TripleSpec{{2, 2, 2}, {false, false, true}},
        TripleSpec{{0, 1, 1}, {false, false, true}},
    };
    int endos = 0;
    for (const TripleSpec& sp : specs) {
        QuadCtx qc(ctx, suggested_precision(sp) + 24);
        auto tr = construct_triple(ctx, qc, sp);
        expect(tr.has_value(), "triple construction failed for " + sp.target().str());
        std::vector<Point> ball = points_in_ball(qc, Point::at(base_vertex()), 6);
        for (const Endo& e : tr->b) {
            long nv = ordp(e.norm, ctx.p);
            bool fixed_vertex = false, fixed_mid = false;
            for (const Point& pt : ball) {
                long disp = ddist(qc, pt, apply_endo(qc, e, pt));
                if (disp == 0) (pt.is_mid() ? fixed_mid : fixed_vertex) = true;
                if (pt.is_mid()) continue;
                bool st = endo_stabilizes(qc, e, pt.v[0]);
                expect(st == (disp / 2 <= nv),
                       "stability/displacement equivalence fails at " + pt.v[0].str());
            }
            FixedPointType ft = classify_fixed_set(ctx, e);
            // the fixed set meets every ball around the midpoint of [x, ex]
            expect((ft == FixedPointType::VertexSubtree) == fixed_vertex,
                   "vertex fixed-point prediction contradicts the ball search");
            expect((ft == FixedPointType::SingleMidpoint) == (fixed_mid && !fixed_vertex),
                   "midpoint fixed-point prediction contradicts the ball search");
            ++endos;
        }
        if (endos >= 12) break;
    }
    expect(endos >= 10, "fewer than 10 endomorphisms exercised");
    return "Hilbert product x200, congruence invariance x50, stability and fixed sets x" +
           std::to_string(endos);
}

std::string check_dichotomy(unsigned long seed) {
    std::mt19937_64 rng(seed + 1);
    auto rnd = [&](long lo, long hi) {
        return std::uniform_int_distribution<long>(lo, hi)(rng);
    };
    PrimeContext ctx = PrimeContext::make(3);
    for (int i = 0; i < 100; ++i) {
        DiagonalForm T = df3(rnd(0, 4), rnd(0, 1), rnd(0, 4), rnd(0, 1), rnd(0, 4), rnd(0, 1));
        std::sort(T.d.begin(), T.d.end());
        bool plus = represents_locally(ctx, T, Space::VPlus);
        bool minus = represents_locally(ctx, T, Space::VMinus);
        expect(plus != minus, "dichotomy fails for " + T.str());
    }
    // density positivity agrees with the representability predicate
    int cases = 0;
    SymForm SP = SymForm::diagonal(named_entries(ctx, NamedForm::SPlus));
    for (long a1 = 0; a1 < 2; ++a1)
        for (long a2 = a1; a2 < 2; ++a2)
            for (long a3 = a2; a3 < 2; ++a3)
                for (int d1 = 0; d1 < 2; ++d1)
                    for (int d2 = 0; d2 < 2; ++d2)
                        for (int d3 = 0; d3 < 2; ++d3) {
                            if (a1 == a2 && d2 < d1) continue;
                            if (a2 == a3 && d3 < d2) continue;
                            DiagonalForm T = df3(a1, d1, a2, d2, a3, d3);
                            CountResult br =
                                density_bruteforce(ctx, SP, T.to_sym(ctx), 2, false);
                            expect((br.density > 0) == represents_locally(ctx, T, Space::VPlus),
                                   "density positivity disagrees for " + T.str());
                            ++cases;
                        }
    return "100 random targets split; positivity matches on " + std::to_string(cases) +
           " small targets";
}

}  // namespace

std::vector<CheckResult> run_verify(unsigned long seed, const std::string& suite) {
    struct Entry {
        const char* name;
        const char* identity;
        std::function<std::string()> fn;
    };
    const std::vector<Entry> entries = {
        {"01-unary-densities",
         "brute-force unary densities equal the closed linear polynomials at X = 1 and X = 1/p",
         [] { return check_unary_densities(); }},
        {"02-ramified-pipeline",
         "reduction pipeline against the p-scaled space gives 2(p^2-1)/p on represented targets",
         [] { return check_ramified_pipeline(); }},
        {"03-derivative-inert",
         "dA/dX at X=1 equals -(1+p^-2)(1-p^-2) e_p on non-represented targets",
         [] { return check_derivative(NamedForm::SPlus); }},
        {"04-derivative-split",
         "dA/dX at X=1 equals -(1-p^-2)^2 e_p against the split family",
         [] { return check_derivative(NamedForm::H4); }},
        {"05-tube-calibration",
         "tube counts 1 and the odd-leading-exponent closed sums",
         [] { return check_tube_calibration(); }},
        {"06-case1-counts", "breadth-first tube counts equal the case-1 closed sums",
         [] { return check_case1_counts(); }},
        {"07-density-limit", "tube count times (1 - p^-4) equals the quaternary density",
         [] { return check_density_limit(); }},
        {"08-irreducibility", "irreducibility predicate is equivalent to tube count 1",
         [] { return check_irreducibility(); }},
        {"09-property-suites",
         "Hilbert product formula, congruence invariance, stability and fixed-set laws",
         [seed] { return check_property_suites(seed); }},
        {"10-dichotomy", "exactly one of the two quaternary spaces represents each target",
         [seed] { return check_dichotomy(seed); }},
    };
    std::vector<CheckResult> out;
    for (const Entry& e : entries) {
        if (suite != "all" && std::string(e.name).rfind(suite, 0) != 0) continue;
        CheckResult r;
        r.name = e.name;
        r.identity = e.identity;
        auto start = std::chrono::steady_clock::now();
        try {
            r.detail = e.fn();
            r.status = "pass";
        } catch (const Failure& f) {
            r.status = "fail";
            r.detail = f.detail;
        } catch (const BudgetError& b) {
            r.status = "skipped-budget";
            r.detail = b.what();
        } catch (const std::exception& ex) {
            r.status = "fail";
            r.detail = std::string("unexpected error: ") + ex.what();
        }
        auto end = std::chrono::steady_clock::now();
        r.millis =
            std::chrono::duration_cast<std::chrono::milliseconds>(end - start).count();
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace qpl
