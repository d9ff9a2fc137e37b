#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qplocal/btree.hpp"
#include "qplocal/classify.hpp"
#include "qplocal/density.hpp"
#include "qplocal/eislocal.hpp"
#include "qplocal/lengths.hpp"

using namespace qpl;

namespace {

DiagonalForm df(std::vector<std::pair<long, bool>> v) {
    DiagonalForm d;
    for (auto& pr : v) d.d.push_back(DiagTerm{pr.first, pr.second});
    return d;
}

}  // namespace

TEST_CASE("rationals: parsing and powers") {
    CHECK(rat_str(parse_rat("-14/21")) == "-2/3");
    CHECK(pow_q(3, -2) == mpq_class(1, 9));
    CHECK(pow_z(5, 3) == 125);
    CHECK(invert_z(2, mpz_class(9)) == 5);
}

TEST_CASE("padic: valuation, character, square roots") {
    PrimeContext c3 = PrimeContext::make(3);
    CHECK(c3.delta == 2);
    CHECK(ordp(mpq_class(18, 5), 3) == 2);
    CHECK(chi(c3, mpz_class(-1)) == -1);
    CHECK(chi(c3, mpq_class(1, 2)) == -1);
    CHECK(chi(PrimeContext::make(5), mpz_class(-1)) == 1);
    auto r = padic_sqrt(c3, mpq_class(7), 8);
    REQUIRE(r.has_value());
    mpz_class p8 = pow_z(3, 8);
    CHECK((r->u * r->u - 7) % p8 == 0);
    CHECK(!padic_sqrt(c3, mpq_class(c3.delta), 8).has_value());
}

TEST_CASE("padic: hilbert symbols") {
    CHECK(hilbert_symbol(-1, -1, Place::infinite()) == -1);
    CHECK(hilbert_symbol(-1, -1, Place::finite(2)) == -1);
    CHECK(hilbert_symbol(3, 3, Place::finite(3)) == -1);  // (p,p)_p = chi(-1)
    CHECK(hilbert_symbol(2, 3, Place::finite(3)) == -1);  // chi_3(2)
    CHECK(hilbert_symbol(7, 7, Place::finite(7)) == -1);
    CHECK(hilbert_symbol(mpq_class(1, 2), 5, Place::finite(3)) == 1);
}

TEST_CASE("padic: norms of the quadratic extension are onto the units") {
    PrimeContext c3 = PrimeContext::make(3);
    QuadCtx qc(c3, 10);
    for (long eps : {1L, 2L, 4L, 5L}) {
        Qx u = norm_preimage(qc, eps);
        CHECK((qnorm(qc, u) - eps) % qc.pN == 0);
    }
}

TEST_CASE("qform: diagonalization and parsing") {
    PrimeContext c3 = PrimeContext::make(3);
    CHECK(parse_form(c3, "1,D*p,p^3").str() == "1,D*p,p^3");
    SymForm T(2);
    T.at(0, 0) = 2;
    T.at(0, 1) = T.at(1, 0) = 1;
    T.at(1, 1) = 5;
    DiagonalForm D = diagonalize(c3, T);
    CHECK(D.rank() == 2);
    CHECK(D.ord_det() == ordp(T.det(), 3));
    LocalInvariants inv = local_invariants(c3, D);
    CHECK(inv.det_ord == 2);  // det = 9
}

TEST_CASE("qform: representability dichotomy on fixed targets") {
    PrimeContext c3 = PrimeContext::make(3);
    auto both = [&](const DiagonalForm& T) {
        return std::pair<bool, bool>{represents_locally(c3, T, Space::VPlus),
                                     represents_locally(c3, T, Space::VMinus)};
    };
    auto [p1, m1] = both(df({{0, 0}, {0, 0}, {0, 1}}));
    CHECK(p1);
    CHECK(!m1);
    auto [p2, m2] = both(df({{0, 0}, {0, 1}, {1, 0}}));
    CHECK(!p2);
    CHECK(m2);
    auto [p3, m3] = both(df({{0, 0}, {1, 0}, {1, 0}}));
    CHECK(!p3);
    CHECK(m3);
}

TEST_CASE("qform: binary solver matches its own solvability criterion") {
    PrimeContext c3 = PrimeContext::make(3);
    for (long a : {1L, 2L, 3L})
        for (long b : {1L, -1L, 6L})
            for (long m : {1L, 2L, 3L, 5L}) {
                auto s = solve_binary(c3, a, b, m, 8);
                bool solvable = hilbert_symbol(mpq_class(a) * m, mpq_class(-a) * b,
                                               Place::finite(3)) == 1;
                CHECK(s.has_value() == solvable);
                if (s) {
                    mpq_class x = mpq_class(s->x.u) * pow_q(3, -s->x.e);
                    mpq_class y = mpq_class(s->y.u) * pow_q(3, -s->y.e);
                    mpq_class res = a * x * x + b * y * y - m;
                    if (res != 0) CHECK(ordp(res, 3) >= 6);
                }
            }
}

TEST_CASE("density: unary closed forms against the counting oracle") {
    PrimeContext c3 = PrimeContext::make(3);
    CHECK(closed_form_unary(c3, NamedForm::SPlus, false).at_one() == mpq_class(10, 9));
    CHECK(closed_form_unary(c3, NamedForm::SPlus, false).eval(mpq_class(1, 3)) ==
          mpq_class(28, 27));
    CHECK(closed_form_unary(c3, NamedForm::H4, false).at_one() == mpq_class(8, 9));
    SymForm S4 = SymForm::diagonal({1, -1, 1, -mpq_class(c3.delta)});
    CountResult b = density_bruteforce(c3, S4, SymForm::diagonal({1}), 3);
    CHECK(b.stabilized);
    CHECK(b.density == mpq_class(10, 9));
}

TEST_CASE("density: ternary closed forms, frozen values at p=3") {
    PrimeContext c3 = PrimeContext::make(3);
    CHECK(reduce(c3, NamedForm::SPlus, df({{0, 0}, {0, 0}, {0, 1}})).value.at_one() ==
          mpq_class(80, 81));
    CHECK(reduce(c3, NamedForm::SPlus, df({{0, 0}, {0, 0}, {1, 0}})).value.at_one() ==
          mpq_class(160, 81));
    auto rd = reduce(c3, NamedForm::SPlus, df({{0, 0}, {0, 1}, {1, 0}}));
    CHECK(rd.value.at_one() == 0);
    CHECK(rd.value.derivative_at_one() == mpq_class(-80, 81));
    CHECK(reduce(c3, NamedForm::SMinus, df({{0, 0}, {1, 0}, {1, 0}})).value.at_one() ==
          mpq_class(16, 3));
}

TEST_CASE("density: brute force confirms a ternary closed value") {
    PrimeContext c3 = PrimeContext::make(3);
    SymForm SL = SymForm::diagonal({1, 1, 1, c3.delta});
    CountResult b = density_bruteforce(c3, SL, df({{0, 0}, {0, 0}, {0, 1}}).to_sym(c3), 2, false);
    CHECK(b.density == mpq_class(80, 81));
}

TEST_CASE("lengths: closed values and domain") {
    PrimeContext c3 = PrimeContext::make(3);
    CHECK(intersection_length_exponents(c3, 0, 0, 1).value == 1);
    CHECK(intersection_length_exponents(c3, 0, 1, 1).value == 2);
    CHECK(intersection_length_exponents(c3, 0, 1, 2).value == 3);
    CHECK(intersection_length_exponents(c3, 0, 1, 3).value == 4);
    auto half = intersection_length_exponents(c3, 0, 0, 0);
    CHECK(half.value == mpq_class(1, 2));
    CHECK(!half.in_domain);
    CHECK(intersection_length_exponents(c3, 0, 2, 2).value == mpq_class(11, 2));
    CHECK(ordinary_length(c3, 1, 1) == 9);
    CHECK_THROWS_AS(ordinary_length(c3, 0, 1), std::domain_error);
    CHECK(is_transversal(c3, df({{0, 0}, {0, 0}, {1, 0}})));
    CHECK(!is_transversal(c3, df({{0, 0}, {1, 0}, {1, 0}})));
}

TEST_CASE("btree: local structure of the vertex set") {
    PrimeContext c3 = PrimeContext::make(3);
    QuadCtx qc(c3, 24);
    Vertex o = base_vertex();
    auto nb = vertex_neighbors(qc, o);
    CHECK(nb.size() == 10);
    for (const Vertex& v : nb) CHECK(vertex_distance(qc, o, v) == 1);
    CHECK(geodesic(qc, o, nb[3]).size() == 2);
    int verts2 = 0, verts4 = 0;
    for (const Point& pt : points_in_ball(qc, Point::at(o), 2))
        if (!pt.is_mid()) ++verts2;
    for (const Point& pt : points_in_ball(qc, Point::at(o), 4))
        if (!pt.is_mid()) ++verts4;
    CHECK(verts2 == 11);   // 1 + (p^2 + 1)
    CHECK(verts4 == 101);  // 1 + (p^2+1)(p^2 + 1... ) geometric sum
}

TEST_CASE("btree: tube counts, frozen and closed-form") {
    PrimeContext c3 = PrimeContext::make(3);
    auto count = [&](std::vector<long> r, std::vector<bool> d) {
        TripleSpec sp{r, d};
        QuadCtx qc(c3, suggested_precision(sp));
        auto tr = construct_triple(c3, qc, sp);
        REQUIRE(tr.has_value());
        return tube_report_bfs(qc, tr->b, r);
    };
    auto r0 = count({0, 0, 0}, {false, false, true});
    CHECK(r0.vertices == 1);
    CHECK(r0.edges == 0);
    auto r2 = count({0, 0, 2}, {false, false, true});
    CHECK(r2.vertices == 3);
    CHECK(r2.edges == 2);
    auto r222 = count({2, 2, 2}, {false, false, true});
    CHECK(r222.vertices == 11);
    CHECK(r222.vertices == closed_count_case1(c3, 2, 2, 2));
    auto odd1 = count({1, 1, 2}, {false, true, true});
    CHECK(odd1.vertices == closed_count_odd_r1(c3, 1));
    auto odd3 = count({3, 3, 4}, {false, true, false});
    CHECK(odd3.vertices == 20);
    CHECK(closed_count_odd_r1(c3, 3) == 20);
}

TEST_CASE("btree: non-represented target gives the empty tube") {
    PrimeContext c3 = PrimeContext::make(3);
    TripleSpec sp{{0, 0, 0}, {false, false, false}};
    // target (1,1,1): represented, but (1,1,D*1)-style failures must be null
    TripleSpec bad{{1, 1, 1}, {false, false, false}};
    QuadCtx qc(c3, suggested_precision(bad));
    CHECK(!construct_triple(c3, qc, bad).has_value());
    (void)sp;
}

TEST_CASE("btree: fixed-set classes and twist cases") {
    PrimeContext c3 = PrimeContext::make(3);
    TripleSpec sp{{2, 2, 2}, {false, false, true}};
    CHECK(gamma_case(c3, triple_gamma_sq(c3, sp, 1)) == FixedSetClass::Split);
    CHECK(gamma_case(c3, triple_gamma_sq(c3, sp, 2)) == FixedSetClass::Unramified);
    CHECK(gamma_case(c3, mpq_class(3)) == FixedSetClass::Ramified);
    QuadCtx qc(c3, suggested_precision(sp));
    auto tr = construct_triple(c3, qc, sp);
    REQUIRE(tr.has_value());
    for (const Endo& e : tr->b)
        CHECK(classify_fixed_set(c3, e) == FixedPointType::VertexSubtree);
    CHECK(distance_to_fixed_set(qc, tr->b[0], Point::at(base_vertex())) <= 1);
}

TEST_CASE("classify: cycle support structure") {
    PrimeContext c3 = PrimeContext::make(3);
    auto locus = [&](std::vector<mpq_class> d, CycleCase c) {
        return classify_cycle(c3, SymForm::diagonal(d), c).locus;
    };
    CHECK(locus({1, 1, 1}, CycleCase::Inert) == CycleLocus::Empty);
    CHECK(locus({1, 1, 3}, CycleCase::Inert) == CycleLocus::Empty);  // anisotropic pair
    CHECK(locus({1, 2, 3}, CycleCase::Inert) == CycleLocus::IsolatedSuperspecial);
    CHECK(locus({3, 3, 9}, CycleCase::Inert) == CycleLocus::ContainsComponents);
    CHECK(locus({3, 3, 9}, CycleCase::Split) == CycleLocus::IsolatedSuperspecial);
    CHECK(locus({mpq_class(1, 3), 3, 9}, CycleCase::Inert) == CycleLocus::Empty);
}

TEST_CASE("classify: irreducibility predicate, frozen instances") {
    PrimeContext c3 = PrimeContext::make(3);
    CHECK(!hz_irreducible(c3, df({{1, 0}, {1, 0}, {3, 0}})));  // chi(-1) = -1 at p=3
    CHECK(hz_irreducible(c3, df({{1, 0}, {1, 1}, {3, 0}})));
    CHECK(hz_irreducible(c3, df({{1, 0}, {1, 1}, {1, 0}})));
    CHECK(!hz_irreducible(c3, df({{1, 0}, {1, 0}, {2, 0}})));
    CHECK(!hz_irreducible(c3, df({{1, 0}, {2, 0}, {3, 0}})));
    PrimeContext c5 = PrimeContext::make(5);
    CHECK(hz_irreducible(c5, df({{1, 0}, {1, 0}, {3, 0}})));  // chi(-1) = +1 at p=5
}

TEST_CASE("classify: failure places and regularity") {
    std::vector<mpq_class> amb = {1, -1, 1, -1};
    auto d7 = diff_set({1, 1, 7}, amb);
    REQUIRE(d7.size() == 1);
    CHECK(d7[0] == Place::finite(7));
    auto d3 = diff_set({1, 1, 3}, amb);
    REQUIRE(d3.size() == 1);
    CHECK(d3[0] == Place::finite(3));
    auto d2 = diff_set({1, 1, 1}, amb);
    REQUIRE(d2.size() == 1);
    CHECK(d2[0] == Place::finite(2));
    auto dn = diff_set({-1, 1, 7}, amb);
    REQUIRE(dn.size() == 1);
    CHECK(dn[0].real);
    CHECK(is_regular({1, 1, 7}, amb, mpz_class(5)).regular);
    CHECK(!is_regular({1, 1, 7}, amb, mpz_class(7)).regular);
    CHECK(!is_regular({1, 1, 1}, amb, mpz_class(1)).regular);
}

TEST_CASE("eislocal: values, derivatives, degree factor") {
    PrimeContext c3 = PrimeContext::make(3);
    DiagonalForm T = df({{0, 0}, {0, 1}, {1, 0}});  // (1, D, p), twisted-represented
    WhittakerValue v = whittaker_value(c3, T, WhittakerCase::Inert);
    CHECK(v.magnitude == mpq_class(16, 81));  // 2 p^-4 (p^2 - 1)
    CHECK(v.gamma_token == "gV'");
    CHECK(v.log_p_power == 0);
    WhittakerValue d = whittaker_derivative(c3, T, WhittakerCase::Inert);
    CHECK(d.magnitude == mpq_class(80, 81));  // (1+p^-2)(1-p^-2) e_p with e_p = 1
    CHECK(d.gamma_token == "gV");
    CHECK(d.log_p_power == 1);
    WhittakerValue z = whittaker_value(c3, df({{0, 0}, {0, 0}, {0, 1}}), WhittakerCase::Inert);
    CHECK(z.magnitude == 0);
    CHECK(whittaker_value(c3, df({{-1, 0}, {0, 0}, {0, 0}}), WhittakerCase::Inert).magnitude ==
          0);
    DegreeFactor g = degree_factor({1, 1, 3}, {1, -1, 1, -1}, mpz_class(1));
    CHECK(g.regular);
    CHECK(g.prime == 3);
    CHECK(g.e_p == 1);
    CHECK(g.log_p_power == 1);
    CHECK(!degree_factor({1, 1, 7}, {1, -1, 1, -1}, mpz_class(7)).regular);
}

TEST_CASE("eislocal: derivative equals the density path on one instance") {
    PrimeContext c3 = PrimeContext::make(3);
    DiagonalForm T = df({{0, 0}, {0, 1}, {1, 0}});
    WhittakerValue d = whittaker_derivative(c3, T, WhittakerCase::Inert);
    CHECK(d.magnitude == -reduce(c3, NamedForm::SPlus, T).value.derivative_at_one());
}
