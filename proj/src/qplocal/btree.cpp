#include "btree.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qpl {

namespace {

Qx qx_zero() { return Qx{0, 0}; }

Qx qx_p_power(const QuadCtx& qc, long k) {
    return Qx{pow_z(qc.p, static_cast<unsigned long>(k)) % qc.pN, 0};
}

// residue of a p-integral rational pair rx + ry * delta
Qx qx_rat(const QuadCtx& qc, const mpq_class& rx, const mpq_class& ry) {
    auto part = [&](const mpq_class& r) -> mpz_class {
        mpz_class num = r.get_num() % qc.pN;
        if (num < 0) num += qc.pN;
        return num * invert_z(r.get_den() % qc.pN, qc.pN) % qc.pN;
    };
    return Qx{part(rx), part(ry)};
}

}  // namespace

Mat2 mmul(const QuadCtx& qc, const Mat2& x, const Mat2& y) {
    Mat2 r;
    r.a = qadd(qc, qmul(qc, x.a, y.a), qmul(qc, x.b, y.c));
    r.b = qadd(qc, qmul(qc, x.a, y.b), qmul(qc, x.b, y.d));
    r.c = qadd(qc, qmul(qc, x.c, y.a), qmul(qc, x.d, y.c));
    r.d = qadd(qc, qmul(qc, x.c, y.b), qmul(qc, x.d, y.d));
    return r;
}

Mat2 madd(const QuadCtx& qc, const Mat2& x, const Mat2& y) {
    return Mat2{qadd(qc, x.a, y.a), qadd(qc, x.b, y.b), qadd(qc, x.c, y.c), qadd(qc, x.d, y.d)};
}

Mat2 madj(const QuadCtx& qc, const Mat2& m) {
    return Mat2{m.d, qsub(qc, qx_zero(), m.b), qsub(qc, qx_zero(), m.c), m.a};
}

Mat2 mconj(const QuadCtx& qc, const Mat2& m) {
    return Mat2{qconj(qc, m.a), qconj(qc, m.b), qconj(qc, m.c), qconj(qc, m.d)};
}

long mminord(const QuadCtx& qc, const Mat2& m) {
    return std::min(std::min(qord(qc, m.a), qord(qc, m.b)),
                    std::min(qord(qc, m.c), qord(qc, m.d)));
}

bool Vertex::operator<(const Vertex& o) const {
    if (va != o.va) return va < o.va;
    if (vc != o.vc) return vc < o.vc;
    if (x.x != o.x.x) return x.x < o.x.x;
    return x.y < o.x.y;
}

std::string Vertex::str() const {
    std::ostringstream os;
    os << "[" << va << "," << vc << ";" << x.x << "+" << x.y << "d]";
    return os.str();
}

Vertex base_vertex() { return Vertex{0, 0, qx_zero()}; }

Mat2 vertex_matrix(const QuadCtx& qc, const Vertex& v) {
    // columns (p^va, x) and (0, p^vc)
    return Mat2{qx_p_power(qc, v.va), qx_zero(), v.x, qx_p_power(qc, v.vc)};
}

Vertex canonical_vertex(const QuadCtx& qc, const Mat2& basis) {
    Mat2 m = basis;
    if (qord(qc, m.a) > qord(qc, m.b)) {
        std::swap(m.a, m.b);
        std::swap(m.c, m.d);
    }
    long A = qord(qc, m.a);
    if (A >= qc.N) throw std::logic_error("lattice basis degenerate at working precision");
    Qx iu = qinv_unit(qc, qdiv_p(qc, m.a, A));
    m.c = qmul(qc, m.c, iu);
    m.a = qx_p_power(qc, A);
    // clear the (0,1) entry with a column operation
    Qx f = qdiv_p(qc, m.b, A);
    m.d = qsub(qc, m.d, qmul(qc, f, m.c));
    long C = qord(qc, m.d);
    if (C >= qc.N) throw std::logic_error("lattice basis degenerate at working precision");
    Qx x = m.c;
    // reduce x mod p^C
    mpz_class pc = pow_z(qc.p, static_cast<unsigned long>(C));
    x.x %= pc;
    x.y %= pc;
    long k = std::min(std::min(A, C), qord(qc, x));
    Vertex v;
    v.va = A - k;
    v.vc = C - k;
    Qx xs = qdiv_p(qc, x, k);
    mpz_class pvc = pow_z(qc.p, static_cast<unsigned long>(v.vc));
    xs.x %= pvc;
    xs.y %= pvc;
    v.x = xs;
    return v;
}

long vertex_distance(const QuadCtx& qc, const Vertex& u, const Vertex& v) {
    if (u == v) return 0;
    Mat2 A = mmul(qc, madj(qc, vertex_matrix(qc, u)), vertex_matrix(qc, v));
    long mv = mminord(qc, A);
    if (mv >= qc.N) throw std::logic_error("distance exceeds working precision");
    return (u.va + u.vc + v.va + v.vc) - 2 * mv;
}

std::vector<Vertex> vertex_neighbors(const QuadCtx& qc, const Vertex& v) {
    Mat2 M = vertex_matrix(qc, v);
    std::vector<Vertex> out;
    out.reserve(qc.p * qc.p + 1);
    for (long t0 = 0; t0 < qc.p; ++t0)
        for (long t1 = 0; t1 < qc.p; ++t1) {
            Mat2 S{Qx{1, 0}, qx_zero(), Qx{t0, t1}, Qx{qc.p, 0}};
            out.push_back(canonical_vertex(qc, mmul(qc, M, S)));
        }
    Mat2 S{Qx{qc.p, 0}, qx_zero(), qx_zero(), Qx{1, 0}};
    out.push_back(canonical_vertex(qc, mmul(qc, M, S)));
    return out;
}

namespace {

struct Smith {
    long d0 = 0, d1 = 0;
    Mat2 U;  // A = U * diag(p^d0, p^d1) * (column ops)
};

Smith smith2(const QuadCtx& qc, Mat2 A) {
    Smith s;
    s.U = Mat2{Qx{1, 0}, qx_zero(), qx_zero(), Qx{1, 0}};
    long oa = qord(qc, A.a), ob = qord(qc, A.b), oc = qord(qc, A.c), od = qord(qc, A.d);
    long best = std::min(std::min(oa, ob), std::min(oc, od));
    if (best >= qc.N) throw std::logic_error("singular matrix in elementary divisor step");
    if (oc == best || od == best) {  // bring the minimal entry into row 0
        std::swap(A.a, A.c);
        std::swap(A.b, A.d);
        std::swap(s.U.a, s.U.b);  // U <- U * swap
        std::swap(s.U.c, s.U.d);
    }
    if (qord(qc, A.a) > qord(qc, A.b)) {
        std::swap(A.a, A.b);
        std::swap(A.c, A.d);
    }
    s.d0 = qord(qc, A.a);
    Qx u = qdiv_p(qc, A.a, s.d0);
    Qx iu = qinv_unit(qc, u);
    A.a = qx_p_power(qc, s.d0);
    A.b = qmul(qc, A.b, iu);  // row 0 scaled by iu
    // U <- U * diag(u, 1)
    s.U.a = qmul(qc, s.U.a, u);
    s.U.c = qmul(qc, s.U.c, u);
    // row 1 -= f * row 0
    Qx f = qdiv_p(qc, A.c, s.d0);
    A.c = qx_zero();
    A.d = qsub(qc, A.d, qmul(qc, f, A.b));
    // U <- U * (I + f E10): col0 += f * col1
    s.U.a = qadd(qc, s.U.a, qmul(qc, f, s.U.b));
    s.U.c = qadd(qc, s.U.c, qmul(qc, f, s.U.d));
    // col 1 -= g * col 0 clears A.b without touching U
    A.b = qx_zero();
    s.d1 = qord(qc, A.d);
    if (s.d1 >= qc.N) throw std::logic_error("singular matrix in elementary divisor step");
    Qx u1 = qdiv_p(qc, A.d, s.d1);
    // U <- U * diag(1, u1)
    s.U.b = qmul(qc, s.U.b, u1);
    s.U.d = qmul(qc, s.U.d, u1);
    assert(s.d1 >= s.d0);
    return s;
}

}  // namespace

std::vector<Vertex> geodesic(const QuadCtx& qc, const Vertex& u, const Vertex& v) {
    if (u == v) return {u};
    Mat2 Mu = vertex_matrix(qc, u);
    Mat2 A = mmul(qc, madj(qc, Mu), vertex_matrix(qc, v));
    Smith s = smith2(qc, A);
    long d = s.d1 - s.d0;
    Mat2 base = mmul(qc, Mu, s.U);
    std::vector<Vertex> path;
    path.reserve(d + 1);
    for (long j = 0; j <= d; ++j) {
        Mat2 Dj{Qx{1, 0}, qx_zero(), qx_zero(), qx_p_power(qc, j)};
        path.push_back(canonical_vertex(qc, mmul(qc, base, Dj)));
    }
    if (!(path.front() == u) || !(path.back() == v))
        throw std::logic_error("geodesic endpoints failed to normalize");
    return path;
}

Point Point::at(const Vertex& u) { return Point{{u}}; }

Point Point::edge(const Vertex& u, const Vertex& w) {
    Point p;
    p.v = {u, w};
    if (w < u) std::swap(p.v[0], p.v[1]);
    return p;
}

bool Point::operator<(const Point& o) const {
    if (v.size() != o.v.size()) return v.size() < o.v.size();
    for (size_t i = 0; i < v.size(); ++i) {
        if (v[i] < o.v[i]) return true;
        if (o.v[i] < v[i]) return false;
    }
    return false;
}

long ddist(const QuadCtx& qc, const Point& a, const Point& b) {
    if (a == b) return 0;
    if (!a.is_mid() && !b.is_mid()) return 2 * vertex_distance(qc, a.v[0], b.v[0]);
    if (a.is_mid() && b.is_mid()) {
        long best = kInfOrd;
        for (const Vertex& x : a.v)
            for (const Vertex& y : b.v) best = std::min(best, vertex_distance(qc, x, y));
        return 2 * best + 2;
    }
    const Point& mid = a.is_mid() ? a : b;
    const Point& vert = a.is_mid() ? b : a;
    long best = std::min(vertex_distance(qc, mid.v[0], vert.v[0]),
                         vertex_distance(qc, mid.v[1], vert.v[0]));
    return 2 * best + 1;
}

std::vector<Point> path_points(const QuadCtx& qc, const Point& a, const Point& b) {
    if (a == b) return {a};
    if (a.is_mid()) {
        const Vertex& u = a.v[0];
        const Vertex& w = a.v[1];
        Point near = Point::at(ddist(qc, Point::at(u), b) <= ddist(qc, Point::at(w), b) ? u : w);
        std::vector<Point> rest = path_points(qc, near, b);
        rest.insert(rest.begin(), a);
        return rest;
    }
    if (b.is_mid()) {
        std::vector<Point> rest = path_points(qc, b, a);
        std::reverse(rest.begin(), rest.end());
        return rest;
    }
    std::vector<Vertex> verts = geodesic(qc, a.v[0], b.v[0]);
    std::vector<Point> out;
    out.reserve(2 * verts.size());
    for (size_t i = 0; i < verts.size(); ++i) {
        if (i) out.push_back(Point::edge(verts[i - 1], verts[i]));
        out.push_back(Point::at(verts[i]));
    }
    return out;
}

Point midpoint_point(const QuadCtx& qc, const Point& a, const Point& b) {
    std::vector<Point> pts = path_points(qc, a, b);
    if (pts.size() % 2 == 0)
        throw std::logic_error("midpoint requested for a path of odd doubled length");
    return pts[pts.size() / 2];
}

Vertex apply_endo(const QuadCtx& qc, const Endo& e, const Vertex& v) {
    return canonical_vertex(qc, mmul(qc, e.m, mconj(qc, vertex_matrix(qc, v))));
}

Point apply_endo(const QuadCtx& qc, const Endo& e, const Point& pt) {
    if (!pt.is_mid()) return Point::at(apply_endo(qc, e, pt.v[0]));
    return Point::edge(apply_endo(qc, e, pt.v[0]), apply_endo(qc, e, pt.v[1]));
}

bool endo_stabilizes(const QuadCtx& qc, const Endo& e, const Vertex& v) {
    Mat2 Mv = vertex_matrix(qc, v);
    Mat2 A = mmul(qc, mmul(qc, madj(qc, Mv), e.m), mconj(qc, Mv));
    return mminord(qc, A) - (v.va + v.vc) - e.shift >= 0;
}

mpq_class distance_to_fixed_set(const QuadCtx& qc, const Endo& e, const Point& pt) {
    return mpq_class(ddist(qc, pt, apply_endo(qc, e, pt)), 4);
}

FixedPointType classify_fixed_set(const PrimeContext& ctx, const Endo& e) {
    if (e.norm == 0) throw std::invalid_argument("nonzero norm required");
    return ordp(e.norm, ctx.p) % 2 == 0 ? FixedPointType::VertexSubtree
                                        : FixedPointType::SingleMidpoint;
}

mpq_class triple_gamma_sq(const PrimeContext& ctx, const TripleSpec& spec, int i) {
    if (spec.r.size() != 3 || spec.delta.size() != 3)
        throw std::invalid_argument("three norms required");
    if (spec.r[0] % 2 != 0)
        throw std::domain_error("twist squares only defined when the first exponent is even");
    if (i < 1 || i > 2) throw std::invalid_argument("index must be 1 or 2");
    mpq_class eps1 = spec.delta[0] ? mpq_class(ctx.delta) : mpq_class(1);
    mpq_class epsi = spec.delta[i] ? mpq_class(ctx.delta) : mpq_class(1);
    return -epsi * pow_q(ctx.p, spec.r[i]) / (mpq_class(ctx.delta) * eps1);
}

FixedSetClass gamma_case(const PrimeContext& ctx, const mpq_class& gamma_sq) {
    if (gamma_sq == 0) throw std::invalid_argument("square of the involution must be nonzero");
    long v = ordp(gamma_sq, ctx.p);
    if (v % 2 != 0) return FixedSetClass::Ramified;
    mpq_class u = gamma_sq / pow_q(ctx.p, v);
    return chi(ctx, u) == 1 ? FixedSetClass::Split : FixedSetClass::Unramified;
}

DiagonalForm TripleSpec::target() const {
    DiagonalForm T;
    for (size_t i = 0; i < r.size(); ++i) T.d.push_back(DiagTerm{r[i], delta[i]});
    std::sort(T.d.begin(), T.d.end());
    return T;
}

namespace {

mpq_class pa_value(const PadicApprox& a, long p) {
    return mpq_class(a.u) * pow_q(p, -a.e);
}

struct EndoCoords {
    // matrix [[A, B], [C, conj(A)]] with A = ax + ay*delta (rational parts,
    // possibly times a unit residue factor), B = by*delta, C = cy*delta
    mpq_class ax = 0, ay = 0, by = 0, cy = 0;
    bool use_unit = false;  // multiply A by the norm-preimage unit u
};

long coord_shift(const EndoCoords& ec, long p) {
    long mn = 0;
    for (const mpq_class* q : {&ec.ax, &ec.ay, &ec.by, &ec.cy})
        if (*q != 0) mn = std::min(mn, ordp(*q, p));
    return -mn;
}

Endo build_endo(const QuadCtx& qc, const EndoCoords& ec, const Qx& unit, const mpq_class& norm) {
    long s = coord_shift(ec, qc.p);
    mpq_class f = pow_q(qc.p, s);
    Qx A = qx_rat(qc, ec.ax * f, ec.ay * f);
    if (ec.use_unit) A = qmul(qc, A, unit);
    Qx B = qx_rat(qc, 0, ec.by * f);
    Qx C = qx_rat(qc, 0, ec.cy * f);
    Endo e;
    e.m = Mat2{A, B, C, qconj(qc, A)};
    e.norm = norm;
    e.shift = s;
    return e;
}

void check_triple(const QuadCtx& qc, const std::vector<Endo>& es, long tol) {
    auto zero_to = [&](const Qx& q) { return qord(qc, q) >= tol; };
    for (const Endo& e : es) {
        Mat2 sq = mmul(qc, e.m, mconj(qc, e.m));
        if (!zero_to(sq.b) || !zero_to(sq.c) || !zero_to(qsub(qc, sq.a, sq.d)))
            throw std::logic_error("endomorphism square is not scalar");
        mpq_class want = e.norm * pow_q(qc.p, 2 * e.shift);
        Qx wq = qx_rat(qc, want, 0);
        if (!zero_to(qsub(qc, sq.a, wq)))
            throw std::logic_error("endomorphism norm mismatch");
    }
    for (size_t i = 0; i < es.size(); ++i)
        for (size_t j = i + 1; j < es.size(); ++j) {
            Mat2 x = madd(qc, mmul(qc, es[i].m, mconj(qc, es[j].m)),
                          mmul(qc, es[j].m, mconj(qc, es[i].m)));
            if (!zero_to(x.a) || !zero_to(x.b) || !zero_to(x.c) || !zero_to(x.d))
                throw std::logic_error("constructed endomorphisms fail to anticommute");
        }
}

}  // namespace

std::optional<Triple> construct_triple(const PrimeContext& ctx, const QuadCtx& qc,
                                       const TripleSpec& spec) {
    if (spec.r.size() != 3 || spec.delta.size() != 3)
        throw std::invalid_argument("three norms required");
    if (!(spec.r[0] <= spec.r[1] && spec.r[1] <= spec.r[2]) || spec.r[0] < 0)
        throw std::invalid_argument("exponents must be sorted and nonnegative");
    if (!represents_locally(ctx, spec.target(), Space::VPlus)) return std::nullopt;

    const mpq_class D = ctx.delta;
    mpq_class eps[3];
    for (int i = 0; i < 3; ++i) eps[i] = spec.delta[i] ? D : mpq_class(1);
    mpq_class norm[3];
    for (int i = 0; i < 3; ++i) norm[i] = eps[i] * pow_q(ctx.p, spec.r[i]);
    const int ts = qc.N;

    std::vector<EndoCoords> ec(3);
    Qx unit = Qx{1, 0};
    if (spec.r[0] % 2 == 0) {
        long t = spec.r[0] / 2;
        mpz_class e1res = qx_rat(qc, eps[0], 0).x;
        unit = norm_preimage(qc, e1res);
        ec[0].ax = pow_q(ctx.p, t);  // A = u * p^t
        ec[0].use_unit = true;
        mpq_class c2 = -eps[1] * pow_q(ctx.p, spec.r[1]) / D;
        ec[1].by = 1;
        ec[1].cy = c2;
        // w^2 - (c2/eps1) b^2 = -eps3 p^{r3} / (D eps1)
        auto sol = solve_binary(ctx, 1, -c2 / eps[0], -norm[2] / (D * eps[0]), ts);
        if (!sol) throw std::logic_error("binary step unsolvable despite representability");
        mpq_class w = pa_value(sol->x, ctx.p), b3 = pa_value(sol->y, ctx.p);
        ec[2].ay = w;  // times the unit u: A = w u delta
        ec[2].use_unit = true;
        ec[2].by = b3;
        ec[2].cy = -b3 * c2;
    } else {
        mpq_class c1 = -norm[0] / D;
        ec[0].by = 1;
        ec[0].cy = c1;
        // complement of the first vector: coordinates (a0, a1, b) with
        // C = -b c1, carrying the form a0^2 - D a1^2 - eps1 p^{r1} b^2
        std::vector<mpq_class> q = {1, -D, -norm[0]};
        auto s2 = solve_ternary(ctx, q, norm[1], ts);
        if (!s2) throw std::logic_error("ternary step unsolvable despite representability");
        mpq_class s[3] = {pa_value(s2->x, ctx.p), pa_value(s2->y, ctx.p), pa_value(s2->z, ctx.p)};
        ec[1].ax = s[0];
        ec[1].ay = s[1];
        ec[1].by = s[2];
        ec[1].cy = -s[2] * c1;
        // basis of the plane orthogonal to s inside the ternary space
        int piv = -1;
        long bestv = 0;
        for (int i = 0; i < 3; ++i) {
            if (s[i] == 0) continue;
            long v = ordp(q[i] * s[i], ctx.p);
            if (piv < 0 || v < bestv) {
                piv = i;
                bestv = v;
            }
        }
        std::vector<std::vector<mpq_class>> w(2, std::vector<mpq_class>(3, 0));
        int k = 0;
        for (int i = 0; i < 3; ++i) {
            if (i == piv) continue;
            w[k][i] = 1;
            w[k][piv] = -(q[i] * s[i]) / (q[piv] * s[piv]);
            ++k;
        }
        auto qval = [&](const std::vector<mpq_class>& x, const std::vector<mpq_class>& y) {
            mpq_class acc = 0;
            for (int i = 0; i < 3; ++i) acc += q[i] * x[i] * y[i];
            return acc;
        };
        mpq_class g11 = qval(w[0], w[0]), g12 = qval(w[0], w[1]), g22 = qval(w[1], w[1]);
        std::vector<mpq_class> x3(3, 0);
        if (g11 == 0 && g22 == 0) {
            // hyperbolic plane: q(a w0 + b w1) = 2 a b g12
            mpq_class bcoef = norm[2] / (2 * g12);
            for (int i = 0; i < 3; ++i) x3[i] = w[0][i] + bcoef * w[1][i];
        } else {
            if (g11 == 0) {
                std::swap(w[0], w[1]);
                std::swap(g11, g22);
            }
            std::vector<mpq_class> u2(3);
            for (int i = 0; i < 3; ++i) u2[i] = w[1][i] - (g12 / g11) * w[0][i];
            mpq_class g2 = qval(u2, u2);
            if (g2 == 0) throw std::logic_error("degenerate complement plane");
            auto sol = solve_binary(ctx, g11, g2, norm[2], ts);
            if (!sol) throw std::logic_error("binary step unsolvable despite representability");
            mpq_class al = pa_value(sol->x, ctx.p), be = pa_value(sol->y, ctx.p);
            for (int i = 0; i < 3; ++i) x3[i] = al * w[0][i] + be * u2[i];
        }
        ec[2].ax = x3[0];
        ec[2].ay = x3[1];
        ec[2].by = x3[2];
        ec[2].cy = -x3[2] * c1;
    }

    Triple tr;
    long maxshift = 0;
    for (int i = 0; i < 3; ++i) {
        tr.b.push_back(build_endo(qc, ec[i], unit, norm[i]));
        maxshift = std::max(maxshift, tr.b.back().shift);
    }
    long tol = qc.N - 2 * maxshift - (spec.r[2] + 8);
    if (tol < 8) throw std::logic_error("working precision too small for this spec");
    check_triple(qc, tr.b, tol);
    return tr;
}

namespace {

bool member_all(const QuadCtx& qc, const std::vector<Endo>& es, const std::vector<long>& r,
                const Point& pt) {
    for (size_t i = 0; i < es.size(); ++i)
        if (ddist(qc, pt, apply_endo(qc, es[i], pt)) > 2 * r[i]) return false;
    return true;
}

// A point of the fixed set of an involution: the midpoint of [x, e x].
Point fixed_rep(const QuadCtx& qc, const Endo& e, const Point& x) {
    Point ex = apply_endo(qc, e, x);
    if (ex == x) return x;
    return midpoint_point(qc, x, ex);
}

}  // namespace

TubeReport tube_report_bfs(const QuadCtx& qc, const std::vector<Endo>& endos,
                           const std::vector<long>& radii, long cap) {
    const size_t k = endos.size();
    if (k == 0 || k > 3 || radii.size() != k)
        throw std::invalid_argument("between one and three endomorphisms with matching radii");
    Point base = Point::at(base_vertex());
    std::vector<Point> fix;
    for (const Endo& e : endos) fix.push_back(fixed_rep(qc, e, base));

    // a point of tube_i intersect tube_j sits on the segment from a fixed
    // point of e_i to its projection onto the fixed set of e_j
    auto pair_point = [&](size_t i, size_t j) -> std::optional<Point> {
        Point proj = fixed_rep(qc, endos[j], fix[i]);
        for (const Point& w : path_points(qc, fix[i], proj)) {
            if (ddist(qc, w, apply_endo(qc, endos[i], w)) <= 2 * radii[i] &&
                ddist(qc, w, apply_endo(qc, endos[j], w)) <= 2 * radii[j])
                return w;
        }
        return std::nullopt;
    };

    TubeReport rep;
    Point seed = fix[0];
    if (k == 2) {
        auto y = pair_point(0, 1);
        if (!y) return rep;
        seed = *y;
    } else if (k == 3) {
        auto y01 = pair_point(0, 1);
        auto y02 = pair_point(0, 2);
        auto y12 = pair_point(1, 2);
        if (!y01 || !y02 || !y12) return rep;
        // Helly: the median of pairwise intersection points lies in all three
        std::vector<Point> path = path_points(qc, *y01, *y02);
        long dab = ddist(qc, *y01, *y02);
        long dac = ddist(qc, *y01, *y12);
        long dbc = ddist(qc, *y02, *y12);
        long idx = (dab + dac - dbc) / 2;
        if (idx < 0 || idx >= static_cast<long>(path.size()))
            throw std::logic_error("median index out of range");
        seed = path[idx];
    }
    if (!member_all(qc, endos, radii, seed)) return rep;

    // the member set is convex, so BFS depth equals distance from the seed
    std::set<Point> seen;
    std::deque<std::pair<Point, long>> queue;
    seen.insert(seed);
    queue.emplace_back(seed, 0);
    std::vector<Point> mids;
    while (!queue.empty()) {
        auto [cur, depth] = queue.front();
        queue.pop_front();
        rep.dradius = std::max(rep.dradius, depth);
        if (cur.is_mid())
            mids.push_back(cur);
        else
            ++rep.vertices;
        std::vector<Point> nbrs;
        if (cur.is_mid()) {
            nbrs = {Point::at(cur.v[0]), Point::at(cur.v[1])};
        } else {
            for (const Vertex& u : vertex_neighbors(qc, cur.v[0]))
                nbrs.push_back(Point::edge(cur.v[0], u));
        }
        for (const Point& nb : nbrs) {
            if (seen.count(nb)) continue;
            if (!member_all(qc, endos, radii, nb)) continue;
            seen.insert(nb);
            queue.emplace_back(nb, depth + 1);
            if (static_cast<long>(seen.size()) > cap)
                throw std::runtime_error("tube exploration exceeded cap");
        }
    }
    for (const Point& m : mids)
        if (seen.count(Point::at(m.v[0])) && seen.count(Point::at(m.v[1]))) ++rep.edges;
    rep.stabilized = true;
    return rep;
}

mpz_class tube_count_bfs(const QuadCtx& qc, const std::vector<Endo>& endos,
                         const std::vector<long>& radii, long cap) {
    return tube_report_bfs(qc, endos, radii, cap).vertices;
}

std::vector<Point> points_in_ball(const QuadCtx& qc, const Point& center, long dradius, long cap) {
    std::set<Point> seen;
    std::deque<Point> queue;
    seen.insert(center);
    queue.push_back(center);
    while (!queue.empty()) {
        Point cur = queue.front();
        queue.pop_front();
        std::vector<Point> nbrs;
        if (cur.is_mid()) {
            nbrs = {Point::at(cur.v[0]), Point::at(cur.v[1])};
        } else {
            for (const Vertex& u : vertex_neighbors(qc, cur.v[0]))
                nbrs.push_back(Point::edge(cur.v[0], u));
        }
        for (const Point& nb : nbrs) {
            if (seen.count(nb)) continue;
            if (ddist(qc, center, nb) > dradius) continue;
            seen.insert(nb);
            queue.push_back(nb);
            if (static_cast<long>(seen.size()) > cap)
                throw std::runtime_error("ball exploration exceeded cap");
        }
    }
    return std::vector<Point>(seen.begin(), seen.end());
}

mpz_class closed_count_odd_r1(const PrimeContext& ctx, long r1) {
    if (r1 < 1 || r1 % 2 == 0) throw std::invalid_argument("odd positive exponent required");
    mpz_class acc = 0;
    for (long k = 0; k <= (r1 - 1) / 2; ++k) acc += pow_z(ctx.p, 2 * k);
    return 2 * acc;
}

mpz_class closed_count_case1(const PrimeContext& ctx, long r1, long r2, long r3) {
    if (r1 % 2 || r2 % 2 || r3 % 2 || r1 < 0 || r1 > r2 || r2 > r3)
        throw std::invalid_argument("even sorted exponents required");
    const mpz_class p = ctx.p;
    auto G = [&](long m) {
        mpz_class acc = 1;
        for (long i = 0; i < m; ++i) acc += (p * p - p) * pow_z(ctx.p, 2 * i);
        return acc;
    };
    mpz_class total = G(r1 / 2);
    for (long j = 1; j <= r2 / 2; ++j) total += (p - 1) * G(std::min(r1 / 2, r2 / 2 - j));
    for (long k = 1; k <= r3 / 2; ++k) total += 2 * G(std::min(r1 / 2, r3 / 2 - k));
    for (long k = 1; k <= r3 / 2; ++k)
        for (long j = 1; j <= std::min(r2 / 2, r3 / 2 - k); ++j)
            total += 2 * (p - 1) * G(std::min(std::min(r1 / 2, r2 / 2 - j), r3 / 2 - k - j));
    return total;
}

int suggested_precision(const TripleSpec& spec) {
    long sum = 0, mx = 0;
    for (long r : spec.r) {
        sum += r;
        mx = std::max(mx, r);
    }
    return static_cast<int>(4 * sum + 6 * mx + 48);
}

}  // namespace qpl
