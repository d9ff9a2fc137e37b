#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qform.hpp"

namespace qpl {

// 2x2 matrices over the truncated unramified quadratic extension.
struct Mat2 {
    Qx a, b, c, d;  // [[a, b], [c, d]]
};
Mat2 mmul(const QuadCtx& qc, const Mat2& x, const Mat2& y);
Mat2 madd(const QuadCtx& qc, const Mat2& x, const Mat2& y);
Mat2 madj(const QuadCtx& qc, const Mat2& m);   // adjugate
Mat2 mconj(const QuadCtx& qc, const Mat2& m);  // entrywise Galois conjugate
long mminord(const QuadCtx& qc, const Mat2& m);

// Homothety class of a rank-2 lattice over the quadratic extension, in the
// column Hermite form [[p^va, 0], [x, p^vc]] with x reduced mod p^vc and
// min(va, ord(x), vc) = 0.  This representative is unique, so classes can be
// hashed and compared directly.
struct Vertex {
    long va = 0, vc = 0;
    Qx x;

    bool operator==(const Vertex& o) const {
        return va == o.va && vc == o.vc && x.x == o.x.x && x.y == o.x.y;
    }
    bool operator<(const Vertex& o) const;
    std::string str() const;
};

Vertex base_vertex();
Mat2 vertex_matrix(const QuadCtx& qc, const Vertex& v);
Vertex canonical_vertex(const QuadCtx& qc, const Mat2& basis);

long vertex_distance(const QuadCtx& qc, const Vertex& u, const Vertex& v);
std::vector<Vertex> vertex_neighbors(const QuadCtx& qc, const Vertex& v);  // p^2 + 1 of them
std::vector<Vertex> geodesic(const QuadCtx& qc, const Vertex& u, const Vertex& v);

// A point of the geometric tree: a vertex or the midpoint of an edge.
struct Point {
    std::vector<Vertex> v;  // size 1 or 2 (sorted, adjacent)

    static Point at(const Vertex& u);
    static Point edge(const Vertex& u, const Vertex& w);
    bool is_mid() const { return v.size() == 2; }
    bool operator==(const Point& o) const { return v == o.v; }
    bool operator<(const Point& o) const;
};

// Doubled distance (always an integer; vertices sit at even mutual distance
// parity rules, midpoints add halves).
long ddist(const QuadCtx& qc, const Point& a, const Point& b);
std::vector<Point> path_points(const QuadCtx& qc, const Point& a, const Point& b);
Point midpoint_point(const QuadCtx& qc, const Point& a, const Point& b);

// Conjugate-linear endomorphism L -> M * sigma(L) of the lattice set, taken
// projectively (a global p-power on M does not matter).  norm records the
// quadratic value it was built with, shift the p-power used to make the
// matrix integral (so the matrix realizes p^shift times the original map).
struct Endo {
    Mat2 m;
    mpq_class norm = 0;
    long shift = 0;
};
Vertex apply_endo(const QuadCtx& qc, const Endo& e, const Vertex& v);
Point apply_endo(const QuadCtx& qc, const Endo& e, const Point& pt);

// Does e map the lattice of v into itself?  Decided on the integrality of
// M_v^{-1} M_e sigma(M_v), with the p-power bookkeeping of det and shift.
bool endo_stabilizes(const QuadCtx& qc, const Endo& e, const Vertex& v);

// Half the displacement d(x, e x); exact rational (can be a half-integer).
mpq_class distance_to_fixed_set(const QuadCtx& qc, const Endo& e, const Point& pt);

// Shape of the fixed point set of an involution, read off the parity of the
// valuation of its norm: even -> a subtree with vertices, odd -> one midpoint.
enum class FixedPointType { VertexSubtree, SingleMidpoint };
FixedPointType classify_fixed_set(const PrimeContext& ctx, const Endo& e);

enum class FixedSetClass { Split, Unramified, Ramified };
// Classification of the fixed set of an involution with square gamma_sq:
// geodesic line, vertex-centred subtree, or a single midpoint.
FixedSetClass gamma_case(const PrimeContext& ctx, const mpq_class& gamma_sq);

// Requested norms eps_i p^{r_i}, sorted by exponent.
struct TripleSpec {
    std::vector<long> r;
    std::vector<bool> delta;

    DiagonalForm target() const;
};

struct Triple {
    std::vector<Endo> b;
};

// Square of the twist gamma_i = b_i b_1^{-1} scaled to the quadratic field,
// for i in {1, 2} (zero-based index into spec), defined when r_1 is even:
// gamma_i^2 = -eps_i p^{r_i} / (Delta eps_1).
mpq_class triple_gamma_sq(const PrimeContext& ctx, const TripleSpec& spec, int i);

// Pairwise anticommuting conjugate-linear endomorphisms with the requested
// norms, built by explicit orthogonal vectors in the coordinate model of the
// endomorphism space; nullopt when the diagonal target is not represented by
// that space.  Results are verified to working precision before returning.
std::optional<Triple> construct_triple(const PrimeContext& ctx, const QuadCtx& qc,
                                       const TripleSpec& spec);

struct TubeReport {
    mpz_class vertices = 0;
    mpz_class edges = 0;   // member midpoints with both endpoint vertices members
    long dradius = 0;      // doubled max distance from the seed over all members
    bool stabilized = false;  // exploration exhausted the frontier below the cap
};

// The set of points x with d(x, b_i x) <= r_i for all i, found by breadth
// first search from a certified interior point (Helly median of pairwise
// intersection points).  Throws if more than `cap` points are visited.
TubeReport tube_report_bfs(const QuadCtx& qc, const std::vector<Endo>& endos,
                           const std::vector<long>& radii, long cap = 2000000);

// Vertex count only.
mpz_class tube_count_bfs(const QuadCtx& qc, const std::vector<Endo>& endos,
                         const std::vector<long>& radii, long cap = 2000000);

// All points within doubled distance dradius of center (BFS ball).
std::vector<Point> points_in_ball(const QuadCtx& qc, const Point& center, long dradius,
                                  long cap = 2000000);

// Closed tube counts.
mpz_class closed_count_odd_r1(const PrimeContext& ctx, long r1);
// Valid in the regime r_i even, chi(-e1 e2) = -1, chi(-e1 e3) = +1.
mpz_class closed_count_case1(const PrimeContext& ctx, long r1, long r2, long r3);

// Working precision that keeps all tube computations for the given spec away
// from truncation.
int suggested_precision(const TripleSpec& spec);

}  // namespace qpl
