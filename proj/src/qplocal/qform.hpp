#pragma once

#include <optional>
#include <string>
#include <vector>

#include "padic.hpp"

namespace qpl {

// Symmetric matrix of rationals in the half-Gram convention: the (i,i) entry
// is Q(e_i) and the (i,j) entry is half the polar pairing.  All density and
// representability computations are pinned to this convention (validated
// against the closed forms by the brute-force oracle).
struct SymForm {
    int n = 0;
    std::vector<mpq_class> g;  // row-major, n*n, symmetric

    SymForm() = default;
    explicit SymForm(int n_) : n(n_), g(n_ * n_, 0) {}
    static SymForm diagonal(const std::vector<mpq_class>& d);
    mpq_class& at(int i, int j) { return g[i * n + j]; }
    const mpq_class& at(int i, int j) const { return g[i * n + j]; }
    mpq_class det() const;
    bool p_integral(long p) const;
    std::string str() const;
};

// GL_n(Z_p)-normal form diag(eps_i p^{a_i}) with eps_i in {1, Delta}.
struct DiagTerm {
    long a = 0;
    bool delta = false;  // unit class: false -> 1, true -> Delta

    bool operator==(const DiagTerm& o) const { return a == o.a && delta == o.delta; }
    bool operator<(const DiagTerm& o) const {
        if (a != o.a) return a < o.a;
        return delta < o.delta;  // class 1 sorts before class Delta
    }
};

struct DiagonalForm {
    std::vector<DiagTerm> d;

    int rank() const { return static_cast<int>(d.size()); }
    mpz_class entry(const PrimeContext& ctx, int i) const {
        return (d[i].delta ? mpz_class(ctx.delta) : mpz_class(1)) * ctx.pow(d[i].a);
    }
    std::vector<mpq_class> entries(const PrimeContext& ctx) const;
    SymForm to_sym(const PrimeContext& ctx) const;
    long ord_det() const;
    std::string str() const;  // e.g. "1,D*p,p^3"
    bool operator==(const DiagonalForm& o) const { return d == o.d; }
};

struct LocalInvariants {
    int rank = 0;
    long det_ord = 0;       // ordp of det
    bool det_delta = false; // unit class of det / p^det_ord
    int hasse = 1;
};

DiagonalForm diagonalize(const PrimeContext& ctx, const SymForm& T);
LocalInvariants local_invariants(const PrimeContext& ctx, const DiagonalForm& D);

// Hasse invariant of a diagonal form with arbitrary rational entries, at any
// place: product over i<j of (d_i, d_j)_v.
int hasse_invariant(const std::vector<mpq_class>& diag, const Place& v);

enum class Space { VPlus, VMinus };  // VPlus: matrix diag(1,-1,1,-Delta); VMinus: diag(1,-1,p,-p Delta)

// Explicit character criterion for which of the two quaternary spaces (same
// det class Delta, opposite Hasse invariants) represents a nonsingular
// ternary T = diag(eps_i p^{a_i}).  Exactly one of them does.
bool represents_locally(const PrimeContext& ctx, const DiagonalForm& T, Space s);

// Invariant-based test: nondegenerate ternary t represented by quaternary q
// over the completion at v iff q is equivalent to t + <det t * det q>.
// Both forms given by diagonal rational entries.
bool represents_ternary_in_quaternary(const std::vector<mpq_class>& t,
                                      const std::vector<mpq_class>& q, const Place& v);

// Ramification set of the cyclic algebra (-a1 a2, -a2 a3).
std::vector<Place> quaternion_invariant(const mpq_class& a1, const mpq_class& a2,
                                        const mpq_class& a3);

// --- small quadratic equation solvers --------------------------------------

// Solve a x^2 + b y^2 = m over Q_p (a, b, m nonzero rationals).  Returns a
// solution as truncated p-adics at precision t, or nullopt exactly when the
// Hilbert criterion (a m, -a b)_p = 1 fails.
struct BinarySolution {
    PadicApprox x, y;
};
std::optional<BinarySolution> solve_binary(const PrimeContext& ctx, const mpq_class& a,
                                           const mpq_class& b, const mpq_class& m, int t);

// Solve q1 x^2 + q2 y^2 + q3 z^2 = m over Q_p.
struct TernarySolution {
    PadicApprox x, y, z;
};
std::optional<TernarySolution> solve_ternary(const PrimeContext& ctx,
                                             const std::vector<mpq_class>& q,
                                             const mpq_class& m, int t);

// Find x in Z_p^m with sum s_i x_i^2 = eps (unit) mod p^t, by search mod p
// plus a Hensel lift on a coordinate with invertible derivative; then return
// the diagonal form of the orthogonal complement of x.  Used by the density
// reduction step.
struct UnimodularSplit {
    std::vector<mpz_class> witness;  // mod p^t
    DiagonalForm complement;
};
std::optional<UnimodularSplit> split_unimodular(const PrimeContext& ctx,
                                                const std::vector<mpq_class>& s_diag,
                                                const mpq_class& eps, int t);

// CLI form literal: comma-separated tokens, each a rational possibly scaled
// by powers of "p" and the unit "D", e.g. "1,D*p,p^3" or "1,1,p".
DiagonalForm parse_form(const PrimeContext& ctx, const std::string& text);
SymForm parse_gram(const std::string& text);  // row-major "a,b,...;..." rationals

}  // namespace qpl
