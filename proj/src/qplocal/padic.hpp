#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "rationals.hpp"

namespace qpl {

inline constexpr long kInfOrd = std::numeric_limits<long>::max();

// Root object for all local computations: an odd prime p together with a
// fixed non-square unit Delta mod p (smallest positive non-residue unless
// overridden) and a default working precision exponent.
struct PrimeContext {
    long p = 3;
    long delta = 2;
    int precision = 12;

    static PrimeContext make(long p, long delta_override = 0, int precision = 12);

    mpz_class pow(long e) const { return pow_z(p, static_cast<unsigned long>(e)); }
};

bool is_odd_prime(long p);
long smallest_nonresidue(long p);

// p-adic valuation; kInfOrd for zero.
long ordp(const mpz_class& x, long p);
long ordp(const mpq_class& x, long p);

// Unit part x / p^ordp(x) of a nonzero p-adic rational, reduced mod p^t.
mpz_class unit_part(const mpq_class& x, long p, int t);

// Quadratic residue character of a unit, +-1.  Rejects non-units.
int chi(const PrimeContext& ctx, const mpz_class& u);
int chi(const PrimeContext& ctx, const mpq_class& u);

// Truncated p-adic scalar: exact valuation plus a unit residue mod p^t.
// Plumbing type used at API boundaries (JSON, bindings); the heavy modules
// work directly with mpz/mpq residues.
struct PadicScalar {
    long p = 3;
    long val = kInfOrd;     // kInfOrd encodes zero
    mpz_class unit = 0;     // coprime to p when val finite, reduced mod p^t
    int t = 12;

    static PadicScalar zero(long p, int t);
    static PadicScalar from_rational(const mpq_class& q, long p, int t);
    bool is_zero() const { return val == kInfOrd; }
    mpq_class to_rational() const;  // representative p^val * unit
    PadicScalar mul(const PadicScalar& o) const;
    PadicScalar add(const PadicScalar& o) const;
    std::string str() const;
};

struct Place {
    bool real = false;
    long q = 0;  // finite prime when !real

    static Place infinite() { return Place{true, 0}; }
    static Place finite(long q) { return Place{false, q}; }
    bool operator==(const Place& o) const { return real == o.real && q == o.q; }
    bool operator<(const Place& o) const {
        if (real != o.real) return o.real;  // finite places sort before the real one
        return q < o.q;
    }
    std::string str() const { return real ? "infinity" : std::to_string(q); }
};

// Standard Hilbert symbol (a,b)_v on nonzero rationals.
int hilbert_symbol(const mpq_class& a, const mpq_class& b, const Place& v);

// Places where (a,b) can possibly be -1: 2, infinity and odd primes dividing
// the numerators or denominators.  Used for product-formula checks and
// quaternion ramification.
std::vector<Place> candidate_places(const mpq_class& a, const mpq_class& b);

// --- Hensel lifting helpers ------------------------------------------------

// Square root of a unit square mod p^t, given a starting root mod p.
mpz_class lift_sqrt(long p, int t, const mpz_class& target, const mpz_class& x0);

// Full square-root of a p-adic rational square: returns s with s^2 = x as an
// exact valuation plus residue pair, or nullopt when x is not a square.
struct PadicApprox {
    mpz_class u;  // residue mod p^t
    long e = 0;   // value = u * p^{-e}
};
std::optional<PadicApprox> padic_sqrt(const PrimeContext& ctx, const mpq_class& x, int t);

// --- Unramified quadratic extension ----------------------------------------

// Arithmetic in Z_{p^2} = Z_p[delta]/(delta^2 - Delta) truncated mod p^N.
// Elements are pairs x + y*delta with x, y residues mod p^N.
struct QuadCtx {
    long p;
    long delta;
    int N;
    mpz_class pN;

    QuadCtx(const PrimeContext& c, int N_)
        : p(c.p), delta(c.delta), N(N_), pN(pow_z(c.p, static_cast<unsigned long>(N_))) {}
};

struct Qx {
    mpz_class x = 0;
    mpz_class y = 0;
};

Qx qred(const QuadCtx& c, const Qx& a);
Qx qadd(const QuadCtx& c, const Qx& a, const Qx& b);
Qx qsub(const QuadCtx& c, const Qx& a, const Qx& b);
Qx qmul(const QuadCtx& c, const Qx& a, const Qx& b);
Qx qconj(const QuadCtx& c, const Qx& a);
mpz_class qnorm(const QuadCtx& c, const Qx& a);     // a * conj(a), the x-component
long qord(const QuadCtx& c, const Qx& a);           // min of component valuations, capped at N
bool qis_unit(const QuadCtx& c, const Qx& a);
Qx qinv_unit(const QuadCtx& c, const Qx& a);        // inverse of a unit
Qx qdiv_p(const QuadCtx& c, const Qx& a, long k);   // exact division by p^k

// u in Z_{p^2}^x with Nm(u) = x^2 - Delta y^2 congruent to eps mod p^N.
// The norm is surjective on units of the unramified extension, so this never
// fails for unit eps.
Qx norm_preimage(const QuadCtx& c, const mpz_class& eps);

}  // namespace qpl
