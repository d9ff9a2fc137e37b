#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "qform.hpp"

namespace qpl {

struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exact polynomial in X with rational coefficients; evaluating at X = p^{-r}
// gives the density against S extended by r hyperbolic planes.
struct DensityPolynomial {
    std::vector<mpq_class> c;  // c[k] is the X^k coefficient
    std::string provenance;

    mpq_class eval(const mpq_class& X) const;
    mpq_class at_one() const { return eval(1); }
    mpq_class derivative_at_one() const;
    DensityPolynomial mul(const DensityPolynomial& o) const;
    void add_term(long k, const mpq_class& v);
    void trim();
    bool operator==(const DensityPolynomial& o) const;
    std::string str() const;

    static DensityPolynomial constant(const mpq_class& v, std::string prov = "");
};

struct CountResult {
    mpz_class count = 0;
    int t = 0;
    long scale_exp = 0;       // t * (n(n+1)/2 - m n)
    mpq_class density = 0;
    bool stabilized = false;  // set only by comparing against t+1
};

// Limit-definition counting oracle: number of x in (Z/p^t)^{m x n} with
// S[x] = T mod p^t (half-Gram convention), scaled by p^{t(n(n+1)/2 - mn)}.
// S may be any nonsingular p-integral form; it is diagonalized first, which
// leaves the density unchanged.  n <= 3.  Work is bounded by `budget`
// elementary steps; overruns throw BudgetError rather than truncate.
CountResult density_bruteforce(const PrimeContext& ctx, const SymForm& S, const SymForm& T,
                               int t, bool check_stability = true, long budget = 400000000L);

// The named quaternary forms the closed-form engine knows about.
enum class NamedForm {
    SPlus,     // diag(1,-1,1,-Delta): unimodular, det class Delta
    H4,        // diag(1,-1,1,-1): unimodular, det class 1
    SLattice,  // diag(1,1,1,Delta): same class as SPlus
    SMinus,    // diag(1,-1,p,-p Delta)
    SAniso,    // diag(1,Delta,p,-p Delta): anisotropic
};
std::vector<mpq_class> named_entries(const PrimeContext& ctx, NamedForm f);

// Unary density polynomials.  For the unimodular quaternaries the value is
// independent of the represented unit: 1 - chi(det S) p^{-2} X.  For the
// p-scaled pair the density is the constant 1 - p^{-1} resp.
// 1 + chi(-1) p^{-1}.
DensityPolynomial closed_form_unary(const PrimeContext& ctx, NamedForm f, bool eps_delta);

// Ternary-versus-hyperbolic quotient polynomial: density of T against
// H_{2r+4} divided by (1 - p^{-2}X)(1 - p^{-2}X^2), for
// T = diag(u1, e2 p^{a2}, e3 p^{a3}) with unit u1.  Character inputs are the
// chi values of u1, e2, e3.
DensityPolynomial kitaoka_quotient(const PrimeContext& ctx, int chi_u1, long a2, long a3,
                                   int chi_e2, int chi_e3);

// spec'd entry point: quotient polynomial for a rank-3 T with a1 = 0 against
// the H4 family, leading unit taken from T itself.
DensityPolynomial kitaoka_H4(const PrimeContext& ctx, const DiagonalForm& T);

// Assembled A_{S,T}(X) for the unimodular quaternaries (cached).
DensityPolynomial closed_form_ternary(const PrimeContext& ctx, NamedForm f, const DiagonalForm& T);

struct NotReducible : std::domain_error {
    using std::domain_error::domain_error;
};

struct ReductionFactor {
    std::string label;
    DensityPolynomial poly;
    bool denominator = false;
};

struct ReducedDensity {
    std::vector<ReductionFactor> factors;
    DensityPolynomial value;   // assembled product (a constant for SMinus)
    bool represented = true;   // rank-3 target represented by the space of S
};

// Split the unit leading block off T and express the density as a labeled
// product of known factors.  Requires a unimodular leading block (a1 = 0).
ReducedDensity reduce(const PrimeContext& ctx, NamedForm f, const DiagonalForm& T);

}  // namespace qpl
