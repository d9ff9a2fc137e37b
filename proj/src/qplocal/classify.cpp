#include "classify.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace qpl {

namespace {

// chi(-e_i e_j) from the delta classes of two unit entries
int chi_minus_product(const PrimeContext& ctx, bool di, bool dj) {
    int c = chi(ctx, mpz_class(-1));
    if (di != dj) c = -c;
    return c;
}

}  // namespace

CycleClassification classify_cycle(const PrimeContext& ctx, const SymForm& T, CycleCase c) {
    if (T.det() == 0) throw std::invalid_argument("nonsingular T required");
    CycleClassification out;
    if (!T.p_integral(ctx.p)) {
        out.locus = CycleLocus::Empty;
        out.reasons.push_back("T is not p-adically integral");
        return out;
    }
    DiagonalForm D = diagonalize(ctx, T);
    std::vector<int> units;
    for (int i = 0; i < D.rank(); ++i)
        if (D.d[i].a == 0) units.push_back(i);
    if (units.size() >= 3) {
        out.locus = CycleLocus::Empty;
        out.reasons.push_back("reduction mod p has rank >= 3");
        return out;
    }
    if (units.size() == 2 &&
        chi_minus_product(ctx, D.d[units[0]].delta, D.d[units[1]].delta) == -1) {
        out.locus = CycleLocus::Empty;
        out.reasons.push_back("rank-2 reduction is anisotropic mod p");
        return out;
    }
    if (!units.empty()) {
        out.locus = CycleLocus::IsolatedSuperspecial;
        out.reasons.push_back("nonzero reduction mod p confines the cycle to superspecial points");
        return out;
    }
    if (c == CycleCase::Split) {
        out.locus = CycleLocus::IsolatedSuperspecial;
        out.reasons.push_back("split residue place: always finitely many isolated points");
        return out;
    }
    out.locus = CycleLocus::ContainsComponents;
    out.reasons.push_back("T vanishes mod p: the cycle contains whole components");
    return out;
}

bool hz_irreducible(const PrimeContext& ctx, const DiagonalForm& T) {
    if (T.rank() != 3) throw std::invalid_argument("rank-3 diagonal form required");
    for (int i = 1; i < 3; ++i)
        if (T.d[i].a < T.d[i - 1].a) throw std::invalid_argument("exponents must be sorted");
    if (T.d[0].a < 1) throw std::domain_error("T must vanish mod p");
    long a3 = T.d[2].a;
    if (T.d[0].a != 1 || T.d[1].a != 1 || a3 % 2 == 0) return false;
    if (chi_minus_product(ctx, T.d[0].delta, T.d[1].delta) == -1 && a3 != 1) return false;
    return true;
}

bool siegel_irreducible(const PrimeContext& ctx, const DiagonalForm& T) {
    if (T.rank() != 4) throw std::invalid_argument("rank-4 diagonal form required");
    for (int i = 1; i < 4; ++i)
        if (T.d[i].a < T.d[i - 1].a) throw std::invalid_argument("exponents must be sorted");
    long a1 = T.d[0].a, a2 = T.d[1].a, a3 = T.d[2].a, a4 = T.d[3].a;
    if (a1 % 2 == 0) {
        if (a1 != 0) return false;
        if (chi(ctx, mpz_class(T.d[0].delta ? ctx.delta : 1)) != -1) return false;
        if (a2 % 2 == 0 || a3 % 2 == 0 || a4 % 2 == 0) return false;
        if (chi_minus_product(ctx, T.d[1].delta, T.d[2].delta) == 1) return a3 == 1;
        return a4 == 1;
    }
    if (a1 != 1) return false;
    if (chi_minus_product(ctx, T.d[0].delta, T.d[1].delta) == 1) return a2 == 1;
    return a3 == 1;
}

std::vector<Place> diff_set(const std::vector<mpq_class>& t, const std::vector<mpq_class>& ambient) {
    if (t.size() != 3 || ambient.size() != 4)
        throw std::invalid_argument("rank-3 target and rank-4 ambient expected");
    for (const mpq_class& e : t)
        if (e == 0) throw std::invalid_argument("nonsingular target required");
    std::set<long> primes = {2};
    auto collect = [&primes](mpz_class n) {
        n = abs(n);
        for (long d = 2; mpz_class(d) * d <= n; ++d)
            while (n % d == 0) {
                primes.insert(d);
                n /= d;
            }
        if (n > 1) primes.insert(n.get_si());
    };
    for (const mpq_class& e : t) {
        collect(e.get_num());
        collect(e.get_den());
    }
    for (const mpq_class& e : ambient) {
        collect(e.get_num());
        collect(e.get_den());
    }
    std::vector<Place> out;
    for (long q : primes)
        if (!represents_ternary_in_quaternary(t, ambient, Place::finite(q)))
            out.push_back(Place::finite(q));
    bool posdef = std::all_of(t.begin(), t.end(), [](const mpq_class& e) { return e > 0; });
    if (!posdef) out.push_back(Place::infinite());
    std::sort(out.begin(), out.end());
    return out;
}

RegularityResult is_regular(const std::vector<mpq_class>& t, const std::vector<mpq_class>& ambient,
                            const mpz_class& N) {
    RegularityResult r;
    r.diff = diff_set(t, ambient);
    if (r.diff.size() != 1 || r.diff[0].real) {
        r.reason = "failure set is not a single finite place";
        return r;
    }
    long q = r.diff[0].q;
    if (!is_odd_prime(q)) {
        r.reason = "even residue place unsupported";
        return r;
    }
    if (N % q == 0) {
        r.reason = "place divides the level";
        return r;
    }
    mpq_class det = 1;
    for (const mpq_class& e : ambient) det *= e;
    PrimeContext cq = PrimeContext::make(q);
    mpq_class u = det / pow_q(q, ordp(det, q));
    bool inert = (chi(cq, u) == -1);
    if (inert) {
        bool divides_all = true;
        for (const mpq_class& e : t)
            if (ordp(e, q) < 1) divides_all = false;
        if (divides_all) {
            r.reason = "inert place divides the target";
            return r;
        }
    }
    r.regular = true;
    r.reason = "single finite place, level coprime, inert divisibility clause satisfied";
    return r;
}

}  // namespace qpl
