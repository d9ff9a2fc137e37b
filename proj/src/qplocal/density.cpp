#include "density.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>

namespace qpl {

// --- polynomial arithmetic ---------------------------------------------------

mpq_class DensityPolynomial::eval(const mpq_class& X) const {
    mpq_class acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * X + *it;
    return acc;
}

mpq_class DensityPolynomial::derivative_at_one() const {
    mpq_class acc = 0;
    for (size_t k = 1; k < c.size(); ++k) acc += mpq_class(static_cast<long>(k)) * c[k];
    return acc;
}

DensityPolynomial DensityPolynomial::mul(const DensityPolynomial& o) const {
    DensityPolynomial r;
    if (c.empty() || o.c.empty()) return r;
    r.c.assign(c.size() + o.c.size() - 1, 0);
    for (size_t i = 0; i < c.size(); ++i)
        for (size_t j = 0; j < o.c.size(); ++j) r.c[i + j] += c[i] * o.c[j];
    r.trim();
    return r;
}

void DensityPolynomial::add_term(long k, const mpq_class& v) {
    if (static_cast<size_t>(k) >= c.size()) c.resize(k + 1, 0);
    c[k] += v;
}

void DensityPolynomial::trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

bool DensityPolynomial::operator==(const DensityPolynomial& o) const {
    DensityPolynomial a = *this, b = o;
    a.trim();
    b.trim();
    return a.c == b.c;
}

std::string DensityPolynomial::str() const {
    if (c.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t k = 0; k < c.size(); ++k) {
        if (c[k] == 0) continue;
        if (!first) os << " + ";
        os << rat_str(c[k]);
        if (k >= 1) os << "*X";
        if (k >= 2) os << "^" << k;
        first = false;
    }
    if (first) return "0";
    return os.str();
}

DensityPolynomial DensityPolynomial::constant(const mpq_class& v, std::string prov) {
    DensityPolynomial r;
    r.c = {v};
    r.provenance = std::move(prov);
    r.trim();
    return r;
}

// --- brute-force counting ----------------------------------------------------

namespace {

using ll = long long;

struct Budget {
    long remaining;
    void spend(long n) {
        remaining -= n;
        if (remaining < 0) throw BudgetError("counting budget exceeded; reduce t or disable stability check");
    }
};

ll rat_mod(const mpq_class& q, const mpz_class& P) {
    mpz_class num = q.get_num() % P;
    if (num < 0) num += P;
    mpz_class den = q.get_den() % P;
    mpz_class r = (num * invert_z(den, P)) % P;
    return r.get_si();
}

ll qform_val(const std::vector<ll>& s, const std::vector<ll>& x, ll P) {
    ll acc = 0;
    for (size_t k = 0; k < s.size(); ++k) acc = (acc + ((s[k] * x[k]) % P) * x[k]) % P;
    return acc;
}

int val_of(ll x, ll p, int t) {
    if (x == 0) return t;
    int v = 0;
    while (x % p == 0 && v < t) {
        x /= p;
        ++v;
    }
    return v;
}

// Solutions of A x = c over Z/p^t, A of shape k x m, as an affine set
// x0 + span of gens with the listed multiplicities.
struct LinSol {
    bool ok = false;
    std::vector<ll> x0;
    std::vector<std::vector<ll>> gens;
    std::vector<ll> counts;
    ll total = 0;
};

LinSol solve_linear(std::vector<std::vector<ll>> A, std::vector<ll> c, ll p, int t, ll P) {
    const int k = static_cast<int>(A.size());
    const int m = static_cast<int>(A[0].size());
    std::vector<std::vector<ll>> V(m, std::vector<ll>(m, 0));
    for (int i = 0; i < m; ++i) V[i][i] = 1;
    std::vector<ll> ppow(t + 1, 1);
    for (int i = 1; i <= t; ++i) ppow[i] = ppow[i - 1] * p;

    std::vector<int> pivd(k, t);
    int r = 0;
    for (; r < k; ++r) {
        int bi = -1, bj = -1, bv = t;
        for (int i = r; i < k; ++i)
            for (int j = r; j < m; ++j) {
                int v = val_of(A[i][j], p, t);
                if (v < bv) {
                    bv = v;
                    bi = i;
                    bj = j;
                }
            }
        if (bi < 0) break;  // remaining block is zero
        std::swap(A[r], A[bi]);
        std::swap(c[r], c[bi]);
        for (int i = 0; i < k; ++i) std::swap(A[i][r], A[i][bj]);
        for (int i = 0; i < m; ++i) std::swap(V[i][r], V[i][bj]);
        const int d = bv;
        pivd[r] = d;
        ll u = A[r][r] / ppow[d];
        mpz_class uinv_z = invert_z(mpz_class(static_cast<long>(u)), mpz_class(static_cast<long>(P)));
        ll uinv = uinv_z.get_si();
        for (int i = 0; i < k; ++i) A[i][r] = (A[i][r] % P) * uinv % P;
        for (int i = 0; i < m; ++i) V[i][r] = (V[i][r] % P) * uinv % P;
        for (int j = r + 1; j < m; ++j) {
            if (A[r][j] == 0) continue;
            ll f = A[r][j] / ppow[d];
            for (int i = 0; i < k; ++i) A[i][j] = ((A[i][j] - f * A[i][r]) % P + P) % P;
            for (int i = 0; i < m; ++i) V[i][j] = ((V[i][j] - f * V[i][r]) % P + P) % P;
        }
        for (int i = r + 1; i < k; ++i) {
            if (A[i][r] == 0) continue;
            ll f = A[i][r] / ppow[d];
            for (int j = 0; j < m; ++j) A[i][j] = ((A[i][j] - f * A[r][j]) % P + P) % P;
            c[i] = ((c[i] - f * c[r]) % P + P) % P;
        }
    }

    LinSol sol;
    std::vector<ll> y0(m, 0);
    for (int i = 0; i < k; ++i) {
        int d = (i < r) ? pivd[i] : t;
        ll ci = ((c[i] % P) + P) % P;
        if (ci % ppow[d] != 0) return sol;  // ok = false
        if (i < r) y0[i] = ci / ppow[d];
    }
    sol.ok = true;
    sol.x0.assign(m, 0);
    for (int i = 0; i < m; ++i) {
        ll acc = 0;
        for (int j = 0; j < m; ++j) acc = (acc + V[i][j] * y0[j]) % P;
        sol.x0[i] = acc;
    }
    sol.total = 1;
    for (int j = 0; j < m; ++j) {
        int d = (j < r) ? pivd[j] : t;
        if (d == 0) continue;  // unique coordinate
        std::vector<ll> g(m);
        ll step = ppow[t - d];
        for (int i = 0; i < m; ++i) g[i] = (V[i][j] * step) % P;
        sol.gens.push_back(std::move(g));
        sol.counts.push_back(ppow[d]);
        sol.total *= ppow[d];
    }
    return sol;
}

template <class F>
void enum_linear(const LinSol& sol, ll P, Budget& budget, F&& f) {
    const int m = static_cast<int>(sol.x0.size());
    const int R = static_cast<int>(sol.gens.size());
    budget.spend(static_cast<long>(std::min<ll>(sol.total * (m + 2), 1LL << 60)));
    std::vector<ll> lam(R, 0);
    std::vector<ll> x(m);
    for (;;) {
        for (int i = 0; i < m; ++i) {
            ll acc = sol.x0[i];
            for (int r = 0; r < R; ++r) acc += sol.gens[r][i] * lam[r] % P;
            x[i] = acc % P;
        }
        f(x);
        int r = 0;
        while (r < R && ++lam[r] == sol.counts[r]) lam[r++] = 0;
        if (r == R) break;
    }
}

// Enumerate x in (Z/P)^m with sum s_k x_k^2 = target, by free choice of the
// first m-1 coordinates and a root table for the last.
template <class F>
void enum_quadric(const std::vector<ll>& s, ll P, ll target, Budget& budget, F&& f) {
    const int m = static_cast<int>(s.size());
    std::vector<std::vector<ll>> roots(P);
    for (ll x = 0; x < P; ++x) roots[(s[m - 1] * x % P) * x % P].push_back(x);
    std::vector<ll> x(m, 0);
    std::function<void(int, ll)> rec = [&](int k, ll partial) {
        if (k == m - 1) {
            budget.spend(2);
            for (ll last : roots[((target - partial) % P + P) % P]) {
                x[m - 1] = last;
                f(x);
            }
            return;
        }
        budget.spend(P);
        for (ll v = 0; v < P; ++v) {
            x[k] = v;
            rec(k + 1, (partial + (s[k] * v % P) * v) % P);
        }
    };
    rec(0, 0);
}

mpz_class count_at(const PrimeContext& ctx, const std::vector<mpq_class>& sdiag,
                   const SymForm& T, int t, Budget& budget) {
    const ll p = ctx.p;
    ll P = 1;
    for (int i = 0; i < t; ++i) P *= p;
    const mpz_class Pz = static_cast<long>(P);
    const int m = static_cast<int>(sdiag.size());
    const int n = T.n;
    std::vector<ll> s(m);
    for (int i = 0; i < m; ++i) s[i] = rat_mod(sdiag[i], Pz);
    std::vector<std::vector<ll>> tt(n, std::vector<ll>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) tt[i][j] = rat_mod(T.at(i, j), Pz);

    if (n == 1) {
        // per-coordinate histograms, convolved additively; exact big counts
        budget.spend(static_cast<long>(m) * P * P);
        std::vector<mpz_class> dist(P, 0);
        dist[0] = 1;
        for (int k = 0; k < m; ++k) {
            std::vector<ll> cnt(P, 0);
            for (ll x = 0; x < P; ++x) ++cnt[(s[k] * x % P) * x % P];
            std::vector<mpz_class> nxt(P, 0);
            for (ll v = 0; v < P; ++v) {
                if (dist[v] == 0) continue;
                for (ll w = 0; w < P; ++w)
                    if (cnt[w]) nxt[(v + w) % P] += dist[v] * static_cast<long>(cnt[w]);
            }
            dist.swap(nxt);
        }
        return dist[tt[0][0]];
    }

    mpz_class total = 0;
    if (n == 2) {
        enum_quadric(s, P, tt[0][0], budget, [&](const std::vector<ll>& x1) {
            std::vector<std::vector<ll>> A(1, std::vector<ll>(m));
            for (int k = 0; k < m; ++k) A[0][k] = s[k] * x1[k] % P;
            LinSol sol = solve_linear(A, {tt[0][1]}, p, t, P);
            if (!sol.ok) return;
            enum_linear(sol, P, budget, [&](const std::vector<ll>& x2) {
                if (qform_val(s, x2, P) == tt[1][1]) ++total;
            });
        });
        return total;
    }
    if (n == 3) {
        enum_quadric(s, P, tt[0][0], budget, [&](const std::vector<ll>& x1) {
            std::vector<std::vector<ll>> A1(1, std::vector<ll>(m));
            for (int k = 0; k < m; ++k) A1[0][k] = s[k] * x1[k] % P;
            LinSol sol1 = solve_linear(A1, {tt[0][1]}, p, t, P);
            if (!sol1.ok) return;
            enum_linear(sol1, P, budget, [&](const std::vector<ll>& x2) {
                if (qform_val(s, x2, P) != tt[1][1]) return;
                std::vector<std::vector<ll>> A2(2, std::vector<ll>(m));
                A2[0] = A1[0];
                for (int k = 0; k < m; ++k) A2[1][k] = s[k] * x2[k] % P;
                LinSol sol2 = solve_linear(A2, {tt[0][2], tt[1][2]}, p, t, P);
                if (!sol2.ok) return;
                enum_linear(sol2, P, budget, [&](const std::vector<ll>& x3) {
                    if (qform_val(s, x3, P) == tt[2][2]) ++total;
                });
            });
        });
        return total;
    }
    throw std::invalid_argument("target rank must be 1, 2 or 3");
}

}  // namespace

CountResult density_bruteforce(const PrimeContext& ctx, const SymForm& S, const SymForm& T,
                               int t, bool check_stability, long budget) {
    if (t < 1) throw std::invalid_argument("t must be positive");
    if (!S.p_integral(ctx.p) || !T.p_integral(ctx.p))
        throw std::invalid_argument("both forms must be p-integral");
    if (T.n < 1 || T.n > 3) throw std::invalid_argument("target rank must be 1, 2 or 3");
    const int m = S.n;
    const int n = T.n;
    if (m <= n) throw std::invalid_argument("ambient rank must exceed target rank");
    // products of two residues must fit in long long
    mpz_class Pz = ctx.pow(t + (check_stability ? 1 : 0));
    if (Pz > 2000000) throw std::invalid_argument("t too large for the counting backend");

    DiagonalForm sd = diagonalize(ctx, S);
    std::vector<mpq_class> sdiag = sd.entries(ctx);

    Budget b{budget};
    CountResult r;
    r.t = t;
    r.count = count_at(ctx, sdiag, T, t, b);
    r.scale_exp = static_cast<long>(t) * (n * (n + 1) / 2 - m * n);
    r.density = mpq_class(r.count) * pow_q(ctx.p, r.scale_exp);
    r.stabilized = false;
    if (check_stability) {
        mpz_class c2 = count_at(ctx, sdiag, T, t + 1, b);
        long e2 = static_cast<long>(t + 1) * (n * (n + 1) / 2 - m * n);
        mpq_class d2 = mpq_class(c2) * pow_q(ctx.p, e2);
        r.stabilized = (d2 == r.density);
    }
    return r;
}

// --- closed forms ------------------------------------------------------------

std::vector<mpq_class> named_entries(const PrimeContext& ctx, NamedForm f) {
    const mpq_class D = ctx.delta;
    const mpq_class pp = ctx.p;
    switch (f) {
        case NamedForm::SPlus:
            return {1, -1, 1, -D};
        case NamedForm::H4:
            return {1, -1, 1, -1};
        case NamedForm::SLattice:
            return {1, 1, 1, D};
        case NamedForm::SMinus:
            return {1, -1, pp, -pp * D};
        case NamedForm::SAniso:
            return {1, D, pp, -pp * D};
    }
    throw std::logic_error("unknown form");
}

DensityPolynomial closed_form_unary(const PrimeContext& ctx, NamedForm f, bool eps_delta) {
    const mpq_class p2 = pow_q(ctx.p, -2);
    const mpq_class p1 = pow_q(ctx.p, -1);
    DensityPolynomial r;
    std::string unit = eps_delta ? "D" : "1";
    switch (f) {
        case NamedForm::SPlus:
        case NamedForm::SLattice:
            r.c = {1, p2};
            r.provenance = "unary density, unimodular det class D, unit " + unit;
            return r;
        case NamedForm::H4:
            r.c = {1, -p2};
            r.provenance = "unary density, unimodular det class 1, unit " + unit;
            return r;
        case NamedForm::SMinus:
            r.c = {1 - p1};
            r.provenance = "unary density, split p-scaled form, unit " + unit;
            return r;
        case NamedForm::SAniso:
            r.c = {1 + mpq_class(chi(ctx, mpz_class(-1))) * p1};
            r.provenance = "unary density, anisotropic form, unit " + unit;
            return r;
    }
    throw std::logic_error("unknown form");
}

DensityPolynomial kitaoka_quotient(const PrimeContext& ctx, int chi_u1, long a2, long a3,
                                   int chi_e2, int chi_e3) {
    if (a2 < 0 || a2 > a3) throw std::invalid_argument("need 0 <= a2 <= a3");
    const int chim1 = chi(ctx, mpz_class(-1));
    DensityPolynomial q;
    if (a2 % 2 == 0) {
        const int sigma = chim1 * chi_u1 * chi_e2;
        const int chiT = (a3 % 2 == 0) ? 1 : sigma;
        for (long l = 0; l < a2 / 2; ++l) {
            mpq_class pl = pow_q(ctx.p, l);
            q.add_term(2 * l, pl);
            q.add_term(a2 + a3 - 2 * l, mpq_class(chiT) * pl);
        }
        mpq_class ph = pow_q(ctx.p, a2 / 2);
        int sj = 1;
        for (long j = 0; j <= a3 - a2; ++j) {
            q.add_term(a2 + j, mpq_class(sj) * ph);
            sj *= sigma;
        }
    } else {
        const int chiT = (a3 % 2 == 0) ? chim1 * chi_u1 * chi_e3 : chim1 * chi_e2 * chi_e3;
        for (long l = 0; l <= (a2 - 1) / 2; ++l) {
            mpq_class pl = pow_q(ctx.p, l);
            q.add_term(2 * l, pl);
            q.add_term(a2 + a3 - 2 * l, mpq_class(chiT) * pl);
        }
    }
    q.trim();
    q.provenance = "binary quotient polynomial";
    return q;
}

DensityPolynomial kitaoka_H4(const PrimeContext& ctx, const DiagonalForm& T) {
    if (T.rank() != 3 || T.d[0].a != 0)
        throw NotReducible("quotient needs a rank-3 target with unimodular leading entry");
    int chi_u1 = T.d[0].delta ? -1 : 1;
    int chi_e2 = T.d[1].delta ? -1 : 1;
    int chi_e3 = T.d[2].delta ? -1 : 1;
    return kitaoka_quotient(ctx, chi_u1, T.d[1].a, T.d[2].a, chi_e2, chi_e3);
}

DensityPolynomial closed_form_ternary(const PrimeContext& ctx, NamedForm f, const DiagonalForm& T) {
    if (f == NamedForm::SMinus || f == NamedForm::SAniso)
        throw NotReducible("closed polynomial only available for the unimodular forms");
    if (T.rank() != 3 || T.d[0].a != 0)
        throw NotReducible("rank-3 target with unimodular leading entry required");

    static std::mutex mu;
    static std::map<std::string, DensityPolynomial> cache;
    std::ostringstream key;
    key << ctx.p << ":" << ctx.delta << ":" << static_cast<int>(f) << ":" << T.str();
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = cache.find(key.str());
        if (it != cache.end()) return it->second;
    }

    const bool det_delta = (f != NamedForm::H4);
    int chi_e1 = T.d[0].delta ? -1 : 1;
    // leading unit of the rank-3 form the hyperbolic-family quotient sees:
    // eps1 * Delta for the det-D ambient, eps1 itself for H4
    int chi_u1 = det_delta ? -chi_e1 : chi_e1;
    int chi_e2 = T.d[1].delta ? -1 : 1;
    int chi_e3 = T.d[2].delta ? -1 : 1;

    DensityPolynomial pre;
    const mpq_class p2 = pow_q(ctx.p, -2);
    pre.c = det_delta ? std::vector<mpq_class>{1, p2} : std::vector<mpq_class>{1, -p2};
    DensityPolynomial deg2;
    deg2.c = {1, 0, -p2};
    DensityPolynomial q = kitaoka_quotient(ctx, chi_u1, T.d[1].a, T.d[2].a, chi_e2, chi_e3);
    DensityPolynomial out = pre.mul(deg2).mul(q);
    out.provenance = "assembled rank-3 density polynomial";

    std::lock_guard<std::mutex> lk(mu);
    cache.emplace(key.str(), out);
    return out;
}

ReducedDensity reduce(const PrimeContext& ctx, NamedForm f, const DiagonalForm& T) {
    if (T.rank() != 3) throw NotReducible("reduction implemented for rank-3 targets");
    if (T.d[0].a != 0) throw NotReducible("no unimodular block to split off");
    const bool eps1_delta = T.d[0].delta;

    ReducedDensity out;
    if (f == NamedForm::SPlus || f == NamedForm::SLattice || f == NamedForm::H4) {
        DensityPolynomial unary = closed_form_unary(ctx, f, eps1_delta);
        DensityPolynomial deg2;
        deg2.c = {1, 0, -pow_q(ctx.p, -2)};
        deg2.provenance = "hyperbolic complement degree factor";
        DensityPolynomial q = closed_form_ternary(ctx, f, T);
        // report the assembled polynomial together with its labeled pieces
        out.factors.push_back({"unary split factor", unary, false});
        out.factors.push_back({"complement degree factor", deg2, false});
        // the quotient sees the leading unit eps1 * det-class of the ambient
        bool u1_delta = (f == NamedForm::H4) ? eps1_delta : !eps1_delta;
        DiagonalForm Tq{{DiagTerm{0, u1_delta}, T.d[1], T.d[2]}};
        out.factors.push_back({"binary quotient", kitaoka_H4(ctx, Tq), false});
        out.value = q;
        out.represented = represents_ternary_in_quaternary(T.entries(ctx), named_entries(ctx, f),
                                                           Place::finite(ctx.p));
        return out;
    }
    if (f == NamedForm::SMinus) {
        const int chim1 = chi(ctx, mpz_class(-1));
        const mpq_class p1 = pow_q(ctx.p, -1);
        DensityPolynomial num1 = DensityPolynomial::constant(1 - p1, "unary split factor");
        DensityPolynomial den =
            DensityPolynomial::constant(1 + mpq_class(chim1) * p1, "anisotropic unary factor");
        out.factors.push_back({"unary split factor", num1, false});
        out.factors.push_back({"anisotropic unary factor", den, true});
        out.represented = represents_locally(ctx, T, Space::VMinus);
        if (out.represented) {
            mpq_class pair = 2 * (1 + mpq_class(chim1) * p1) * (ctx.p + 1);
            out.factors.push_back(
                {"anisotropic pair factor", DensityPolynomial::constant(pair), false});
            out.value = DensityPolynomial::constant(2 * pow_q(ctx.p, -1) * (mpq_class(ctx.p) * ctx.p - 1),
                                                    "ramified constant density");
        } else {
            out.value = DensityPolynomial::constant(0, "not represented");
        }
        return out;
    }
    throw NotReducible("no reduction path for the anisotropic form");
}

}  // namespace qpl
