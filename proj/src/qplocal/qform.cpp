#include "qform.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace qpl {

SymForm SymForm::diagonal(const std::vector<mpq_class>& d) {
    SymForm s(static_cast<int>(d.size()));
    for (int i = 0; i < s.n; ++i) s.at(i, i) = d[i];
    return s;
}

mpq_class SymForm::det() const {
    std::vector<mpq_class> a = g;
    int m = n;
    mpq_class result = 1;
    for (int k = 0; k < m; ++k) {
        int piv = -1;
        for (int i = k; i < m; ++i)
            if (a[i * m + k] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) return 0;
        if (piv != k) {
            for (int j = 0; j < m; ++j) std::swap(a[piv * m + j], a[k * m + j]);
            result = -result;
        }
        result *= a[k * m + k];
        for (int i = k + 1; i < m; ++i) {
            mpq_class f = a[i * m + k] / a[k * m + k];
            for (int j = k; j < m; ++j) a[i * m + j] -= f * a[k * m + j];
        }
    }
    return result;
}

bool SymForm::p_integral(long p) const {
    for (const auto& q : g)
        if (q != 0 && ordp(q, p) < 0) return false;
    return true;
}

std::string SymForm::str() const {
    std::ostringstream os;
    for (int i = 0; i < n; ++i) {
        if (i) os << ";";
        for (int j = 0; j < n; ++j) {
            if (j) os << ",";
            os << rat_str(at(i, j));
        }
    }
    return os.str();
}

std::vector<mpq_class> DiagonalForm::entries(const PrimeContext& ctx) const {
    std::vector<mpq_class> out;
    for (int i = 0; i < rank(); ++i) out.emplace_back(entry(ctx, i));
    return out;
}

SymForm DiagonalForm::to_sym(const PrimeContext& ctx) const { return SymForm::diagonal(entries(ctx)); }

long DiagonalForm::ord_det() const {
    long s = 0;
    for (const auto& t : d) s += t.a;
    return s;
}

std::string DiagonalForm::str() const {
    std::ostringstream os;
    for (size_t i = 0; i < d.size(); ++i) {
        if (i) os << ",";
        if (d[i].delta) os << "D";
        if (d[i].a == 0) {
            if (!d[i].delta) os << "1";
        } else {
            if (d[i].delta) os << "*";
            os << "p";
            if (d[i].a != 1) os << "^" << d[i].a;
        }
    }
    return os.str();
}

DiagonalForm diagonalize(const PrimeContext& ctx, const SymForm& T) {
    if (!T.p_integral(ctx.p))
        throw std::domain_error("form is not p-integral at p=" + std::to_string(ctx.p));
    int n = T.n;
    std::vector<mpq_class> g = T.g;
    auto at = [&](int i, int j) -> mpq_class& { return g[i * n + j]; };
    auto swap_basis = [&](int i, int j) {
        if (i == j) return;
        for (int k = 0; k < n; ++k) std::swap(at(i, k), at(j, k));
        for (int k = 0; k < n; ++k) std::swap(at(k, i), at(k, j));
    };
    // e_i <- e_i + c e_j acting on the Gram matrix: row then column update
    auto add_basis = [&](int i, int j, const mpq_class& c) {
        for (int k = 0; k < n; ++k) at(i, k) += c * at(j, k);
        for (int k = 0; k < n; ++k) at(k, i) += c * at(k, j);
    };

    std::vector<mpq_class> diag;
    for (int k = 0; k < n; ++k) {
        // pivot of minimal valuation in the trailing block, diagonal preferred
        long best = kInfOrd;
        int bi = -1, bj = -1;
        for (int i = k; i < n; ++i)
            for (int j = i; j < n; ++j) {
                if (at(i, j) == 0) continue;
                long v = ordp(at(i, j), ctx.p);
                bool better = v < best || (v == best && bi != bj && i == j);
                if (better) {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        if (bi < 0) throw std::domain_error("singular form cannot be diagonalized to a normal form");
        if (bi != bj) {
            // off-diagonal minimum: e_bi <- e_bi + e_bj gives Q(e_bi) with the
            // minimal valuation, because 2*g_ij dominates (p odd)
            add_basis(bi, bj, 1);
            assert(ordp(at(bi, bi), ctx.p) == best);
        }
        swap_basis(k, bi);
        for (int i = k + 1; i < n; ++i) {
            if (at(i, k) == 0) continue;
            mpq_class c = -at(i, k) / at(k, k);
            add_basis(i, k, c);
        }
        diag.push_back(at(k, k));
    }

    DiagonalForm D;
    for (const auto& q : diag) {
        DiagTerm t;
        t.a = ordp(q, ctx.p);
        t.delta = chi(ctx, unit_part(q, ctx.p, 1)) == -1;
        D.d.push_back(t);
    }
    std::sort(D.d.begin(), D.d.end());
    return D;
}

LocalInvariants local_invariants(const PrimeContext& ctx, const DiagonalForm& D) {
    LocalInvariants inv;
    inv.rank = D.rank();
    mpq_class det = 1;
    auto es = D.entries(ctx);
    for (const auto& e : es) det *= e;
    inv.det_ord = ordp(det, ctx.p);
    inv.det_delta = chi(ctx, unit_part(det, ctx.p, 1)) == -1;
    inv.hasse = hasse_invariant(es, Place::finite(ctx.p));
    return inv;
}

int hasse_invariant(const std::vector<mpq_class>& diag, const Place& v) {
    int h = 1;
    for (size_t i = 0; i < diag.size(); ++i)
        for (size_t j = i + 1; j < diag.size(); ++j) h *= hilbert_symbol(diag[i], diag[j], v);
    return h;
}

bool represents_locally(const PrimeContext& ctx, const DiagonalForm& T, Space s) {
    if (T.rank() != 3) throw std::invalid_argument("represents_locally needs rank 3");
    long a1 = T.d[0].a, a2 = T.d[1].a, a3 = T.d[2].a;
    int ce1 = T.d[0].delta ? -1 : 1;
    int ce2 = T.d[1].delta ? -1 : 1;
    int ce3 = T.d[2].delta ? -1 : 1;
    int cm1 = chi(ctx, mpz_class(-1));
    auto sgnpow = [](int s_, long e) { return (e % 2 == 0) ? 1 : s_; };
    int rhs = sgnpow(-1, a1 + a2 + a3) * sgnpow(cm1, a1 + a2 + a3 + a1 * a2 + a2 * a3 + a3 * a1) *
              sgnpow(ce1, a2 + a3) * sgnpow(ce2, a1 + a3) * sgnpow(ce3, a1 + a2);
    bool minus = (rhs == -1);
    return (s == Space::VMinus) ? minus : !minus;
}

bool represents_ternary_in_quaternary(const std::vector<mpq_class>& t,
                                      const std::vector<mpq_class>& q, const Place& v) {
    if (t.size() != 3 || q.size() != 4) throw std::invalid_argument("rank mismatch");
    if (v.real) {
        int tp = 0, tn = 0, qp = 0, qn = 0;
        for (const auto& x : t) (x > 0 ? tp : tn)++;
        for (const auto& x : q) (x > 0 ? qp : qn)++;
        return tp <= qp && tn <= qn;
    }
    // q represents t iff q ~ t + <c> with c = det(t) det(q); determinants then
    // match automatically and the comparison reduces to Hasse invariants.
    mpq_class dt = t[0] * t[1] * t[2];
    mpq_class dq = q[0] * q[1] * q[2] * q[3];
    mpq_class c = dt * dq;
    std::vector<mpq_class> tc = t;
    tc.push_back(c);
    return hasse_invariant(q, v) == hasse_invariant(tc, v);
}

std::vector<Place> quaternion_invariant(const mpq_class& a1, const mpq_class& a2,
                                        const mpq_class& a3) {
    if (a1 == 0 || a2 == 0 || a3 == 0) throw std::domain_error("nonzero slots required");
    mpq_class b1 = -a1 * a2, b2 = -a2 * a3;
    std::vector<Place> ram;
    for (const auto& v : candidate_places(b1, b2))
        if (hilbert_symbol(b1, b2, v) == -1) ram.push_back(v);
    return ram;
}

namespace {

PadicApprox pa_from_rat(const PrimeContext& ctx, const mpq_class& q, int t) {
    PadicApprox r;
    if (q == 0) {
        r.u = 0;
        r.e = 0;
        return r;
    }
    long v = ordp(q, ctx.p);
    mpz_class u = unit_part(q, ctx.p, t);
    if (v >= 0) {
        r.u = mod_z(u * pow_z(ctx.p, static_cast<unsigned long>(v)),
                    pow_z(ctx.p, static_cast<unsigned long>(t)));
        r.e = 0;
    } else {
        r.u = u;
        r.e = -v;
    }
    return r;
}

mpq_class pa_to_rat(const PrimeContext& ctx, const PadicApprox& a) {
    return mpq_class(a.u) * pow_q(ctx.p, -a.e);
}

// residual check: ord_p(a x^2 + b y^2 - m) must clear what the truncation can
// guarantee
void check_binary(const PrimeContext& ctx, const mpq_class& a, const mpq_class& b,
                  const mpq_class& m, const PadicApprox& x, const PadicApprox& y, int t) {
    mpq_class res = a * pa_to_rat(ctx, x) * pa_to_rat(ctx, x) +
                    b * pa_to_rat(ctx, y) * pa_to_rat(ctx, y) - m;
    long slack = 2 * std::max(x.e, y.e) + std::max<long>(0, -std::min(ordp(a, ctx.p), ordp(b, ctx.p))) + 2;
    long need = std::max<long>(1, t - slack);
    if (res != 0 && ordp(res, ctx.p) < need)
        throw std::logic_error("binary solver produced an invalid solution");
}

}  // namespace

std::optional<BinarySolution> solve_binary(const PrimeContext& ctx, const mpq_class& a,
                                           const mpq_class& b, const mpq_class& m, int t) {
    if (a == 0 || b == 0 || m == 0) throw std::domain_error("solve_binary needs nonzero inputs");
    // normalize to w^2 - c z^2 = d
    mpq_class c = -b / a, d = m / a;

    auto done = [&](const PadicApprox& w, const PadicApprox& z) -> std::optional<BinarySolution> {
        check_binary(ctx, a, b, m, w, z, t);
        return BinarySolution{w, z};
    };

    if (auto w = padic_sqrt(ctx, d, t)) return done(*w, PadicApprox{0, 0});
    if (auto z = padic_sqrt(ctx, -d / c, t)) return done(PadicApprox{0, 0}, *z);
    if (auto s = padic_sqrt(ctx, c, t)) {
        // w^2 - c z^2 = (w - s z)(w + s z); take the factors 1 and d
        PadicApprox w = pa_from_rat(ctx, (1 + d) / 2, t);
        mpq_class sval = pa_to_rat(ctx, *s);
        PadicApprox z = pa_from_rat(ctx, (d - 1) / 2, t);
        // z <- z / s; s is a truncated square root, divide via its residue
        long vs = ordp(sval, ctx.p);
        mpz_class su = unit_part(sval, ctx.p, t);
        mpq_class zval = pa_to_rat(ctx, z) * pow_q(ctx.p, -vs) * mpq_class(invert_z(su, pow_z(ctx.p, static_cast<unsigned long>(t))));
        z = pa_from_rat(ctx, zval, t);
        return done(w, z);
    }
    long vc = ordp(c, ctx.p);
    if (vc % 2 != 0) return std::nullopt;  // ramified case is exhausted by the square checks
    long vd = ordp(d, ctx.p);
    if (vd % 2 != 0) return std::nullopt;  // unramified norms have even valuation
    // unit norm equation w0^2 - uc z0^2 = ud, search mod p then lift
    mpz_class uc = unit_part(c, ctx.p, t), ud = unit_part(d, ctx.p, t);
    mpz_class pz(ctx.p);
    long w0 = -1, z0 = -1;
    for (long w = 0; w < ctx.p && w0 < 0; ++w)
        for (long z = 0; z < ctx.p; ++z)
            if (mod_z(mpz_class(w) * w - uc * mpz_class(z) * z - ud, pz) == 0) {
                w0 = w;
                z0 = z;
                break;
            }
    if (w0 < 0) throw std::logic_error("norm form not surjective mod p?");
    mpz_class wl, zl;
    if (w0 % ctx.p != 0) {
        wl = lift_sqrt(ctx.p, t, mod_z(ud + uc * z0 * z0, pow_z(ctx.p, static_cast<unsigned long>(t))), mpz_class(w0));
        zl = z0;
    } else {
        mpz_class ucinv = invert_z(uc, pow_z(ctx.p, static_cast<unsigned long>(t)));
        zl = lift_sqrt(ctx.p, t,
                       mod_z((mpz_class(w0) * w0 - ud) * ucinv, pow_z(ctx.p, static_cast<unsigned long>(t))),
                       mpz_class(z0));
        wl = w0;
    }
    // w = wl p^{vd/2}, z = zl p^{vd/2 - vc/2}
    PadicApprox w = pa_from_rat(ctx, mpq_class(wl) * pow_q(ctx.p, vd / 2), t);
    PadicApprox z = pa_from_rat(ctx, mpq_class(zl) * pow_q(ctx.p, vd / 2 - vc / 2), t);
    return done(w, z);
}

std::optional<TernarySolution> solve_ternary(const PrimeContext& ctx,
                                             const std::vector<mpq_class>& q, const mpq_class& m,
                                             int t) {
    if (q.size() != 3) throw std::invalid_argument("solve_ternary needs 3 coefficients");
    long K = 3;
    for (const auto& c : q) K = std::max(K, std::abs(ordp(c, ctx.p)) + 3);
    if (m != 0) K = std::max(K, std::abs(ordp(m, ctx.p)) + 3);
    // fix one coordinate to a small candidate value and solve the remaining
    // binary equation; candidates cover every valuation the solution can need
    for (int k = 0; k < 3; ++k) {
        int i = (k + 1) % 3, j = (k + 2) % 3;
        std::vector<mpq_class> cands{0};
        for (long e = 0; e <= K; ++e)
            for (long u = 1; u < ctx.p * ctx.p; ++u) {
                if (u % ctx.p == 0) continue;
                cands.push_back(mpq_class(u) * pow_q(ctx.p, e));
            }
        for (const auto& zc : cands) {
            mpq_class rem = m - q[k] * zc * zc;
            std::optional<BinarySolution> bs;
            if (rem == 0) {
                bs = BinarySolution{PadicApprox{0, 0}, PadicApprox{0, 0}};
            } else {
                bs = solve_binary(ctx, q[i], q[j], rem, t);
            }
            if (bs) {
                TernarySolution s;
                PadicApprox parts[3];
                parts[i] = bs->x;
                parts[j] = bs->y;
                parts[k] = pa_from_rat(ctx, zc, t);
                s.x = parts[0];
                s.y = parts[1];
                s.z = parts[2];
                return s;
            }
        }
    }
    return std::nullopt;
}

std::optional<UnimodularSplit> split_unimodular(const PrimeContext& ctx,
                                                const std::vector<mpq_class>& s_diag,
                                                const mpq_class& eps, int t) {
    int m = static_cast<int>(s_diag.size());
    if (ordp(eps, ctx.p) != 0) throw std::domain_error("target must be a unit");
    mpz_class pt = pow_z(ctx.p, static_cast<unsigned long>(t));
    std::vector<mpz_class> s(m);
    for (int i = 0; i < m; ++i)
        s[i] = (s_diag[i] == 0) ? mpz_class(0)
                                : mod_z(unit_part(s_diag[i], ctx.p, t) *
                                            pow_z(ctx.p, static_cast<unsigned long>(ordp(s_diag[i], ctx.p))),
                                        pt);
    mpz_class e = mod_z(unit_part(eps, ctx.p, t), pt);

    // search mod p for a solution with an invertible gradient coordinate
    std::vector<long> x(m, 0);
    mpz_class pz(ctx.p);
    long total = 1;
    for (int i = 0; i < m; ++i) total *= ctx.p;
    int grad = -1;
    for (long code = 0; code < total && grad < 0; ++code) {
        long c = code;
        mpz_class acc = 0;
        for (int i = 0; i < m; ++i) {
            x[i] = c % ctx.p;
            c /= ctx.p;
            acc += s[i] * x[i] * x[i];
        }
        if (mod_z(acc - e, pz) != 0) continue;
        for (int i = 0; i < m; ++i)
            if (mod_z(s[i] * x[i], pz) != 0) {
                grad = i;
                break;
            }
    }
    if (grad < 0) return std::nullopt;

    // Hensel: solve s_g xg^2 = eps - rest in coordinate g
    std::vector<mpz_class> w(m);
    for (int i = 0; i < m; ++i) w[i] = x[i];
    mpz_class rest = 0;
    for (int i = 0; i < m; ++i)
        if (i != grad) rest += s[i] * w[i] * w[i];
    mpz_class target = mod_z((e - rest) * invert_z(s[grad], pt), pt);
    w[grad] = lift_sqrt(ctx.p, t, target, w[grad]);

    // orthogonal complement of the witness: kernel of y -> sum s_i w_i y_i
    std::vector<mpz_class> v(m);
    for (int i = 0; i < m; ++i) v[i] = mod_z(s[i] * w[i], pt);
    int piv = -1;
    for (int i = 0; i < m; ++i)
        if (mod_z(v[i], pz) != 0) {
            piv = i;
            break;
        }
    assert(piv >= 0);
    mpz_class vinv = invert_z(v[piv], pt);
    // basis w_j = e_j - (v_j / v_piv) e_piv, j != piv
    std::vector<std::vector<mpz_class>> basis;
    for (int j = 0; j < m; ++j) {
        if (j == piv) continue;
        std::vector<mpz_class> bvec(m, 0);
        bvec[j] = 1;
        bvec[piv] = mod_z(-v[j] * vinv, pt);
        basis.push_back(bvec);
    }
    SymForm G(m - 1);
    for (int a = 0; a < m - 1; ++a)
        for (int b = a; b < m - 1; ++b) {
            mpz_class acc = 0;
            for (int i = 0; i < m; ++i) acc += s[i] * basis[a][i] * basis[b][i];
            mpq_class val(mod_z(acc, pt));
            G.at(a, b) = val;
            G.at(b, a) = val;
        }
    UnimodularSplit out;
    out.witness = w;
    out.complement = diagonalize(ctx, G);
    return out;
}

DiagonalForm parse_form(const PrimeContext& ctx, const std::string& text) {
    DiagonalForm D;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        // strip blanks
        std::string s;
        for (char ch : tok)
            if (!isspace(static_cast<unsigned char>(ch))) s += ch;
        if (s.empty()) throw std::invalid_argument("empty form token");
        mpq_class val = 1;
        std::stringstream fs(s);
        std::string factor;
        while (std::getline(fs, factor, '*')) {
            if (factor == "D") {
                val *= ctx.delta;
            } else if (factor == "-D") {
                val *= -ctx.delta;
            } else if (!factor.empty() && factor[0] == 'p') {
                long e = 1;
                if (factor.size() > 1) {
                    if (factor[1] != '^') throw std::invalid_argument("bad token: " + factor);
                    e = std::stol(factor.substr(2));
                }
                val *= pow_q(ctx.p, e);
            } else if (factor.size() > 1 && factor[0] == '-' && factor[1] == 'p') {
                long e = 1;
                if (factor.size() > 2) {
                    if (factor[2] != '^') throw std::invalid_argument("bad token: " + factor);
                    e = std::stol(factor.substr(3));
                }
                val *= -pow_q(ctx.p, e);
            } else {
                val *= parse_rat(factor);
            }
        }
        if (val == 0) throw std::invalid_argument("zero diagonal entry");
        if (ordp(val, ctx.p) < 0) throw std::invalid_argument("entry not p-integral: " + tok);
        DiagTerm term;
        term.a = ordp(val, ctx.p);
        term.delta = chi(ctx, unit_part(val, ctx.p, 1)) == -1;
        D.d.push_back(term);
    }
    if (D.d.empty()) throw std::invalid_argument("empty form literal");
    std::sort(D.d.begin(), D.d.end());
    return D;
}

SymForm parse_gram(const std::string& text) {
    std::vector<std::vector<mpq_class>> rows;
    std::stringstream ss(text);
    std::string row;
    while (std::getline(ss, row, ';')) {
        rows.emplace_back();
        std::stringstream rs(row);
        std::string cell;
        while (std::getline(rs, cell, ',')) {
            std::string s;
            for (char ch : cell)
                if (!isspace(static_cast<unsigned char>(ch))) s += ch;
            rows.back().push_back(parse_rat(s));
        }
    }
    int n = static_cast<int>(rows.size());
    SymForm T(n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n)
            throw std::invalid_argument("gram matrix is not square");
        for (int j = 0; j < n; ++j) T.at(i, j) = rows[i][j];
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (T.at(i, j) != T.at(j, i)) throw std::invalid_argument("gram matrix is not symmetric");
    return T;
}

}  // namespace qpl
