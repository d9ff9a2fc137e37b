#include "padic.hpp"

#include <cassert>
#include <set>

namespace qpl {

bool is_odd_prime(long p) {
    if (p < 3 || p % 2 == 0) return false;
    mpz_class z(p);
    return mpz_probab_prime_p(z.get_mpz_t(), 40) != 0;
}

long smallest_nonresidue(long p) {
    std::set<long> squares;
    for (long x = 1; x < p; ++x) squares.insert((x * x) % p);
    for (long d = 2; d < p; ++d)
        if (!squares.count(d)) return d;
    throw std::logic_error("no nonresidue found");
}

PrimeContext PrimeContext::make(long p, long delta_override, int precision) {
    if (!is_odd_prime(p))
        throw std::invalid_argument("p must be an odd prime, got " + std::to_string(p));
    if (precision < 1)
        throw std::invalid_argument("precision must be positive");
    PrimeContext c;
    c.p = p;
    c.precision = precision;
    if (delta_override != 0) {
        if (delta_override <= 1 || delta_override >= p)
            throw std::invalid_argument("delta override out of range (1, p)");
        mpz_class d(delta_override), m(p);
        if (mpz_legendre(d.get_mpz_t(), m.get_mpz_t()) != -1)
            throw std::invalid_argument("delta override is a square mod p");
        c.delta = delta_override;
    } else {
        c.delta = smallest_nonresidue(p);
    }
    return c;
}

long ordp(const mpz_class& x, long p) {
    if (x == 0) return kInfOrd;
    mpz_class r(x), q, pz(p);
    long v = 0;
    while (true) {
        mpz_class rem;
        mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), r.get_mpz_t(), pz.get_mpz_t());
        if (rem != 0) break;
        r = q;
        ++v;
    }
    return v;
}

long ordp(const mpq_class& x, long p) {
    if (x == 0) return kInfOrd;
    return ordp(mpz_class(x.get_num()), p) - ordp(mpz_class(x.get_den()), p);
}

mpz_class unit_part(const mpq_class& x, long p, int t) {
    if (x == 0) throw std::domain_error("unit_part of zero");
    mpz_class num = x.get_num(), den = x.get_den();
    long vn = ordp(num, p), vd = ordp(den, p);
    mpz_class pn = pow_z(p, static_cast<unsigned long>(vn));
    mpz_class pd = pow_z(p, static_cast<unsigned long>(vd));
    num /= pn;
    den /= pd;
    mpz_class m = pow_z(p, static_cast<unsigned long>(t));
    return mod_z(mod_z(num, m) * invert_z(mod_z(den, m), m), m);
}

int chi(const PrimeContext& ctx, const mpz_class& u) {
    mpz_class m(ctx.p);
    if (mod_z(u, m) == 0) throw std::domain_error("chi on a non-unit");
    return mpz_legendre(u.get_mpz_t(), m.get_mpz_t());
}

int chi(const PrimeContext& ctx, const mpq_class& u) {
    if (u == 0 || ordp(u, ctx.p) != 0) throw std::domain_error("chi on a non-unit");
    return chi(ctx, unit_part(u, ctx.p, 1));
}

PadicScalar PadicScalar::zero(long p, int t) {
    PadicScalar s;
    s.p = p;
    s.t = t;
    return s;
}

PadicScalar PadicScalar::from_rational(const mpq_class& q, long p, int t) {
    PadicScalar s;
    s.p = p;
    s.t = t;
    if (q == 0) return s;
    s.val = ordp(q, p);
    s.unit = unit_part(q, p, t);
    return s;
}

mpq_class PadicScalar::to_rational() const {
    if (is_zero()) return 0;
    return mpq_class(unit) * pow_q(p, val);
}

PadicScalar PadicScalar::mul(const PadicScalar& o) const {
    if (p != o.p) throw std::invalid_argument("prime mismatch");
    if (is_zero() || o.is_zero()) return zero(p, std::min(t, o.t));
    PadicScalar s;
    s.p = p;
    s.t = std::min(t, o.t);
    s.val = val + o.val;
    s.unit = mod_z(unit * o.unit, pow_z(p, static_cast<unsigned long>(s.t)));
    return s;
}

PadicScalar PadicScalar::add(const PadicScalar& o) const {
    if (p != o.p) throw std::invalid_argument("prime mismatch");
    // Go through an exact rational representative; sound because both inputs
    // are finite truncations with exact valuations.
    mpq_class sum = to_rational() + o.to_rational();
    return from_rational(sum, p, std::min(t, o.t));
}

std::string PadicScalar::str() const {
    if (is_zero()) return "0";
    return unit.get_str() + "*" + std::to_string(p) + "^" + std::to_string(val);
}

namespace {

// (a,b)_p for odd p via the tame formula (-1)^{ab(p-1)/2 legendre pieces}.
int hilbert_odd(const mpq_class& a, const mpq_class& b, long p) {
    long alpha = ordp(a, p), beta = ordp(b, p);
    mpz_class u = unit_part(a, p, 1), v = unit_part(b, p, 1);
    mpz_class pz(p);
    int s = 1;
    if ((alpha % 2 != 0) && (beta % 2 != 0) && ((p - 1) / 2) % 2 != 0) s = -s;
    if (beta % 2 != 0 && mpz_legendre(u.get_mpz_t(), pz.get_mpz_t()) == -1) s = -s;
    if (alpha % 2 != 0 && mpz_legendre(v.get_mpz_t(), pz.get_mpz_t()) == -1) s = -s;
    return s;
}

int hilbert_two(const mpq_class& a, const mpq_class& b) {
    long alpha = ordp(a, 2), beta = ordp(b, 2);
    mpz_class u = unit_part(a, 2, 4), v = unit_part(b, 2, 4);
    // u, v odd residues mod 16 are enough for both character classes.
    auto eps = [](const mpz_class& w) { return mpz_class((w - 1) / 2) % 2 != 0; };
    auto omega = [](const mpz_class& w) { return mpz_class((w * w - 1) / 8) % 2 != 0; };
    bool minus = false;
    if (eps(u) && eps(v)) minus = !minus;
    if (alpha % 2 != 0 && omega(v)) minus = !minus;
    if (beta % 2 != 0 && omega(u)) minus = !minus;
    return minus ? -1 : 1;
}

}  // namespace

int hilbert_symbol(const mpq_class& a, const mpq_class& b, const Place& v) {
    if (a == 0 || b == 0) throw std::domain_error("hilbert symbol needs nonzero arguments");
    if (v.real) return (a < 0 && b < 0) ? -1 : 1;
    if (v.q == 2) return hilbert_two(a, b);
    if (v.q < 2) throw std::invalid_argument("bad place");
    return hilbert_odd(a, b, v.q);
}

std::vector<Place> candidate_places(const mpq_class& a, const mpq_class& b) {
    std::set<long> primes{2};
    auto collect = [&primes](mpz_class n) {
        n = abs(n);
        for (long d = 2; mpz_class(d) * d <= n; ++d) {
            while (n % d == 0) {
                primes.insert(d);
                n /= d;
            }
        }
        if (n > 1 && n.fits_slong_p()) primes.insert(n.get_si());
    };
    collect(a.get_num());
    collect(a.get_den());
    collect(b.get_num());
    collect(b.get_den());
    std::vector<Place> out;
    for (long q : primes) out.push_back(Place::finite(q));
    out.push_back(Place::infinite());
    return out;
}

mpz_class lift_sqrt(long p, int t, const mpz_class& target, const mpz_class& x0) {
    // Newton iteration x <- x - (x^2 - target) / (2x); doubles precision per
    // step, so a handful of rounds at fixed modulus p^t suffices.
    mpz_class m = pow_z(p, static_cast<unsigned long>(t));
    mpz_class x = mod_z(x0, m);
    if (mod_z(target - x * x, mpz_class(p)) != 0)
        throw std::domain_error("lift_sqrt: x0 is not a root mod p");
    for (int i = 0; i < t + 2; ++i) {
        mpz_class f = mod_z(x * x - target, m);
        if (f == 0) break;
        mpz_class d = invert_z(mod_z(2 * x, m), m);
        x = mod_z(x - f * d, m);
    }
    if (mod_z(x * x - target, m) != 0)
        throw std::logic_error("lift_sqrt failed to converge");
    return x;
}

std::optional<PadicApprox> padic_sqrt(const PrimeContext& ctx, const mpq_class& x, int t) {
    if (x == 0) return PadicApprox{0, 0};
    long v = ordp(x, ctx.p);
    if (v % 2 != 0) return std::nullopt;
    mpz_class u = unit_part(x, ctx.p, t);
    if (chi(ctx, u) != 1) return std::nullopt;
    mpz_class x0 = 0;
    for (long c = 1; c < ctx.p; ++c)
        if (mod_z(mpz_class(c) * c - u, mpz_class(ctx.p)) == 0) {
            x0 = c;
            break;
        }
    mpz_class root = lift_sqrt(ctx.p, t, u, x0);
    PadicApprox r;
    if (v < 0) {
        // value = root * p^{v/2} = root / p^{-v/2}
        r.e = -v / 2;
        r.u = root;
    } else {
        r.e = 0;
        r.u = mod_z(root * pow_z(ctx.p, static_cast<unsigned long>(v / 2)),
                    pow_z(ctx.p, static_cast<unsigned long>(t)));
    }
    return r;
}

Qx qred(const QuadCtx& c, const Qx& a) { return Qx{mod_z(a.x, c.pN), mod_z(a.y, c.pN)}; }

Qx qadd(const QuadCtx& c, const Qx& a, const Qx& b) {
    return Qx{mod_z(a.x + b.x, c.pN), mod_z(a.y + b.y, c.pN)};
}

Qx qsub(const QuadCtx& c, const Qx& a, const Qx& b) {
    return Qx{mod_z(a.x - b.x, c.pN), mod_z(a.y - b.y, c.pN)};
}

Qx qmul(const QuadCtx& c, const Qx& a, const Qx& b) {
    // (x + y d)(x' + y' d) = xx' + Delta yy' + (xy' + yx') d
    return Qx{mod_z(a.x * b.x + mpz_class(c.delta) * a.y * b.y, c.pN),
              mod_z(a.x * b.y + a.y * b.x, c.pN)};
}

Qx qconj(const QuadCtx& c, const Qx& a) { return Qx{mod_z(a.x, c.pN), mod_z(-a.y, c.pN)}; }

mpz_class qnorm(const QuadCtx& c, const Qx& a) {
    return mod_z(a.x * a.x - mpz_class(c.delta) * a.y * a.y, c.pN);
}

long qord(const QuadCtx& c, const Qx& a) {
    long vx = (a.x == 0) ? kInfOrd : ordp(mod_z(a.x, c.pN), c.p);
    long vy = (a.y == 0) ? kInfOrd : ordp(mod_z(a.y, c.pN), c.p);
    long v = std::min(vx, vy);
    return std::min<long>(v, c.N);
}

bool qis_unit(const QuadCtx& c, const Qx& a) { return qord(c, a) == 0; }

Qx qinv_unit(const QuadCtx& c, const Qx& a) {
    mpz_class n = qnorm(c, a);
    mpz_class ninv = invert_z(n, c.pN);
    Qx cj = qconj(c, a);
    return Qx{mod_z(cj.x * ninv, c.pN), mod_z(cj.y * ninv, c.pN)};
}

Qx qdiv_p(const QuadCtx& c, const Qx& a, long k) {
    mpz_class pk = pow_z(c.p, static_cast<unsigned long>(k));
    if (mod_z(a.x, pk) != 0 || mod_z(a.y, pk) != 0)
        throw std::domain_error("qdiv_p: not divisible");
    return Qx{a.x / pk, a.y / pk};
}

Qx norm_preimage(const QuadCtx& c, const mpz_class& eps) {
    mpz_class pz(c.p);
    if (mod_z(eps, pz) == 0) throw std::domain_error("norm_preimage needs a unit");
    // Search mod p, then lift the coordinate with invertible derivative.
    long x0 = -1, y0 = -1;
    for (long x = 0; x < c.p && x0 < 0; ++x)
        for (long y = 0; y < c.p; ++y) {
            if (mod_z(mpz_class(x) * x - mpz_class(c.delta) * y * y - eps, pz) == 0) {
                x0 = x;
                y0 = y;
                break;
            }
        }
    if (x0 < 0) throw std::logic_error("norm map not surjective mod p?");
    Qx u;
    if (x0 % c.p != 0) {
        // solve x^2 = eps + Delta y0^2 in x
        mpz_class target = eps + mpz_class(c.delta) * y0 * y0;
        u.x = lift_sqrt(c.p, c.N, mod_z(target, c.pN), mpz_class(x0));
        u.y = y0;
    } else {
        // then Delta y0^2 = x0^2 - eps with y0 a unit; solve for y
        mpz_class dinv = invert_z(mpz_class(c.delta), c.pN);
        mpz_class target = mod_z((mpz_class(x0) * x0 - eps) * dinv, c.pN);
        u.y = lift_sqrt(c.p, c.N, target, mpz_class(y0));
        u.x = x0;
    }
    if (mod_z(qnorm(c, u) - eps, c.pN) != 0)
        throw std::logic_error("norm_preimage: lift check failed");
    return u;
}

}  // namespace qpl
