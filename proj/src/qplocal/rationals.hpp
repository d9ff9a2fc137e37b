#pragma once

#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace qpl {

// Rationals travel through JSON and the CLI as "num/den" strings (or "num"
// when the denominator is 1); never as floats.
inline std::string rat_str(const mpq_class& q) {
    mpq_class r(q);
    r.canonicalize();
    if (r.get_den() == 1)
        return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline mpq_class parse_rat(const std::string& s) {
    if (s.empty())
        throw std::invalid_argument("empty rational literal");
    mpq_class q;
    if (q.set_str(s, 10) != 0)
        throw std::invalid_argument("bad rational literal: " + s);
    q.canonicalize();
    if (q.get_den() == 0)
        throw std::invalid_argument("zero denominator: " + s);
    return q;
}

inline mpz_class pow_z(const mpz_class& b, unsigned long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

inline mpz_class pow_z(long b, unsigned long e) { return pow_z(mpz_class(b), e); }

// p^e for possibly negative e, as a rational.
inline mpq_class pow_q(long p, long e) {
    if (e >= 0)
        return mpq_class(pow_z(p, static_cast<unsigned long>(e)));
    return mpq_class(1, pow_z(p, static_cast<unsigned long>(-e)));
}

inline mpz_class mod_z(const mpz_class& a, const mpz_class& m) {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline mpz_class invert_z(const mpz_class& a, const mpz_class& m) {
    mpz_class r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw std::domain_error("not invertible mod " + m.get_str());
    return r;
}

}  // namespace qpl
