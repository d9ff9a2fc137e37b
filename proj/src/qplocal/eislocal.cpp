#include "eislocal.hpp"

#include <stdexcept>

#include "classify.hpp"

namespace qpl {

std::string WhittakerValue::str() const {
    std::string s = rat_str(magnitude) + " " + gamma_token;
    if (log_p_power) s += " log p";
    return s;
}

namespace {

bool integral(const DiagonalForm& T) {
    for (const DiagTerm& d : T.d)
        if (d.a < 0) return false;
    return true;
}

bool twisted_represents(const PrimeContext& ctx, const DiagonalForm& T, WhittakerCase c) {
    if (c == WhittakerCase::Inert) return represents_locally(ctx, T, Space::VMinus);
    static const std::vector<mpq_class> h4 = {1, -1, 1, -1};
    return !represents_ternary_in_quaternary(T.entries(ctx), h4, Place::finite(ctx.p));
}

void check_rank3(const DiagonalForm& T) {
    if (T.rank() != 3) throw std::invalid_argument("rank-3 diagonal form required");
}

}  // namespace

WhittakerValue whittaker_value(const PrimeContext& ctx, const DiagonalForm& T, WhittakerCase c) {
    check_rank3(T);
    WhittakerValue w;
    if (!integral(T)) return w;
    if (c == WhittakerCase::Inert && T.d[0].a > 0)
        throw std::domain_error("inert value needs a target nonzero mod p");
    if (!twisted_represents(ctx, T, c)) return w;
    mpq_class p2 = mpq_class(ctx.p) * ctx.p;
    if (c == WhittakerCase::Inert)
        w.magnitude = 2 * (p2 - 1) / (p2 * p2);
    else
        w.magnitude = 2 * (ctx.p + 1) * (ctx.p + 1) / (p2 * p2);
    return w;
}

WhittakerValue whittaker_derivative(const PrimeContext& ctx, const DiagonalForm& T,
                                    WhittakerCase c) {
    check_rank3(T);
    if (!integral(T)) throw std::domain_error("derivative needs an integral target");
    if (c == WhittakerCase::Inert && T.d[0].a > 0)
        throw std::domain_error("inert derivative needs a target nonzero mod p");
    if (!twisted_represents(ctx, T, c))
        throw std::domain_error("derivative needs the twisted space to represent the target");
    LengthResult len = intersection_length(ctx, T);
    if (!len.in_domain) throw std::domain_error("target outside the length regime");
    mpq_class ip2 = mpq_class(1, ctx.p) / ctx.p;  // p^{-2}
    WhittakerValue w;
    w.gamma_token = "gV";
    w.log_p_power = 1;
    if (c == WhittakerCase::Inert)
        w.magnitude = (1 + ip2) * (1 - ip2) * len.value;
    else
        w.magnitude = (1 - ip2) * (1 - ip2) * len.value;
    return w;
}

DegreeFactor degree_factor(const std::vector<mpq_class>& t, const std::vector<mpq_class>& ambient,
                           const mpz_class& N) {
    DegreeFactor out;
    RegularityResult rr = is_regular(t, ambient, N);
    if (!rr.regular) {
        out.reason = rr.reason;
        return out;
    }
    out.prime = rr.diff[0].q;
    PrimeContext cq = PrimeContext::make(out.prime);
    DiagonalForm D = diagonalize(cq, SymForm::diagonal(t));
    LengthResult len = intersection_length(cq, D);
    if (!len.in_domain) {
        out.reason = "target outside the length regime at the failure place";
        return out;
    }
    out.regular = true;
    out.e_p = len.value;
    out.reason = rr.reason;
    return out;
}

}  // namespace qpl
