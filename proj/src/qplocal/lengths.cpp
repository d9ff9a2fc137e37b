#include "lengths.hpp"

#include <stdexcept>

namespace qpl {

LengthResult intersection_length_exponents(const PrimeContext& ctx, long a1, long a2, long a3) {
    if (!(a1 <= a2 && a2 <= a3) || a1 < 0)
        throw std::invalid_argument("exponents must satisfy 0 <= a1 <= a2 <= a3");
    LengthResult r;
    if (a2 % 2 == 0) {
        r.case_tag = "a2 even";
        for (long i = 0; i < a2 / 2; ++i)
            r.value += mpq_class(a2 + a3 - 4 * i) * pow_q(ctx.p, i);
        r.value += mpq_class(a3 - a2 + 1, 2) * pow_q(ctx.p, a2 / 2);
    } else {
        r.case_tag = "a2 odd";
        for (long i = 0; i <= (a2 - 1) / 2; ++i)
            r.value += mpq_class(a2 + a3 - 4 * i) * pow_q(ctx.p, i);
    }
    r.value.canonicalize();
    r.in_domain = (a1 == 0) && (r.value.get_den() == 1);
    return r;
}

LengthResult intersection_length(const PrimeContext& ctx, const DiagonalForm& T) {
    if (T.rank() != 3) throw std::invalid_argument("rank-3 target required");
    return intersection_length_exponents(ctx, T.d[0].a, T.d[1].a, T.d[2].a);
}

mpz_class ordinary_length(const PrimeContext& ctx, long a1, long a2) {
    if (a1 < 0 || a1 > a2) throw std::invalid_argument("need 0 <= a1 <= a2");
    if ((a1 + a2) % 2 != 0)
        throw std::domain_error("ordinary multiplicity needs a1 + a2 even");
    return ctx.pow(a1 + a2);
}

bool is_transversal(const PrimeContext& ctx, const DiagonalForm& T) {
    (void)ctx;
    return T.ord_det() == 1;
}

}  // namespace qpl
