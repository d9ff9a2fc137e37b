#pragma once

#include <string>

#include "qform.hpp"

namespace qpl {

// Arithmetic intersection length attached to a rank-3 diagonal target with
// exponents a1 <= a2 <= a3 at an inert prime.  Only the exponents matter.
// The expression is always evaluated; in_domain records whether the input
// actually lies in the regime where it is a length (a1 = 0 and an integral
// value), so out-of-domain probes stay visible instead of being rejected.
struct LengthResult {
    mpq_class value = 0;
    bool in_domain = true;
    std::string case_tag;  // "a2 even" or "a2 odd"
};

LengthResult intersection_length(const PrimeContext& ctx, const DiagonalForm& T);
LengthResult intersection_length_exponents(const PrimeContext& ctx, long a1, long a2, long a3);

// Split-prime counterpart: same expression, shared implementation.
inline LengthResult intersection_length_split(const PrimeContext& ctx, const DiagonalForm& T) {
    return intersection_length(ctx, T);
}

// Multiplicity p^{a1+a2} of an ordinary point; requires a1 + a2 even (the
// ordinary locus forces the parity), otherwise throws std::domain_error.
mpz_class ordinary_length(const PrimeContext& ctx, long a1, long a2);

// A difference-of-cycles intersection is transversal exactly when the target
// determinant has valuation 1.
bool is_transversal(const PrimeContext& ctx, const DiagonalForm& T);

}  // namespace qpl
