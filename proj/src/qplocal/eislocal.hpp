#pragma once

#include <string>
#include <vector>

#include "lengths.hpp"
#include "qform.hpp"

namespace qpl {

// Local Whittaker value or derivative: an exact rational magnitude times one
// symbolic gamma token times (log p)^{log_p_power}.  The tokens "gV" and
// "gV'" are opaque eighth roots of unity; the only relation encoded anywhere
// is gV / gV' = -1.
struct WhittakerValue {
    mpq_class magnitude = 0;
    std::string gamma_token = "gV'";
    int log_p_power = 0;

    std::string str() const;
};

// Which local situation the rank-3 target lives in.
enum class WhittakerCase { Inert, Split };

// Value of the local Whittaker integral at the center:
//   inert:  2 p^{-4} (p^2 - 1) gV'   when the twisted quaternion space
//           represents T, else 0; requires T nonzero mod p.
//   split:  2 p^{-4} (p + 1)^2 gV'   when the twisted split space represents
//           T, else 0.
// Targets with a denominator give 0 outright.
WhittakerValue whittaker_value(const PrimeContext& ctx, const DiagonalForm& T, WhittakerCase c);

// Central derivative, defined when the value vanishes for parity reasons but
// the twisted space represents T:
//   inert:  (1 + p^{-2})(1 - p^{-2}) e_p(T) gV log p
//   split:  (1 - p^{-2})^2 e_p(T) gV log p
// with e_p the intersection length.  Out-of-regime targets throw
// std::domain_error (no silent extrapolation).
WhittakerValue whittaker_derivative(const PrimeContext& ctx, const DiagonalForm& T,
                                    WhittakerCase c);

// Local part of the arithmetic degree of a regular rank-3 target: the length
// e_p at the unique failure place, times a symbolic log p.  The regular flag
// is false (with a reason) when the regularity predicate fails; no other
// fields are meaningful in that case.
struct DegreeFactor {
    bool regular = false;
    long prime = 0;
    mpq_class e_p = 0;
    int log_p_power = 1;
    std::string reason;
};

DegreeFactor degree_factor(const std::vector<mpq_class>& t, const std::vector<mpq_class>& ambient,
                           const mpz_class& N);

}  // namespace qpl
