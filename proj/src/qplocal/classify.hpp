#pragma once

#include <string>
#include <vector>

#include "qform.hpp"

namespace qpl {

enum class CycleCase { Inert, Split };

enum class CycleLocus { Empty, IsolatedSuperspecial, ContainsComponents, OrdinaryPossible };

struct CycleClassification {
    CycleLocus locus = CycleLocus::Empty;
    std::vector<std::string> reasons;
};

// Structure of the special-cycle support attached to a nonsingular matrix T:
// reduction mod p decides everything.  Rank >= 3 mod p or an anisotropic
// rank-2 reduction forces emptiness; a nonzero reduction confines the cycle
// to finitely many superspecial points; T = 0 mod p allows whole components
// in the inert case (split stays isolated).
CycleClassification classify_cycle(const PrimeContext& ctx, const SymForm& T, CycleCase c);

// Irreducibility of the one-dimensional components for a rank-3 diagonal
// target divisible by p: exponents (1, 1, odd a3), and a3 = 1 forced when
// chi(-e1 e2) = -1.
bool hz_irreducible(const PrimeContext& ctx, const DiagonalForm& T);

// Rank-4 analogue, by exact case transcription on sorted exponents.
bool siegel_irreducible(const PrimeContext& ctx, const DiagonalForm& T);

// Places where the rank-3 form t fails to be represented by the rank-4
// space whose finite-place invariants come from the diagonal `ambient`,
// while the archimedean member of the collection is positive definite (so
// the real place is in the set exactly when t is not positive definite).
std::vector<Place> diff_set(const std::vector<mpq_class>& t, const std::vector<mpq_class>& ambient);

struct RegularityResult {
    bool regular = false;
    std::vector<Place> diff;
    std::string reason;
};

// Regularity: the failure set is a single odd finite place q, q does not
// divide the level N, and when q is inert for the ambient space (nonsquare
// unit determinant part) q must not divide t.
RegularityResult is_regular(const std::vector<mpq_class>& t, const std::vector<mpq_class>& ambient,
                            const mpz_class& N);

}  // namespace qpl
