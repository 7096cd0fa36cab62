#ifndef ROUCHE_TESTS_ORACLE_HPP
#define ROUCHE_TESTS_ORACLE_HPP

// Test-only brute-force solver for bivariate systems: generic rotation +
// Sylvester resultant + certified univariate isolation + fiber matching.
// Independent of the truncation/Rouche counting path it is used to check.

#include "rouche/bisolve.hpp"
#include "rouche/mpoly.hpp"

#include <optional>
#include <random>
#include <vector>

namespace rouche::testing {

struct OracleSolution {
  PolyDisc enclosure;     // contains exactly this solution
  unsigned multiplicity;
};

// All solutions of a zero-dimensional bivariate system with multiplicities.
// Throws on non-zero-dimensional input or when the retry budget runs out.
std::vector<OracleSolution> oracle_solve(const PolySystem& F, std::mt19937_64& rng, long rho = 24);

// Number of solutions (with multiplicity) in the open polydisc, or nullopt
// when a solution enclosure straddles the boundary at the budget precision.
std::optional<unsigned> oracle_count(const PolySystem& F, const PolyDisc& disc,
                                     std::mt19937_64& rng);

}  // namespace rouche::testing

#endif
