#ifndef ROUCHE_BISOLVE_HPP
#define ROUCHE_BISOLVE_HPP

/*
 * Bivariate elimination pipeline: resultant projection onto both axes,
 * candidate grid, certified exclusion/inclusion validation, and the
 * multiplicity-recovering solver (rotation + fiber intersection).
 */

#include "rouche/polysol.hpp"
#include "rouche/resultant.hpp"
#include "rouche/uni.hpp"

#include <random>
#include <vector>

namespace rouche {

struct Candidate {
  Disc disc1, disc2;      // isolating discs of the two projections
  unsigned k1 = 0, k2 = 0;  // multiplicities as resultant roots
  Rational lb1, lb2;       // T_* boundary lower bounds on |R_l|
};

struct SolutionRecord {
  PolyDisc region;
  unsigned multiplicity = 0;
};

struct ProjectionResult {
  HiddenResultant R1, R2;
  std::vector<Candidate> candidates;
};

/// Resultants in both variables, certified root clusters of each inside the
/// polydisc projections, and the full candidate grid. The caller is
/// responsible for generic position (shear/rotate first if needed).
ProjectionResult projection_phase(const PolySystem& F, const PolyDisc& disc);

/// true => no solution of F in the box product (interval arithmetic).
bool exclusion_test(const PolySystem& F, const std::vector<ComplexBox>& boxes,
                    unsigned long working_bits = 256);

/// Original Bisolve-style inclusion: true => the candidate region contains
/// a solution. zeta must lie inside the candidate region.
bool inclusion_test_standard(const PolySystem& F, const Candidate& cand,
                             const std::vector<RationalComplex>& zeta);

enum class InclusionMethod { truncate, standard };

struct ValidateOptions {
  long precision_cap = 1 << 14;  // largest L of the outer loop
  InclusionMethod method = InclusionMethod::truncate;
  int polysol_rotations = 4;
  long budget_ms = 0;  // wall-clock budget; 0 = unlimited
};

struct ValidateResult {
  int multiplicity = -1;  // 0: excluded; >= 1: certified; -1: cap reached
  long max_L = 0;         // precision demand: largest L reached
  bool capped = false;
  bool timed_out = false;
};

/// Algorithm-3-style validation loop around one candidate. The first form
/// takes the two hidden resultants (reused for refinement across rounds);
/// the second recomputes them.
ValidateResult validate(const PolySystem& F, const Candidate& cand, const UPoly& R1,
                        const UPoly& R2, std::mt19937_64& rng, const ValidateOptions& opts = {});
ValidateResult validate(const PolySystem& F, const Candidate& cand, std::mt19937_64& rng,
                        const ValidateOptions& opts = {});

struct BisolveOptions {
  long rho_out = 16;   // target radius (2^-rho_out) of returned regions
  int max_rounds = 16; // rotation/precision escalation rounds
  // predicate used to decide candidates; `truncate` routes inclusion
  // through the counting algorithm instead of the cofactor bound
  InclusionMethod decide_method = InclusionMethod::standard;
};

struct BisolveFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// All solutions of the zero-dimensional system F inside `region` (records
/// whose enclosure grazes the boundary may also appear), with exact
/// multiplicities. Throws BisolveFailure when the retry budget runs out and
/// DegenerateSystem when the system is not zero-dimensional.
std::vector<SolutionRecord> bisolve_plus(const PolySystem& F, const PolyDisc& region,
                                         std::mt19937_64& rng, const BisolveOptions& opts = {});

}  // namespace rouche

#endif
