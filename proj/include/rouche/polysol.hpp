#ifndef ROUCHE_POLYSOL_HPP
#define ROUCHE_POLYSOL_HPP

/*
 * Certified local solution counting: shift/truncate/approximate the system
 * at the polydisc center, solve the truncated system, compare certified
 * upper/lower bounds on the boundary (the multidimensional Rouche
 * criterion), and return an exact count or a safe Unknown.
 */

#include "rouche/mpoly.hpp"
#include "rouche/numeric.hpp"
#include "rouche/resultant.hpp"

#include <memory>
#include <random>
#include <vector>

namespace rouche {

enum class FailStage {
  none,
  cluster_mismatch,
  tstar_failed,
  bound_comparison_failed,
  solver_failed,
};

const char* fail_stage_name(FailStage s);

struct CountVerdict {
  int count = -1;  // >= 0: certified count; -1: unknown
  FailStage stage = FailStage::none;

  bool is_count() const { return count >= 0; }
  static CountVerdict certified(int k) { return {k, FailStage::none}; }
  static CountVerdict unknown(FailStage s) { return {-1, s}; }
};

struct TruncatedSystem {
  PolySystem phi;                       // the system actually solved
  unsigned K = 0;                       // truncation degree
  long L = 0;                           // precision parameter
  bool perturbed = false;               // phi_i = x_i^{K+1} + phi'_i
  bool rounding_exact = false;          // the (K+1)L-bit rounding was lossless
  std::vector<RationalComplex> center;  // shift point m
};

struct DiagnosticQuantities {
  Rational sigma;    // separation
  Rational partial;  // geometric derivative
  Rational delta0;   // sigma / (2 n^2 D_F)^{32 n}
};

/// Isolating clusters of all solutions of a truncated system inside a
/// polydisc; the hook polysol uses for n = 3 (n = 2 is built in).
class TruncatedSolver {
 public:
  virtual ~TruncatedSolver() = default;
  /// Pairwise disjoint polydiscs of radius at most 2^-rho covering every
  /// solution of phi in `region`, with exact per-disc multiplicities.
  virtual std::vector<std::pair<PolyDisc, unsigned>> solve(const PolySystem& phi,
                                                           const PolyDisc& region, long rho) = 0;
};

struct PolysolOptions {
  bool perturb = false;       // add x_i^{K+1} up front
  int rotations = 4;          // random retries after the identity attempt
  unsigned long tk_bits = 4096;
  TruncatedSolver* solver = nullptr;  // required for n = 3
};

/// L = ceil(log2(32 n (K+1)^n / r)): 2^-L lands in
/// [r / (64 n (K+1)^n), r / (32 n (K+1)^n)].
long compute_L(const Rational& r, unsigned n, unsigned K);

/// (K+1)L-bit approximation of F[m]_{<=K}, optionally perturbed.
TruncatedSystem build_truncated(const PolySystem& F, const std::vector<RationalComplex>& m,
                                unsigned K, long L, bool perturb);

/// k  = sum of counts with center inf-norm <= r/(2n),
/// k+ = sum of counts with center inf-norm <= 2nr (ties inside for both).
std::pair<unsigned, unsigned> cluster_counts(
    const std::vector<std::pair<PolyDisc, unsigned>>& clusters, const Rational& r, unsigned n);

/// r^{K+1} d_F^n 2^{tau_F + 2} [M(m) (n + d_F)^2]^{d_F}.
Rational compute_UB(const std::vector<RationalComplex>& m, const Rational& r, unsigned K,
                    unsigned n, unsigned d_F, long tau_F);

/// Certified bound on sup_{||x||=r} ||F[m](x) - Phi(x)|| computed from the
/// degree-slice norms of F (Vandermonde-collapsed), the rounding step, and
/// the optional perturbation term. Often far sharper than compute_UB; the
/// pipeline uses the minimum of the two.
Rational truncation_error_bound(const PolySystem& F, const TruncatedSystem& ts, const Rational& r);

/// min(lbs) / (n binom(D + n, D) 2^B); bounds describe the rotated system.
Rational compute_LB(const std::vector<Rational>& lbs, const NullstellensatzBounds& nb,
                    unsigned n);

CountVerdict polysol(const PolySystem& F, const PolyDisc& disc, unsigned K, std::mt19937_64& rng,
                     const PolysolOptions& opts = {});

/// Separation, geometric derivative, and delta_0 for a known solution list.
/// Moduli are certified 96-bit upper approximations (exact when rational).
DiagnosticQuantities diagnostics(
    const std::vector<std::pair<std::vector<RationalComplex>, unsigned>>& solutions, size_t index,
    unsigned n, const Int& D_F);

}  // namespace rouche

#endif
