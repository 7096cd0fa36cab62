#ifndef ROUCHE_UNI_HPP
#define ROUCHE_UNI_HPP

/*
 * Certified univariate complex machinery: Taylor shift, the Pellet-type
 * T_k / T_* dominance tests, quadtree subdivision root isolation into
 * counted clusters, and cluster refinement.
 *
 * Polynomials may carry per-coefficient error radii (`err`); every test
 * then certifies its claim for ALL polynomials within the error ball, so
 * approximate fiber polynomials can be handled soundly.
 */

#include "rouche/mpoly.hpp"
#include "rouche/numeric.hpp"

#include <optional>
#include <vector>

namespace rouche {

struct UPoly {
  std::vector<RationalComplex> c;  // c[0] + c[1] x + ... ; empty = zero poly
  std::vector<Rational> err;       // optional |error| bound per coefficient

  UPoly() = default;
  explicit UPoly(std::vector<RationalComplex> coeffs) : c(std::move(coeffs)) { normalize(); }

  int degree() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  bool exact() const { return err.empty(); }
  void normalize();  // drop high zero coefficients (only when exact)

  UPoly derivative() const;
  RationalComplex evaluate(const RationalComplex& x) const;
  /// Interval Horner; the box contains g(x) for every g in the error ball
  /// and every x in the input box.
  ComplexBox evaluate_box(const ComplexBox& x, unsigned long working_bits = 256) const;

  static UPoly from_mpoly(const MPoly& f);  // requires nvars == 1
  MPoly to_mpoly() const;

  /// 1 + max |c_i| / |c_d| upper bound: all roots have modulus below it.
  /// Requires an exact leading coefficient direction (err[d] < |c_d|).
  Rational cauchy_root_bound() const;
};

/// Exact coefficients of f(m + x).
UPoly taylor_shift(const UPoly& f, const RationalComplex& m);

struct TkOutcome {
  bool success = false;
  int k = -1;
  Rational lb = 0;
};

/// Pellet dominance test on the disc of radius r centered at 0:
/// success iff |c_k| r^k > (3/2) sum_{i != k} |c_i| r^i, decided with
/// certified dyadic bounds refined up to `max_bits`. On success the disc
/// holds exactly k roots and |f| > lb on its boundary.
TkOutcome tk_test(const UPoly& f, const Rational& r, unsigned k, unsigned long max_bits = 4096);

/// Shifts to the disc center and tries k = 0, 1, ..., d ascending.
TkOutcome tstar_test(const UPoly& f, const Disc& disc, unsigned long max_bits = 4096);

struct RootCluster {
  Disc disc;
  unsigned count = 0;
};

struct IsolationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown by refine_cluster when the cluster separates into sub-clusters
/// at the requested precision; carries the pieces.
struct ClusterSplit : std::runtime_error {
  std::vector<RootCluster> pieces;
  explicit ClusterSplit(std::vector<RootCluster> p)
      : std::runtime_error("cluster split during refinement"), pieces(std::move(p)) {}
};

/// Certified subdivision isolation: pairwise disjoint discs of radius at
/// most 2^-rho, each holding exactly `count` roots, jointly covering every
/// root of f in `region`. Discarded area is T_0-certified root-free.
/// Throws IsolationFailure when the depth budget runs out.
std::vector<RootCluster> isolate_roots(const UPoly& f, const ComplexBox& region, long rho);

/// Same count, radius at most 2^-rho, new disc inside the old one inflated
/// by its radius. Newton fast path for point clusters, subdivision fallback.
RootCluster refine_cluster(const UPoly& f, const RootCluster& cluster, long rho);

/// Certified enclosure of the roots of f^(count-1) inside the cluster disc,
/// contracted to half-width <= 2^-rho when possible (interval Newton). For a
/// point cluster this encloses the cluster point itself. Returns nullopt
/// when no contraction is reached within the budget.
std::optional<Disc> refine_enclosure(const UPoly& f, const RootCluster& cluster, long rho);

}  // namespace rouche

#endif
