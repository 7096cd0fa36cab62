#ifndef ROUCHE_MPOLY_HPP
#define ROUCHE_MPOLY_HPP

/*
 * Sparse multivariate polynomials over exact complex rationals, with the
 * transformations the counting pipeline needs: shift (Taylor), truncation,
 * partial evaluation, interval evaluation, composition with a rational
 * matrix, and the explicit size/error bound formulas.
 */

#include "rouche/numeric.hpp"

#include <map>
#include <string>
#include <vector>

namespace rouche {

using RatMatrix = std::vector<std::vector<Rational>>;

struct Monomial {
  std::vector<unsigned> e;
  unsigned total() const {
    unsigned t = 0;
    for (unsigned x : e) t += x;
    return t;
  }
  bool operator==(const Monomial& o) const { return e == o.e; }
};

/// Graded-lex: lower total degree first, then lexicographic. Gives maps a
/// deterministic iteration order from constant term upward.
struct GradedLex {
  bool operator()(const Monomial& a, const Monomial& b) const {
    unsigned ta = a.total(), tb = b.total();
    if (ta != tb) return ta < tb;
    return a.e < b.e;
  }
};

class MPoly {
 public:
  using TermMap = std::map<Monomial, RationalComplex, GradedLex>;

  MPoly() : nvars_(0) {}
  explicit MPoly(unsigned nvars) : nvars_(nvars) {}
  static MPoly constant(unsigned nvars, RationalComplex c);
  static MPoly variable(unsigned nvars, unsigned var);  // var is 0-based

  unsigned nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t term_count() const { return terms_.size(); }

  /// -1 for the zero polynomial.
  int total_degree() const;
  int degree_in(unsigned var) const;

  void add_term(const Monomial& m, const RationalComplex& c);
  RationalComplex coeff(const Monomial& m) const;

  MPoly operator+(const MPoly& o) const;
  MPoly operator-(const MPoly& o) const;
  MPoly operator-() const;
  MPoly operator*(const MPoly& o) const;
  MPoly operator*(const RationalComplex& s) const;
  bool operator==(const MPoly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

  MPoly derivative(unsigned var) const;
  RationalComplex evaluate(const std::vector<RationalComplex>& z) const;

  /// tau_f = max(1, ceil(log2 ||f||)), coefficient inf-norm, exact.
  long tau() const;
  /// smallest t with 2^t >= ||f|| (no clamp); LONG_MIN-ish for zero poly.
  long norm_log2_ceil() const;

  std::string to_string() const;
  /// Parse the polynomial text grammar. nvars_hint forces the arity when
  /// positive; otherwise arity is inferred from the highest variable seen.
  static MPoly parse(const std::string& text, unsigned nvars_hint = 0);

 private:
  unsigned nvars_;
  TermMap terms_;
};

struct PolySystem {
  std::vector<MPoly> polys;

  unsigned dim() const { return static_cast<unsigned>(polys.size()); }
  unsigned max_degree() const;                    // d_F
  Int bezout() const;                             // D_F = prod d_i
  long tau() const;                               // tau_F = max tau_i
  std::vector<unsigned> degrees() const;
};

// --- spec'd operations ----------------------------------------------------

/// f(x + z), exact.
MPoly shift(const MPoly& f, const std::vector<RationalComplex>& z);

/// Terms of total degree <= k.
MPoly truncate(const MPoly& f, unsigned k);

/// f with variable `var` (0-based) fixed to xi; arity drops by one.
MPoly partial_evaluate(const MPoly& f, unsigned var, const RationalComplex& xi);

/// Interval evaluation; result contains f(z) for every z in the input
/// boxes. working_bits > 0  caps mantissa growth (outward).
ComplexBox evaluate_box(const MPoly& f, const std::vector<ComplexBox>& b,
                        unsigned long working_bits = 0);

/// f(S x), exact composition with a rational matrix.
MPoly compose_matrix(const MPoly& f, const RatMatrix& S);

/// binom(n+k,k) * 2^tau * M^k  — bound on |f_{<=k}(z)| for M = M(z).
Rational bound_eval(unsigned n, unsigned k, long tau, const Rational& m_of_z);

/// ||x||^{k+1} * d^n * 2^{tau+1} * [M(zeta) * (n+d)^2]^d  — bound on
/// |phi(x) - f[zeta](x)| for a (k+1)L-bit truncated approximation phi.
/// Throws if x_norm > 1.
Rational bound_truncated_approx(unsigned n, unsigned d, long tau, unsigned k,
                                const Rational& m_of_zeta, const Rational& x_norm);

// --- internal machinery shared by the pipeline ----------------------------

/// Taylor coefficients of f at m up to total degree K: returns
/// truncate(shift(f, m), K) without expanding the full shift. Cost scales
/// with term_count * (K+1)^n, so it stays cheap for sparse high-degree f.
MPoly shift_truncated(const MPoly& f, const std::vector<RationalComplex>& m, unsigned K);

/// Multiply f by the least common multiple of all coefficient denominators
/// (re and im). Returns the multiplier; f's zero set is unchanged.
Int clear_denominators(MPoly& f);

}  // namespace rouche

#endif
