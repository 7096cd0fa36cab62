#ifndef ROUCHE_NUMERIC_HPP
#define ROUCHE_NUMERIC_HPP

/*
 * Exact scalar kernel: dyadic numbers (m * 2^e with arbitrary-size
 * mantissa), rationals, complex values over both, and outward-rounded
 * complex interval boxes. Everything here is a value type and every
 * operation is a pure function; no global state, no floating point on
 * any certified path.
 */

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rouche {

using Int = mpz_class;
using Rational = mpq_class;

Rational pow2(long e);            // 2^e as an exact rational, e may be negative
Int pow2_int(unsigned long e);

/// num/den in canonical form (mpq_class(a,b) alone does not canonicalize).
inline Rational frac(const Int& num, const Int& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}
inline Rational frac(long num, long den) { return frac(Int(num), Int(den)); }

/// Dyadic number m * 2^e in canonical form: m odd or zero, zero has e = 0.
class Dyadic {
 public:
  Dyadic() : mant_(0), exp_(0) {}
  Dyadic(long v) : mant_(v), exp_(0) { canonicalize(); }
  Dyadic(const Int& m, long e) : mant_(m), exp_(e) { canonicalize(); }

  const Int& mantissa() const { return mant_; }
  long exponent() const { return exp_; }
  bool is_zero() const { return mant_ == 0; }
  int sign() const { return sgn(mant_); }

  Rational to_rational() const;

  Dyadic operator-() const;
  Dyadic operator+(const Dyadic& o) const;
  Dyadic operator-(const Dyadic& o) const;
  Dyadic operator*(const Dyadic& o) const;
  Dyadic mul_pow2(long e) const { return is_zero() ? Dyadic() : Dyadic(mant_, exp_ + e); }
  Dyadic abs() const;

  int cmp(const Dyadic& o) const;
  bool operator==(const Dyadic& o) const { return cmp(o) == 0; }
  bool operator!=(const Dyadic& o) const { return cmp(o) != 0; }
  bool operator<(const Dyadic& o) const { return cmp(o) < 0; }
  bool operator<=(const Dyadic& o) const { return cmp(o) <= 0; }
  bool operator>(const Dyadic& o) const { return cmp(o) > 0; }
  bool operator>=(const Dyadic& o) const { return cmp(o) >= 0; }

  /// Round to at most `bits` mantissa bits, directed. Result >= *this when
  /// `up`, <= *this otherwise. Identity when the mantissa already fits.
  Dyadic round_directed(unsigned long bits, bool up) const;

  /// Number of bits of the mantissa (0 for zero).
  size_t mant_bits() const { return mant_ == 0 ? 0 : mpz_sizeinbase(mant_.get_mpz_t(), 2); }

  std::string to_string() const;          // exact decimal expansion
  static Dyadic from_rational_floor(const Rational& x, long rho);  // largest multiple of 2^-rho <= x
  static Dyadic from_rational_ceil(const Rational& x, long rho);

 private:
  void canonicalize();
  Int mant_;
  long exp_;
};

struct DyadicComplex {
  Dyadic re, im;
  DyadicComplex() = default;
  DyadicComplex(Dyadic r, Dyadic i) : re(std::move(r)), im(std::move(i)) {}
  bool is_zero() const { return re.is_zero() && im.is_zero(); }
};

struct RationalComplex {
  Rational re, im;
  RationalComplex() : re(0), im(0) {}
  RationalComplex(Rational r) : re(std::move(r)), im(0) {}
  RationalComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  RationalComplex(const DyadicComplex& d) : re(d.re.to_rational()), im(d.im.to_rational()) {}

  bool is_zero() const { return re == 0 && im == 0; }
  RationalComplex operator+(const RationalComplex& o) const { return {re + o.re, im + o.im}; }
  RationalComplex operator-(const RationalComplex& o) const { return {re - o.re, im - o.im}; }
  RationalComplex operator-() const { return {-re, -im}; }
  RationalComplex operator*(const RationalComplex& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  RationalComplex operator*(const Rational& s) const { return {re * s, im * s}; }
  RationalComplex conj() const { return {re, -im}; }
  Rational abs2() const { return re * re + im * im; }
  RationalComplex inverse() const;
  bool operator==(const RationalComplex& o) const { return re == o.re && im == o.im; }
};

/// Axis-aligned box in C with dyadic endpoints. All arithmetic is exact
/// (dyadics are closed under +,-,*); round_outward caps mantissa growth.
struct ComplexBox {
  Dyadic re_lo, re_hi, im_lo, im_hi;

  ComplexBox() = default;
  ComplexBox(Dyadic rl, Dyadic rh, Dyadic il, Dyadic ih);
  static ComplexBox point(const DyadicComplex& z) { return {z.re, z.re, z.im, z.im}; }
  static ComplexBox disc_hull(const DyadicComplex& center, const Dyadic& radius);

  bool contains_zero() const;
  bool contains(const RationalComplex& z) const;
  DyadicComplex center() const;
  ComplexBox operator+(const ComplexBox& o) const;
  ComplexBox operator-(const ComplexBox& o) const;
  ComplexBox operator*(const ComplexBox& o) const;
  ComplexBox round_outward(unsigned long bits) const;

  bool intersects(const ComplexBox& o) const;
  bool inside(const ComplexBox& o) const;  // *this subset of o
};

/// num / den with outward rounding; den must exclude the origin.
ComplexBox box_div(const ComplexBox& num, const ComplexBox& den, unsigned long bits);

/// Directed rounding of a rational to `bits` significant bits (relative).
Dyadic dyadic_directed(const Rational& q, unsigned long bits, bool up);

struct Disc {
  DyadicComplex center;
  Dyadic radius;   // >= 0
  Disc() = default;
  Disc(DyadicComplex c, Dyadic r) : center(std::move(c)), radius(std::move(r)) {}
};

struct PolyDisc {
  std::vector<DyadicComplex> center;
  Dyadic radius;   // > 0
  size_t dim() const { return center.size(); }
};

/// One approximable complex coefficient: request(rho) returns a dyadic
/// point within 2^-rho of the underlying value, consistently across calls.
class CoefficientOracle {
 public:
  virtual ~CoefficientOracle() = default;
  virtual DyadicComplex request(long rho) const = 0;
};

class ExactOracle final : public CoefficientOracle {
 public:
  explicit ExactOracle(RationalComplex v) : value_(std::move(v)) {}
  DyadicComplex request(long rho) const override;

 private:
  RationalComplex value_;
};

// --- spec'd kernel operations -------------------------------------------

/// Nearest multiple of 2^-rho, ties toward zero. |result - x| <= 2^-(rho+1).
Dyadic round_to_precision(const Rational& x, long rho);
DyadicComplex round_to_precision(const RationalComplex& x, long rho);

/// (lo, hi) with lo <= |z| <= hi for every z in the box; lo > 0 iff the
/// box excludes the origin. Exact when the extremal modulus is dyadic.
std::pair<Dyadic, Dyadic> box_abs_bounds(const ComplexBox& b);

/// Smallest integer t with 2^t >= x. Throws on x <= 0.
long log2_ceil_pos(const Rational& x);

// --- certified square roots and moduli ------------------------------------

/// Dyadic lower/upper bounds on sqrt(s), s >= 0 rational, within 2^-prec
/// relatively-ish (absolute 2^-prec for s <= 1, exact on perfect squares).
Dyadic sqrt_lower(const Rational& s, unsigned long prec);
Dyadic sqrt_upper(const Rational& s, unsigned long prec);

Dyadic abs_lower(const RationalComplex& z, unsigned long prec);
Dyadic abs_upper(const RationalComplex& z, unsigned long prec);

/// Bounds on the inf-norm of a complex vector.
Dyadic norm_inf_upper(const std::vector<RationalComplex>& v, unsigned long prec);
Dyadic norm_inf_lower(const std::vector<RationalComplex>& v, unsigned long prec);

/// max(1, upper bound of ||v||_inf) as a rational, for M(.) factors.
Rational m_factor_upper(const std::vector<RationalComplex>& v, unsigned long prec);

Int binomial(unsigned long n, unsigned long k);

/// Exact ceil(c * D * log2(m)) for integers c, D >= 1, m >= 2.
long ceil_mul_log2(unsigned long c, unsigned long D, unsigned long m);

}  // namespace rouche

#endif
