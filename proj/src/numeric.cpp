#include "rouche/numeric.hpp"

#include <algorithm>
#include <cassert>
#include <climits>

namespace rouche {

Rational pow2(long e) {
  Rational r;
  if (e >= 0) {
    mpz_mul_2exp(r.get_num_mpz_t(), Int(1).get_mpz_t(), static_cast<unsigned long>(e));
  } else {
    r = 1;
    mpz_mul_2exp(r.get_den_mpz_t(), Int(1).get_mpz_t(), static_cast<unsigned long>(-e));
  }
  r.canonicalize();
  return r;
}

Int pow2_int(unsigned long e) {
  Int r;
  mpz_mul_2exp(r.get_mpz_t(), Int(1).get_mpz_t(), e);
  return r;
}

void Dyadic::canonicalize() {
  if (mant_ == 0) {
    exp_ = 0;
    return;
  }
  unsigned long tz = mpz_scan1(mant_.get_mpz_t(), 0);
  if (tz > 0) {
    mpz_fdiv_q_2exp(mant_.get_mpz_t(), mant_.get_mpz_t(), tz);
    exp_ += static_cast<long>(tz);
  }
}

Rational Dyadic::to_rational() const {
  Rational r(mant_);
  return r * pow2(exp_);
}

Dyadic Dyadic::operator-() const { return is_zero() ? Dyadic() : Dyadic(-mant_, exp_); }

Dyadic Dyadic::operator+(const Dyadic& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  long e = std::min(exp_, o.exp_);
  Int a, b;
  mpz_mul_2exp(a.get_mpz_t(), mant_.get_mpz_t(), static_cast<unsigned long>(exp_ - e));
  mpz_mul_2exp(b.get_mpz_t(), o.mant_.get_mpz_t(), static_cast<unsigned long>(o.exp_ - e));
  return Dyadic(a + b, e);
}

Dyadic Dyadic::operator-(const Dyadic& o) const { return *this + (-o); }

Dyadic Dyadic::operator*(const Dyadic& o) const {
  if (is_zero() || o.is_zero()) return Dyadic();
  return Dyadic(mant_ * o.mant_, exp_ + o.exp_);
}

Dyadic Dyadic::abs() const { return sign() < 0 ? -*this : *this; }

int Dyadic::cmp(const Dyadic& o) const {
  int s = sign(), t = o.sign();
  if (s != t) return s < t ? -1 : 1;
  if (s == 0) return 0;
  long e = std::min(exp_, o.exp_);
  Int a, b;
  mpz_mul_2exp(a.get_mpz_t(), mant_.get_mpz_t(), static_cast<unsigned long>(exp_ - e));
  mpz_mul_2exp(b.get_mpz_t(), o.mant_.get_mpz_t(), static_cast<unsigned long>(o.exp_ - e));
  return ::cmp(a, b);
}

Dyadic Dyadic::round_directed(unsigned long bits, bool up) const {
  if (is_zero()) return *this;
  size_t nb = mant_bits();
  if (nb <= bits) return *this;
  unsigned long drop = static_cast<unsigned long>(nb - bits);
  Int q;
  if (up) {
    mpz_cdiv_q_2exp(q.get_mpz_t(), mant_.get_mpz_t(), drop);
  } else {
    mpz_fdiv_q_2exp(q.get_mpz_t(), mant_.get_mpz_t(), drop);
  }
  return Dyadic(q, exp_ + static_cast<long>(drop));
}

std::string Dyadic::to_string() const {
  if (is_zero()) return "0";
  if (exp_ >= 0) {
    Int v;
    mpz_mul_2exp(v.get_mpz_t(), mant_.get_mpz_t(), static_cast<unsigned long>(exp_));
    return v.get_str();
  }
  // m * 2^-k = m * 5^k / 10^k: exact finite decimal
  unsigned long k = static_cast<unsigned long>(-exp_);
  Int five;
  mpz_ui_pow_ui(five.get_mpz_t(), 5, k);
  Int digits = mant_ * five;
  std::string s = digits.get_str();
  bool neg = false;
  if (!s.empty() && s[0] == '-') {
    neg = true;
    s = s.substr(1);
  }
  if (s.size() <= k) s.insert(0, k - s.size() + 1, '0');
  s.insert(s.size() - k, ".");
  return (neg ? "-" : "") + s;
}

Dyadic Dyadic::from_rational_floor(const Rational& x, long rho) {
  // largest m*2^-rho <= x
  Rational y = x * pow2(rho);
  Int m;
  mpz_fdiv_q(m.get_mpz_t(), y.get_num_mpz_t(), y.get_den_mpz_t());
  return Dyadic(m, -rho);
}

Dyadic Dyadic::from_rational_ceil(const Rational& x, long rho) {
  Rational y = x * pow2(rho);
  Int m;
  mpz_cdiv_q(m.get_mpz_t(), y.get_num_mpz_t(), y.get_den_mpz_t());
  return Dyadic(m, -rho);
}

RationalComplex RationalComplex::inverse() const {
  Rational d = abs2();
  if (d == 0) throw std::domain_error("complex inverse of zero");
  return {re / d, -im / d};
}

ComplexBox::ComplexBox(Dyadic rl, Dyadic rh, Dyadic il, Dyadic ih)
    : re_lo(std::move(rl)), re_hi(std::move(rh)), im_lo(std::move(il)), im_hi(std::move(ih)) {
  assert(re_lo <= re_hi && im_lo <= im_hi);
}

ComplexBox ComplexBox::disc_hull(const DyadicComplex& c, const Dyadic& r) {
  return {c.re - r, c.re + r, c.im - r, c.im + r};
}

bool ComplexBox::contains_zero() const {
  Dyadic z;
  return re_lo <= z && z <= re_hi && im_lo <= z && z <= im_hi;
}

bool ComplexBox::contains(const RationalComplex& z) const {
  return re_lo.to_rational() <= z.re && z.re <= re_hi.to_rational() &&
         im_lo.to_rational() <= z.im && z.im <= im_hi.to_rational();
}

DyadicComplex ComplexBox::center() const {
  return {(re_lo + re_hi).mul_pow2(-1), (im_lo + im_hi).mul_pow2(-1)};
}

ComplexBox ComplexBox::operator+(const ComplexBox& o) const {
  return {re_lo + o.re_lo, re_hi + o.re_hi, im_lo + o.im_lo, im_hi + o.im_hi};
}

ComplexBox ComplexBox::operator-(const ComplexBox& o) const {
  return {re_lo - o.re_hi, re_hi - o.re_lo, im_lo - o.im_hi, im_hi - o.im_lo};
}

namespace {

// interval product [a,b]*[c,d]
void interval_mul(const Dyadic& a, const Dyadic& b, const Dyadic& c, const Dyadic& d, Dyadic& lo,
                  Dyadic& hi) {
  Dyadic p1 = a * c, p2 = a * d, p3 = b * c, p4 = b * d;
  lo = std::min(std::min(p1, p2), std::min(p3, p4));
  hi = std::max(std::max(p1, p2), std::max(p3, p4));
}

}  // namespace

ComplexBox ComplexBox::operator*(const ComplexBox& o) const {
  Dyadic ac_lo, ac_hi, bd_lo, bd_hi, ad_lo, ad_hi, bc_lo, bc_hi;
  interval_mul(re_lo, re_hi, o.re_lo, o.re_hi, ac_lo, ac_hi);
  interval_mul(im_lo, im_hi, o.im_lo, o.im_hi, bd_lo, bd_hi);
  interval_mul(re_lo, re_hi, o.im_lo, o.im_hi, ad_lo, ad_hi);
  interval_mul(im_lo, im_hi, o.re_lo, o.re_hi, bc_lo, bc_hi);
  return {ac_lo - bd_hi, ac_hi - bd_lo, ad_lo + bc_lo, ad_hi + bc_hi};
}

ComplexBox ComplexBox::round_outward(unsigned long bits) const {
  return {re_lo.round_directed(bits, false), re_hi.round_directed(bits, true),
          im_lo.round_directed(bits, false), im_hi.round_directed(bits, true)};
}

bool ComplexBox::intersects(const ComplexBox& o) const {
  return !(re_hi < o.re_lo || o.re_hi < re_lo || im_hi < o.im_lo || o.im_hi < im_lo);
}

bool ComplexBox::inside(const ComplexBox& o) const {
  return o.re_lo <= re_lo && re_hi <= o.re_hi && o.im_lo <= im_lo && im_hi <= o.im_hi;
}

ComplexBox box_div(const ComplexBox& num, const ComplexBox& den, unsigned long bits) {
  auto [dlo, dhi] = box_abs_bounds(den);
  if (dlo.is_zero()) throw std::domain_error("box_div: denominator may contain zero");
  ComplexBox conj{den.re_lo, den.re_hi, -den.im_hi, -den.im_lo};
  ComplexBox prod = (num * conj).round_outward(bits ? bits : 512);
  // divide by the real interval [dlo^2, dhi^2]
  Rational a = (dlo * dlo).to_rational(), b = (dhi * dhi).to_rational();
  unsigned long p = bits ? bits : 512;
  auto div_lo = [&](const Dyadic& x) {
    Rational q = x.sign() >= 0 ? x.to_rational() / b : x.to_rational() / a;
    return dyadic_directed(q, p, false);
  };
  auto div_hi = [&](const Dyadic& x) {
    Rational q = x.sign() >= 0 ? x.to_rational() / a : x.to_rational() / b;
    return dyadic_directed(q, p, true);
  };
  return {div_lo(prod.re_lo), div_hi(prod.re_hi), div_lo(prod.im_lo), div_hi(prod.im_hi)};
}

Dyadic dyadic_directed(const Rational& q, unsigned long bits, bool up) {
  if (q == 0) return Dyadic();
  Rational a = q < 0 ? Rational(-q) : q;
  long e = log2_ceil_pos(a);  // 2^e >= |q|
  long rho = static_cast<long>(bits) - e;
  return up ? Dyadic::from_rational_ceil(q, rho) : Dyadic::from_rational_floor(q, rho);
}

DyadicComplex ExactOracle::request(long rho) const {
  return round_to_precision(value_, rho);
}

Dyadic round_to_precision(const Rational& x, long rho) {
  if (rho < 0) throw std::invalid_argument("round_to_precision: rho < 0");
  if (x == 0) return Dyadic();
  // nearest integer to x*2^rho, ties toward zero
  Rational y = x * pow2(rho);
  bool neg = y < 0;
  Rational a = neg ? Rational(-y) : y;
  // round-half-down on |y|: floor((2*num + den - 1) / (2*den))
  Int num2 = 2 * a.get_num() + a.get_den() - 1;
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), num2.get_mpz_t(), Int(2 * a.get_den()).get_mpz_t());
  if (neg) q = -q;
  return Dyadic(q, -rho);
}

DyadicComplex round_to_precision(const RationalComplex& x, long rho) {
  return {round_to_precision(x.re, rho), round_to_precision(x.im, rho)};
}

namespace {

// distance of the interval [lo,hi] to 0 (0 if it straddles), and max modulus
void interval_abs_range(const Dyadic& lo, const Dyadic& hi, Dyadic& near, Dyadic& far) {
  Dyadic z;
  if (lo <= z && z <= hi) {
    near = z;
  } else {
    near = std::min(lo.abs(), hi.abs());
  }
  far = std::max(lo.abs(), hi.abs());
}

}  // namespace

std::pair<Dyadic, Dyadic> box_abs_bounds(const ComplexBox& b) {
  Dyadic re_near, re_far, im_near, im_far;
  interval_abs_range(b.re_lo, b.re_hi, re_near, re_far);
  interval_abs_range(b.im_lo, b.im_hi, im_near, im_far);
  Rational lo2 = (re_near * re_near + im_near * im_near).to_rational();
  Rational hi2 = (re_far * re_far + im_far * im_far).to_rational();
  return {sqrt_lower(lo2, 64), sqrt_upper(hi2, 64)};
}

long log2_ceil_pos(const Rational& x) {
  if (x <= 0) throw std::domain_error("log2_ceil_pos: non-positive input");
  const Int& p = x.get_num();
  const Int& q = x.get_den();
  long t = static_cast<long>(mpz_sizeinbase(p.get_mpz_t(), 2)) -
           static_cast<long>(mpz_sizeinbase(q.get_mpz_t(), 2)) - 1;
  auto ge = [&](long tt) {  // 2^tt >= p/q ?
    Int lhs, rhs;
    if (tt >= 0) {
      mpz_mul_2exp(lhs.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(tt));
      rhs = p;
    } else {
      lhs = q;
      mpz_mul_2exp(rhs.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(-tt));
    }
    return lhs >= rhs;
  };
  while (!ge(t)) ++t;
  while (t > LONG_MIN && ge(t - 1)) --t;
  return t;
}

namespace {

// scale-invariant grid: sqrt(s) is about 2^m, so round on the 2^(m-prec) grid
long sqrt_grid(const Rational& s, unsigned long prec) {
  long t = log2_ceil_pos(s);               // 2^t >= s
  long m = t >= 0 ? (t + 1) / 2 : t / 2;   // 2^m >= sqrt(s) roughly
  return static_cast<long>(prec) - m;
}

}  // namespace

Dyadic sqrt_lower(const Rational& s, unsigned long prec) {
  if (s < 0) throw std::domain_error("sqrt_lower: negative input");
  if (s == 0) return Dyadic();
  long rho = sqrt_grid(s, prec);
  // floor(sqrt(floor(s * 4^rho))) * 2^-rho <= sqrt(s)
  Rational y = s * pow2(2 * rho);
  Int n;
  mpz_fdiv_q(n.get_mpz_t(), y.get_num_mpz_t(), y.get_den_mpz_t());
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return Dyadic(r, -rho);
}

Dyadic sqrt_upper(const Rational& s, unsigned long prec) {
  if (s < 0) throw std::domain_error("sqrt_upper: negative input");
  if (s == 0) return Dyadic();
  long rho = sqrt_grid(s, prec);
  Rational y = s * pow2(2 * rho);
  Int n;
  mpz_cdiv_q(n.get_mpz_t(), y.get_num_mpz_t(), y.get_den_mpz_t());
  Int r, rem;
  mpz_sqrtrem(r.get_mpz_t(), rem.get_mpz_t(), n.get_mpz_t());
  if (rem != 0) r += 1;
  return Dyadic(r, -rho);
}

Dyadic abs_lower(const RationalComplex& z, unsigned long prec) { return sqrt_lower(z.abs2(), prec); }
Dyadic abs_upper(const RationalComplex& z, unsigned long prec) { return sqrt_upper(z.abs2(), prec); }

Dyadic norm_inf_upper(const std::vector<RationalComplex>& v, unsigned long prec) {
  Dyadic m;
  for (const auto& z : v) m = std::max(m, abs_upper(z, prec));
  return m;
}

Dyadic norm_inf_lower(const std::vector<RationalComplex>& v, unsigned long prec) {
  Dyadic m;
  for (const auto& z : v) m = std::max(m, abs_lower(z, prec));
  return m;
}

Rational m_factor_upper(const std::vector<RationalComplex>& v, unsigned long prec) {
  Rational m = norm_inf_upper(v, prec).to_rational();
  return m < 1 ? Rational(1) : m;
}

Int binomial(unsigned long n, unsigned long k) {
  Int r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

long ceil_mul_log2(unsigned long c, unsigned long D, unsigned long m) {
  if (m < 2) throw std::invalid_argument("ceil_mul_log2: m < 2");
  // smallest a with a >= c*D*log2(m), i.e. 2^a >= m^(c*D)
  Int mm;
  mpz_ui_pow_ui(mm.get_mpz_t(), m, c * D);
  long a = static_cast<long>(mpz_sizeinbase(mm.get_mpz_t(), 2)) - 1;
  Int p2 = pow2_int(static_cast<unsigned long>(a));
  if (p2 < mm) ++a;
  return a;
}

}  // namespace rouche
