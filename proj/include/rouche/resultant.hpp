#ifndef ROUCHE_RESULTANT_HPP
#define ROUCHE_RESULTANT_HPP

/*
 * Hidden-variable resultants: exact Sylvester construction for bivariate
 * systems (with a CRT / mod-p fast path for integer inputs), Macaulay
 * evaluation-interpolation for trivariate systems, and the explicit
 * arithmetic-Nullstellensatz constants used by the counting bounds.
 */

#include "rouche/mpoly.hpp"
#include "rouche/uni.hpp"

#include <stdexcept>

namespace rouche {

struct DegenerateSystem : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct HiddenResultant {
  UPoly poly;            // univariate in the hidden variable
  unsigned hidden_var;   // 0-based
  bool degree_certified; // deg == prod d_i was attained
};

struct NullstellensatzBounds {
  long A = 0;
  long B = 0;
  Rational gamma;  // binom(n + D, D) * 2^B
};

/// True iff every f_i has a monomial of total degree d_i with zero exponent
/// on the hidden variable (0-based).
bool check_mild_conditions(const PolySystem& F, unsigned hide);

/// res(F, x_hide) for n in {2, 3}. Throws DegenerateSystem when the
/// resultant vanishes identically, std::invalid_argument for unsupported n
/// or violated mild conditions.
HiddenResultant hidden_resultant(const PolySystem& F, unsigned hide);

/// A = ceil((6n+4) log2(n+2) D), B = 2 ceil(D (6n+4) log2(d+n)) +
/// tau * max_i D/d_i, gamma = binom(n+D, D) 2^B.
NullstellensatzBounds nullstellensatz_bounds(unsigned n, const std::vector<unsigned>& degrees,
                                             long tau);

/// Sylvester resultant of a bivariate pair with respect to x_hide (the
/// returned polynomial is univariate in x_hide; the other variable is
/// eliminated). Exact over complex rationals.
UPoly sylvester_resultant(const MPoly& f1, const MPoly& f2, unsigned hide);

/// Resultant of two univariate polynomials (exact, PRS-based).
RationalComplex resultant_univariate(const UPoly& f, const UPoly& g);

/// CRT / mod-p evaluation-interpolation path for bivariate pairs with real
/// integer coefficients (picked automatically by sylvester_resultant for
/// large inputs; exposed for direct use and testing).
UPoly sylvester_resultant_int_fast(const MPoly& f1, const MPoly& f2, unsigned hide);

}  // namespace rouche

#endif
