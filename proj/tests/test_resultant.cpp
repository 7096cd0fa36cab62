#include "doctest.h"
#include "rouche/resultant.hpp"

#include <random>

using namespace rouche;

namespace {

MPoly P(const std::string& s, unsigned n = 2) { return MPoly::parse(s, n); }

PolySystem sys2(const std::string& a, const std::string& b) {
  return PolySystem{{P(a), P(b)}};
}

// multiply out linear forms sum_i c_i x_i + c_0
MPoly linear_form(unsigned n, const std::vector<Rational>& coeffs) {
  MPoly f(n);
  Monomial cst{std::vector<unsigned>(n, 0)};
  f.add_term(cst, RationalComplex(coeffs[0]));
  for (unsigned v = 0; v < n; ++v) {
    Monomial m{std::vector<unsigned>(n, 0)};
    m.e[v] = 1;
    f.add_term(m, RationalComplex(coeffs[v + 1]));
  }
  return f;
}

bool poly_equal_up_to_constant(const UPoly& a, const UPoly& b) {
  if (a.degree() != b.degree()) return false;
  if (a.is_zero()) return true;
  RationalComplex ratio = a.c.back() * b.c.back().inverse();
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (!(a.c[i] == b.c[i] * ratio)) return false;
  }
  return true;
}

UPoly poly_from_roots(const std::vector<RationalComplex>& roots) {
  UPoly f;
  f.c = {RationalComplex(Rational(1))};
  for (const auto& r : roots) {
    std::vector<RationalComplex> nc(f.c.size() + 1);
    for (size_t i = 0; i < f.c.size(); ++i) {
      nc[i + 1] = nc[i + 1] + f.c[i];
      nc[i] = nc[i] - f.c[i] * r;
    }
    f.c = std::move(nc);
  }
  return f;
}

}  // namespace

TEST_CASE("check_mild_conditions examples") {
  CHECK(check_mild_conditions(sys2("x1^2 + x2^2", "x1 - x2"), 0));
  CHECK(!check_mild_conditions(sys2("x1^2", "x2"), 0));
  CHECK(!check_mild_conditions(sys2("x1 + x2 + 1", "x1*x2 + 1"), 1));
}

TEST_CASE("hidden_resultant bivariate examples") {
  HiddenResultant r1 = hidden_resultant(sys2("x1^2 + x2^2 - 2", "x1 - x2"), 0);
  CHECK(r1.poly.c == UPoly::from_mpoly(P("2*x^2 - 2", 1)).c);
  CHECK(r1.degree_certified);

  HiddenResultant r2 = hidden_resultant(sys2("x2 - x1", "x2 + x1"), 0);
  CHECK(r2.poly.c == UPoly::from_mpoly(P("2*x", 1)).c);

  HiddenResultant r3 = hidden_resultant(sys2("x1^2 - x2", "x2"), 0);
  CHECK(poly_equal_up_to_constant(r3.poly, UPoly::from_mpoly(P("x^2", 1))));

  // zero resultant: shared factor makes the system non-zero-dimensional
  CHECK_THROWS_AS((void)hidden_resultant(sys2("x1*x2 - x2", "x2*x2 - x2*x1^2"), 0),
                  DegenerateSystem);
}

TEST_CASE("projection completeness on products of linear forms (bivariate)") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> cd(-4, 4);
  int done = 0;
  while (done < 30) {
    unsigned d1 = 1 + rng() % 2, d2 = 1 + rng() % 2;
    std::vector<std::vector<Rational>> L1, L2;
    MPoly f1 = MPoly::constant(2, RationalComplex(Rational(1)));
    MPoly f2 = f1;
    for (unsigned i = 0; i < d1; ++i) {
      std::vector<Rational> c{frac(cd(rng), 1), frac(cd(rng), 1), Rational(1 + (rng() % 3))};
      L1.push_back(c);
      f1 = f1 * linear_form(2, c);
    }
    for (unsigned i = 0; i < d2; ++i) {
      std::vector<Rational> c{frac(cd(rng), 1), frac(cd(rng), 1), Rational(1 + (rng() % 3))};
      L2.push_back(c);
      f2 = f2 * linear_form(2, c);
    }
    PolySystem F{{f1, f2}};
    if (!check_mild_conditions(F, 0)) continue;
    // all pairwise line intersections, exact 2x2 solves
    std::vector<RationalComplex> proj_x1;
    bool degenerate = false;
    for (const auto& a : L1) {
      for (const auto& b : L2) {
        Rational det = a[1] * b[2] - a[2] * b[1];
        if (det == 0) {
          degenerate = true;
          break;
        }
        Rational x = (-a[0] * b[2] + b[0] * a[2]) / det;
        proj_x1.emplace_back(x);
      }
      if (degenerate) break;
    }
    if (degenerate) continue;
    HiddenResultant R = hidden_resultant(F, 0);
    UPoly expected = poly_from_roots(proj_x1);
    CHECK(poly_equal_up_to_constant(R.poly, expected));
    CHECK(R.poly.degree() <= d1 * d2);
    ++done;
  }
}

TEST_CASE("specialization consistency") {
  std::mt19937_64 rng(17);
  PolySystem F = sys2("x1^2 + x2^2 - 2", "x1^2 - x2");
  HiddenResultant R = hidden_resultant(F, 0);
  for (int t = 0; t < 20; ++t) {
    RationalComplex xi(frac(static_cast<long>(rng() % 17) - 8, 3));
    UPoly s1 = UPoly::from_mpoly(partial_evaluate(F.polys[0], 0, xi));
    UPoly s2 = UPoly::from_mpoly(partial_evaluate(F.polys[1], 0, xi));
    if (s1.degree() < F.polys[0].total_degree() || s2.degree() < F.polys[1].total_degree())
      continue;  // degree drop: Sylvester det needs the adjustment factor
    RationalComplex lhs = R.poly.evaluate(xi);
    RationalComplex rhs = resultant_univariate(s1, s2);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("fast integer path agrees with the exact path") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> cd(-9, 9);
  for (int trial = 0; trial < 12; ++trial) {
    MPoly f1(2), f2(2);
    unsigned d = 2 + rng() % 3;
    for (unsigned a = 0; a <= d; ++a)
      for (unsigned b = 0; a + b <= d; ++b) {
        if (rng() % 3 == 0) f1.add_term(Monomial{{a, b}}, RationalComplex(Rational(cd(rng))));
        if (rng() % 3 == 0) f2.add_term(Monomial{{a, b}}, RationalComplex(Rational(cd(rng))));
      }
    // force nonzero top coefficients in the eliminated variable
    f1.add_term(Monomial{{0, d}}, RationalComplex(Rational(1)));
    f2.add_term(Monomial{{0, d}}, RationalComplex(Rational(2)));
    UPoly fast = sylvester_resultant_int_fast(f1, f2, 0);
    UPoly exact = sylvester_resultant(f1, f2, 0);
    CHECK(fast.c == exact.c);
  }
}

TEST_CASE("macaulay trivariate: linear system") {
  PolySystem F{{MPoly::parse("x1 + x2 + x3 - 6", 3), MPoly::parse("x2 - 2", 3),
                MPoly::parse("x3 - 3", 3)}};
  REQUIRE(check_mild_conditions(F, 0));
  HiddenResultant R = hidden_resultant(F, 0);
  CHECK(R.poly.degree() == 1);
  // root should be x1 = 1
  RationalComplex at1 = R.poly.evaluate(RationalComplex(Rational(1)));
  CHECK(at1.is_zero());
  CHECK(R.degree_certified);
}

TEST_CASE("macaulay trivariate: products of linear forms match projections") {
  std::mt19937_64 rng(2718);
  std::uniform_int_distribution<int> cd(-3, 3);
  int done = 0;
  while (done < 8) {
    // f_i = products of d_i random linear forms with unit x2/x3 leading mix
    std::vector<std::vector<std::vector<Rational>>> forms(3);
    std::vector<MPoly> polys;
    unsigned degs[3] = {1 + rng() % 2, 1, 1};
    bool ok = true;
    for (int i = 0; i < 3; ++i) {
      MPoly f = MPoly::constant(3, RationalComplex(Rational(1)));
      for (unsigned j = 0; j < degs[i]; ++j) {
        std::vector<Rational> c{frac(cd(rng), 1), frac(cd(rng), 1), Rational(1 + rng() % 2),
                                Rational(1 + rng() % 2)};
        forms[i].push_back(c);
        f = f * linear_form(3, c);
      }
      polys.push_back(f);
    }
    PolySystem F{polys};
    if (!check_mild_conditions(F, 0)) continue;
    // solutions: pick one form per polynomial, solve the 3x3 linear system
    std::vector<RationalComplex> proj;
    for (const auto& a : forms[0])
      for (const auto& b : forms[1])
        for (const auto& c : forms[2]) {
          // solve [a1 a2 a3; b1 b2 b3; c1 c2 c3] x = -(a0, b0, c0)
          Rational det = a[1] * (b[2] * c[3] - b[3] * c[2]) - a[2] * (b[1] * c[3] - b[3] * c[1]) +
                         a[3] * (b[1] * c[2] - b[2] * c[1]);
          if (det == 0) {
            ok = false;
            break;
          }
          Rational dx = (-a[0]) * (b[2] * c[3] - b[3] * c[2]) -
                        a[2] * ((-b[0]) * c[3] - b[3] * (-c[0])) +
                        a[3] * ((-b[0]) * c[2] - b[2] * (-c[0]));
          proj.emplace_back(dx / det);
        }
    if (!ok) continue;
    HiddenResultant R = hidden_resultant(F, 0);
    UPoly expected = poly_from_roots(proj);
    CHECK(poly_equal_up_to_constant(R.poly, expected));
    ++done;
  }
}

TEST_CASE("nullstellensatz bounds examples") {
  NullstellensatzBounds b1 = nullstellensatz_bounds(2, {2, 2}, 3);
  CHECK(b1.A == 128);
  CHECK(b1.B == 262);
  CHECK(b1.gamma == Rational(15) * pow2(262));

  NullstellensatzBounds b2 = nullstellensatz_bounds(2, {1, 1}, 1);
  CHECK(b2.A == 32);

  // doubling tau adds exactly tau * max_i D/d_i
  NullstellensatzBounds lo = nullstellensatz_bounds(2, {2, 4}, 5);
  NullstellensatzBounds hi = nullstellensatz_bounds(2, {2, 4}, 10);
  CHECK(hi.B - lo.B == 5 * (8 / 2));
}
