#include "rouche/resultant.hpp"

#include <algorithm>
#include <cassert>
#include <cstdint>

namespace rouche {

namespace {

// ---- exact linear algebra over Q(i) ----------------------------------------

RationalComplex det_gauss(std::vector<std::vector<RationalComplex>> M) {
  size_t n = M.size();
  RationalComplex det(Rational(1));
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && M[piv][col].is_zero()) ++piv;
    if (piv == n) return RationalComplex();
    if (piv != col) {
      std::swap(M[piv], M[col]);
      det = -det;
    }
    det = det * M[col][col];
    RationalComplex inv = M[col][col].inverse();
    for (size_t r = col + 1; r < n; ++r) {
      if (M[r][col].is_zero()) continue;
      RationalComplex factor = M[r][col] * inv;
      for (size_t c = col; c < n; ++c) M[r][c] = M[r][c] - factor * M[col][c];
    }
  }
  return det;
}

// Newton interpolation through (nodes[i], values[i]) with distinct rational
// real nodes and complex values; returns coefficients in the monomial basis.
UPoly interpolate(const std::vector<Rational>& nodes, const std::vector<RationalComplex>& values) {
  size_t n = nodes.size();
  std::vector<RationalComplex> dd = values;  // divided differences, in place
  for (size_t level = 1; level < n; ++level) {
    for (size_t i = n - 1; i >= level; --i) {
      Rational den = nodes[i] - nodes[i - level];
      dd[i] = (dd[i] - dd[i - 1]) * RationalComplex(Rational(1) / den);
      if (i == level) break;
    }
  }
  // expand the Newton form
  std::vector<RationalComplex> coeff{dd[n - 1]};
  for (size_t i = n - 1; i-- > 0;) {
    // coeff = coeff * (x - nodes[i]) + dd[i]
    std::vector<RationalComplex> nxt(coeff.size() + 1);
    for (size_t j = 0; j < coeff.size(); ++j) {
      nxt[j + 1] = nxt[j + 1] + coeff[j];
      nxt[j] = nxt[j] - coeff[j] * RationalComplex(nodes[i]);
    }
    nxt[0] = nxt[0] + dd[i];
    coeff = std::move(nxt);
  }
  return UPoly(std::move(coeff));
}

// coefficient polynomials of f in the eliminated variable: f = sum_j a_j(x_hide) * x_elim^j
std::vector<UPoly> coeff_polys(const MPoly& f, unsigned hide, unsigned elim) {
  int de = f.degree_in(elim);
  int dh = f.degree_in(hide);
  std::vector<UPoly> a(static_cast<size_t>(de + 1));
  for (auto& u : a) u.c.assign(static_cast<size_t>(dh + 1), RationalComplex());
  for (const auto& [m, c] : f.terms()) a[m.e[elim]].c[m.e[hide]] = c;
  for (auto& u : a) u.normalize();
  return a;
}

bool real_integer_coeffs(const MPoly& f) {
  for (const auto& [m, c] : f.terms())
    if (c.im != 0 || c.re.get_den() != 1) return false;
  return true;
}

// ---- mod-p kernel -----------------------------------------------------------

namespace modp {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>((u128)a * b % p); }

u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

inline u64 invmod(u64 a, u64 p) { return powmod(a, p - 2, p); }

// resultant of univariate f, g over Z_p via the remainder sequence
u64 resultant_uni(std::vector<u64> f, std::vector<u64> g, u64 p) {
  auto deg = [](const std::vector<u64>& h) { return static_cast<long>(h.size()) - 1; };
  auto trim = [](std::vector<u64>& h) {
    while (!h.empty() && h.back() == 0) h.pop_back();
  };
  trim(f);
  trim(g);
  u64 res = 1;
  while (true) {
    if (f.empty() || g.empty()) return 0;
    if (deg(g) == 0) {
      return mulmod(res, powmod(g[0], static_cast<u64>(deg(f)), p), p);
    }
    if (deg(f) < deg(g)) {
      if ((deg(f) & 1) && (deg(g) & 1)) res = p - res == p ? 0 : (res == 0 ? 0 : p - res);
      std::swap(f, g);
      continue;
    }
    // r = f mod g
    std::vector<u64> r = f;
    u64 lg_inv = invmod(g.back(), p);
    long dg = deg(g);
    for (long i = deg(r); i >= dg; --i) {
      u64 q = mulmod(r[static_cast<size_t>(i)], lg_inv, p);
      if (q == 0) continue;
      for (long j = 0; j <= dg; ++j) {
        u64& slot = r[static_cast<size_t>(i - dg + j)];
        slot = (slot + p - mulmod(q, g[static_cast<size_t>(j)], p)) % p;
      }
    }
    trim(r);
    long dr = r.empty() ? -1 : deg(r);
    if (dr < 0) return 0;
    // res(f, g) = (-1)^{df*dg} lc(g)^{df-dr} res(g, r)
    long df = deg(f);
    if ((df & 1) && (dg & 1)) res = res == 0 ? 0 : p - res;
    res = mulmod(res, powmod(g.back(), static_cast<u64>(df - dr), p), p);
    f = std::move(g);
    g = std::move(r);
  }
}

std::vector<u64> prime_list(size_t count) {
  static std::vector<u64> cache;
  static Int cursor = (Int(1) << 62) - 59;
  while (cache.size() < count) {
    Int nxt;
    mpz_nextprime(nxt.get_mpz_t(), cursor.get_mpz_t());
    cursor = nxt;
    cache.push_back(nxt.get_ui());
  }
  return {cache.begin(), cache.begin() + static_cast<long>(count)};
}

u64 reduce_int(const Int& v, u64 p) {
  Int r = v % Int(static_cast<unsigned long>(p));
  if (r < 0) r += Int(static_cast<unsigned long>(p));
  return r.get_ui();
}

}  // namespace modp

}  // namespace

// Fast bivariate Sylvester resultant for real integer inputs:
// per prime, evaluate at integer nodes (filtered so both leading
// coefficients stay nonzero mod p), take univariate resultants via the
// remainder sequence, interpolate mod p, and CRT-reconstruct against a
// permanental coefficient bound.
UPoly sylvester_resultant_int_fast(const MPoly& f1, const MPoly& f2, unsigned hide) {
  unsigned elim = 1 - hide;
  auto a1 = coeff_polys(f1, hide, elim);
  auto a2 = coeff_polys(f2, hide, elim);
  long r1 = static_cast<long>(a1.size()) - 1, r2 = static_cast<long>(a2.size()) - 1;
  long dh1 = f1.degree_in(hide), dh2 = f2.degree_in(hide);
  long D = std::max(0L, dh1) * r2 + std::max(0L, dh2) * r1;

  // coefficient bound: product over rows of the 1-norm row sums
  auto poly_1norm = [](const UPoly& u) {
    Rational s(0);
    for (const auto& z : u.c) s += abs(z.re);
    return s;
  };
  Rational row1(0), row2(0);
  for (const auto& u : a1) row1 += poly_1norm(u);
  for (const auto& u : a2) row2 += poly_1norm(u);
  Rational bound(1);
  for (long i = 0; i < r2; ++i) bound *= std::max(row1, Rational(1));
  for (long i = 0; i < r1; ++i) bound *= std::max(row2, Rational(1));
  bound = 2 * bound + 2;
  size_t nprimes = static_cast<size_t>(log2_ceil_pos(bound) / 61 + 2);
  auto primes = modp::prime_list(nprimes);

  // per-prime images of the coefficient polys, highest-first evaluation later
  std::vector<std::vector<Int>> ac1(a1.size()), ac2(a2.size());
  for (size_t j = 0; j < a1.size(); ++j)
    for (const auto& z : a1[j].c) ac1[j].push_back(z.re.get_num());
  for (size_t j = 0; j < a2.size(); ++j)
    for (const auto& z : a2[j].c) ac2[j].push_back(z.re.get_num());

  std::vector<std::vector<modp::u64>> images;  // per prime: coefficients of R mod p
  for (auto p : primes) {
    // reduce coefficient polys mod p
    auto red = [&](const std::vector<std::vector<Int>>& ac) {
      std::vector<std::vector<modp::u64>> out(ac.size());
      for (size_t j = 0; j < ac.size(); ++j)
        for (const auto& v : ac[j]) out[j].push_back(modp::reduce_int(v, p));
      return out;
    };
    auto b1 = red(ac1), b2 = red(ac2);
    auto eval_poly = [&](const std::vector<modp::u64>& c, modp::u64 x) {
      modp::u64 acc = 0;
      for (size_t i = c.size(); i-- > 0;) acc = (modp::mulmod(acc, x, p) + c[i]) % p;
      return acc;
    };
    std::vector<modp::u64> nodes, values;
    modp::u64 x = 0;
    while (static_cast<long>(nodes.size()) <= D) {
      modp::u64 l1 = b1.empty() ? 0 : eval_poly(b1.back(), x);
      modp::u64 l2 = b2.empty() ? 0 : eval_poly(b2.back(), x);
      if (l1 != 0 && l2 != 0) {
        std::vector<modp::u64> u1, u2;
        for (const auto& cp : b1) u1.push_back(eval_poly(cp, x));
        for (const auto& cp : b2) u2.push_back(eval_poly(cp, x));
        nodes.push_back(x);
        values.push_back(modp::resultant_uni(u1, u2, p));
      }
      ++x;
      if (x > static_cast<modp::u64>(8 * (D + 2)))
        throw DegenerateSystem("resultant: could not find admissible evaluation nodes");
    }
    // Newton interpolation mod p
    size_t n = nodes.size();
    std::vector<modp::u64> dd = values;
    for (size_t level = 1; level < n; ++level) {
      for (size_t i = n - 1; i >= level; --i) {
        modp::u64 den = (nodes[i] + p - nodes[i - level]) % p;
        modp::u64 num = (dd[i] + p - dd[i - 1]) % p;
        dd[i] = modp::mulmod(num, modp::invmod(den, p), p);
        if (i == level) break;
      }
    }
    std::vector<modp::u64> coeff{dd[n - 1]};
    for (size_t i = n - 1; i-- > 0;) {
      std::vector<modp::u64> nxt(coeff.size() + 1, 0);
      for (size_t j = 0; j < coeff.size(); ++j) {
        nxt[j + 1] = (nxt[j + 1] + coeff[j]) % p;
        nxt[j] = (nxt[j] + p - modp::mulmod(coeff[j], nodes[i], p)) % p;
      }
      nxt[0] = (nxt[0] + dd[i]) % p;
      coeff = std::move(nxt);
    }
    coeff.resize(static_cast<size_t>(D + 1), 0);
    images.push_back(std::move(coeff));
  }

  // CRT per coefficient, symmetric lift
  Int prod = 1;
  for (auto p : primes) prod *= Int(static_cast<unsigned long>(p));
  std::vector<RationalComplex> out(static_cast<size_t>(D + 1));
  for (long i = 0; i <= D; ++i) {
    Int acc = 0, mod = 1;
    for (size_t pi = 0; pi < primes.size(); ++pi) {
      Int p(static_cast<unsigned long>(primes[pi]));
      Int r(static_cast<unsigned long>(images[pi][static_cast<size_t>(i)]));
      if (pi == 0) {
        acc = r;
        mod = p;
        continue;
      }
      // acc' = acc + mod * t, t = (r - acc) / mod  (mod p)
      Int t = (r - acc) % p;
      if (t < 0) t += p;
      Int minv;
      mpz_invert(minv.get_mpz_t(), mod.get_mpz_t(), p.get_mpz_t());
      t = (t * minv) % p;
      acc += mod * t;
      mod *= p;
    }
    if (acc * 2 > mod) acc -= mod;
    out[static_cast<size_t>(i)] = RationalComplex(Rational(acc));
  }
  return UPoly(std::move(out));
}

bool check_mild_conditions(const PolySystem& F, unsigned hide) {
  for (const auto& f : F.polys) {
    int d = f.total_degree();
    if (d < 0) return false;
    bool ok = false;
    for (const auto& [m, c] : f.terms()) {
      if (static_cast<int>(m.total()) == d && m.e[hide] == 0) {
        ok = true;
        break;
      }
    }
    if (!ok) return false;
  }
  return true;
}

RationalComplex resultant_univariate(const UPoly& f, const UPoly& g) {
  if (f.is_zero() || g.is_zero()) return RationalComplex();
  if (f.degree() == 0) {
    RationalComplex r(Rational(1));
    for (int i = 0; i < g.degree(); ++i) r = r * f.c[0];
    return r;
  }
  if (g.degree() == 0) {
    RationalComplex r(Rational(1));
    for (int i = 0; i < f.degree(); ++i) r = r * g.c[0];
    return r;
  }
  size_t n = static_cast<size_t>(f.degree() + g.degree());
  std::vector<std::vector<RationalComplex>> M(n, std::vector<RationalComplex>(n));
  size_t df = static_cast<size_t>(f.degree()), dg = static_cast<size_t>(g.degree());
  for (size_t r = 0; r < dg; ++r)
    for (size_t j = 0; j <= df; ++j) M[r][r + j] = f.c[df - j];
  for (size_t r = 0; r < df; ++r)
    for (size_t j = 0; j <= dg; ++j) M[dg + r][r + j] = g.c[dg - j];
  return det_gauss(std::move(M));
}

UPoly sylvester_resultant(const MPoly& f1, const MPoly& f2, unsigned hide) {
  if (f1.nvars() != 2 || f2.nvars() != 2 || hide > 1)
    throw std::invalid_argument("sylvester_resultant: bivariate only");
  unsigned elim = 1 - hide;
  int r1 = f1.degree_in(elim), r2 = f2.degree_in(elim);
  if (r1 < 0 || r2 < 0) throw DegenerateSystem("sylvester_resultant: zero polynomial");

  if (real_integer_coeffs(f1) && real_integer_coeffs(f2) && r1 > 0 && r2 > 0 &&
      (r1 + r2) * (f1.degree_in(hide) * r2 + f2.degree_in(hide) * r1 + 1) > 1500) {
    return sylvester_resultant_int_fast(f1, f2, hide);
  }

  auto a1 = coeff_polys(f1, hide, elim);
  auto a2 = coeff_polys(f2, hide, elim);
  // degenerate small cases: res(const, g) = const^{deg g}
  if (r1 == 0 || r2 == 0) {
    const auto& base = (r1 == 0) ? a1[0] : a2[0];
    int e = (r1 == 0) ? r2 : r1;
    UPoly acc;
    acc.c = {RationalComplex(Rational(1))};
    MPoly basem = base.to_mpoly();
    MPoly accm = acc.to_mpoly();
    for (int i = 0; i < e; ++i) accm = accm * basem;
    return UPoly::from_mpoly(accm);
  }

  long D = static_cast<long>(std::max(f1.degree_in(hide), 0)) * r2 +
           static_cast<long>(std::max(f2.degree_in(hide), 0)) * r1;
  std::vector<Rational> nodes;
  std::vector<RationalComplex> values;
  long x = 0;
  while (static_cast<long>(nodes.size()) <= D) {
    Rational node(x);
    // evaluate the Sylvester matrix at the node and take the determinant
    size_t n = static_cast<size_t>(r1 + r2);
    std::vector<std::vector<RationalComplex>> M(n, std::vector<RationalComplex>(n));
    auto eval_at = [&](const UPoly& u) { return u.evaluate(RationalComplex(node)); };
    for (long r = 0; r < r2; ++r)
      for (long j = 0; j <= r1; ++j)
        M[static_cast<size_t>(r)][static_cast<size_t>(r + j)] =
            eval_at(a1[static_cast<size_t>(r1 - j)]);
    for (long r = 0; r < r1; ++r)
      for (long j = 0; j <= r2; ++j)
        M[static_cast<size_t>(r2 + r)][static_cast<size_t>(r + j)] =
            eval_at(a2[static_cast<size_t>(r2 - j)]);
    nodes.push_back(node);
    values.push_back(det_gauss(std::move(M)));
    x = (x > 0) ? -x : -x + 1;  // 0, 1, -1, 2, -2, ...
  }
  return interpolate(nodes, values);
}

namespace {

// ---- Macaulay resultant for the trivariate case -----------------------------

struct Mono3 {
  unsigned a, b, h;
};

// res of three homogeneous polynomials in (a, b, h) with numeric coefficients,
// via the Macaulay quotient det(M)/det(M'). Returns nullopt on a vanishing
// denominator (degenerate node).
std::optional<RationalComplex> macaulay_quotient(
    const std::vector<std::map<std::tuple<unsigned, unsigned, unsigned>, RationalComplex>>& polys,
    const std::vector<unsigned>& deg) {
  unsigned nu = deg[0] + deg[1] + deg[2] - 2;
  // all monomials of degree nu in 3 variables
  std::vector<Mono3> monos;
  for (unsigned a = 0; a <= nu; ++a)
    for (unsigned b = 0; a + b <= nu; ++b) monos.push_back({a, b, nu - a - b});
  std::map<std::tuple<unsigned, unsigned, unsigned>, size_t> index;
  for (size_t i = 0; i < monos.size(); ++i)
    index[{monos[i].a, monos[i].b, monos[i].h}] = i;

  size_t n = monos.size();
  std::vector<std::vector<RationalComplex>> M(n, std::vector<RationalComplex>(n));
  std::vector<int> owner(n, -1);  // which S_i the row monomial belongs to
  for (size_t r = 0; r < n; ++r) {
    const Mono3& g = monos[r];
    int i;
    if (g.a >= deg[0]) {
      i = 0;
    } else if (g.b >= deg[1]) {
      i = 1;
    } else {
      i = 2;  // g.h >= deg[2] holds by the degree count
    }
    owner[r] = i;
    // row = (x^g / x_i^{d_i}) * F_i
    unsigned qa = g.a - (i == 0 ? deg[0] : 0);
    unsigned qb = g.b - (i == 1 ? deg[1] : 0);
    unsigned qh = g.h - (i == 2 ? deg[2] : 0);
    for (const auto& [mono, c] : polys[static_cast<size_t>(i)]) {
      auto [ma, mb, mh] = mono;
      M[r][index.at({ma + qa, mb + qb, mh + qh})] = c;
    }
  }
  RationalComplex detM = det_gauss(M);
  // submatrix on non-reduced monomials: x_i^{d_i} divides for >= 2 indices
  std::vector<size_t> nonred;
  for (size_t i = 0; i < n; ++i) {
    int divisors = (monos[i].a >= deg[0]) + (monos[i].b >= deg[1]) + (monos[i].h >= deg[2]);
    if (divisors >= 2) nonred.push_back(i);
  }
  if (nonred.empty()) return detM;  // M' is empty: det M' = 1
  std::vector<std::vector<RationalComplex>> Mp(nonred.size(),
                                               std::vector<RationalComplex>(nonred.size()));
  for (size_t r = 0; r < nonred.size(); ++r)
    for (size_t c = 0; c < nonred.size(); ++c) Mp[r][c] = M[nonred[r]][nonred[c]];
  RationalComplex detMp = det_gauss(std::move(Mp));
  if (detMp.is_zero()) return std::nullopt;
  return detM * detMp.inverse();
}

UPoly macaulay_resultant_tri(const PolySystem& F, unsigned hide) {
  // remaining variables in order
  std::vector<unsigned> rest;
  for (unsigned v = 0; v < 3; ++v)
    if (v != hide) rest.push_back(v);
  std::vector<unsigned> deg;
  for (const auto& f : F.polys) deg.push_back(static_cast<unsigned>(std::max(f.total_degree(), 0)));

  Int Dz = F.bezout();
  long D = static_cast<long>(Dz.get_si());
  std::vector<Rational> nodes;
  std::vector<RationalComplex> values;
  long attempts = 0, budget = 8 * (D + 1);
  long x = 0;
  while (static_cast<long>(nodes.size()) <= D) {
    if (++attempts > budget)
      throw DegenerateSystem("macaulay: all interpolation nodes degenerate");
    Rational node(x);
    x = (x > 0) ? -x : -x + 1;
    // specialize and homogenize per the mild-conditions construction
    std::vector<std::map<std::tuple<unsigned, unsigned, unsigned>, RationalComplex>> spec(3);
    bool bad = false;
    for (size_t i = 0; i < 3 && !bad; ++i) {
      const MPoly& f = F.polys[i];
      std::vector<RationalComplex> hp{RationalComplex(Rational(1))};
      for (int t = 1; t <= f.degree_in(hide); ++t)
        hp.push_back(hp.back() * RationalComplex(node));
      for (const auto& [m, c] : f.terms()) {
        unsigned a = m.e[rest[0]], b = m.e[rest[1]];
        if (a + b > deg[i]) {
          bad = true;
          break;
        }
        unsigned h = deg[i] - a - b;
        auto key = std::make_tuple(a, b, h);
        auto it = spec[i].find(key);
        RationalComplex add = c * hp[m.e[hide]];
        if (it == spec[i].end()) {
          if (!add.is_zero()) spec[i].emplace(key, add);
        } else {
          it->second = it->second + add;
          if (it->second.is_zero()) spec[i].erase(it);
        }
      }
    }
    if (bad) throw std::invalid_argument("macaulay: mild conditions violated");
    auto q = macaulay_quotient(spec, deg);
    if (!q) continue;  // degenerate node, resample
    nodes.push_back(node);
    values.push_back(*q);
  }
  return interpolate(nodes, values);
}

}  // namespace

HiddenResultant hidden_resultant(const PolySystem& F, unsigned hide) {
  unsigned n = F.dim();
  if (n != 2 && n != 3) throw std::invalid_argument("hidden_resultant: n must be 2 or 3");
  if (hide >= n) throw std::invalid_argument("hidden_resultant: bad variable index");
  // check_mild_conditions is the caller's gate: the Sylvester/Macaulay
  // construction below is well-defined regardless, but the projection /
  // multiplicity guarantees only hold under the conditions (the counting
  // pipeline rotates until they do).
  UPoly R;
  if (n == 2) {
    R = sylvester_resultant(F.polys[0], F.polys[1], hide);
  } else {
    R = macaulay_resultant_tri(F, hide);
  }
  if (R.is_zero()) throw DegenerateSystem("hidden_resultant: resultant vanishes identically");
  HiddenResultant out;
  out.hidden_var = hide;
  out.degree_certified = (Int(R.degree()) == F.bezout());
  out.poly = std::move(R);
  return out;
}

NullstellensatzBounds nullstellensatz_bounds(unsigned n, const std::vector<unsigned>& degrees,
                                             long tau) {
  NullstellensatzBounds out;
  unsigned long D = 1, dmax = 1, dmin = 0;
  for (unsigned d : degrees) {
    if (d < 1) throw std::invalid_argument("nullstellensatz_bounds: degrees must be >= 1");
    D *= d;
    dmax = std::max(dmax, static_cast<unsigned long>(d));
    dmin = dmin == 0 ? d : std::min(dmin, static_cast<unsigned long>(d));
  }
  out.A = ceil_mul_log2(6 * n + 4, D, n + 2);
  long maxDdi = static_cast<long>(D / dmin);
  out.B = 2 * ceil_mul_log2(6 * n + 4, D, static_cast<unsigned long>(dmax) + n) + tau * maxDdi;
  out.gamma = Rational(binomial(n + static_cast<unsigned long>(D), D)) * pow2(out.B);
  return out;
}

}  // namespace rouche
