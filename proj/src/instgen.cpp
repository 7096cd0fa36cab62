#include "rouche/instgen.hpp"

#include "rouche/resultant.hpp"

#include <fstream>
#include <sstream>

namespace rouche {

DeriveMode parse_mode(const std::string& s) {
  if (s == "0xx") return DeriveMode::m0xx;
  if (s == "0xy") return DeriveMode::m0xy;
  if (s == "0yy") return DeriveMode::m0yy;
  if (s == "x0y") return DeriveMode::mx0y;
  if (s == "y0x") return DeriveMode::my0x;
  throw std::invalid_argument("unknown mode: " + s);
}

VarOrder parse_order(const std::string& s) {
  if (s == "xyz") return VarOrder::xyz;
  if (s == "xzy") return VarOrder::xzy;
  if (s == "yzx") return VarOrder::yzx;
  throw std::invalid_argument("unknown variable order: " + s);
}

std::string mode_name(DeriveMode m) {
  switch (m) {
    case DeriveMode::m0xx: return "0xx";
    case DeriveMode::m0xy: return "0xy";
    case DeriveMode::m0yy: return "0yy";
    case DeriveMode::mx0y: return "x0y";
    case DeriveMode::my0x: return "y0x";
  }
  return "?";
}

std::string order_name(VarOrder o) {
  switch (o) {
    case VarOrder::xyz: return "xyz";
    case VarOrder::xzy: return "xzy";
    case VarOrder::yzx: return "yzx";
  }
  return "?";
}

namespace {

MPoly rename_vars(const MPoly& P, VarOrder order) {
  if (order == VarOrder::xyz) return P;
  // permutation of exponent slots: xzy swaps y and z; yzx maps x->y, y->z, z->x
  MPoly out(3);
  for (const auto& [m, c] : P.terms()) {
    Monomial r{std::vector<unsigned>(3, 0)};
    if (order == VarOrder::xzy) {
      r.e[0] = m.e[0];
      r.e[1] = m.e[2];
      r.e[2] = m.e[1];
    } else {
      r.e[1] = m.e[0];
      r.e[2] = m.e[1];
      r.e[0] = m.e[2];
    }
    out.add_term(r, c);
  }
  return out;
}

// resultant in the last variable of two trivariate polynomials, by 2-D
// evaluation-interpolation of the Sylvester determinant
MPoly resultant_z(const MPoly& A, const MPoly& B) {
  int dzA = A.degree_in(2), dzB = B.degree_in(2);
  if (dzA < 1 || dzB < 0) throw DegenerateSystem("resultant_z: degenerate in z");
  // degree bounds of the determinant in x and y
  long dx = A.degree_in(0) * std::max(dzB, 0) + B.degree_in(0) * std::max(dzA, 0);
  long dy = A.degree_in(1) * std::max(dzB, 0) + B.degree_in(1) * std::max(dzA, 0);

  auto eval_xy = [&](const MPoly& f, const Rational& x, const Rational& y) {
    // univariate in z
    std::vector<RationalComplex> c(static_cast<size_t>(f.degree_in(2)) + 1);
    std::vector<Rational> xp{Rational(1)}, yp{Rational(1)};
    for (int i = 1; i <= f.degree_in(0); ++i) xp.push_back(xp.back() * x);
    for (int i = 1; i <= f.degree_in(1); ++i) yp.push_back(yp.back() * y);
    for (const auto& [m, coef] : f.terms())
      c[m.e[2]] = c[m.e[2]] + coef * (xp[m.e[0]] * yp[m.e[1]]);
    return UPoly(std::move(c));
  };

  // nodes 0, 1, -1, 2, -2, ...
  auto node = [](long i) { return Rational((i % 2) ? (i + 1) / 2 : -i / 2); };

  // for each x-node: interpolate the y-direction, then interpolate across x
  std::vector<std::vector<RationalComplex>> rows;  // per x-node: y-coefficients
  std::vector<Rational> xnodes;
  for (long xi = 0; xi <= dx; ++xi) {
    Rational xv = node(xi);
    std::vector<RationalComplex> vals;
    std::vector<Rational> ynodes;
    for (long yi = 0; yi <= dy; ++yi) {
      Rational yv = node(yi);
      UPoly az = eval_xy(A, xv, yv);
      UPoly bz = eval_xy(B, xv, yv);
      // fix structural degrees so the determinant matches the symbolic matrix
      az.c.resize(static_cast<size_t>(dzA) + 1, RationalComplex());
      bz.c.resize(static_cast<size_t>(dzB) + 1, RationalComplex());
      size_t n = static_cast<size_t>(dzA + dzB);
      std::vector<std::vector<RationalComplex>> M(n, std::vector<RationalComplex>(n));
      for (long r = 0; r < dzB; ++r)
        for (long j = 0; j <= dzA; ++j)
          M[static_cast<size_t>(r)][static_cast<size_t>(r + j)] =
              az.c[static_cast<size_t>(dzA - j)];
      for (long r = 0; r < dzA; ++r)
        for (long j = 0; j <= dzB; ++j)
          M[static_cast<size_t>(dzB + r)][static_cast<size_t>(r + j)] =
              bz.c[static_cast<size_t>(dzB - j)];
      // gaussian determinant over Q(i)
      RationalComplex det(Rational(1));
      for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && M[piv][col].is_zero()) ++piv;
        if (piv == n) {
          det = RationalComplex();
          break;
        }
        if (piv != col) {
          std::swap(M[piv], M[col]);
          det = -det;
        }
        det = det * M[col][col];
        RationalComplex inv = M[col][col].inverse();
        for (size_t r2 = col + 1; r2 < n; ++r2) {
          if (M[r2][col].is_zero()) continue;
          RationalComplex factor = M[r2][col] * inv;
          for (size_t c2 = col; c2 < n; ++c2) M[r2][c2] = M[r2][c2] - factor * M[col][c2];
        }
      }
      ynodes.push_back(yv);
      vals.push_back(det);
    }
    // Newton interpolation in y
    size_t m = ynodes.size();
    std::vector<RationalComplex> dd = vals;
    for (size_t level = 1; level < m; ++level)
      for (size_t i = m - 1; i >= level; --i) {
        dd[i] = (dd[i] - dd[i - 1]) * RationalComplex(Rational(1) / (ynodes[i] - ynodes[i - level]));
        if (i == level) break;
      }
    std::vector<RationalComplex> coeff{dd[m - 1]};
    for (size_t i = m - 1; i-- > 0;) {
      std::vector<RationalComplex> nxt(coeff.size() + 1);
      for (size_t j = 0; j < coeff.size(); ++j) {
        nxt[j + 1] = nxt[j + 1] + coeff[j];
        nxt[j] = nxt[j] - coeff[j] * RationalComplex(ynodes[i]);
      }
      nxt[0] = nxt[0] + dd[i];
      coeff = std::move(nxt);
    }
    coeff.resize(static_cast<size_t>(dy) + 1, RationalComplex());
    rows.push_back(std::move(coeff));
    xnodes.push_back(xv);
  }
  // interpolate each y-coefficient across x
  MPoly out(2);
  size_t nx = xnodes.size();
  for (long yc = 0; yc <= dy; ++yc) {
    std::vector<RationalComplex> dd(nx);
    for (size_t i = 0; i < nx; ++i) dd[i] = rows[i][static_cast<size_t>(yc)];
    for (size_t level = 1; level < nx; ++level)
      for (size_t i = nx - 1; i >= level; --i) {
        dd[i] = (dd[i] - dd[i - 1]) * RationalComplex(Rational(1) / (xnodes[i] - xnodes[i - level]));
        if (i == level) break;
      }
    std::vector<RationalComplex> coeff{dd[nx - 1]};
    for (size_t i = nx - 1; i-- > 0;) {
      std::vector<RationalComplex> nxt(coeff.size() + 1);
      for (size_t j = 0; j < coeff.size(); ++j) {
        nxt[j + 1] = nxt[j + 1] + coeff[j];
        nxt[j] = nxt[j] - coeff[j] * RationalComplex(xnodes[i]);
      }
      nxt[0] = nxt[0] + dd[i];
      coeff = std::move(nxt);
    }
    for (size_t xc = 0; xc < coeff.size(); ++xc) {
      if (coeff[xc].is_zero()) continue;
      out.add_term(Monomial{{static_cast<unsigned>(xc), static_cast<unsigned>(yc)}}, coeff[xc]);
    }
  }
  return out;
}

}  // namespace

std::pair<MPoly, MPoly> derive_system(const MPoly& P, DeriveMode mode, VarOrder order) {
  if (P.nvars() != 3) throw std::invalid_argument("derive_system: trivariate seed required");
  MPoly Q = rename_vars(P, order);
  if (Q.degree_in(2) < 1)
    throw DegenerateSystem("derive_system: seed does not depend on the eliminated variable");
  MPoly Pz = Q.derivative(2);
  if (Pz.is_zero() || Pz.degree_in(2) < 0)
    throw DegenerateSystem("derive_system: vanishing z-derivative");
  MPoly f = resultant_z(Q, Pz);
  if (f.total_degree() < 1) throw DegenerateSystem("derive_system: constant resultant");
  MPoly fx = f.derivative(0), fy = f.derivative(1);
  switch (mode) {
    case DeriveMode::m0xx: return {f, fx * fx};
    case DeriveMode::m0xy: return {f, fx * fy};
    case DeriveMode::m0yy: return {f, fy * fy};
    case DeriveMode::mx0y: return {f * fx, fy};
    case DeriveMode::my0x: return {f * fy, fx};
  }
  throw std::logic_error("derive_system: unreachable");
}

std::pair<MPoly, MPoly> shear_system(const MPoly& f, const MPoly& g, int a, int b, int c, int d) {
  if (a * d - b * c == 0) throw std::invalid_argument("shear_system: singular shear");
  RatMatrix M{{Rational(a), Rational(b)}, {Rational(c), Rational(d)}};
  return {compose_matrix(f, M), compose_matrix(g, M)};
}

std::pair<MPoly, MPoly> inflate(const MPoly& f, const MPoly& g, unsigned d, unsigned sparsity,
                                std::mt19937_64& rng, const std::vector<RationalComplex>& z,
                                const Rational& enclosure_radius) {
  if (static_cast<int>(d) < f.total_degree() || static_cast<int>(d) < g.total_degree())
    throw std::invalid_argument("inflate: target degree below the input degree");
  auto nonvanishing = [&](const MPoly& p) {
    if (enclosure_radius == 0) return !p.evaluate(z).is_zero();
    Dyadic rad = Dyadic::from_rational_ceil(enclosure_radius, 64);
    std::vector<ComplexBox> boxes;
    for (const auto& c : z)
      boxes.push_back(ComplexBox::disc_hull(
          DyadicComplex{round_to_precision(c.re, 96), round_to_precision(c.im, 96)},
          rad + Dyadic(Int(1), -90)));
    auto [lo, hi] = box_abs_bounds(evaluate_box(p, boxes, 256));
    return !lo.is_zero();
  };
  auto multiplicand = [&](unsigned extra) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      MPoly p(2);
      std::uniform_int_distribution<int> cd(-8, 8);
      // one term of exact degree `extra` keeps the product degree exact
      unsigned a = extra == 0 ? 0 : rng() % (extra + 1);
      int lead = 0;
      while (lead == 0) lead = cd(rng);
      p.add_term(Monomial{{a, extra - a}}, RationalComplex(Rational(lead)));
      for (unsigned t = 1; t < sparsity; ++t) {
        unsigned deg = extra == 0 ? 0 : rng() % extra;
        unsigned aa = deg == 0 ? 0 : rng() % (deg + 1);
        int cc = cd(rng);
        if (cc) p.add_term(Monomial{{aa, deg - aa}}, RationalComplex(Rational(cc)));
      }
      if (nonvanishing(p)) return p;
    }
    throw std::runtime_error("inflate: could not find a nonvanishing multiplicand");
  };
  MPoly p = multiplicand(d - static_cast<unsigned>(f.total_degree()));
  MPoly q = multiplicand(d - static_cast<unsigned>(g.total_degree()));
  return {f * p, g * q};
}

void write_instance(const std::string& path, const Instance& inst) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_instance: cannot open " + path);
  os << inst.f.to_string() << "\n" << inst.g.to_string() << "\n";
  os << inst.x_lo.get_str() << " " << inst.x_hi.get_str() << "\n";
  os << inst.y_lo.get_str() << " " << inst.y_hi.get_str() << "\n";
}

namespace {

Rational parse_rational_token(const std::string& tok, const std::string& where) {
  if (tok.find('.') != std::string::npos)
    throw std::runtime_error("decimal numbers are not accepted (" + where + ")");
  try {
    Rational r(tok);
    r.canonicalize();
    return r;
  } catch (const std::exception&) {
    throw std::runtime_error("malformed rational '" + tok + "' at " + where);
  }
}

}  // namespace

Instance read_instance(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("read_instance: cannot open " + path);
  std::string lines[4];
  for (int i = 0; i < 4; ++i) {
    if (!std::getline(is, lines[i]))
      throw std::runtime_error("read_instance: " + path + ": expected 4 lines, got " +
                               std::to_string(i));
  }
  Instance inst;
  try {
    inst.f = MPoly::parse(lines[0], 2);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": line 1: " + e.what());
  }
  try {
    inst.g = MPoly::parse(lines[1], 2);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": line 2: " + e.what());
  }
  auto parse_range = [&](const std::string& line, int lineno, Rational& lo, Rational& hi) {
    std::istringstream ss(line);
    std::string a, b, extra;
    if (!(ss >> a >> b) || (ss >> extra))
      throw std::runtime_error(path + ": line " + std::to_string(lineno) +
                               ": expected two rationals");
    lo = parse_rational_token(a, "line " + std::to_string(lineno));
    hi = parse_rational_token(b, "line " + std::to_string(lineno));
  };
  parse_range(lines[2], 3, inst.x_lo, inst.x_hi);
  parse_range(lines[3], 4, inst.y_lo, inst.y_hi);
  return inst;
}

const std::vector<std::pair<std::string, std::string>>& seed_catalog() {
  // classic surface equations, transcribed
  static const std::vector<std::pair<std::string, std::string>> catalog = {
      {"sphere", "x^2 + y^2 + z^2 - 1"},
      {"paraboloid", "z - x^2 - y^2"},
      {"cone", "x^2 + y^2 - z^2"},
      {"dingdong", "x^2 + y^2 - z^3 + z^2"},
      {"kiss", "x^2 + y^2 - z^4 + z^5"},
      {"tooth", "x^4 + y^4 + z^4 - x^2 - y^2 - z^2"},
      {"cayley", "x^2 + y^2 - x^2*z + y^2*z + z^2 - 1"},
      {"twilight", "z^3 + 2*x*z - y^2"},
      {"cross", "x^2*y^2 + y^2*z^2 + x^2*z^2 - 2*x*y*z"},
      {"himmel", "x^2 - y^2*z^2 + z^3"},
  };
  return catalog;
}

PlantedSystem plant_system(unsigned k, std::mt19937_64& rng) {
  // factor k = p*q with p >= q
  unsigned p = k, q = 1;
  for (unsigned t = 2; t * t <= k; ++t) {
    if (k % t == 0) {
      p = k / t;
      q = t;
    }
  }
  std::uniform_int_distribution<int> small(-3, 3);
  for (int attempt = 0; attempt < 64; ++attempt) {
    Rational a(small(rng)), b(small(rng));
    std::vector<RationalComplex> z{RationalComplex(a), RationalComplex(b)};
    // f = (x - a)^p * u, g = (y - b)^q * v with u, v nonvanishing at z
    auto factor_poly = [&](unsigned var, const Rational& root, unsigned mult) {
      MPoly base = MPoly::variable(2, var) - MPoly::constant(2, RationalComplex(root));
      MPoly out = MPoly::constant(2, RationalComplex(Rational(1)));
      for (unsigned i = 0; i < mult; ++i) out = out * base;
      return out;
    };
    auto cofactor = [&]() {
      MPoly u(2);
      std::uniform_int_distribution<int> cd(-4, 4);
      for (unsigned aa = 0; aa <= 1; ++aa)
        for (unsigned bb = 0; aa + bb <= 1; ++bb) {
          int c = cd(rng);
          if (c) u.add_term(Monomial{{aa, bb}}, RationalComplex(Rational(c)));
        }
      if (u.is_zero()) u = MPoly::constant(2, RationalComplex(Rational(1)));
      return u;
    };
    MPoly u = cofactor(), v = cofactor();
    if (u.evaluate(z).is_zero() || v.evaluate(z).is_zero()) continue;
    MPoly f = factor_poly(0, a, p) * u;
    MPoly g = factor_poly(1, b, q) * v;
    // shear into generic position; the planted solution moves along
    std::uniform_int_distribution<int> sh(-2, 2);
    int sa = sh(rng), sb = sh(rng), sc = sh(rng), sd = sh(rng);
    if (sa * sd - sb * sc == 0) continue;
    auto [fs, gs] = shear_system(f, g, sa, sb, sc, sd);
    // z' = S^{-1} z for S = ((a,b),(c,d))
    Rational det(sa * sd - sb * sc);
    Rational zx = (Rational(sd) * a - Rational(sb) * b) / det;
    Rational zy = (Rational(-sc) * a + Rational(sa) * b) / det;
    PlantedSystem out;
    out.inst.f = fs;
    out.inst.g = gs;
    Rational r = frac(1, 16);
    out.inst.x_lo = zx - r;
    out.inst.x_hi = zx + r;
    out.inst.y_lo = zy - r;
    out.inst.y_hi = zy + r;
    out.solution = {RationalComplex(zx), RationalComplex(zy)};
    out.multiplicity = p * q;
    if (out.multiplicity != k) continue;  // k prime and > 3 handled by (k, 1)
    return out;
  }
  throw std::runtime_error("plant_system: generation budget exhausted");
}

}  // namespace rouche
