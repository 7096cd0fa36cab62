#include "rouche/mpoly.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace rouche {

MPoly MPoly::constant(unsigned nvars, RationalComplex c) {
  MPoly f(nvars);
  f.add_term(Monomial{std::vector<unsigned>(nvars, 0)}, c);
  return f;
}

MPoly MPoly::variable(unsigned nvars, unsigned var) {
  if (var >= nvars) throw std::invalid_argument("MPoly::variable: index out of range");
  MPoly f(nvars);
  Monomial m{std::vector<unsigned>(nvars, 0)};
  m.e[var] = 1;
  f.add_term(m, RationalComplex(Rational(1)));
  return f;
}

int MPoly::total_degree() const {
  if (terms_.empty()) return -1;
  return static_cast<int>(terms_.rbegin()->first.total());
}

int MPoly::degree_in(unsigned var) const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m.e[var]));
  return d;
}

void MPoly::add_term(const Monomial& m, const RationalComplex& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
  } else {
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

RationalComplex MPoly::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? RationalComplex() : it->second;
}

MPoly MPoly::operator+(const MPoly& o) const {
  MPoly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

MPoly MPoly::operator-(const MPoly& o) const {
  MPoly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
  return r;
}

MPoly MPoly::operator-() const {
  MPoly r(nvars_);
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

MPoly MPoly::operator*(const MPoly& o) const {
  MPoly r(nvars_);
  for (const auto& [m1, c1] : terms_) {
    for (const auto& [m2, c2] : o.terms_) {
      Monomial m = m1;
      for (size_t i = 0; i < m.e.size(); ++i) m.e[i] += m2.e[i];
      r.add_term(m, c1 * c2);
    }
  }
  return r;
}

MPoly MPoly::operator*(const RationalComplex& s) const {
  MPoly r(nvars_);
  if (s.is_zero()) return r;
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, c * s);
  return r;
}

MPoly MPoly::derivative(unsigned var) const {
  MPoly r(nvars_);
  for (const auto& [m, c] : terms_) {
    if (m.e[var] == 0) continue;
    Monomial d = m;
    d.e[var] -= 1;
    r.add_term(d, c * Rational(m.e[var]));
  }
  return r;
}

RationalComplex MPoly::evaluate(const std::vector<RationalComplex>& z) const {
  if (z.size() != nvars_) throw std::invalid_argument("evaluate: wrong point arity");
  // power tables per variable
  std::vector<std::vector<RationalComplex>> pows(nvars_);
  for (unsigned v = 0; v < nvars_; ++v) {
    int d = degree_in(v);
    pows[v].push_back(RationalComplex(Rational(1)));
    for (int i = 1; i <= d; ++i) pows[v].push_back(pows[v].back() * z[v]);
  }
  RationalComplex acc;
  for (const auto& [m, c] : terms_) {
    RationalComplex t = c;
    for (unsigned v = 0; v < nvars_; ++v)
      if (m.e[v] > 0) t = t * pows[v][m.e[v]];
    acc = acc + t;
  }
  return acc;
}

long MPoly::norm_log2_ceil() const {
  if (terms_.empty()) throw std::domain_error("norm_log2_ceil of zero polynomial");
  // smallest t with 4^t >= max |c|^2
  Rational best(0);
  for (const auto& [m, c] : terms_) best = std::max(best, c.abs2());
  long t2 = log2_ceil_pos(best);  // 2^t2 >= |c|^2
  // need smallest t with 2^(2t) >= |c|^2
  long t = (t2 >= 0) ? (t2 + 1) / 2 : -((-t2) / 2);
  while (pow2(2 * t) < best) ++t;
  while (pow2(2 * (t - 1)) >= best) --t;
  return t;
}

long MPoly::tau() const { return std::max(1L, norm_log2_ceil()); }

unsigned PolySystem::max_degree() const {
  int d = 0;
  for (const auto& f : polys) d = std::max(d, f.total_degree());
  return static_cast<unsigned>(std::max(d, 0));
}

Int PolySystem::bezout() const {
  Int D = 1;
  for (const auto& f : polys) D *= std::max(f.total_degree(), 0);
  return D;
}

long PolySystem::tau() const {
  long t = 1;
  for (const auto& f : polys) t = std::max(t, f.tau());
  return t;
}

std::vector<unsigned> PolySystem::degrees() const {
  std::vector<unsigned> d;
  for (const auto& f : polys) d.push_back(static_cast<unsigned>(std::max(f.total_degree(), 0)));
  return d;
}

MPoly shift(const MPoly& f, const std::vector<RationalComplex>& z) {
  if (z.size() != f.nvars()) throw std::invalid_argument("shift: wrong point arity");
  MPoly cur = f;
  for (unsigned v = 0; v < f.nvars(); ++v) {
    if (z[v].is_zero()) continue;
    // regroup by the x_v-degree and apply Horner with (x_v + z_v)
    int d = cur.degree_in(v);
    if (d <= 0) continue;
    std::vector<MPoly> layers(static_cast<size_t>(d) + 1, MPoly(f.nvars()));
    for (const auto& [m, c] : cur.terms()) {
      Monomial base = m;
      unsigned k = base.e[v];
      base.e[v] = 0;
      layers[k].add_term(base, c);
    }
    MPoly xv_plus = MPoly::variable(f.nvars(), v) + MPoly::constant(f.nvars(), z[v]);
    MPoly acc = layers[static_cast<size_t>(d)];
    for (int k = d - 1; k >= 0; --k) acc = acc * xv_plus + layers[static_cast<size_t>(k)];
    cur = acc;
  }
  return cur;
}

MPoly truncate(const MPoly& f, unsigned k) {
  MPoly r(f.nvars());
  for (const auto& [m, c] : f.terms()) {
    if (m.total() <= k) r.add_term(m, c);
  }
  return r;
}

MPoly partial_evaluate(const MPoly& f, unsigned var, const RationalComplex& xi) {
  if (var >= f.nvars()) throw std::invalid_argument("partial_evaluate: bad variable");
  unsigned n = f.nvars();
  MPoly r(n - 1);
  int d = f.degree_in(var);
  std::vector<RationalComplex> pows{RationalComplex(Rational(1))};
  for (int i = 1; i <= d; ++i) pows.push_back(pows.back() * xi);
  for (const auto& [m, c] : f.terms()) {
    Monomial red;
    red.e.reserve(n - 1);
    for (unsigned v = 0; v < n; ++v)
      if (v != var) red.e.push_back(m.e[v]);
    r.add_term(red, c * pows[m.e[var]]);
  }
  return r;
}

ComplexBox evaluate_box(const MPoly& f, const std::vector<ComplexBox>& b,
                        unsigned long working_bits) {
  if (b.size() != f.nvars()) throw std::invalid_argument("evaluate_box: wrong arity");
  auto shrink = [&](const ComplexBox& x) {
    return working_bits ? x.round_outward(working_bits) : x;
  };
  std::vector<std::vector<ComplexBox>> pows(f.nvars());
  for (unsigned v = 0; v < f.nvars(); ++v) {
    int d = f.degree_in(v);
    pows[v].push_back(ComplexBox(Dyadic(1), Dyadic(1), Dyadic(0), Dyadic(0)));
    for (int i = 1; i <= d; ++i) pows[v].push_back(shrink(pows[v].back() * b[v]));
  }
  ComplexBox acc = ComplexBox::point(DyadicComplex{});
  unsigned long cbits = working_bits ? working_bits : 512;
  for (const auto& [m, c] : f.terms()) {
    // tight dyadic enclosure of the exact coefficient
    ComplexBox cb(Dyadic::from_rational_floor(c.re, static_cast<long>(cbits)),
                  Dyadic::from_rational_ceil(c.re, static_cast<long>(cbits)),
                  Dyadic::from_rational_floor(c.im, static_cast<long>(cbits)),
                  Dyadic::from_rational_ceil(c.im, static_cast<long>(cbits)));
    ComplexBox t = cb;
    for (unsigned v = 0; v < f.nvars(); ++v)
      if (m.e[v] > 0) t = shrink(t * pows[v][m.e[v]]);
    acc = shrink(acc + t);
  }
  return acc;
}

MPoly compose_matrix(const MPoly& f, const RatMatrix& S) {
  unsigned n = f.nvars();
  if (S.size() != n) throw std::invalid_argument("compose_matrix: dimension mismatch");
  // linear forms l_i(x) = sum_j S[i][j] x_j; result = f(l_1, ..., l_n)
  std::vector<MPoly> forms;
  for (unsigned i = 0; i < n; ++i) {
    MPoly li(n);
    for (unsigned j = 0; j < n; ++j) {
      Monomial m{std::vector<unsigned>(n, 0)};
      m.e[j] = 1;
      li.add_term(m, RationalComplex(S[i][j]));
    }
    forms.push_back(li);
  }
  std::vector<std::vector<MPoly>> pw(n);
  for (unsigned v = 0; v < n; ++v) {
    pw[v].push_back(MPoly::constant(n, RationalComplex(Rational(1))));
    int d = f.degree_in(v);
    for (int i = 1; i <= d; ++i) pw[v].push_back(pw[v].back() * forms[v]);
  }
  MPoly r(n);
  for (const auto& [m, c] : f.terms()) {
    MPoly t = MPoly::constant(n, c);
    for (unsigned v = 0; v < n; ++v)
      if (m.e[v] > 0) t = t * pw[v][m.e[v]];
    r = r + t;
  }
  return r;
}

Rational bound_eval(unsigned n, unsigned k, long tau, const Rational& m_of_z) {
  Rational mk(1);
  for (unsigned i = 0; i < k; ++i) mk *= m_of_z;
  return Rational(binomial(n + k, k)) * pow2(tau) * mk;
}

Rational bound_truncated_approx(unsigned n, unsigned d, long tau, unsigned k,
                                const Rational& m_of_zeta, const Rational& x_norm) {
  if (x_norm > 1) throw std::domain_error("bound_truncated_approx: ||x|| > 1");
  Rational xk(1);
  for (unsigned i = 0; i <= k; ++i) xk *= x_norm;
  Rational dn(1);
  for (unsigned i = 0; i < n; ++i) dn *= d;
  Rational base = m_of_zeta * Rational((n + d)) * Rational((n + d));
  Rational based(1);
  for (unsigned i = 0; i < d; ++i) based *= base;
  return xk * dn * pow2(tau + 1) * based;
}

MPoly shift_truncated(const MPoly& f, const std::vector<RationalComplex>& m, unsigned K) {
  unsigned n = f.nvars();
  if (m.size() != n) throw std::invalid_argument("shift_truncated: wrong arity");
  // power tables of the shift point
  std::vector<std::vector<RationalComplex>> pows(n);
  for (unsigned v = 0; v < n; ++v) {
    int d = f.degree_in(v);
    pows[v].push_back(RationalComplex(Rational(1)));
    for (int i = 1; i <= d; ++i) pows[v].push_back(pows[v].back() * m[v]);
  }
  // enumerate alpha with |alpha| <= K; coefficient of x^alpha in f[m] is
  // sum_beta c_beta * prod_j binom(beta_j, alpha_j) m_j^(beta_j - alpha_j)
  MPoly r(n);
  std::vector<unsigned> alpha(n, 0);
  auto emit = [&]() {
    RationalComplex acc;
    for (const auto& [mo, c] : f.terms()) {
      bool ok = true;
      for (unsigned v = 0; v < n; ++v)
        if (mo.e[v] < alpha[v]) {
          ok = false;
          break;
        }
      if (!ok) continue;
      RationalComplex t = c;
      for (unsigned v = 0; v < n; ++v) {
        if (alpha[v] > 0) t = t * Rational(binomial(mo.e[v], alpha[v]));
        unsigned rem = mo.e[v] - alpha[v];
        if (rem > 0) t = t * pows[v][rem];
      }
      acc = acc + t;
    }
    r.add_term(Monomial{alpha}, acc);
  };
  // iterate all alpha of total degree <= K
  while (true) {
    emit();
    unsigned v = 0;
    while (v < n) {
      ++alpha[v];
      unsigned tot = 0;
      for (unsigned x : alpha) tot += x;
      if (tot <= K) break;
      alpha[v] = 0;
      ++v;
    }
    if (v == n) break;
  }
  return r;
}

Int clear_denominators(MPoly& f) {
  Int l = 1;
  for (const auto& [m, c] : f.terms()) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.re.get_den().get_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.im.get_den().get_mpz_t());
  }
  if (l != 1) f = f * RationalComplex(Rational(l));
  return l;
}

// --- text grammar ----------------------------------------------------------

namespace {

struct Parser {
  const std::string& s;
  size_t pos = 0;

  explicit Parser(const std::string& str) : s(str) {}

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  [[noreturn]] void fail(const std::string& what) {
    throw std::runtime_error("parse error at position " + std::to_string(pos) + ": " + what);
  }
  Int integer() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) fail("expected integer");
    return Int(s.substr(start, pos - start));
  }
  // returns 1-based variable index
  unsigned variable(unsigned* max_seen) {
    skip_ws();
    char c = s[pos];
    if (c == 'y') {
      ++pos;
      *max_seen = std::max(*max_seen, 2u);
      return 2;
    }
    if (c == 'z') {
      ++pos;
      *max_seen = std::max(*max_seen, 3u);
      return 3;
    }
    if (c != 'x') fail("expected variable");
    ++pos;
    if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      Int idx = integer();
      if (idx < 1 || idx > 64) fail("variable index out of range");
      unsigned v = static_cast<unsigned>(idx.get_ui());
      *max_seen = std::max(*max_seen, v);
      return v;
    }
    *max_seen = std::max(*max_seen, 1u);
    return 1;
  }
};

struct RawTerm {
  Rational coeff;
  std::map<unsigned, unsigned> powers;  // var index (1-based) -> exponent
};

}  // namespace

MPoly MPoly::parse(const std::string& text, unsigned nvars_hint) {
  Parser p(text);
  std::vector<RawTerm> raw;
  unsigned max_var = 0;

  bool first = true;
  while (!p.eof()) {
    int sign = 1;
    char c = p.peek();
    if (c == '+' || c == '-') {
      sign = (c == '-') ? -1 : 1;
      ++p.pos;
    } else if (!first) {
      p.fail("expected '+' or '-' between terms");
    }
    if (p.eof()) p.fail("dangling sign");
    first = false;

    RawTerm t;
    t.coeff = sign;
    bool saw_factor = false;
    // optional leading coefficient
    c = p.peek();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      Int num = p.integer();
      if (p.peek() == '/') {
        ++p.pos;
        Int den = p.integer();
        if (den == 0) p.fail("zero denominator");
        t.coeff *= frac(num, den);
      } else {
        t.coeff *= Rational(num);
      }
      saw_factor = true;
      if (p.peek() == '*') ++p.pos;
    }
    // variable powers
    while (!p.eof()) {
      c = p.peek();
      if (c != 'x' && c != 'y' && c != 'z') break;
      unsigned v = p.variable(&max_var);
      unsigned e = 1;
      if (p.peek() == '^') {
        ++p.pos;
        Int ei = p.integer();
        if (ei < 0 || ei > 100000) p.fail("exponent out of range");
        e = static_cast<unsigned>(ei.get_ui());
      }
      t.powers[v] += e;
      saw_factor = true;
      if (p.peek() == '*') ++p.pos;
    }
    if (!saw_factor) p.fail("empty term");
    raw.push_back(std::move(t));
  }
  if (raw.empty()) p.fail("empty polynomial");

  unsigned n = nvars_hint > 0 ? nvars_hint : std::max(max_var, 1u);
  if (max_var > n) throw std::runtime_error("polynomial uses more variables than declared");
  MPoly f(n);
  for (const auto& t : raw) {
    Monomial m{std::vector<unsigned>(n, 0)};
    for (const auto& [v, e] : t.powers) m.e[v - 1] = e;
    f.add_term(m, RationalComplex(t.coeff));
  }
  return f;
}

std::string MPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // highest degree first
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    bool real_only = (c.im == 0);
    Rational lead = real_only ? c.re : c.im;
    bool neg = real_only && lead < 0;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    Rational mag = neg ? Rational(-lead) : lead;

    std::vector<std::string> factors;
    if (!real_only) {
      std::string s = "(" + c.re.get_str() + (c.im < 0 ? "" : "+") + c.im.get_str() + "*i)";
      factors.push_back(s);
    } else if (mag != 1 || m.total() == 0) {
      factors.push_back(mag.get_str());
    }
    for (unsigned v = 0; v < nvars_; ++v) {
      if (m.e[v] == 0) continue;
      std::string s = "x" + std::to_string(v + 1);
      if (m.e[v] > 1) s += "^" + std::to_string(m.e[v]);
      factors.push_back(s);
    }
    for (size_t i = 0; i < factors.size(); ++i) {
      if (i) os << "*";
      os << factors[i];
    }
  }
  return os.str();
}

}  // namespace rouche
