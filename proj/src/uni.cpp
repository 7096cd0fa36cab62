#include "rouche/uni.hpp"

#include <algorithm>
#include <cassert>
#include <cstdio>
#include <cstdlib>
#include <map>

namespace rouche {

namespace {

Rational pow_rational(const Rational& x, unsigned e) {
  Rational r(1);
  Rational base = x;
  while (e) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

const Dyadic& sqrt2_upper_cached() {
  static const Dyadic v = sqrt_upper(Rational(2), 48);
  return v;
}

}  // namespace

void UPoly::normalize() {
  if (!err.empty()) return;
  while (!c.empty() && c.back().is_zero()) c.pop_back();
}

UPoly UPoly::derivative() const {
  UPoly d;
  if (c.size() <= 1) return d;
  d.c.reserve(c.size() - 1);
  for (size_t i = 1; i < c.size(); ++i) d.c.push_back(c[i] * Rational(static_cast<long>(i)));
  if (!err.empty()) {
    d.err.reserve(c.size() - 1);
    for (size_t i = 1; i < err.size(); ++i)
      d.err.push_back(err[i] * Rational(static_cast<long>(i)));
    d.err.resize(d.c.size(), Rational(0));
  }
  d.normalize();
  return d;
}

RationalComplex UPoly::evaluate(const RationalComplex& x) const {
  RationalComplex acc;
  for (size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
  return acc;
}

ComplexBox UPoly::evaluate_box(const ComplexBox& x, unsigned long working_bits) const {
  ComplexBox acc = ComplexBox::point(DyadicComplex{});
  for (size_t i = c.size(); i-- > 0;) {
    Rational e = (i < err.size()) ? err[i] : Rational(0);
    ComplexBox cb(dyadic_directed(c[i].re - e, working_bits, false),
                  dyadic_directed(c[i].re + e, working_bits, true),
                  dyadic_directed(c[i].im - e, working_bits, false),
                  dyadic_directed(c[i].im + e, working_bits, true));
    acc = ((acc * x) + cb).round_outward(working_bits);
  }
  return acc;
}

UPoly UPoly::from_mpoly(const MPoly& f) {
  if (f.nvars() != 1) throw std::invalid_argument("from_mpoly: not univariate");
  UPoly u;
  u.c.resize(static_cast<size_t>(std::max(f.total_degree(), 0)) + 1);
  for (const auto& [m, coef] : f.terms()) u.c[m.e[0]] = coef;
  u.normalize();
  return u;
}

MPoly UPoly::to_mpoly() const {
  MPoly f(1);
  for (size_t i = 0; i < c.size(); ++i) f.add_term(Monomial{{static_cast<unsigned>(i)}}, c[i]);
  return f;
}

Rational UPoly::cauchy_root_bound() const {
  if (c.empty()) throw std::domain_error("cauchy_root_bound of zero polynomial");
  size_t d = c.size() - 1;
  Rational lead_err = (d < err.size()) ? err[d] : Rational(0);
  Rational lead_lo = abs_lower(c[d], 64).to_rational() - lead_err;
  if (lead_lo <= 0) throw std::domain_error("cauchy_root_bound: leading coefficient not separated");
  Rational best(0);
  for (size_t i = 0; i < d; ++i) {
    Rational e = (i < err.size()) ? err[i] : Rational(0);
    best = std::max(best, Rational(abs_upper(c[i], 64).to_rational() + e));
  }
  return 1 + best / lead_lo;
}

namespace {

bool gaussian_integer_coeffs(const UPoly& f) {
  for (const auto& z : f.c) {
    if (z.re.get_den() != 1 || z.im.get_den() != 1) return false;
  }
  return true;
}

bool dyadic_rational(const Rational& q, long* neg_exp) {
  // q = a / 2^t ?
  const Int& den = q.get_den();
  size_t bits = mpz_sizeinbase(den.get_mpz_t(), 2);
  if (mpz_scan1(den.get_mpz_t(), 0) != bits - 1) return false;  // den not a power of two
  *neg_exp = static_cast<long>(bits - 1);
  return true;
}

// Integer fast path: f has Gaussian-integer coefficients and m is dyadic.
// Shift of the 2^L-scaled polynomial by the Gaussian integer a = m * 2^L
// runs entirely over mpz, then exponents are restored.
UPoly taylor_shift_integer(const UPoly& f, const RationalComplex& m, long L) {
  size_t n = f.c.size();
  long d = static_cast<long>(n) - 1;
  Int ar = Int(m.re.get_num() * pow2_int(static_cast<unsigned long>(
                                    L - (mpz_sizeinbase(m.re.get_den().get_mpz_t(), 2) - 1))));
  Int ai = Int(m.im.get_num() * pow2_int(static_cast<unsigned long>(
                                    L - (mpz_sizeinbase(m.im.get_den().get_mpz_t(), 2) - 1))));
  std::vector<Int> R(n), I(n);
  for (size_t i = 0; i < n; ++i) {
    unsigned long sh = static_cast<unsigned long>((d - static_cast<long>(i)) * L);
    mpz_mul_2exp(R[i].get_mpz_t(), f.c[i].re.get_num().get_mpz_t(), sh);
    mpz_mul_2exp(I[i].get_mpz_t(), f.c[i].im.get_num().get_mpz_t(), sh);
  }
  // synthetic Taylor shift by the Gaussian integer (ar + i*ai)
  Int tr, ti;
  for (long i = 0; i < d; ++i) {
    for (long j = d - 1; j >= i; --j) {
      tr = ar * R[j + 1] - ai * I[j + 1];
      ti = ar * I[j + 1] + ai * R[j + 1];
      R[j] += tr;
      I[j] += ti;
    }
  }
  UPoly out;
  out.c.resize(n);
  for (size_t i = 0; i < n; ++i) {
    long e = (static_cast<long>(i) - d) * L;
    out.c[i] = RationalComplex(Rational(R[i]) * pow2(e), Rational(I[i]) * pow2(e));
  }
  out.normalize();
  return out;
}

}  // namespace

UPoly taylor_shift(const UPoly& f, const RationalComplex& m) {
  if (f.c.empty()) return f;
  if (m.is_zero()) return f;
  long lr = 0, li = 0;
  if (f.exact() && gaussian_integer_coeffs(f) && dyadic_rational(m.re, &lr) &&
      dyadic_rational(m.im, &li)) {
    return taylor_shift_integer(f, m, std::max({lr, li, 0L}));
  }
  UPoly out = f;
  size_t n = out.c.size();
  for (size_t i = 0; i + 1 < n; ++i) {
    for (size_t j = n - 1; j-- > i;) out.c[j] = out.c[j] + m * out.c[j + 1];
  }
  if (!f.err.empty()) {
    // |delta'_i| <= sum_{j>=i} err_j * binom(j,i) * M^{j-i}
    Rational mu = abs_upper(m, 64).to_rational();
    out.err.assign(n, Rational(0));
    for (size_t i = 0; i < n; ++i) {
      Rational acc(0), mp(1);
      for (size_t j = i; j < n; ++j) {
        Rational e = (j < f.err.size()) ? f.err[j] : Rational(0);
        acc += e * Rational(binomial(static_cast<unsigned long>(j), static_cast<unsigned long>(i))) * mp;
        mp *= mu;
      }
      out.err[i] = acc;
    }
  }
  return out;
}

TkOutcome tk_test(const UPoly& f, const Rational& r, unsigned k, unsigned long max_bits) {
  TkOutcome fail;
  if (f.c.empty() || r <= 0) return fail;
  size_t n = f.c.size();
  if (k >= n) return fail;
  std::vector<Rational> rpow(n);
  rpow[0] = 1;
  for (size_t i = 1; i < n; ++i) rpow[i] = rpow[i - 1] * r;
  auto coeff_err = [&](size_t i) { return (i < f.err.size()) ? f.err[i] : Rational(0); };

  for (unsigned long bits = 64; bits <= max_bits; bits *= 2) {
    Rational lo_k = abs_lower(f.c[k], bits).to_rational() - coeff_err(k);
    Rational hi_k = abs_upper(f.c[k], bits).to_rational() + coeff_err(k);
    Rational sum_hi(0), sum_lo(0);
    for (size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      Rational up = abs_upper(f.c[i], bits).to_rational() + coeff_err(i);
      Rational dn = abs_lower(f.c[i], bits).to_rational() - coeff_err(i);
      if (dn < 0) dn = 0;
      sum_hi += up * rpow[i];
      sum_lo += dn * rpow[i];
    }
    Rational lhs_lo = lo_k * rpow[k];
    if (lo_k > 0 && 2 * lhs_lo > 3 * sum_hi) {
      TkOutcome ok;
      ok.success = true;
      ok.k = static_cast<int>(k);
      ok.lb = lhs_lo / 3;
      return ok;
    }
    if (2 * hi_k * rpow[k] <= 3 * sum_lo) return fail;  // certified failure
  }
  return fail;
}

TkOutcome tstar_test(const UPoly& f, const Disc& disc, unsigned long max_bits) {
  if (disc.radius.sign() <= 0) return TkOutcome{};
  UPoly shifted =
      disc.center.is_zero() ? f : taylor_shift(f, RationalComplex(disc.center));
  Rational r = disc.radius.to_rational();
  int d = shifted.degree();
  for (int k = 0; k <= d; ++k) {
    TkOutcome out = tk_test(shifted, r, static_cast<unsigned>(k), max_bits);
    if (out.success) return out;
  }
  return TkOutcome{};
}

// --- subdivision isolation --------------------------------------------------

namespace {

struct WorkBox {
  DyadicComplex center;
  Dyadic half;  // half side length, same for both axes
};

Dyadic circum_radius_upper(const Dyadic& half) { return (half * sqrt2_upper_cached()); }

bool discs_overlap(const Disc& a, const Disc& b) {
  Rational d2 = (RationalComplex(DyadicComplex(a.center.re - b.center.re,
                                               a.center.im - b.center.im)))
                    .abs2();
  Rational s = (a.radius + b.radius).to_rational();
  return d2 <= s * s;
}

Disc enclosing_disc(const Disc& a, const Disc& b) {
  DyadicComplex mid{(a.center.re + b.center.re).mul_pow2(-1),
                    (a.center.im + b.center.im).mul_pow2(-1)};
  RationalComplex delta(DyadicComplex(a.center.re - b.center.re, a.center.im - b.center.im));
  Dyadic half_dist = sqrt_upper(delta.abs2(), 64).mul_pow2(-1);
  Dyadic rad = half_dist + std::max(a.radius, b.radius);
  return Disc(mid, rad);
}

bool box_inside_disc(const WorkBox& b, const Disc& d) {
  Rational r2 = (d.radius * d.radius).to_rational();
  for (int sx = -1; sx <= 1; sx += 2) {
    for (int sy = -1; sy <= 1; sy += 2) {
      Dyadic cx = b.center.re + (sx > 0 ? b.half : -b.half);
      Dyadic cy = b.center.im + (sy > 0 ? b.half : -b.half);
      RationalComplex delta(DyadicComplex(cx - d.center.re, cy - d.center.im));
      if (delta.abs2() > r2) return false;
    }
  }
  return true;
}

struct ClusterAccumulator {
  std::vector<RootCluster> clusters;
  long rho;
  const UPoly& f;
  unsigned long tk_bits;

  // true when the disc was accepted (possibly after merges)
  bool accept(Disc disc, unsigned count) {
    Dyadic limit(Int(1), -rho);
    while (true) {
      int hit = -1;
      for (size_t i = 0; i < clusters.size(); ++i) {
        if (discs_overlap(clusters[i].disc, disc)) {
          hit = static_cast<int>(i);
          break;
        }
      }
      if (hit < 0) break;
      Disc merged = enclosing_disc(clusters[static_cast<size_t>(hit)].disc, disc);
      if (merged.radius > limit) return false;
      TkOutcome out = tstar_test(f, merged, tk_bits);
      if (!out.success) return false;
      disc = merged;
      count = static_cast<unsigned>(out.k);
      clusters.erase(clusters.begin() + hit);
    }
    if (count > 0) clusters.push_back(RootCluster{disc, count});
    return true;
  }
};

}  // namespace

std::vector<RootCluster> isolate_roots(const UPoly& f, const ComplexBox& region, long rho) {
  if (f.c.empty()) throw std::invalid_argument("isolate_roots: zero polynomial");
  if (f.degree() == 0) return {};

  Dyadic half_re = (region.re_hi - region.re_lo).mul_pow2(-1);
  Dyadic half_im = (region.im_hi - region.im_lo).mul_pow2(-1);
  Dyadic half0 = std::max(std::max(half_re, half_im), Dyadic(Int(1), -rho - 4));
  WorkBox root{region.center(), half0};

  Rational w0 = (half0.mul_pow2(1)).to_rational();
  long lw = w0 >= 1 ? log2_ceil_pos(w0) : 0;
  long budget = 4 * (std::max(rho, 1L) + lw + 4);

  const unsigned long tk_bits = 4096;
  Dyadic target(Int(1), -rho);

  std::vector<WorkBox> queue{root};
  ClusterAccumulator acc{{}, rho, f, tk_bits};

  static const bool trace = std::getenv("ROUCHE_TRACE_ISOLATE") != nullptr;
  for (long level = 0; level <= budget && !queue.empty(); ++level) {
    if (trace && (level % 16 == 0 || queue.size() > 64))
      std::fprintf(stderr, "[isolate] deg=%d exact=%d rho=%ld level=%ld boxes=%zu half2^%ld\n",
                   f.degree(), f.exact() ? 1 : 0, rho, level, queue.size(),
                   queue[0].half.is_zero()
                       ? 0L
                       : queue[0].half.exponent() +
                             static_cast<long>(queue[0].half.mant_bits()));
    // exclusion / coverage pass
    std::vector<WorkBox> survivors;
    for (const auto& b : queue) {
      bool covered = false;
      for (const auto& cl : acc.clusters) {
        if (box_inside_disc(b, cl.disc)) {
          covered = true;
          break;
        }
      }
      if (covered) continue;
      Dyadic rc = circum_radius_upper(b.half);
      UPoly fc = taylor_shift(f, RationalComplex(b.center));
      TkOutcome t0 = tk_test(fc, rc.to_rational(), 0, 512);
      if (t0.success) continue;
      survivors.push_back(b);
    }
    if (survivors.empty()) {
      queue.clear();
      break;
    }

    // connected components among survivors (same level => same half width)
    size_t m = survivors.size();
    std::vector<int> comp(m, -1);
    int ncomp = 0;
    for (size_t i = 0; i < m; ++i) {
      if (comp[i] >= 0) continue;
      comp[i] = ncomp;
      std::vector<size_t> stack{i};
      while (!stack.empty()) {
        size_t u = stack.back();
        stack.pop_back();
        for (size_t v = 0; v < m; ++v) {
          if (comp[v] >= 0) continue;
          Dyadic dx = (survivors[u].center.re - survivors[v].center.re).abs();
          Dyadic dy = (survivors[u].center.im - survivors[v].center.im).abs();
          Dyadic touch = (survivors[u].half + survivors[v].half);
          if (dx <= touch && dy <= touch) {
            comp[v] = ncomp;
            stack.push_back(v);
          }
        }
      }
      ++ncomp;
    }

    std::vector<WorkBox> next;
    for (int ci = 0; ci < ncomp; ++ci) {
      std::vector<WorkBox> boxes;
      for (size_t i = 0; i < m; ++i)
        if (comp[i] == ci) boxes.push_back(survivors[i]);
      // bounding box of the component
      Dyadic relo = boxes[0].center.re - boxes[0].half, rehi = boxes[0].center.re + boxes[0].half;
      Dyadic imlo = boxes[0].center.im - boxes[0].half, imhi = boxes[0].center.im + boxes[0].half;
      for (const auto& b : boxes) {
        relo = std::min(relo, b.center.re - b.half);
        rehi = std::max(rehi, b.center.re + b.half);
        imlo = std::min(imlo, b.center.im - b.half);
        imhi = std::max(imhi, b.center.im + b.half);
      }
      DyadicComplex cc{(relo + rehi).mul_pow2(-1), (imlo + imhi).mul_pow2(-1)};
      Dyadic hw = std::max((rehi - relo).mul_pow2(-1), (imhi - imlo).mul_pow2(-1));
      Dyadic crad = circum_radius_upper(hw);

      bool resolved = false;
      // try the hull disc and its 2x inflation, smallest first
      for (int infl = 0; infl < 2 && !resolved; ++infl) {
        Disc cand(cc, infl == 0 ? crad : crad.mul_pow2(1));
        if (cand.radius > target) continue;
        TkOutcome out = tstar_test(f, cand, tk_bits);
        if (!out.success) continue;
        if (out.k == 0) {
          resolved = true;  // certified root-free hull
        } else if (acc.accept(cand, static_cast<unsigned>(out.k))) {
          resolved = true;
        }
      }
      if (!resolved) {
        for (const auto& b : boxes) {
          Dyadic h2 = b.half.mul_pow2(-1);
          for (int sx = -1; sx <= 1; sx += 2) {
            for (int sy = -1; sy <= 1; sy += 2) {
              next.push_back(WorkBox{DyadicComplex{b.center.re + (sx > 0 ? h2 : -h2),
                                                   b.center.im + (sy > 0 ? h2 : -h2)},
                                     h2});
            }
          }
        }
      }
    }
    queue = std::move(next);
    if (queue.size() > 20000)
      throw IsolationFailure("isolate_roots: box budget exhausted (precision out of reach)");
  }
  if (!queue.empty()) {
    throw IsolationFailure("isolate_roots: depth budget exhausted (increase precision or perturb)");
  }
  std::sort(acc.clusters.begin(), acc.clusters.end(), [](const RootCluster& a, const RootCluster& b) {
    if (int c = a.disc.center.re.cmp(b.disc.center.re); c != 0) return c < 0;
    return a.disc.center.im.cmp(b.disc.center.im) < 0;
  });
  return acc.clusters;
}

// --- refinement --------------------------------------------------------------

std::optional<Disc> refine_enclosure(const UPoly& f, const RootCluster& cluster, long rho) {
  UPoly g = f;
  for (unsigned i = 1; i < cluster.count; ++i) g = g.derivative();
  if (g.degree() < 1) return std::nullopt;
  UPoly gp = g.derivative();

  ComplexBox X = ComplexBox::disc_hull(cluster.disc.center, cluster.disc.radius);
  Dyadic target(Int(1), -rho);
  int stall = 0;
  for (int iter = 0; iter < 64 + rho; ++iter) {
    Dyadic hw = std::max((X.re_hi - X.re_lo).mul_pow2(-1), (X.im_hi - X.im_lo).mul_pow2(-1));
    if (hw <= target) {
      Dyadic rad = circum_radius_upper(hw);
      return Disc(X.center(), rad);
    }
    unsigned long wbits = 128;
    {
      Rational hwr = hw.to_rational();
      if (hwr > 0 && hwr < 1) wbits = static_cast<unsigned long>(2 * (-log2_ceil_pos(hwr)) + 96);
    }
    ComplexBox gpX = gp.evaluate_box(X, wbits);
    if (box_abs_bounds(gpX).first.is_zero()) {
      // derivative interval straddles zero: pre-contract via isolation of g
      try {
        auto sub = isolate_roots(g, X, std::min<long>(rho, 2 * (iter + 4)));
        if (sub.size() != 1) return std::nullopt;
        ComplexBox nx = ComplexBox::disc_hull(sub[0].disc.center, sub[0].disc.radius);
        X = nx;
        continue;
      } catch (const IsolationFailure&) {
        return std::nullopt;
      }
    }
    DyadicComplex mid = X.center();
    ComplexBox gm = g.evaluate_box(ComplexBox::point(mid), wbits);
    ComplexBox step = box_div(gm, gpX, wbits);
    ComplexBox N(mid.re - step.re_hi, mid.re - step.re_lo, mid.im - step.im_hi,
                 mid.im - step.im_lo);
    // intersect with X; every root of g in X survives
    ComplexBox XN(std::max(X.re_lo, N.re_lo), std::min(X.re_hi, N.re_hi),
                  std::max(X.im_lo, N.im_lo), std::min(X.im_hi, N.im_hi));
    if (XN.re_lo > XN.re_hi || XN.im_lo > XN.im_hi) return std::nullopt;  // no g-root in X
    Dyadic nhw = std::max((XN.re_hi - XN.re_lo).mul_pow2(-1), (XN.im_hi - XN.im_lo).mul_pow2(-1));
    if (nhw.cmp(hw) >= 0) {
      if (++stall > 3) return std::nullopt;
    } else {
      stall = 0;
    }
    X = XN;
  }
  return std::nullopt;
}

RootCluster refine_cluster(const UPoly& f, const RootCluster& cluster, long rho) {
  Dyadic target(Int(1), -rho);
  if (cluster.disc.radius <= target) return cluster;

  // Newton fast path: locate via the (count-1)-th derivative, certify with T_k
  if (auto enc = refine_enclosure(f, cluster, rho + 2)) {
    UPoly fc = taylor_shift(f, RationalComplex(enc->center));
    for (int att = 0; att < 3; ++att) {
      Dyadic rad = target.mul_pow2(-att);
      if (rad <= enc->radius) break;
      TkOutcome out = tk_test(fc, rad.to_rational(), cluster.count);
      if (out.success) {
        Disc nd(enc->center, rad);
        return RootCluster{nd, cluster.count};
      }
    }
  }

  // subdivision fallback
  ComplexBox region = ComplexBox::disc_hull(cluster.disc.center, cluster.disc.radius);
  auto clusters = isolate_roots(f, region, rho);
  std::vector<RootCluster> inside;
  unsigned total = 0;
  for (const auto& cl : clusters) {
    if (discs_overlap(cl.disc, cluster.disc)) {
      inside.push_back(cl);
      total += cl.count;
    }
  }
  if (inside.size() == 1 && inside[0].count == cluster.count) return inside[0];
  if (total == cluster.count && !inside.empty()) throw ClusterSplit(std::move(inside));
  throw IsolationFailure("refine_cluster: inconsistent recount");
}

}  // namespace rouche
