#include "rouche/bisolve.hpp"

#include "rouche/rotation.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>

namespace rouche {

namespace {

long ceil_log2_ul(unsigned long v) {
  long t = 0;
  while ((1ul << t) < v) ++t;
  return t;
}

// f as a polynomial in x_elim with univariate coefficients in x_keep
std::vector<UPoly> coeff_polys_in(const MPoly& f, unsigned keep, unsigned elim) {
  int de = f.degree_in(elim), dk = f.degree_in(keep);
  std::vector<UPoly> a(static_cast<size_t>(std::max(de, 0)) + 1);
  for (auto& u : a) u.c.assign(static_cast<size_t>(std::max(dk, 0)) + 1, RationalComplex());
  for (const auto& [m, c] : f.terms()) a[m.e[elim]].c[m.e[keep]] = c;
  for (auto& u : a) u.normalize();
  return a;
}

Rational disc_sup_norm(const Disc& d) {
  return abs_upper(RationalComplex(d.center), 64).to_rational() + d.radius.to_rational();
}

// |c1 - c2| + r1 <= r2 (certified): disc1 inside disc2
bool disc_inside(const Disc& d1, const Disc& d2) {
  if (d2.radius < d1.radius) return false;
  RationalComplex delta(DyadicComplex(d1.center.re - d2.center.re, d1.center.im - d2.center.im));
  Rational gap = (d2.radius - d1.radius).to_rational();
  return delta.abs2() <= gap * gap;
}

bool disc_overlap(const Disc& d1, const Disc& d2) {
  RationalComplex delta(DyadicComplex(d1.center.re - d2.center.re, d1.center.im - d2.center.im));
  Rational s = (d1.radius + d2.radius).to_rational();
  return delta.abs2() <= s * s;
}

// bits of the worst coefficient slope of the fibers of f over the disc of
// norm <= M: refining the base point below 2^-(rho + slope_bits) keeps the
// fiber coefficient errors under 2^-rho
long fiber_slope_bits(const MPoly& f, unsigned keep, const Rational& M) {
  auto a = coeff_polys_in(f, keep, 1 - keep);
  Rational worst(0);
  for (const auto& u : a) {
    Rational s(0), mp(1);
    for (size_t i = 1; i < u.c.size(); ++i) {
      s += Rational(static_cast<long>(i)) * abs_upper(u.c[i], 64).to_rational() * mp;
      mp *= M;
    }
    worst = std::max(worst, s);
  }
  return worst <= 1 ? 0 : log2_ceil_pos(worst);
}

// univariate fiber f(x_keep = zeta, x_other) with certified coefficient
// error radii covering every x_keep in the zeta-disc of radius e
UPoly fiber_with_error(const MPoly& f, unsigned keep, const RationalComplex& zeta,
                       const Rational& e) {
  unsigned other = 1 - keep;
  auto a = coeff_polys_in(f, keep, other);
  UPoly out;
  out.c.resize(a.size());
  out.err.assign(a.size(), Rational(0));
  Rational M = abs_upper(zeta, 64).to_rational() + e;
  for (size_t j = 0; j < a.size(); ++j) {
    out.c[j] = a[j].evaluate(zeta);
    // |a_j(t) - a_j(zeta)| <= e * sum_i i |c_i| M^{i-1} over the disc
    Rational bound(0), mp(1);
    for (size_t i = 1; i < a[j].c.size(); ++i) {
      bound += Rational(static_cast<long>(i)) * abs_upper(a[j].c[i], 64).to_rational() * mp;
      mp *= M;
    }
    out.err[j] = e * bound;
  }
  return out;
}

}  // namespace

ProjectionResult projection_phase(const PolySystem& F, const PolyDisc& disc) {
  if (F.dim() != 2) throw std::invalid_argument("projection_phase: bivariate systems only");
  ProjectionResult out;
  out.R1 = hidden_resultant(F, 0);
  out.R2 = hidden_resultant(F, 1);

  Rational r = disc.radius.to_rational();
  long rho = 6 + std::max(0L, r <= 1 ? log2_ceil_pos(1 / r) : 0L);

  auto isolate_axis = [&](const HiddenResultant& R, const DyadicComplex& center) {
    ComplexBox region = ComplexBox::disc_hull(center, disc.radius);
    auto clusters = isolate_roots(R.poly, region, rho);
    std::vector<std::pair<RootCluster, Rational>> with_lb;
    for (const auto& cl : clusters) {
      UPoly shifted = taylor_shift(R.poly, RationalComplex(cl.disc.center));
      TkOutcome tk = tk_test(shifted, cl.disc.radius.to_rational(), cl.count);
      if (!tk.success)  // same disc the isolation certified; re-derive via T_*
        tk = tstar_test(R.poly, cl.disc);
      with_lb.emplace_back(cl, tk.lb);
    }
    return with_lb;
  };
  auto cl1 = isolate_axis(out.R1, disc.center[0]);
  auto cl2 = isolate_axis(out.R2, disc.center[1]);
  for (const auto& [c1, lb1] : cl1) {
    for (const auto& [c2, lb2] : cl2) {
      Candidate cand;
      cand.disc1 = c1.disc;
      cand.disc2 = c2.disc;
      cand.k1 = c1.count;
      cand.k2 = c2.count;
      cand.lb1 = lb1;
      cand.lb2 = lb2;
      out.candidates.push_back(cand);
    }
  }
  return out;
}

bool exclusion_test(const PolySystem& F, const std::vector<ComplexBox>& boxes,
                    unsigned long working_bits) {
  for (const auto& f : F.polys) {
    if (!evaluate_box(f, boxes, working_bits).contains_zero()) return true;
  }
  return false;
}

bool inclusion_test_standard(const PolySystem& F, const Candidate& cand,
                             const std::vector<RationalComplex>& zeta) {
  NullstellensatzBounds nb = nullstellensatz_bounds(2, F.degrees(), F.tau());
  unsigned long D = F.bezout().get_ui();
  Rational msup = std::max(Rational(1), std::max(disc_sup_norm(cand.disc1), disc_sup_norm(cand.disc2)));
  Rational mpow(1);
  for (unsigned long i = 0; i < D; ++i) mpow *= msup;
  Rational ub = nb.gamma * mpow;
  Rational lb_star = std::min(cand.lb1, cand.lb2) / (2 * ub);
  Rational worst(0);
  for (const auto& f : F.polys) worst = std::max(worst, f.evaluate(zeta).abs2());
  return worst < lb_star * lb_star;
}

ValidateResult validate(const PolySystem& F, const Candidate& cand, const UPoly& R1,
                        const UPoly& R2, std::mt19937_64& rng, const ValidateOptions& opts) {
  ValidateResult res;
  unsigned kmin = std::max(1u, std::min(cand.k1, cand.k2));
  long klog = ceil_log2_ul(kmin);
  unsigned Kmax = 1u << klog;
  long guard_shift = 2 * klog + 6;
  unsigned d_F = F.max_degree();

  RootCluster cl1{cand.disc1, cand.k1}, cl2{cand.disc2, cand.k2};
  long acc_extra = ceil_log2_ul(128ul * (Kmax + 1) * (Kmax + 1)) + 1;
  auto start = std::chrono::steady_clock::now();

  for (long L = 1; L <= opts.precision_cap; L *= 2) {
    if (opts.budget_ms > 0) {
      auto spent = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
      if (spent > opts.budget_ms) {
        res.timed_out = true;
        return res;
      }
    }
    res.max_L = L;
    // approximation accurate enough for the strongest inner polysol call
    long rho_acc = L + acc_extra;
    auto refine_one = [&](const UPoly& R, RootCluster& cl) -> std::optional<DyadicComplex> {
      if (auto enc = refine_enclosure(R, cl, rho_acc)) return enc->center;
      try {
        cl = refine_cluster(R, cl, rho_acc);
        return cl.disc.center;
      } catch (const ClusterSplit&) {
        return std::nullopt;
      } catch (const IsolationFailure&) {
        return std::nullopt;
      }
    };
    auto z1 = refine_one(R1, cl1);
    auto z2 = refine_one(R2, cl2);
    if (!z1 || !z2) {
      res.capped = true;
      return res;
    }
    // guard: the inflated disc around zeta must stay inside the candidate
    Dyadic guard_rad(Int(1), guard_shift - L);
    auto guard_ok = [&](const DyadicComplex& z, const Disc& d) {
      Rational slack = (d.radius - guard_rad).to_rational();
      if (slack < 0) return false;
      RationalComplex delta(DyadicComplex(z.re - d.center.re, z.im - d.center.im));
      return delta.abs2() <= slack * slack;
    };
    if (!guard_ok(*z1, cand.disc1) || !guard_ok(*z2, cand.disc2)) continue;

    Dyadic radL(Int(1), -L);
    std::vector<ComplexBox> boxes{ComplexBox::disc_hull(*z1, radL),
                                  ComplexBox::disc_hull(*z2, radL)};
    if (exclusion_test(F, boxes, static_cast<unsigned long>(L) + 96)) {
      res.multiplicity = 0;
      return res;
    }
    std::vector<RationalComplex> zeta{RationalComplex(*z1), RationalComplex(*z2)};
    if (opts.method == InclusionMethod::standard) {
      if (inclusion_test_standard(F, cand, zeta)) {
        res.multiplicity = static_cast<int>(cand.k1);
        return res;
      }
    } else {
      PolyDisc pd;
      pd.center = {*z1, *z2};
      pd.radius = radL;
      for (unsigned K = 1; K <= Kmax; K *= 2) {
        PolysolOptions popts;
        popts.rotations = opts.polysol_rotations;
        CountVerdict v = polysol(F, pd, std::min(K, d_F), rng, popts);
        if (v.count >= 1) {
          res.multiplicity = v.count;
          return res;
        }
      }
    }
  }
  res.capped = true;
  return res;
}

ValidateResult validate(const PolySystem& F, const Candidate& cand, std::mt19937_64& rng,
                        const ValidateOptions& opts) {
  HiddenResultant R1 = hidden_resultant(F, 0);
  HiddenResultant R2 = hidden_resultant(F, 1);
  return validate(F, cand, R1.poly, R2.poly, rng, opts);
}

// --- BisolvePlus ------------------------------------------------------------

namespace {

struct AxisClusters {
  UPoly R;
  std::vector<RootCluster> clusters;
  std::vector<Rational> lbs;
};

enum class CandVerdict { excluded, solution, inconclusive };

struct DecideContext {
  const PolySystem& F;  // rotated system
  AxisClusters& ax1;
  AxisClusters& ax2;
  Rational gamma_m;     // gamma * M_sup^D over the solving region
  long p_max;
  InclusionMethod method;
  std::mt19937_64& rng;
};

// inclusion/exclusion escalation for candidate (i, j); refines the cluster
// discs in place so later candidates reuse the work
CandVerdict decide_candidate(DecideContext& ctx, size_t i, size_t j, const Rational& lb1,
                             const Rational& lb2, long p0, long rho_final) {
  Rational lb_star = std::min(lb1, lb2) / (2 * ctx.gamma_m);
  for (long p = p0; p <= ctx.p_max; p *= 2) {
    RootCluster& c1 = ctx.ax1.clusters[i];
    RootCluster& c2 = ctx.ax2.clusters[j];
    std::vector<ComplexBox> boxes{ComplexBox::disc_hull(c1.disc.center, c1.disc.radius),
                                  ComplexBox::disc_hull(c2.disc.center, c2.disc.radius)};
    if (exclusion_test(ctx.F, boxes, static_cast<unsigned long>(p) + 96))
      return CandVerdict::excluded;
    bool included = false;
    if (ctx.method == InclusionMethod::standard) {
      std::vector<RationalComplex> zeta{RationalComplex(c1.disc.center),
                                        RationalComplex(c2.disc.center)};
      Rational worst(0);
      for (const auto& f : ctx.F.polys) worst = std::max(worst, f.evaluate(zeta).abs2());
      included = worst < lb_star * lb_star;
    } else {
      PolyDisc pd;
      pd.center = {c1.disc.center, c2.disc.center};
      pd.radius = std::max(c1.disc.radius, c2.disc.radius).mul_pow2(1);
      unsigned kcap = std::max(1u, std::min(c1.count, c2.count));
      for (unsigned K = 1; K <= kcap && !included; K *= 2) {
        CountVerdict v =
            polysol(ctx.F, pd, std::min(K, ctx.F.max_degree()), ctx.rng, PolysolOptions{});
        included = v.count >= 1;
      }
    }
    if (included) {
      // a solution: refine to the output precision before reporting
      c1 = refine_cluster(ctx.ax1.R, c1, std::max(p, rho_final));
      c2 = refine_cluster(ctx.ax2.R, c2, std::max(p, rho_final));
      return CandVerdict::solution;
    }
    c1 = refine_cluster(ctx.ax1.R, c1, p);
    c2 = refine_cluster(ctx.ax2.R, c2, p);
  }
  return CandVerdict::inconclusive;
}

}  // namespace

std::vector<SolutionRecord> bisolve_plus(const PolySystem& F, const PolyDisc& region,
                                         std::mt19937_64& rng, const BisolveOptions& opts) {
  if (F.dim() != 2) throw std::invalid_argument("bisolve_plus: bivariate systems only");
  for (const auto& f : F.polys)
    if (f.is_zero()) throw DegenerateSystem("bisolve_plus: zero polynomial in the system");
  Int D_F = F.bezout();
  Rational r = region.radius.to_rational();
  if (r <= 0) throw std::invalid_argument("bisolve_plus: empty region");
  const Dyadic up_sqrt2 = sqrt_upper(Rational(2), 48);

  auto degree_conditions = [](const PolySystem& G) {
    for (const auto& f : G.polys) {
      int d = f.total_degree();
      if (f.degree_in(0) != d || f.degree_in(1) != d) return false;
    }
    return true;
  };

  for (int round = 0; round < opts.max_rounds; ++round) {
    RotationSpec S;
    if (round == 0 && degree_conditions(F)) {
      S = rotation_identity(2);
    } else {
      S = sample_rotation(2, std::max(Int(1), D_F), rng);
    }
    PolySystem G;
    for (const auto& f : F.polys) G.polys.push_back(compose_matrix(f, S.inverse));
    for (auto& f : G.polys) clear_denominators(f);
    if (!degree_conditions(G)) continue;

    std::vector<RationalComplex> mstar_v =
        apply_matrix(S.matrix, {RationalComplex(region.center[0]), RationalComplex(region.center[1])});
    DyadicComplex m1{round_to_precision(mstar_v[0].re, 64), round_to_precision(mstar_v[0].im, 64)};
    DyadicComplex m2{round_to_precision(mstar_v[1].re, 64), round_to_precision(mstar_v[1].im, 64)};
    Dyadic reach = Dyadic::from_rational_ceil(2 * r, 16) + Dyadic(Int(1), -32);

    AxisClusters ax1, ax2;
    bool projected = true;
    try {
      ax1.R = hidden_resultant(G, 0).poly;
      ax2.R = hidden_resultant(G, 1).poly;
    } catch (const DegenerateSystem&) {
      // degree conditions hold, so a vanishing resultant means the input
      // system shares a component
      throw DegenerateSystem("bisolve_plus: system is not zero-dimensional");
    }
    long rho_proj = std::max(opts.rho_out + 2,
                             (r <= 1 ? log2_ceil_pos(1 / (2 * r)) : 0L) + 4) +
                    2 * round;
    try {
      auto iso = [&](AxisClusters& ax, const DyadicComplex& c) {
        ax.clusters = isolate_roots(ax.R, ComplexBox::disc_hull(c, reach), rho_proj);
        for (const auto& cl : ax.clusters) {
          UPoly shifted = taylor_shift(ax.R, RationalComplex(cl.disc.center));
          TkOutcome tk = tk_test(shifted, cl.disc.radius.to_rational(), cl.count);
          if (!tk.success) throw IsolationFailure("lb recomputation failed");
          ax.lbs.push_back(tk.lb);
        }
      };
      iso(ax1, m1);
      iso(ax2, m2);
    } catch (const IsolationFailure&) {
      projected = false;
    }
    if (!projected) continue;

    // candidate decisions with the standard predicate; keep the round-start
    // isolating discs (deciding refines the clusters in place)
    std::vector<Disc> orig2;
    for (const auto& cl : ax2.clusters) orig2.push_back(cl.disc);
    NullstellensatzBounds nb = nullstellensatz_bounds(2, G.degrees(), G.tau());
    Rational msup(1);
    for (const auto& cl : ax1.clusters) msup = std::max(msup, disc_sup_norm(cl.disc));
    for (const auto& cl : ax2.clusters) msup = std::max(msup, disc_sup_norm(cl.disc));
    unsigned long D = G.bezout().get_ui();
    Rational mpow(1);
    for (unsigned long t = 0; t < D; ++t) mpow *= msup;
    DecideContext ctx{G, ax1, ax2, nb.gamma * mpow, 8 * (nb.B + 64), opts.decide_method, rng};

    bool round_ok = true;
    std::vector<std::pair<size_t, size_t>> sols;
    for (size_t i = 0; i < ax1.clusters.size() && round_ok; ++i) {
      for (size_t j = 0; j < ax2.clusters.size() && round_ok; ++j) {
        CandVerdict v;
        try {
          v = decide_candidate(ctx, i, j, ax1.lbs[i], ax2.lbs[j], rho_proj, opts.rho_out + 2);
        } catch (const ClusterSplit&) {
          round_ok = false;
          break;
        } catch (const IsolationFailure&) {
          round_ok = false;
          break;
        }
        if (v == CandVerdict::inconclusive) round_ok = false;
        if (v == CandVerdict::solution) sols.emplace_back(i, j);
      }
    }
    if (!round_ok) continue;

    // fiber step: certify condition (2) per solution and read multiplicities
    long rho_fiber = rho_proj + 2 + 2 * round;
    std::vector<SolutionRecord> records;
    bool fibers_ok = true;
    for (auto [i, j] : sols) {
      RootCluster& c1 = ax1.clusters[i];
      const RootCluster& c2 = ax2.clusters[j];
      // the fiber coefficient errors scale with the cluster radius times the
      // coefficient slopes; refine until they sit below the fiber precision
      Rational mbase = abs_upper(RationalComplex(c1.disc.center), 64).to_rational() + 1;
      long slope = std::max(fiber_slope_bits(G.polys[0], 0, mbase),
                            fiber_slope_bits(G.polys[1], 0, mbase));
      try {
        c1 = refine_cluster(ax1.R, c1, rho_fiber + slope + 6);
      } catch (const std::exception&) {
        fibers_ok = false;
        break;
      }
      RationalComplex z1(c1.disc.center);
      Rational e1 = c1.disc.radius.to_rational();
      UPoly g1 = fiber_with_error(G.polys[0], 0, z1, e1);
      UPoly g2 = fiber_with_error(G.polys[1], 0, z1, e1);
      std::vector<RootCluster> d1, d2;
      try {
        auto global_region = [&](const UPoly& g) {
          Dyadic bound = Dyadic::from_rational_ceil(g.cauchy_root_bound(), 8);
          return ComplexBox(-bound, bound, -bound, bound);
        };
        d1 = isolate_roots(g1, global_region(g1), rho_fiber);
        d2 = isolate_roots(g2, global_region(g2), rho_fiber);
      } catch (const std::exception&) {
        fibers_ok = false;
        break;
      }
      bool contained = true;
      for (const auto& da : d1) {
        bool meets = false;
        for (const auto& db : d2)
          if (disc_overlap(da.disc, db.disc)) {
            meets = true;
            break;
          }
        if (meets && !disc_inside(da.disc, orig2[j])) {
          contained = false;
          break;
        }
      }
      if (!contained) {
        fibers_ok = false;
        break;
      }
      // map back through S^{-1}
      std::vector<RationalComplex> back = apply_matrix(
          S.inverse, {RationalComplex(c1.disc.center), RationalComplex(c2.disc.center)});
      SolutionRecord rec;
      rec.region.center = {DyadicComplex{round_to_precision(back[0].re, opts.rho_out + 8),
                                         round_to_precision(back[0].im, opts.rho_out + 8)},
                           DyadicComplex{round_to_precision(back[1].re, opts.rho_out + 8),
                                         round_to_precision(back[1].im, opts.rho_out + 8)}};
      rec.region.radius =
          (std::max(c1.disc.radius, c2.disc.radius) * up_sqrt2) + Dyadic(Int(1), -opts.rho_out - 6);
      rec.multiplicity = c1.count;
      records.push_back(std::move(rec));
    }
    if (!fibers_ok) continue;

    // keep records whose region meets the requested polydisc
    std::vector<SolutionRecord> kept;
    for (auto& rec : records) {
      bool meets = true;
      for (unsigned v = 0; v < 2; ++v) {
        RationalComplex delta =
            RationalComplex(rec.region.center[v]) - RationalComplex(region.center[v]);
        Rational lim = r + rec.region.radius.to_rational();
        if (delta.abs2() > lim * lim) meets = false;
      }
      if (meets) kept.push_back(std::move(rec));
    }
    return kept;
  }
  throw BisolveFailure("bisolve_plus: retry budget exhausted");
}

}  // namespace rouche
