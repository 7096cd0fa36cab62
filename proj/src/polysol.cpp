#include "rouche/polysol.hpp"

#include "rouche/bisolve.hpp"
#include "rouche/rotation.hpp"
#include "rouche/uni.hpp"

#include <algorithm>
#include <cassert>

namespace rouche {

const char* fail_stage_name(FailStage s) {
  switch (s) {
    case FailStage::none: return "none";
    case FailStage::cluster_mismatch: return "cluster-mismatch";
    case FailStage::tstar_failed: return "tstar-failed";
    case FailStage::bound_comparison_failed: return "bound-comparison-failed";
    case FailStage::solver_failed: return "solver-failed";
  }
  return "?";
}

long compute_L(const Rational& r, unsigned n, unsigned K) {
  if (r <= 0) throw std::invalid_argument("compute_L: r must be positive");
  Rational kn(1);
  for (unsigned i = 0; i < n; ++i) kn *= static_cast<long>(K) + 1;
  return log2_ceil_pos(Rational(32) * static_cast<long>(n) * kn / r);
}

TruncatedSystem build_truncated(const PolySystem& F, const std::vector<RationalComplex>& m,
                                unsigned K, long L, bool perturb) {
  TruncatedSystem ts;
  ts.K = K;
  ts.L = std::max(L, 1L);
  ts.perturbed = perturb;
  ts.center = m;
  long rho = static_cast<long>(K + 1) * ts.L;
  unsigned n = F.dim();
  ts.rounding_exact = true;
  for (const auto& f : F.polys) {
    MPoly tr = shift_truncated(f, m, K);
    MPoly rounded(n);
    for (const auto& [mo, c] : tr.terms()) {
      DyadicComplex d = round_to_precision(c, rho);
      if (!(RationalComplex(d) == c)) ts.rounding_exact = false;
      rounded.add_term(mo, RationalComplex(d));
    }
    ts.phi.polys.push_back(std::move(rounded));
  }
  if (perturb) {
    for (unsigned i = 0; i < n; ++i) {
      Monomial mo{std::vector<unsigned>(n, 0)};
      mo.e[i] = K + 1;
      ts.phi.polys[i].add_term(mo, RationalComplex(Rational(1)));
    }
  }
  return ts;
}

std::pair<unsigned, unsigned> cluster_counts(
    const std::vector<std::pair<PolyDisc, unsigned>>& clusters, const Rational& r, unsigned n) {
  Rational t_in = r / (2 * static_cast<long>(n));
  Rational t_out = 2 * static_cast<long>(n) * r;
  unsigned k = 0, kplus = 0;
  for (const auto& [disc, count] : clusters) {
    Rational norm2(0);
    for (const auto& c : disc.center) norm2 = std::max(norm2, RationalComplex(c).abs2());
    if (norm2 <= t_in * t_in) k += count;      // ties count as inside
    if (norm2 <= t_out * t_out) kplus += count;
  }
  return {k, kplus};
}

Rational compute_UB(const std::vector<RationalComplex>& m, const Rational& r, unsigned K,
                    unsigned n, unsigned d_F, long tau_F) {
  if (r <= 0) throw std::invalid_argument("compute_UB: r must be positive");
  Rational rk(1);
  for (unsigned i = 0; i <= K; ++i) rk *= r;
  Rational dn(1);
  for (unsigned i = 0; i < n; ++i) dn *= d_F;
  Rational mm = m_factor_upper(m, 64);
  Rational base = mm * Rational((n + d_F)) * Rational((n + d_F));
  Rational based(1);
  for (unsigned i = 0; i < d_F; ++i) based *= base;
  return rk * dn * pow2(tau_F + 2) * based;
}

Rational truncation_error_bound(const PolySystem& F, const TruncatedSystem& ts,
                                const Rational& r) {
  unsigned n = F.dim();
  unsigned K = ts.K;
  Rational mu = m_factor_upper(ts.center, 64);
  Rational worst(0);
  for (const auto& f : F.polys) {
    int d = f.total_degree();
    Rational tail(0);
    // 1-norm of the degree-j slice of f[m]: sum over terms of
    // |c_beta| binom(|beta|, j) M^{|beta|-j}  (Vandermonde collapse)
    Rational rj = r;
    for (unsigned j = 1; j <= K; ++j) rj *= r;  // r^{K+1}
    for (int j = static_cast<int>(K) + 1; j <= d; ++j) {
      Rational slice(0);
      for (const auto& [mo, c] : f.terms()) {
        unsigned bt = mo.total();
        if (static_cast<int>(bt) < j) continue;
        Rational mp(1);
        for (unsigned t = 0; t < bt - static_cast<unsigned>(j); ++t) mp *= mu;
        slice += abs_upper(c, 64).to_rational() *
                 Rational(binomial(bt, static_cast<unsigned long>(j))) * mp;
      }
      tail += slice * rj;
      rj *= r;
    }
    Rational rounding(0);
    if (!ts.rounding_exact) {
      Rational rk = std::max(Rational(1), r);
      Rational rkp(1);
      for (unsigned j = 0; j < K; ++j) rkp *= rk;
      rounding = pow2(-static_cast<long>(K + 1) * ts.L) *
                 Rational(binomial(n + K, K)) * rkp;
    }
    Rational perturb(0);
    if (ts.perturbed) {
      perturb = 1;
      for (unsigned j = 0; j <= K; ++j) perturb *= r;
    }
    worst = std::max(worst, Rational(tail + rounding + perturb));
  }
  return worst;
}

Rational compute_LB(const std::vector<Rational>& lbs, const NullstellensatzBounds& nb,
                    unsigned n) {
  if (lbs.empty()) throw std::invalid_argument("compute_LB: no lower bounds");
  Rational mn = lbs[0];
  for (const auto& v : lbs) {
    if (v <= 0) throw std::invalid_argument("compute_LB: non-positive lower bound");
    mn = std::min(mn, v);
  }
  return mn / (Rational(static_cast<long>(n)) * nb.gamma);
}

namespace {

// n = 2 truncated-system solving via the elimination pipeline
class BisolveAdapter final : public TruncatedSolver {
 public:
  explicit BisolveAdapter(std::mt19937_64& rng) : rng_(rng) {}
  std::vector<std::pair<PolyDisc, unsigned>> solve(const PolySystem& phi, const PolyDisc& region,
                                                   long rho) override {
    BisolveOptions opts;
    opts.rho_out = rho + 2;
    auto records = bisolve_plus(phi, region, rng_, opts);
    std::vector<std::pair<PolyDisc, unsigned>> out;
    for (auto& rec : records) out.emplace_back(rec.region, rec.multiplicity);
    return out;
  }

 private:
  std::mt19937_64& rng_;
};

bool is_nonzero_constant(const MPoly& f) { return f.total_degree() == 0; }

// scale phi by 2^{(K+1)L} so the elimination pipeline sees integer data
PolySystem integer_scaled(const PolySystem& phi) {
  PolySystem out = phi;
  for (auto& f : out.polys) clear_denominators(f);
  return out;
}

}  // namespace

CountVerdict polysol(const PolySystem& F, const PolyDisc& disc, unsigned K, std::mt19937_64& rng,
                     const PolysolOptions& opts) {
  unsigned n = F.dim();
  if (n != 2 && n != 3) throw std::invalid_argument("polysol: n must be 2 or 3");
  for (const auto& f : F.polys)
    if (f.nvars() != n || f.is_zero()) throw std::invalid_argument("polysol: non-square system");
  if (disc.center.size() != n) throw std::invalid_argument("polysol: center arity mismatch");
  unsigned d_F = F.max_degree();
  if (K > d_F) throw std::invalid_argument("polysol: K exceeds the maximum degree");
  if (n == 3 && opts.solver == nullptr)
    throw std::invalid_argument("polysol: n = 3 requires a TruncatedSolver");

  Rational r = disc.radius.to_rational();
  if (r <= 0) throw std::invalid_argument("polysol: radius must be positive");
  long tau_F = F.tau();
  std::vector<RationalComplex> m;
  for (const auto& c : disc.center) m.emplace_back(c);

  long L = compute_L(r, n, K);
  TruncatedSystem ts = build_truncated(F, m, K, L, opts.perturb);

  // zero-dimensionality gate for the unperturbed system; perturb on failure
  if (!ts.perturbed) {
    bool ok = true;
    for (const auto& f : ts.phi.polys)
      if (f.is_zero()) ok = false;
    if (ok && n == 2) {
      PolySystem probe = integer_scaled(ts.phi);
      bool any_const = false;
      for (const auto& f : probe.polys) any_const = any_const || is_nonzero_constant(f);
      if (!any_const) {
        for (unsigned l = 0; l < n && ok; ++l) {
          try {
            (void)hidden_resultant(probe, l);
          } catch (const DegenerateSystem&) {
            ok = false;
          } catch (const std::invalid_argument&) {
            // mild conditions not decidable here; leave it to the solver
          }
        }
      }
    }
    if (!ok) ts = build_truncated(F, m, K, L, true);
  }

  Rational ub = std::min(compute_UB(m, r, K, n, d_F, tau_F), truncation_error_bound(F, ts, r));

  // constant shortcut: a nonzero constant phi_i certifies emptiness alone
  for (const auto& f : ts.phi.polys) {
    if (is_nonzero_constant(f)) {
      Rational clb = abs_lower(f.terms().begin()->second, 128).to_rational();
      if (ub <= clb) return CountVerdict::certified(0);
      return CountVerdict::unknown(FailStage::bound_comparison_failed);
    }
    if (f.is_zero()) return CountVerdict::unknown(FailStage::solver_failed);
  }

  // solve the truncated system in the 4nr-polydisc around the origin
  PolyDisc solve_region;
  solve_region.center.assign(n, DyadicComplex{});
  solve_region.radius = Dyadic::from_rational_ceil(Rational(4 * static_cast<long>(n)) * r, 16);

  std::vector<std::pair<PolyDisc, unsigned>> clusters;
  BisolveAdapter builtin(rng);
  TruncatedSolver* solver = opts.solver ? opts.solver : &builtin;
  PolySystem scaled = integer_scaled(ts.phi);
  try {
    clusters = solver->solve(scaled, solve_region, L);
  } catch (const DegenerateSystem&) {
    if (!ts.perturbed) {
      // last-resort fallback: perturbation restores zero-dimensionality
      PolysolOptions retry = opts;
      retry.perturb = true;
      return polysol(F, disc, K, rng, retry);
    }
    return CountVerdict::unknown(FailStage::solver_failed);
  } catch (const BisolveFailure&) {
    return CountVerdict::unknown(FailStage::solver_failed);
  } catch (const IsolationFailure&) {
    return CountVerdict::unknown(FailStage::solver_failed);
  }

  auto [k, kplus] = cluster_counts(clusters, r, n);
  if (k != kplus) return CountVerdict::unknown(FailStage::cluster_mismatch);

  // projection step: rotate, take hidden resultants, run T_* at the two radii
  Int D_phi = scaled.bezout();
  Dyadic r_lo, r_hi;
  {
    Rational inv_n = Rational(1) / static_cast<long>(n);
    r_lo = sqrt_lower(r * r * inv_n, 64);   // <= r / sqrt(n)
    r_hi = sqrt_upper(r * r * static_cast<long>(n), 64);  // >= r sqrt(n)
  }

  bool saw_tstar_failure = false;
  for (int attempt = 0; attempt <= opts.rotations; ++attempt) {
    RotationSpec S =
        attempt == 0 ? rotation_identity(n) : sample_rotation(n, std::max(Int(1), D_phi), rng);
    PolySystem rotated;
    for (const auto& f : scaled.polys) rotated.polys.push_back(compose_matrix(f, S.inverse));
    for (auto& f : rotated.polys) clear_denominators(f);

    bool mild = true;
    for (unsigned l = 0; l < n && mild; ++l) mild = check_mild_conditions(rotated, l);
    if (!mild) continue;

    std::vector<Rational> lbs;
    bool good = true;
    for (unsigned l = 0; l < n && good; ++l) {
      HiddenResultant R;
      try {
        R = hidden_resultant(rotated, l);
      } catch (const DegenerateSystem&) {
        good = false;
        break;
      }
      TkOutcome lo = tstar_test(R.poly, Disc(DyadicComplex{}, r_lo), opts.tk_bits);
      TkOutcome hi = tstar_test(R.poly, Disc(DyadicComplex{}, r_hi), opts.tk_bits);
      if (!lo.success || !hi.success) {
        saw_tstar_failure = true;
        good = false;
        break;
      }
      lbs.push_back(lo.lb);
      lbs.push_back(hi.lb);
    }
    if (!good) continue;

    NullstellensatzBounds nb = nullstellensatz_bounds(n, rotated.degrees(), rotated.tau());
    Rational lb = compute_LB(lbs, nb, n);
    if (ub <= lb) return CountVerdict::certified(static_cast<int>(k));
    return CountVerdict::unknown(FailStage::bound_comparison_failed);
  }
  (void)saw_tstar_failure;
  return CountVerdict::unknown(FailStage::tstar_failed);
}

DiagnosticQuantities diagnostics(
    const std::vector<std::pair<std::vector<RationalComplex>, unsigned>>& solutions, size_t index,
    unsigned n, const Int& D_F) {
  if (solutions.size() < 2)
    throw std::invalid_argument("diagnostics: need at least two distinct solutions");
  const auto& zi = solutions[index].first;
  DiagnosticQuantities out;
  out.partial = 1;
  bool first = true;
  for (size_t j = 0; j < solutions.size(); ++j) {
    if (j == index) continue;
    const auto& zj = solutions[j].first;
    Rational dist(0);
    for (size_t v = 0; v < zi.size(); ++v) {
      RationalComplex d = zi[v] - zj[v];
      Rational m;
      if (d.im == 0) {
        m = abs(d.re);
      } else if (d.re == 0) {
        m = abs(d.im);
      } else {
        m = abs_upper(d, 96).to_rational();
      }
      dist = std::max(dist, m);
    }
    if (first || dist < out.sigma) out.sigma = dist;
    first = false;
    for (unsigned e = 0; e < solutions[j].second; ++e) out.partial *= dist;
  }
  // delta0 = sigma / (2 n^2 D_F)^{32 n}
  Rational base = Rational(2) * static_cast<long>(n) * static_cast<long>(n) * Rational(D_F);
  Rational denom(1);
  for (unsigned i = 0; i < 32 * n; ++i) denom *= base;
  out.delta0 = out.sigma / denom;
  return out;
}

}  // namespace rouche
