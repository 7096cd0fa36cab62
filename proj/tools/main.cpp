// Command-line front end: certified counting (count), bivariate solving
// (solve), candidate validation (validate), hidden resultants (resultant),
// instance generation (gen), and the benchmark harness (bench).
//
// All numeric flags take exact values: integers, p/q rationals, or dyadics
// m*2^e. Decimal floats are rejected to keep every path exact. Machine
// output goes to stdout, logs to stderr; exit 0 = definite answer,
// 2 = certified-safe unknown, 1 = error.

#include "CLI11.hpp"
#include "rouche/bench.hpp"
#include "rouche/bisolve.hpp"
#include "rouche/instgen.hpp"
#include "rouche/polysol.hpp"
#include "rouche/resultant.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace fs = std::filesystem;
using namespace rouche;

namespace {

Rational parse_exact_number(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.find('.') != std::string::npos)
    throw std::runtime_error("decimal numbers are not accepted, use p/q or m*2^e: " + raw);
  auto star = s.find("*2^");
  if (star != std::string::npos) {
    Int m(s.substr(0, star));
    long e = std::stol(s.substr(star + 3));
    return Rational(m) * pow2(e);
  }
  Rational r(s);
  r.canonicalize();
  if (r.get_den() == 0) throw std::runtime_error("zero denominator in " + raw);
  return r;
}

std::vector<Rational> parse_number_list(const std::string& raw) {
  std::vector<Rational> out;
  std::istringstream ss(raw);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(parse_exact_number(tok));
  return out;
}

PolySystem read_system(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open system file " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(is, line)) {
    bool blank = true;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
    if (!blank) lines.push_back(line);
  }
  if (lines.size() != 2 && lines.size() != 3)
    throw std::runtime_error("system file must contain 2 or 3 polynomials, got " +
                             std::to_string(lines.size()));
  PolySystem F;
  unsigned n = static_cast<unsigned>(lines.size());
  for (const auto& l : lines) F.polys.push_back(MPoly::parse(l, n));
  return F;
}

PolyDisc polydisc_from(const std::vector<Rational>& center, const Rational& radius) {
  if (radius <= 0) throw std::runtime_error("radius must be positive");
  PolyDisc d;
  for (const auto& c : center)
    d.center.push_back(DyadicComplex{round_to_precision(c, 96), Dyadic()});
  d.radius = Dyadic::from_rational_ceil(radius, 96);
  return d;
}

std::string dyadic_complex_str(const DyadicComplex& z) {
  return z.re.to_string() + " " + z.im.to_string();
}

int cmd_count(const std::string& file, const std::string& center_s, const std::string& radius_s,
              unsigned K, bool perturb, int rotations, uint64_t seed) {
  PolySystem F = read_system(file);
  auto center = parse_number_list(center_s);
  if (center.size() != F.dim())
    throw std::runtime_error("--center arity does not match the system dimension");
  PolyDisc disc = polydisc_from(center, parse_exact_number(radius_s));
  PolysolOptions opts;
  opts.perturb = perturb;
  opts.rotations = rotations;
  std::mt19937_64 rng(seed);
  CountVerdict v = polysol(F, disc, K, rng, opts);
  if (v.is_count()) {
    std::cout << "count=" << v.count << "\n";
    return 0;
  }
  std::cout << "unknown stage=" << fail_stage_name(v.stage) << "\n";
  return 2;
}

PolyDisc polydisc_from_box(const std::string& box_s) {
  auto b = parse_number_list(box_s);
  if (b.size() != 4) throw std::runtime_error("--box needs xlo,xhi,ylo,yhi");
  Rational cx = (b[0] + b[1]) / 2, cy = (b[2] + b[3]) / 2;
  Rational r = std::max(Rational((b[1] - b[0]) / 2), Rational((b[3] - b[2]) / 2));
  return polydisc_from({cx, cy}, r);
}

int cmd_solve(const std::string& file, const std::string& box_s, const std::string& method,
              uint64_t seed) {
  PolySystem F = read_system(file);
  if (F.dim() != 2) throw std::runtime_error("solve handles bivariate systems");
  PolyDisc disc = polydisc_from_box(box_s);
  BisolveOptions opts;
  opts.decide_method = method == "standard" ? InclusionMethod::standard : InclusionMethod::truncate;
  std::mt19937_64 rng(seed);
  auto records = bisolve_plus(F, disc, rng, opts);
  for (const auto& rec : records) {
    std::cout << dyadic_complex_str(rec.region.center[0]) << " "
              << dyadic_complex_str(rec.region.center[1]) << " " << rec.region.radius.to_string()
              << " " << rec.multiplicity << "\n";
  }
  return 0;
}

int cmd_validate(const std::string& file, const std::string& box_s, const std::string& method,
                 long precision_cap, uint64_t seed) {
  PolySystem F = read_system(file);
  if (F.dim() != 2) throw std::runtime_error("validate handles bivariate systems");
  PolyDisc disc = polydisc_from_box(box_s);
  auto proj = projection_phase(F, disc);
  ValidateOptions opts;
  opts.method = method == "standard" ? InclusionMethod::standard : InclusionMethod::truncate;
  if (precision_cap > 0) opts.precision_cap = precision_cap;
  std::mt19937_64 rng(seed);
  int rc = 0;
  for (size_t i = 0; i < proj.candidates.size(); ++i) {
    ValidateResult r = validate(F, proj.candidates[i], proj.R1.poly, proj.R2.poly, rng, opts);
    std::cout << "candidate=" << i << " center=" << proj.candidates[i].disc1.center.re.to_string()
              << "," << proj.candidates[i].disc2.center.re.to_string()
              << " multiplicity=" << r.multiplicity << " maxL=" << r.max_L
              << (r.capped ? " capped" : "") << "\n";
    if (r.multiplicity < 0) rc = 2;
  }
  return rc;
}

int cmd_resultant(const std::string& file, const std::string& hide) {
  PolySystem F = read_system(file);
  unsigned h;
  if (hide == "x1" || hide == "1" || hide == "x") {
    h = 0;
  } else if (hide == "x2" || hide == "2" || hide == "y") {
    h = 1;
  } else if (hide == "x3" || hide == "3" || hide == "z") {
    h = 2;
  } else {
    throw std::runtime_error("--hide takes x1|x2|x3");
  }
  HiddenResultant R = hidden_resultant(F, h);
  // print in the hidden variable's name
  MPoly out(F.dim());
  for (size_t i = 0; i < R.poly.c.size(); ++i) {
    if (R.poly.c[i].is_zero()) continue;
    Monomial m{std::vector<unsigned>(F.dim(), 0)};
    m.e[h] = static_cast<unsigned>(i);
    out.add_term(m, R.poly.c[i]);
  }
  std::cout << out.to_string() << "\n";
  return 0;
}

void write_meta(const fs::path& p, unsigned k, const Rational& sx, const Rational& sy) {
  std::ofstream os(p);
  os << "k=" << k << "\n";
  os << "solution=" << sx.get_str() << " " << sy.get_str() << "\n";
}

int cmd_gen(const std::string& mode_s, const std::string& order_s, const std::string& degrees_s,
            unsigned count, unsigned k_target, unsigned sparsity, const std::string& out_dir,
            uint64_t seed) {
  fs::create_directories(out_dir);
  std::vector<unsigned> degrees;
  {
    std::istringstream ss(degrees_s);
    std::string tok;
    while (std::getline(ss, tok, ',')) degrees.push_back(static_cast<unsigned>(std::stoul(tok)));
  }
  if (degrees.empty()) throw std::runtime_error("--degree list is empty");
  std::mt19937_64 rng(seed);
  unsigned files = 0;

  for (unsigned i = 0; i < count; ++i) {
    std::string id;
    Instance orig;
    std::vector<RationalComplex> sol;
    Rational sol_radius(0);
    unsigned k = 0;
    if (mode_s == "planted") {
      PlantedSystem ps = plant_system(k_target ? k_target : 1, rng);
      orig = ps.inst;
      sol = ps.solution;
      k = ps.multiplicity;
      id = "planted_k" + std::to_string(k) + "_" + std::to_string(i);
    } else {
      DeriveMode mode = parse_mode(mode_s);
      VarOrder order = parse_order(order_s);
      const auto& catalog = seed_catalog();
      // walk the catalog until a seed yields a usable instance
      unsigned attempts = 0;
      bool made = false;
      while (attempts < 4 * catalog.size() && !made) {
        const auto& [name, text] = catalog[(i + attempts) % catalog.size()];
        ++attempts;
        try {
          MPoly P = MPoly::parse(text, 3);
          auto [f0, g0] = derive_system(P, mode, order);
          std::uniform_int_distribution<int> sh(-2, 2);
          int a = sh(rng), b = sh(rng), c = sh(rng), d = sh(rng);
          if (a * d - b * c == 0) continue;
          auto [f, g] = shear_system(f0, g0, a, b, c, d);
          PolySystem F{{f, g}};
          PolyDisc search;
          search.center = {DyadicComplex{}, DyadicComplex{}};
          search.radius = Dyadic(4);
          std::mt19937_64 rng2(rng());
          auto recs = bisolve_plus(F, search, rng2);
          if (recs.empty()) continue;
          // prefer the requested multiplicity, else the largest
          const SolutionRecord* best = &recs[0];
          for (const auto& rec : recs) {
            if (k_target && rec.multiplicity == k_target &&
                best->multiplicity != k_target) {
              best = &rec;
            } else if (!k_target && rec.multiplicity > best->multiplicity) {
              best = &rec;
            }
          }
          if (k_target && best->multiplicity != k_target) continue;
          // box radius: quarter of the separation to other solutions
          Rational rad = frac(1, 8);
          for (const auto& rec : recs) {
            if (&rec == best) continue;
            Rational d2(0);
            for (unsigned v = 0; v < 2; ++v) {
              RationalComplex delta = RationalComplex(best->region.center[v]) -
                                      RationalComplex(rec.region.center[v]);
              d2 = std::max(d2, abs_lower(delta, 64).to_rational());
            }
            if (d2 > 0) rad = std::min(rad, Rational(d2 / 4));
          }
          rad = std::max(rad, Rational(best->region.radius.to_rational() * 4));
          orig.f = f;
          orig.g = g;
          Rational cx = RationalComplex(best->region.center[0]).re;
          Rational cy = RationalComplex(best->region.center[1]).re;
          orig.x_lo = cx - rad;
          orig.x_hi = cx + rad;
          orig.y_lo = cy - rad;
          orig.y_hi = cy + rad;
          sol = {RationalComplex(best->region.center[0]),
                 RationalComplex(best->region.center[1])};
          sol_radius = best->region.radius.to_rational();
          k = best->multiplicity;
          id = mode_s + "_" + order_s + "_" + name + "_k" + std::to_string(k) + "_" +
               std::to_string(i);
          made = true;
        } catch (const std::exception& e) {
          std::cerr << "gen: seed skipped: " << e.what() << "\n";
        }
      }
      if (!made) throw std::runtime_error("gen: no usable seed found for mode " + mode_s);
    }

    fs::path dir = fs::path(out_dir) / id;
    fs::create_directories(dir);
    write_instance((dir / "orig.cnd").string(), orig);
    write_meta(dir / "meta", k, sol[0].re, sol[1].re);
    for (unsigned d : degrees) {
      auto [fd, gd] = inflate(orig.f, orig.g, d, sparsity, rng, sol, sol_radius);
      Instance big{fd, gd, orig.x_lo, orig.x_hi, orig.y_lo, orig.y_hi};
      char name[64];
      std::snprintf(name, sizeof(name), "d%04u_0.sys", d);
      write_instance((dir / name).string(), big);
      ++files;
    }
    std::cerr << "gen: wrote " << dir.string() << "\n";
  }
  std::cout << "instances=" << count << " files=" << files << "\n";
  return 0;
}

int cmd_bench(const std::string& dir, const std::string& methods_s, unsigned repeats,
              long timeout_s, long precision_cap, unsigned jobs, const std::string& out) {
  BenchConfig cfg;
  cfg.methods.clear();
  std::istringstream ss(methods_s);
  std::string tok;
  while (std::getline(ss, tok, ',')) cfg.methods.push_back(tok);
  if (cfg.methods.empty()) throw std::runtime_error("--methods list is empty");
  cfg.repeats = repeats;
  cfg.timeout_s = timeout_s;
  if (precision_cap > 0) cfg.precision_cap = precision_cap;
  cfg.jobs = jobs;
  auto records = run_suite(dir, cfg);
  if (!out.empty()) write_csv(out, records);
  std::cout << format_summary(summarize(records));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certified polydisc root counting and bivariate solving"};
  app.require_subcommand(1);

  uint64_t seed = 0;
  bool verbose = false;
  long precision_cap = 0;
  app.add_option("--seed", seed, "random seed (default 0: fixed)");
  app.add_flag("--verbose", verbose, "chatty stderr logs");
  app.add_option("--precision-cap", precision_cap, "largest working precision for loops");

  // count
  auto* count = app.add_subcommand("count", "count solutions in a polydisc");
  std::string c_file, c_center, c_radius;
  unsigned c_K = 1;
  bool c_perturb = false;
  int c_rot = 4;
  count->add_option("system", c_file, "system file, one polynomial per line")->required();
  count->add_option("--center", c_center, "polydisc center c1,c2[,c3]")->required();
  count->add_option("--radius", c_radius, "polydisc radius")->required();
  count->add_option("--K", c_K, "truncation degree");
  count->add_flag("--perturb", c_perturb, "add the x_i^{K+1} perturbation");
  count->add_option("--rotations", c_rot, "random rotation retries");

  // solve
  auto* solve = app.add_subcommand("solve", "isolate all solutions in a box");
  std::string s_file, s_box, s_method = "standard";
  solve->add_option("system", s_file)->required();
  solve->add_option("--box", s_box, "xlo,xhi,ylo,yhi")->required();
  solve->add_option("--method", s_method, "standard|truncate");

  // validate
  auto* val = app.add_subcommand("validate", "validate projection candidates in a box");
  std::string v_file, v_box, v_method = "truncate";
  val->add_option("system", v_file)->required();
  val->add_option("--box", v_box, "xlo,xhi,ylo,yhi")->required();
  val->add_option("--method", v_method, "standard|truncate");

  // resultant
  auto* res = app.add_subcommand("resultant", "hidden-variable resultant");
  std::string r_file, r_hide = "x1";
  res->add_option("system", r_file)->required();
  res->add_option("--hide", r_hide, "variable to keep (x1|x2|x3)");

  // gen
  auto* gen = app.add_subcommand("gen", "generate benchmark instances");
  std::string g_mode = "planted", g_order = "xyz", g_degrees = "10", g_out = "instances";
  unsigned g_count = 1, g_k = 0, g_sparsity = 3;
  gen->add_option("--mode", g_mode, "0xx|0xy|0yy|x0y|y0x|planted");
  gen->add_option("--order", g_order, "xyz|xzy|yzx");
  gen->add_option("--degree", g_degrees, "comma-separated target degrees");
  gen->add_option("--count", g_count, "number of instance folders");
  gen->add_option("--k", g_k, "requested multiplicity");
  gen->add_option("--sparsity", g_sparsity, "terms per inflation multiplicand");
  gen->add_option("--out-dir", g_out, "output directory");

  // bench
  auto* bench = app.add_subcommand("bench", "run the validation benchmark");
  std::string b_dir, b_methods = "standard,truncate", b_out;
  unsigned b_repeats = 3, b_jobs = 1;
  long b_timeout = 120;
  bench->add_option("--instances-dir", b_dir)->required();
  bench->add_option("--methods", b_methods, "comma-separated method list");
  bench->add_option("--repeats", b_repeats);
  bench->add_option("--timeout-s", b_timeout, "per-run wall budget");
  bench->add_option("--jobs", b_jobs, "parallel workers");
  bench->add_option("--out", b_out, "CSV output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*count) return cmd_count(c_file, c_center, c_radius, c_K, c_perturb, c_rot, seed);
    if (*solve) return cmd_solve(s_file, s_box, s_method, seed);
    if (*val) return cmd_validate(v_file, v_box, v_method, precision_cap, seed);
    if (*res) return cmd_resultant(r_file, r_hide);
    if (*gen) return cmd_gen(g_mode, g_order, g_degrees, g_count, g_k, g_sparsity, g_out, seed);
    if (*bench)
      return cmd_bench(b_dir, b_methods, b_repeats, b_timeout, precision_cap, b_jobs, b_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
