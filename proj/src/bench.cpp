#include "rouche/bench.hpp"

#include "rouche/resultant.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;

namespace rouche {

namespace {

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

struct InstanceMeta {
  unsigned k = 0;
  Rational sol_x, sol_y;
};

InstanceMeta read_meta(const fs::path& p) {
  std::ifstream is(p);
  if (!is) throw std::runtime_error("bench: missing meta file " + p.string());
  InstanceMeta m;
  std::string line;
  while (std::getline(is, line)) {
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq), val = line.substr(eq + 1);
    if (key == "k") m.k = static_cast<unsigned>(std::stoul(val));
    if (key == "solution") {
      std::istringstream ss(val);
      std::string a, b;
      ss >> a >> b;
      m.sol_x = Rational(a);
      m.sol_x.canonicalize();
      m.sol_y = Rational(b);
      m.sol_y.canonicalize();
    }
  }
  if (m.k == 0) throw std::runtime_error("bench: meta without k: " + p.string());
  return m;
}

struct AxisInfo {
  RootCluster cluster;
  Rational lb;
};

// isolating cluster of R around the known projection, with its T_* bound
AxisInfo axis_info(const UPoly& R, const Rational& sol, const Rational& halfwidth) {
  Dyadic c = round_to_precision(sol, 32);
  Dyadic h = Dyadic::from_rational_ceil(halfwidth, 32);
  long rho = 8 + std::max(0L, halfwidth < 1 ? log2_ceil_pos(1 / halfwidth) : 0L);
  for (int attempt = 0; attempt < 6; ++attempt, rho += 6) {
    auto clusters = isolate_roots(R, ComplexBox(c - h, c + h, -h, h), rho);
    for (const auto& cl : clusters) {
      RationalComplex delta = RationalComplex(cl.disc.center) - RationalComplex(sol);
      Rational rad = cl.disc.radius.to_rational();
      if (delta.abs2() <= rad * rad) {
        UPoly shifted = taylor_shift(R, RationalComplex(cl.disc.center));
        TkOutcome tk = tk_test(shifted, rad, cl.count);
        if (!tk.success) break;  // deepen
        return AxisInfo{cl, tk.lb};
      }
    }
  }
  throw std::runtime_error("bench: could not isolate the solution projection");
}

struct PreparedInstance {
  PolySystem F0;
  UPoly R1_0, R2_0;
  Candidate cand0;  // candidate built on the seed system
  InstanceMeta meta;
  Rational half_x, half_y;
};

PreparedInstance prepare(const fs::path& dir) {
  Instance orig = read_instance((dir / "orig.cnd").string());
  PreparedInstance out;
  out.meta = read_meta(dir / "meta");
  out.F0.polys = {orig.f, orig.g};
  out.R1_0 = hidden_resultant(out.F0, 0).poly;
  out.R2_0 = hidden_resultant(out.F0, 1).poly;
  out.half_x = (orig.x_hi - orig.x_lo) / 2;
  out.half_y = (orig.y_hi - orig.y_lo) / 2;
  AxisInfo a1 = axis_info(out.R1_0, out.meta.sol_x, out.half_x);
  AxisInfo a2 = axis_info(out.R2_0, out.meta.sol_y, out.half_y);
  out.cand0.disc1 = a1.cluster.disc;
  out.cand0.disc2 = a2.cluster.disc;
  out.cand0.k1 = a1.cluster.count;
  out.cand0.k2 = a2.cluster.count;
  out.cand0.lb1 = a1.lb;
  out.cand0.lb2 = a2.lb;
  return out;
}

}  // namespace

std::vector<BenchRecord> run_suite(const std::string& instances_dir, const BenchConfig& cfg) {
  struct FileTask {
    std::string id;
    fs::path file;
  };
  std::vector<FileTask> tasks;
  for (const auto& entry : fs::directory_iterator(instances_dir)) {
    if (!entry.is_directory()) continue;
    std::string id = entry.path().filename().string();
    std::vector<fs::path> files;
    for (const auto& f : fs::directory_iterator(entry.path())) {
      std::string name = f.path().filename().string();
      if (name.size() > 4 && name.substr(name.size() - 4) == ".sys") files.push_back(f.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) tasks.push_back({id, f});
  }
  std::sort(tasks.begin(), tasks.end(),
            [](const FileTask& a, const FileTask& b) { return a.file < b.file; });
  if (tasks.empty()) throw std::runtime_error("bench: no instances under " + instances_dir);

  std::map<std::string, PreparedInstance> prepared;
  for (const auto& t : tasks) {
    if (!prepared.count(t.id)) prepared.emplace(t.id, prepare(fs::path(instances_dir) / t.id));
  }

  std::vector<std::vector<BenchRecord>> results(tasks.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= tasks.size()) break;
      const FileTask& task = tasks[i];
      const PreparedInstance& prep = prepared.at(task.id);
      Instance inst = read_instance(task.file.string());
      PolySystem Fd;
      Fd.polys = {inst.f, inst.g};
      unsigned degree = static_cast<unsigned>(std::max(inst.f.total_degree(), 0));
      std::string file_id = task.id + "/" + task.file.filename().string();

      // standard needs certified bounds from the resultants of the actual
      // system; computed once per file and shared across runs
      bool want_standard = false;
      for (const auto& m : cfg.methods) want_standard = want_standard || m == "standard";
      Candidate cand_std;
      bool std_ready = false;
      if (want_standard) {
        UPoly R1d = sylvester_resultant(Fd.polys[0], Fd.polys[1], 0);
        UPoly R2d = sylvester_resultant(Fd.polys[0], Fd.polys[1], 1);
        AxisInfo a1 = axis_info(R1d, prep.meta.sol_x, prep.half_x);
        AxisInfo a2 = axis_info(R2d, prep.meta.sol_y, prep.half_y);
        cand_std.disc1 = a1.cluster.disc;
        cand_std.disc2 = a2.cluster.disc;
        cand_std.k1 = a1.cluster.count;
        cand_std.k2 = a2.cluster.count;
        cand_std.lb1 = a1.lb;
        cand_std.lb2 = a2.lb;
        std_ready = true;
      }

      for (const auto& method : cfg.methods) {
        for (unsigned run = 0; run < cfg.repeats; ++run) {
          std::mt19937_64 rng(fnv1a(file_id + "#" + method + "#" + std::to_string(run)));
          ValidateOptions vopts;
          vopts.precision_cap = cfg.precision_cap;
          vopts.budget_ms = cfg.timeout_s * 1000;
          vopts.method =
              method == "standard" ? InclusionMethod::standard : InclusionMethod::truncate;
          const Candidate& cand = (method == "standard" && std_ready) ? cand_std : prep.cand0;
          auto t0 = std::chrono::steady_clock::now();
          ValidateResult res = validate(Fd, cand, prep.R1_0, prep.R2_0, rng, vopts);
          auto t1 = std::chrono::steady_clock::now();
          BenchRecord rec;
          rec.instance_id = file_id;
          rec.degree = degree;
          rec.k = prep.meta.k;
          rec.method = method;
          rec.run = run;
          rec.precision_bits = std::max(res.max_L, 1L);
          rec.time_ms =
              std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
          rec.verdict = res.multiplicity > 0    ? "ok"
                        : res.multiplicity == 0 ? "excluded"
                                                : "timeout";
          results[i].push_back(std::move(rec));
        }
      }
    }
  };
  unsigned jobs = std::max(1u, cfg.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<BenchRecord> flat;
  for (auto& rs : results)
    for (auto& r : rs) flat.push_back(std::move(r));
  std::sort(flat.begin(), flat.end(), [](const BenchRecord& a, const BenchRecord& b) {
    return std::tie(a.instance_id, a.method, a.run) < std::tie(b.instance_id, b.method, b.run);
  });
  return flat;
}

void write_csv(const std::string& path, const std::vector<BenchRecord>& records) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("bench: cannot open " + path);
  os << "instance_id,degree,k,method,run,precision_bits,time_ms,verdict\n";
  for (const auto& r : records) {
    os << r.instance_id << "," << r.degree << "," << r.k << "," << r.method << "," << r.run << ","
       << r.precision_bits << "," << r.time_ms << "," << r.verdict << "\n";
  }
}

std::vector<BenchRecord> read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("bench: cannot open " + path);
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("bench: empty csv");
  std::vector<BenchRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::istringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) cols.push_back(tok);
    if (cols.size() != 8) throw std::runtime_error("bench: malformed csv row: " + line);
    BenchRecord r;
    r.instance_id = cols[0];
    r.degree = static_cast<unsigned>(std::stoul(cols[1]));
    r.k = static_cast<unsigned>(std::stoul(cols[2]));
    r.method = cols[3];
    r.run = static_cast<unsigned>(std::stoul(cols[4]));
    r.precision_bits = std::stol(cols[5]);
    r.time_ms = std::stol(cols[6]);
    r.verdict = cols[7];
    out.push_back(std::move(r));
  }
  return out;
}

Summary summarize(const std::vector<BenchRecord>& records) {
  if (records.empty()) throw std::invalid_argument("summarize: no records");
  std::map<std::tuple<unsigned, unsigned, std::string>, std::vector<const BenchRecord*>> groups;
  for (const auto& r : records) groups[{r.degree, r.k, r.method}].push_back(&r);

  Summary s;
  for (const auto& [key, rs] : groups) {
    GroupStats g;
    std::tie(g.degree, g.k, g.method) = key;
    g.count = rs.size();
    double sum = 0, tsum = 0;
    g.min_precision = g.max_precision = static_cast<double>(rs[0]->precision_bits);
    for (const auto* r : rs) {
      double p = static_cast<double>(r->precision_bits);
      sum += p;
      tsum += static_cast<double>(r->time_ms);
      g.min_precision = std::min(g.min_precision, p);
      g.max_precision = std::max(g.max_precision, p);
    }
    g.mean_precision = sum / static_cast<double>(rs.size());
    g.mean_time_ms = tsum / static_cast<double>(rs.size());
    s.groups.push_back(g);
  }
  // improvement factors per (degree, k) present in both methods
  std::map<std::pair<unsigned, unsigned>, std::pair<double, double>> by_dk;  // std, trunc
  for (const auto& g : s.groups) {
    auto& slot = by_dk[{g.degree, g.k}];
    if (g.method == "standard") slot.first = g.mean_precision;
    if (g.method == "truncate") slot.second = g.mean_precision;
  }
  for (const auto& [dk, pair] : by_dk) {
    if (pair.first > 0 && pair.second > 0)
      s.factors.push_back({dk.first, dk.second, pair.first / pair.second});
  }
  // power-law fit per (k, method) over the degree means
  std::map<std::pair<unsigned, std::string>, std::vector<std::pair<double, double>>> series;
  for (const auto& g : s.groups)
    series[{g.k, g.method}].push_back(
        {std::log(static_cast<double>(g.degree)), std::log(g.mean_precision)});
  for (auto& [km, pts] : series) {
    if (pts.size() < 2) continue;
    double n = static_cast<double>(pts.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (const auto& [x, y] : pts) {
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      syy += y * y;
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0) continue;
    PowerFit fit;
    fit.k = km.first;
    fit.method = km.second;
    fit.exponent = (n * sxy - sx * sy) / denom;
    double ss_tot = syy - sy * sy / n;
    double intercept = (sy - fit.exponent * sx) / n;
    double ss_res = 0;
    for (const auto& [x, y] : pts) {
      double e = y - (fit.exponent * x + intercept);
      ss_res += e * e;
    }
    fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.points = pts.size();
    s.fits.push_back(fit);
  }
  return s;
}

std::string format_summary(const Summary& s) {
  std::ostringstream os;
  os << "degree k method count mean_prec min_prec max_prec mean_time_ms\n";
  for (const auto& g : s.groups) {
    os << g.degree << " " << g.k << " " << g.method << " " << g.count << " " << g.mean_precision
       << " " << g.min_precision << " " << g.max_precision << " " << g.mean_time_ms << "\n";
  }
  for (const auto& f : s.factors)
    os << "improvement degree=" << f.degree << " k=" << f.k << " factor=" << f.factor << "\n";
  for (const auto& f : s.fits)
    os << "fit k=" << f.k << " method=" << f.method << " exponent=" << f.exponent
       << " r2=" << f.r2 << " points=" << f.points << "\n";
  return os.str();
}

}  // namespace rouche
