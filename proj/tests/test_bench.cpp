#include "doctest.h"
#include "rouche/bench.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

using namespace rouche;
namespace fs = std::filesystem;

namespace {

// two tiny planted instance folders for the harness
std::string make_tiny_suite() {
  fs::path dir = fs::temp_directory_path() / "rouche_bench_suite";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::mt19937_64 rng(7);
  int made = 0;
  for (unsigned i = 0; made < 2 && i < 12; ++i) {
    PlantedSystem ps = plant_system(made == 0 ? 1 : 2, rng);
    fs::path sub = dir / ("inst" + std::to_string(made));
    fs::create_directories(sub);
    write_instance((sub / "orig.cnd").string(), ps.inst);
    {
      std::ofstream os(sub / "meta");
      os << "k=" << ps.multiplicity << "\n";
      os << "solution=" << ps.solution[0].re.get_str() << " " << ps.solution[1].re.get_str()
         << "\n";
    }
    auto [fd, gd] = inflate(ps.inst.f, ps.inst.g, 6, 2, rng, ps.solution);
    Instance big{fd, gd, ps.inst.x_lo, ps.inst.x_hi, ps.inst.y_lo, ps.inst.y_hi};
    write_instance((sub / "d0006_0.sys").string(), big);
    ++made;
  }
  return dir.string();
}

std::vector<BenchRecord> synthetic_records() {
  std::vector<BenchRecord> rs;
  // precision exactly proportional to degree for the fit check
  for (unsigned d : {8u, 16u, 32u, 64u}) {
    BenchRecord t;
    t.instance_id = "synt";
    t.degree = d;
    t.k = 1;
    t.method = "truncate";
    t.run = 0;
    t.precision_bits = 10 * d;
    t.time_ms = 1;
    t.verdict = "ok";
    rs.push_back(t);
    BenchRecord s = t;
    s.method = "standard";
    s.precision_bits = 400 * d;
    rs.push_back(s);
  }
  return rs;
}

}  // namespace

TEST_CASE("run_suite cardinality and determinism") {
  std::string dir = make_tiny_suite();
  BenchConfig cfg;
  cfg.methods = {"standard", "truncate"};
  cfg.repeats = 3;
  cfg.precision_cap = 256;  // keep the unit test quick; timeouts are fine
  cfg.timeout_s = 30;
  auto records = run_suite(dir, cfg);
  CHECK(records.size() == 2 * 2 * 3);  // instances x methods x repeats
  for (const auto& r : records) {
    CHECK(r.precision_bits >= 1);
    CHECK((r.verdict == "ok" || r.verdict == "excluded" || r.verdict == "timeout"));
  }
  // deterministic precision demand per (instance, method, run)
  auto again = run_suite(dir, cfg);
  REQUIRE(again.size() == records.size());
  for (size_t i = 0; i < records.size(); ++i) {
    CHECK(records[i].instance_id == again[i].instance_id);
    CHECK(records[i].precision_bits == again[i].precision_bits);
    CHECK(records[i].verdict == again[i].verdict);
  }
  fs::remove_all(dir);
}

TEST_CASE("csv round trip") {
  auto rs = synthetic_records();
  std::string path = (fs::temp_directory_path() / "rouche_bench.csv").string();
  write_csv(path, rs);
  auto back = read_csv(path);
  REQUIRE(back.size() == rs.size());
  for (size_t i = 0; i < rs.size(); ++i) {
    CHECK(back[i].instance_id == rs[i].instance_id);
    CHECK(back[i].degree == rs[i].degree);
    CHECK(back[i].k == rs[i].k);
    CHECK(back[i].method == rs[i].method);
    CHECK(back[i].run == rs[i].run);
    CHECK(back[i].precision_bits == rs[i].precision_bits);
    CHECK(back[i].verdict == rs[i].verdict);
  }
  std::remove(path.c_str());
}

TEST_CASE("summarize: factors, aggregates, exact power fit") {
  auto rs = synthetic_records();
  Summary s = summarize(rs);
  // improvement factor 40 at every degree
  REQUIRE(!s.factors.empty());
  for (const auto& f : s.factors) CHECK(f.factor == doctest::Approx(40.0));
  // exact linear scaling: exponent 1, r2 = 1
  REQUIRE(s.fits.size() == 2);
  for (const auto& f : s.fits) {
    CHECK(f.exponent == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-9));
  }
  // permutation invariance
  auto shuffled = rs;
  std::reverse(shuffled.begin(), shuffled.end());
  Summary s2 = summarize(shuffled);
  REQUIRE(s2.groups.size() == s.groups.size());
  for (size_t i = 0; i < s.groups.size(); ++i)
    CHECK(s.groups[i].mean_precision == s2.groups[i].mean_precision);

  // single-method records: aggregates present, factors absent
  std::vector<BenchRecord> solo(rs.begin(), rs.begin() + 1);
  Summary s3 = summarize(solo);
  CHECK(s3.factors.empty());
  CHECK(s3.groups.size() == 1);
}
