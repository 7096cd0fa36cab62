#include "doctest.h"
#include "oracle.hpp"
#include "rouche/instgen.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

using namespace rouche;

namespace {

MPoly P3(const std::string& s) { return MPoly::parse(s, 3); }
MPoly P2(const std::string& s) { return MPoly::parse(s, 2); }

}  // namespace

TEST_CASE("derive_system examples") {
  MPoly sphere = P3("x^2 + y^2 + z^2 - 1");
  auto [f, g] = derive_system(sphere, DeriveMode::m0xx, VarOrder::xyz);
  CHECK(f == P2("4*x1^2 + 4*x2^2 - 4"));
  CHECK(g == P2("64*x1^2"));

  auto [f2, g2] = derive_system(sphere, DeriveMode::mx0y, VarOrder::xyz);
  CHECK(f2 == P2("4*x1^2 + 4*x2^2 - 4") * P2("8*x1"));
  CHECK(g2 == P2("8*x2"));

  CHECK_THROWS_AS((void)derive_system(P3("z - x*y"), DeriveMode::m0xy, VarOrder::xyz),
                  DegenerateSystem);
}

TEST_CASE("derive_system variable orders") {
  // renaming y <-> z turns an x^2 + 2 y^2 + 3 z^2 - 1 ellipsoid around
  MPoly e = P3("x^2 + 2*y^2 + 3*z^2 - 1");
  auto [f_xyz, g_xyz] = derive_system(e, DeriveMode::m0yy, VarOrder::xyz);
  auto [f_xzy, g_xzy] = derive_system(e, DeriveMode::m0yy, VarOrder::xzy);
  // xzy eliminates the old y (coefficient 2), xyz the old z (coefficient 3):
  // res(c z^2 + r, 2c z) = 4 c^2 r
  CHECK(f_xyz == P2("36*x1^2 + 72*x2^2 - 36"));
  CHECK(f_xzy == P2("16*x1^2 + 48*x2^2 - 16"));
  CHECK(!(g_xyz == g_xzy));
}

TEST_CASE("shear_system examples") {
  MPoly f = P2("x1^2 - x2");
  auto [a, b] = shear_system(f, f, 1, 0, 0, 1);
  CHECK(a == f);
  auto [c, d] = shear_system(P2("x1"), P2("x1"), 0, 1, 1, 0);
  CHECK(c == P2("x2"));
  auto [e, e2] = shear_system(P2("x1^2"), P2("x1^2"), 1, 1, 0, 1);
  CHECK(e == P2("x1^2 + 2*x1*x2 + x2^2"));
  CHECK_THROWS(shear_system(f, f, 1, 1, 1, 1));
}

TEST_CASE("inflate degree and multiplicity preservation") {
  std::mt19937_64 rng(808);
  MPoly f = P2("x1^2 - x2");
  MPoly g = P2("x2");
  std::vector<RationalComplex> z{RationalComplex(), RationalComplex()};
  for (unsigned d : {4u, 7u}) {
    auto [fd, gd] = inflate(f, g, d, 3, rng, z);
    CHECK(fd.total_degree() == static_cast<int>(d));
    CHECK(gd.total_degree() == static_cast<int>(d));
    CHECK(!fd.evaluate(z).is_zero() == false);  // f vanishes at z (planted)
    // the multiplicands do not vanish at z, so the multiplicity is intact
    auto sols = testing::oracle_solve(PolySystem{{fd, gd}}, rng);
    bool found = false;
    for (const auto& s : sols) {
      RationalComplex d1 = RationalComplex(s.enclosure.center[0]);
      RationalComplex d2 = RationalComplex(s.enclosure.center[1]);
      Rational rad = s.enclosure.radius.to_rational();
      if (d1.abs2() <= rad * rad * 4 && d2.abs2() <= rad * rad * 4) {
        found = true;
        CHECK(s.multiplicity == 2);
      }
    }
    CHECK(found);
  }
}

TEST_CASE("instance file round trip") {
  Instance inst;
  inst.f = P2("x1^2 - x2");
  inst.g = P2("x2");
  inst.x_lo = frac(-1, 4);
  inst.x_hi = frac(1, 4);
  inst.y_lo = frac(-1, 4);
  inst.y_hi = frac(1, 4);
  std::string path = std::filesystem::temp_directory_path() / "rouche_inst_test.txt";
  write_instance(path, inst);
  Instance back = read_instance(path);
  CHECK(back.f == inst.f);
  CHECK(back.g == inst.g);
  CHECK(back.x_lo == inst.x_lo);
  CHECK(back.y_hi == inst.y_hi);

  // the documented sample file
  {
    std::ofstream os(path);
    os << "x^2 - y\ny\n-1/4 1/4\n-1/4 1/4\n";
  }
  Instance sample = read_instance(path);
  CHECK(sample.f == P2("x1^2 - x2"));
  CHECK(sample.g == P2("x2"));
  CHECK(sample.x_lo == frac(-1, 4));

  // malformed range line
  {
    std::ofstream os(path);
    os << "x\ny\n-1/4\n-1/4 1/4\n";
  }
  CHECK_THROWS_WITH_AS((void)read_instance(path), doctest::Contains("line 3"),
                       std::runtime_error);
  std::remove(path.c_str());
}

TEST_CASE("plant_system multiplicities") {
  std::mt19937_64 rng(99);
  for (unsigned k : {1u, 2u, 3u, 4u}) {
    PlantedSystem ps = plant_system(k, rng);
    CHECK(ps.multiplicity == k);
    // the planted point solves the system exactly
    CHECK(ps.inst.f.evaluate(ps.solution).is_zero());
    CHECK(ps.inst.g.evaluate(ps.solution).is_zero());
    CHECK(ps.inst.x_lo < ps.solution[0].re);
    CHECK(ps.solution[0].re < ps.inst.x_hi);
    // oracle confirms the multiplicity at the planted point
    auto sols = testing::oracle_solve(PolySystem{{ps.inst.f, ps.inst.g}}, rng);
    bool found = false;
    for (const auto& s : sols) {
      RationalComplex d1 = RationalComplex(s.enclosure.center[0]) - ps.solution[0];
      RationalComplex d2 = RationalComplex(s.enclosure.center[1]) - ps.solution[1];
      Rational rad = s.enclosure.radius.to_rational();
      if (d1.abs2() <= rad * rad && d2.abs2() <= rad * rad) {
        found = true;
        CHECK(s.multiplicity == k);
      }
    }
    CHECK(found);
  }
}

TEST_CASE("catalog seeds parse") {
  for (const auto& [name, text] : seed_catalog()) {
    MPoly P = MPoly::parse(text, 3);
    CHECK(P.nvars() == 3);
    CHECK(P.total_degree() >= 2);
  }
}
