#ifndef ROUCHE_INSTGEN_HPP
#define ROUCHE_INSTGEN_HPP

/*
 * Benchmark instance generation: trivariate seed surfaces projected to
 * bivariate systems with planted multiple solutions (silhouette/critical
 * constructions), random shearing, sparse degree inflation, and the
 * four-line instance file format.
 */

#include "rouche/mpoly.hpp"

#include <array>
#include <random>
#include <string>
#include <vector>

namespace rouche {

enum class DeriveMode { m0xx, m0xy, m0yy, mx0y, my0x };
enum class VarOrder { xyz, xzy, yzx };

DeriveMode parse_mode(const std::string& s);     // "0xx" etc.
VarOrder parse_order(const std::string& s);      // "xyz" etc.
std::string mode_name(DeriveMode m);
std::string order_name(VarOrder o);

struct Instance {
  MPoly f, g;  // bivariate system
  Rational x_lo, x_hi, y_lo, y_hi;
};

/// f = res(P, P_z, z) and g per the mode table (partials of f), after the
/// variable renaming given by `order`. Throws DegenerateSystem when the
/// resultant degenerates to a constant.
std::pair<MPoly, MPoly> derive_system(const MPoly& P, DeriveMode mode, VarOrder order);

/// Exact composition with the shear x -> (a x + b y, c x + d y).
std::pair<MPoly, MPoly> shear_system(const MPoly& f, const MPoly& g, int a, int b, int c, int d);

/// f_d = f * p, g_d = g * q with sparse random multiplicands of matching
/// degree, integer coefficients in [-8, 8], both nonvanishing at `z` so the
/// planted multiplicity survives. When z is only known inside an enclosure
/// of the given radius, the nonvanishing check is done by interval
/// arithmetic over the enclosure.
std::pair<MPoly, MPoly> inflate(const MPoly& f, const MPoly& g, unsigned d, unsigned sparsity,
                                std::mt19937_64& rng, const std::vector<RationalComplex>& z,
                                const Rational& enclosure_radius = Rational(0));

void write_instance(const std::string& path, const Instance& inst);
Instance read_instance(const std::string& path);

/// Built-in catalog of classic trivariate surfaces (name, polynomial text).
const std::vector<std::pair<std::string, std::string>>& seed_catalog();

/// Deterministic bivariate system with a planted solution of exact
/// multiplicity k (product construction plus a random shear). The returned
/// instance's ranges bound the planted solution; `solution` is its exact
/// rational location.
struct PlantedSystem {
  Instance inst;
  std::vector<RationalComplex> solution;
  unsigned multiplicity = 0;
};
PlantedSystem plant_system(unsigned k, std::mt19937_64& rng);

}  // namespace rouche

#endif
