#ifndef ROUCHE_ROTATION_HPP
#define ROUCHE_ROTATION_HPP

/*
 * Exact rational rotation matrices: the planar family
 *   S_k(L) = ((1-t^2)/(1+t^2), -2t/(1+t^2); 2t/(1+t^2), (1-t^2)/(1+t^2)),
 * t = k 2^-L, composed over coordinate pairs in fixed lexicographic order.
 * All entries are exact rationals; S^T S = I holds exactly.
 */

#include "rouche/mpoly.hpp"
#include "rouche/numeric.hpp"

#include <random>
#include <vector>

namespace rouche {

struct RotationSpec {
  unsigned n = 0;
  long L = 0;
  std::vector<std::pair<std::pair<unsigned, unsigned>, Int>> k_values;  // ((i,j), k), i<j, lex order
  RatMatrix matrix;
  RatMatrix inverse;

  bool is_identity() const;
};

/// 2x2 rotation with t = k * 2^-L. Requires 0 <= k <= 2^L.
RatMatrix planar_matrix(const Int& k, long L);

RotationSpec rotation_identity(unsigned n);

/// Uniform draw from S_N: L = 4 * ceil(log2(2 n^2 N)), each k_ij uniform in
/// {1, ..., 2^L}. Deterministic given the generator state.
RotationSpec sample_rotation(unsigned n, const Int& N, std::mt19937_64& rng);

/// lambda = prod (2^{2L} + k_ij^2); lambda*S and lambda*S^{-1} are integer.
Int common_denominator(const RotationSpec& S);

std::vector<RationalComplex> apply_matrix(const RatMatrix& M,
                                          const std::vector<RationalComplex>& p);

/// f(S x); thin wrapper so call sites can pass the spec directly.
MPoly compose_rotation(const MPoly& f, const RotationSpec& S);

// small exact-matrix helpers
RatMatrix mat_identity(unsigned n);
RatMatrix mat_mul(const RatMatrix& A, const RatMatrix& B);
RatMatrix mat_transpose(const RatMatrix& A);

}  // namespace rouche

#endif
