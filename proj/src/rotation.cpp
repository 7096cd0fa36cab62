#include "rouche/rotation.hpp"

#include <stdexcept>

namespace rouche {

namespace {

// planar factor embedded into n x n on coordinates (i, j); k may be negative
// (used for inverses: S_{-k} = S_k^{-1})
RatMatrix embedded_planar(unsigned n, unsigned i, unsigned j, const Int& k, long L) {
  Int p2L = pow2_int(static_cast<unsigned long>(L));
  Int num_cos = p2L * p2L - k * k;
  Int num_sin = 2 * k * p2L;
  Int den = p2L * p2L + k * k;
  RatMatrix M = mat_identity(n);
  M[i][i] = frac(num_cos, den);
  M[j][j] = frac(num_cos, den);
  M[i][j] = frac(-num_sin, den);
  M[j][i] = frac(num_sin, den);
  return M;
}

}  // namespace

RatMatrix mat_identity(unsigned n) {
  RatMatrix M(n, std::vector<Rational>(n, Rational(0)));
  for (unsigned i = 0; i < n; ++i) M[i][i] = 1;
  return M;
}

RatMatrix mat_mul(const RatMatrix& A, const RatMatrix& B) {
  size_t n = A.size(), m = B[0].size(), k = B.size();
  RatMatrix C(n, std::vector<Rational>(m, Rational(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t l = 0; l < k; ++l) {
      if (A[i][l] == 0) continue;
      for (size_t j = 0; j < m; ++j) C[i][j] += A[i][l] * B[l][j];
    }
  return C;
}

RatMatrix mat_transpose(const RatMatrix& A) {
  size_t n = A.size(), m = A[0].size();
  RatMatrix T(m, std::vector<Rational>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < m; ++j) T[j][i] = A[i][j];
  return T;
}

bool RotationSpec::is_identity() const {
  for (const auto& [ij, k] : k_values)
    if (k != 0) return false;
  return true;
}

RatMatrix planar_matrix(const Int& k, long L) {
  if (k < 0 || k > pow2_int(static_cast<unsigned long>(L)))
    throw std::invalid_argument("planar_matrix: k out of range [0, 2^L]");
  return embedded_planar(2, 0, 1, k, L);
}

RotationSpec rotation_identity(unsigned n) {
  RotationSpec s;
  s.n = n;
  s.L = 0;
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = i + 1; j < n; ++j) s.k_values.push_back({{i, j}, Int(0)});
  s.matrix = mat_identity(n);
  s.inverse = mat_identity(n);
  return s;
}

RotationSpec sample_rotation(unsigned n, const Int& N, std::mt19937_64& rng) {
  if (n < 2 || N < 1) throw std::invalid_argument("sample_rotation: need n >= 2, N >= 1");
  RotationSpec s;
  s.n = n;
  Rational arg = Rational(2) * Rational(static_cast<long>(n)) * Rational(static_cast<long>(n)) *
                 Rational(N);
  s.L = 4 * std::max(1L, log2_ceil_pos(arg));
  // k uniform in {1, ..., 2^L}: draw L random bits, add 1
  auto draw_k = [&]() {
    Int v = 0;
    long bits = s.L;
    while (bits > 0) {
      long take = std::min(bits, 32L);
      Int chunk = static_cast<unsigned long>(rng() & ((1ull << take) - 1));
      Int shifted;
      mpz_mul_2exp(shifted.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(take));
      v = shifted + chunk;
      bits -= take;
    }
    return Int(v + 1);
  };
  s.matrix = mat_identity(n);
  s.inverse = mat_identity(n);
  for (unsigned i = 0; i < n; ++i) {
    for (unsigned j = i + 1; j < n; ++j) {
      Int k = draw_k();
      s.k_values.push_back({{i, j}, k});
      s.matrix = mat_mul(s.matrix, embedded_planar(n, i, j, k, s.L));
      // inverse composes the negated factors in reverse order
      s.inverse = mat_mul(embedded_planar(n, i, j, -k, s.L), s.inverse);
    }
  }
  return s;
}

Int common_denominator(const RotationSpec& S) {
  Int p2 = pow2_int(static_cast<unsigned long>(2 * S.L));
  Int lambda = 1;
  for (const auto& [ij, k] : S.k_values) lambda *= p2 + k * k;
  return lambda;
}

std::vector<RationalComplex> apply_matrix(const RatMatrix& M,
                                          const std::vector<RationalComplex>& p) {
  size_t n = M.size();
  if (p.size() != n) throw std::invalid_argument("apply_matrix: dimension mismatch");
  std::vector<RationalComplex> out(n);
  for (size_t i = 0; i < n; ++i) {
    RationalComplex acc;
    for (size_t j = 0; j < n; ++j) acc = acc + p[j] * M[i][j];
    out[i] = acc;
  }
  return out;
}

MPoly compose_rotation(const MPoly& f, const RotationSpec& S) {
  return compose_matrix(f, S.matrix);
}

}  // namespace rouche
