#pragma once

#include <vector>

#include "duhamel/collocation.hpp"

namespace duhamel {

/// Block operators of one slab. Unknowns x = (x_1..x_N), q = (q_1..q_N):
///
///   S x = C x + D q + Phi,   q = Lambda x,
///   Phi = F_x x_0 + F_y q_0 + f_x.
///
/// S: identity diagonal blocks, subdiagonal -E_k. C_kj = alpha_kj (modewise
/// diagonal). D_kj = beta_kj (mode vector times scalar). Lambda_k is a row
/// functional giving q_k from x_k.
struct BlockSystem {
  int slab = 1;
  int degree = 0;
  std::size_t modes = 0;
  BoundaryCoupling coupling = BoundaryCoupling::kExactMultiplier;
  CollocationCoefficients coeffs;
  std::vector<ModeVector> lambda;  // [k], k = 0..N
  std::vector<double> times;       // t_k
  std::vector<double> multiplier;  // b(t_k)
  ModeVector trace_row;             // phi_n(1)
  ModeVector x0;
  double q0 = 0.0;  // boundary unknown at t_0; march carries the previous slab's value

  /// E_k, k = 2..N, as the subdiagonal of S (index k).
  const ModeVector& subdiagonal(int k) const { return coeffs.decay[k]; }
  /// Phi_k, k = 1..N.
  std::vector<ModeVector> phi_total() const;
  /// (Lambda D)_{kj}, k, j = 1..N, row-major N x N.
  std::vector<double> lambda_d() const;
  /// Row-sum infinity norm of Lambda D.
  double contraction() const;
  /// q from x at a node: Lambda_k . x.
  double boundary_unknown(int k, const ModeVector& x) const;
};

/// Assembles S, C, D, Lambda, F for slab `slab`, with initial state x0.
BlockSystem assemble_block_system(const CollocationCoefficients& coeffs,
                                  const EvolutionProblem& problem, const CglGrid& grid,
                                  const TimePartition& part, const ModeVector& x0);

/// Block lower-triangular matrix with modewise-diagonal blocks, indices
/// 1..N; block (i, k) stored for k <= i.
struct BlockLowerTriangular {
  int degree = 0;
  std::size_t modes = 0;
  std::vector<std::vector<ModeVector>> blocks;  // [i][k], i, k in 1..N

  const ModeVector& block(int i, int k) const { return blocks[i][k]; }
  /// Row sum of block norms max_n |d_n|, maximized over block rows.
  double norm() const;
};

/// S with identity diagonal and subdiagonal -E_k * (lambda_k / lambda_{k-1})^gamma.
/// gamma = 0 gives the runtime S.
BlockLowerTriangular scaled_s(const BlockSystem& system, double gamma);

/// Closed-form inverse of a unit block lower-bidiagonal matrix: block (i, k)
/// is the product of the subdiagonal factors k+1..i.
BlockLowerTriangular explicit_inverse(const BlockLowerTriangular& s);

/// ||S^{-1} S - I|| in the infinity block norm.
double inverse_defect(const BlockLowerTriangular& s, const BlockLowerTriangular& s_inv);

struct ScaledDiagnostics {
  double gamma = 0.0;
  double s_inverse_norm = 0.0;      // ||S~^{-1}||
  double inverse_defect = 0.0;      // ||S~^{-1} S~ - I||
  double lambda_d_norm = 0.0;       // |||Lambda D|||
  double fixed_point_radius = 0.0;  // spectral radius of G_1 by power iteration
};

ScaledDiagnostics scaled_diagnostics(const BlockSystem& system, double gamma);

}  // namespace duhamel
