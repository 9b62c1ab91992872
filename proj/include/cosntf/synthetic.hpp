#pragma once

#include <cstdint>

#include "cosntf/tensor.hpp"

namespace cosntf {

struct SynthSpec {
  Index m = 100;
  Index n = 100;
  Index p = 10;
  Index r1 = 10;
  Index r2 = 3;
  double noise = 0.0;
  /// Every horizontal slice of the scaled block sums to this. Lateral slices
  /// sum to slice_sum * m / n (the same value when m == n).
  double slice_sum = 100.0;
  std::uint64_t seed = 0;
};

struct SynthData {
  Tensor3 tensor;
  /// The scaled, permuted tensor before noise and clipping.
  Tensor3 noiseless;
  /// Positions of the generating slices after permutation, ascending.
  IndexList I{Mode::horizontal, {}};
  IndexList J{Mode::lateral, {}};
};

/// Sinkhorn balancing of a positive matrix: returns (d_r, d_c) such that
/// diag(d_r) T diag(d_c) has row sums row_target and column sums col_target.
/// Throws ConvergenceError if the max deviation stays above tol.
std::pair<Eigen::VectorXd, Eigen::VectorXd> sinkhorn(const Matrix& T, double row_target,
                                                     double col_target, int max_rounds = 500,
                                                     double tol = 1e-8);

/// Pi1 * max(0, D_r * [S, S*H; M*S, M*S*H] * D_c + N) * Pi2 with S, M, H
/// uniform on [0, 1], D_r and D_c first-slice-only diagonal scalings from
/// Sinkhorn, Gaussian N rescaled to ||N||_F = noise * ||scaled block||_F and
/// random first-slice permutations Pi1, Pi2.
///
/// Draws come from std::mt19937_64(seed) in the order S, M, H, Pi1, Pi2, N.
/// N is drawn even at zero noise, so specs differing only in `noise` share
/// the same underlying tensor.
SynthData gen_synthetic(const SynthSpec& spec);

}  // namespace cosntf
