#pragma once

#include <vector>

#include "cosntf/tensor.hpp"

namespace cosntf {

/// Default numerical-rank tolerance, relative to sigma_max over all Fourier
/// slices.
inline constexpr double kDefaultRankTol = 1e-10;

struct JacobiOptions {
  int max_sweeps = 60;
  /// A column pair is treated as orthogonal once |b_i^H b_j| <= tol*|b_i||b_j|.
  double tol = 1e-14;
};

/// Full SVD M = U diag(sigma) V^H with U (m x m) and V (n x n) unitary and
/// sigma (min(m,n)) nonnegative and nonincreasing.
struct ComplexSvd {
  CMatrix U;
  Eigen::VectorXd sigma;
  CMatrix V;
  int sweeps = 0;
};

/// One-sided (Hestenes) Jacobi SVD. Real input yields real U and V.
/// Throws ConvergenceError after max_sweeps, carrying the largest remaining
/// relative column coupling.
ComplexSvd complex_svd(const CMatrix& M, const JacobiOptions& opts = {});
Eigen::VectorXd singular_values(const CMatrix& M);

/// t-SVD A = W * Sigma * V^T.
struct TsvdFactors {
  Tensor3 W;
  Tensor3 Sigma;
  Tensor3 V;
};

TsvdFactors tsvd(const Tensor3& t);

/// Moore-Penrose inverse; slice singular values at or below
/// rank_tol * sigma_max are treated as zero.
Tensor3 tpinv(const Tensor3& t, double rank_tol = kDefaultRankTol);

/// Inverse of a square tensor. Throws SingularError naming the first
/// Fourier slice whose smallest singular value is <= rank_tol * sigma_max.
Tensor3 tinv(const Tensor3& t, double rank_tol = kDefaultRankTol);

struct RankReport {
  std::vector<Index> multirank;
  Index tubalrank = 0;
  double stable_rank = 0.0;
  double rank_tol = kDefaultRankTol;
};

RankReport ranks(const Tensor3& t, double rank_tol = kDefaultRankTol);

}  // namespace cosntf
