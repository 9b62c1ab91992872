#pragma once

#include <vector>

#include "cosntf/tensor.hpp"

namespace cosntf {

enum class NnlsSolver {
  /// Lawson-Hanson active set, exact up to rounding.
  active_set,
  /// Coordinate descent (nnls_cd).
  hals,
};

struct NnlsOptions {
  NnlsSolver solver = NnlsSolver::active_set;
  int max_sweeps = 200;
  /// Stop once a sweep lowers the objective by less than rel_tol times its value.
  double rel_tol = 1e-10;
  /// Rows whose gram diagonal is at or below this are left untouched.
  double diag_floor = 1e-16;
};

struct NnlsResult {
  Matrix X;
  /// HALS sweeps, or the largest active-set iteration count over columns.
  int sweeps = 0;
  /// 1/2 ||B - Q X||_F^2 at return.
  double objective = 0.0;
};

/// Block coordinate descent (HALS) for min_{X >= 0} 1/2 ||B - Q X||_F^2 given
/// only G = Q^T Q, H = Q^T B and the objective f0 at X0. Each row of X is
/// replaced by max(0, x_k + (H - G X)_k / G_kk) in turn.
NnlsResult nnls_cd_normal(const Matrix& G, const Matrix& H, Matrix X0, double f0,
                          const NnlsOptions& opts = {});

/// Same solver on explicit B and Q. X0 must be nonnegative.
NnlsResult nnls_cd(const Matrix& B, const Matrix& Q, const Matrix& X0,
                   const NnlsOptions& opts = {});

/// Lawson-Hanson on the normal equations, one column of X at a time. The
/// support of each column of X0 (nonnegative) seeds the passive set; pass an
/// empty matrix to start from zero. `half_b_sq` = 1/2 ||B||_F^2 only feeds
/// the reported objective.
NnlsResult nnls_active_set(const Matrix& G, const Matrix& H, const Matrix& X0 = Matrix(),
                           double half_b_sq = 0.0);

struct RecoverOptions {
  int maxiter = 100;
  double delta = 1e-6;
  NnlsOptions nnls;
};

/// A ~= P1 * core * P2 with core = A(I, J, :).
struct CosepModel {
  Tensor3 P1;
  Tensor3 core;
  Tensor3 P2;
  IndexList I{Mode::horizontal, {}};
  IndexList J{Mode::lateral, {}};
  int iterations = 0;
  bool converged = false;
  /// ||A - P1 * core * P2||_F^2 after the initial solves and after every
  /// alternation.
  std::vector<double> objective_history;
};

/// Alternating nonnegative least squares for P1 >= 0 and P2 >= 0, both
/// solved in their exact block-circulant form. Stops once
/// ||P1_old - P1||_F + ||P2_old - P2||_F <= delta or after maxiter rounds.
CosepModel recover_factors(const Tensor3& t, const IndexList& I, const IndexList& J,
                           const RecoverOptions& opts = {});

/// The model with the given factors; iterations and history are left empty.
CosepModel make_model(Tensor3 P1, Tensor3 core, Tensor3 P2, IndexList I, IndexList J);

Tensor3 reconstruct(const CosepModel& mdl);

/// ||a - b||_F / ||a||_F. Throws InvalidArgument when a is zero.
double rel_error(const Tensor3& a, const Tensor3& b);
/// 1 - rel_error(a, b).
double rel_approx(const Tensor3& a, const Tensor3& b);

}  // namespace cosntf
