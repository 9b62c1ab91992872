#pragma once

#include <cstdint>
#include <vector>

#include "cosntf/selection_result.hpp"
#include "cosntf/tensor.hpp"

namespace cosntf {

/// Settings for the self-dictionary fast gradient solver of
///   min_{Y in Omega} 1/2 ||M - M Y||_F^2 + lambda tr(Y),
///   Omega = { 0 <= Y_ij <= 1, w_i Y_ij <= w_j Y_ii },  w_j = ||M_:j||_1.
struct FgmOptions {
  double lambda = 0.25;
  int max_iter = 500;
  /// Drop the momentum (and reject the step) whenever the objective rises.
  bool restart = true;
  int power_iters = 30;
  /// Smallest step, relative to 1/L, tried before giving up on descent.
  double min_step = 1e-6;
};

struct FgmResult {
  Matrix Y;
  Eigen::VectorXd diag;
  /// Column weights w_j = ||M_:j||_1.
  Eigen::VectorXd weights;
  /// Objective at the start and at every restart, then at the final iterate.
  std::vector<double> checkpoints;
  double objective = 0.0;
  double lipschitz = 0.0;
  int iterations = 0;
  /// Largest omega_violation over every accepted iterate.
  double max_violation = 0.0;
};

/// 1/2 ||M - M Y||_F^2 + lambda tr(Y), evaluated directly.
double fgm_objective(const Matrix& M, const Matrix& Y, double lambda);

/// Maps Y into Omega: clip to [0, 1], then cap Y_ij at (w_j / w_i) Y_ii for
/// j != i, rounded down so that w_i Y_ij <= w_j Y_ii holds exactly in
/// floating point. Rows and columns with zero weight are zeroed. Idempotent.
void project_omega(Matrix& Y, const Eigen::VectorXd& weights);

/// Largest violation of the Omega constraints (0 when feasible).
double omega_violation(const Matrix& Y, const Eigen::VectorXd& weights);

/// Requires M >= 0. Returns the best iterate on the iteration cap.
FgmResult fgm_solve(const Matrix& M, const FgmOptions& opts = {});

/// Indices (0-based, ascending) of the r largest diagonal entries of the
/// FGM solution; ties go to the lowest index and zero-weight columns are
/// never chosen.
IndexList snmf_fgm_select(const Matrix& M, Index r, Mode mode, const FgmOptions& opts = {});

struct CosntfOptions {
  double delta = 1e-6;
  int maxiter = 50;
  FgmOptions fgm;
};

/// Alternating coseparable index selection on a nonnegative tensor.
SelectionResult cosntf_select(const Tensor3& t, Index r1, Index r2, const CosntfOptions& opts = {});

/// The stopping value ||A_I_old - A_I||_F + ||A_J_old - A_J||_F.
double cosntf_step_change(const Tensor3& t, const IndexList& I_old, const IndexList& J_old,
                          const IndexList& I, const IndexList& J);

struct HybridOptions {
  CosntfOptions cosntf;
  int max_rounds = 10;
};

/// Uniformly pre-samples ceil(r1 ln m) horizontal and ceil(r2 ln n) lateral
/// indices, runs cosntf_select on that subtensor and maps the result back.
SelectionResult hybrid_select(const Tensor3& t, Index r1, Index r2, std::uint64_t seed,
                              const HybridOptions& opts = {});

}  // namespace cosntf
