#include "cosntf/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "cosntf/sampling.hpp"

namespace cosntf {

namespace {

// Largest eigenvalue of the PSD gram matrix, power iteration from ones.
double power_lipschitz(const Matrix& G, int iters) {
  Eigen::VectorXd v = Eigen::VectorXd::Ones(G.cols());
  double lambda = 0.0;
  for (int it = 0; it < iters; ++it) {
    Eigen::VectorXd w = G * v;
    const double nrm = w.norm();
    if (nrm == 0.0) return 0.0;
    lambda = v.dot(w) / v.squaredNorm();
    v = w / nrm;
  }
  return std::max(lambda, (G * v).norm());
}

// 1/2 tr(G) - tr(GY) + 1/2 <GY, Y> + lambda tr(Y), with GY supplied.
double gram_objective(const Matrix& GY, const Matrix& Y, double half_trace_g,
                      double lambda) {
  return half_trace_g - GY.trace() + 0.5 * GY.cwiseProduct(Y).sum() + lambda * Y.trace();
}

std::vector<Index> top_diagonal(const Eigen::VectorXd& diag, const Eigen::VectorXd& weights,
                                Index r) {
  std::vector<Index> order;
  for (Index j = 0; j < diag.size(); ++j) {
    if (weights(j) > 0.0) order.push_back(j);
  }
  if (static_cast<Index>(order.size()) < r) {
    throw InvalidArgument("snmf_fgm_select: r = " + std::to_string(r) + " but only " +
                          std::to_string(order.size()) + " columns are nonzero");
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return diag(a) > diag(b); });
  order.resize(static_cast<std::size_t>(r));
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace

double fgm_objective(const Matrix& M, const Matrix& Y, double lambda) {
  return 0.5 * (M - M * Y).squaredNorm() + lambda * Y.trace();
}

void project_omega(Matrix& Y, const Eigen::VectorXd& weights) {
  const Index n = Y.rows();
  if (Y.cols() != n || weights.size() != n) throw DimensionError("project_omega: shape mismatch");
  Y = Y.cwiseMax(0.0).cwiseMin(1.0);
  for (Index i = 0; i < n; ++i) {
    if (weights(i) <= 0.0) {
      Y.row(i).setZero();
      Y.col(i).setZero();
    }
  }
  for (Index i = 0; i < n; ++i) {
    if (weights(i) <= 0.0) continue;
    const double yii = Y(i, i);
    const double wi = weights(i);
    for (Index j = 0; j < n; ++j) {
      if (j == i || wi * Y(i, j) <= weights(j) * yii) continue;
      double cap = weights(j) / wi * yii;
      while (cap > 0.0 && wi * cap > weights(j) * yii) cap = std::nextafter(cap, 0.0);
      Y(i, j) = cap;
    }
  }
}

double omega_violation(const Matrix& Y, const Eigen::VectorXd& weights) {
  const Index n = Y.rows();
  double worst = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double y = Y(i, j);
      worst = std::max({worst, -y, y - 1.0});
      if (i != j) worst = std::max(worst, weights(i) * y - weights(j) * Y(i, i));
    }
  }
  return worst;
}

FgmResult fgm_solve(const Matrix& M, const FgmOptions& opts) {
  if ((M.array() < 0.0).any()) throw InvalidArgument("fgm_solve: M must be nonnegative");
  if (opts.lambda < 0.0) throw InvalidArgument("fgm_solve: lambda must be >= 0");
  const Index n = M.cols();

  FgmResult out;
  out.weights = M.colwise().sum().transpose();
  const Matrix G = M.transpose() * M;
  const double half_trace_g = 0.5 * G.trace();
  out.lipschitz = power_lipschitz(G, opts.power_iters);

  Matrix Y = Matrix::Zero(n, n);
  Matrix GY = Matrix::Zero(n, n);
  double f = half_trace_g;
  out.checkpoints.push_back(f);

  if (out.lipschitz > 0.0) {
    Matrix Z = Y, GZ = GY;
    double alpha = 1.0;
    double step_size = 1.0 / out.lipschitz;
    bool just_restarted = true;
    for (int it = 0; it < opts.max_iter; ++it) {
      out.iterations = it + 1;
      Matrix step = Z - step_size * (GZ - G);
      step.diagonal().array() -= opts.lambda * step_size;
      project_omega(step, out.weights);
      Matrix Gstep = G * step;
      const double f_new = gram_objective(Gstep, step, half_trace_g, opts.lambda);

      if (opts.restart && f_new > f) {
        if (just_restarted) {
          // The clip-and-cap map is not a Euclidean projection, so even a
          // plain step from Y can overshoot; shorten it instead.
          step_size *= 0.5;
          if (step_size * out.lipschitz < opts.min_step) break;
          continue;
        }
        out.checkpoints.push_back(f);
        Z = Y;
        GZ = GY;
        alpha = 1.0;
        just_restarted = true;
        continue;
      }
      just_restarted = false;
      out.max_violation = std::max(out.max_violation, omega_violation(step, out.weights));
      const double alpha_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * alpha * alpha));
      const double beta = (alpha - 1.0) / alpha_next;
      Z = step + beta * (step - Y);
      GZ = Gstep + beta * (Gstep - GY);
      Y = std::move(step);
      GY = std::move(Gstep);
      f = f_new;
      alpha = alpha_next;
    }
  }
  out.checkpoints.push_back(f);
  out.objective = f;
  out.diag = Y.diagonal();
  out.Y = std::move(Y);
  return out;
}

IndexList snmf_fgm_select(const Matrix& M, Index r, Mode mode, const FgmOptions& opts) {
  if (r < 1 || r > M.cols()) throw InvalidArgument("snmf_fgm_select: need 1 <= r <= cols");
  const FgmResult res = fgm_solve(M, opts);
  return IndexList(mode, top_diagonal(res.diag, res.weights, r));
}

double cosntf_step_change(const Tensor3& t, const IndexList& I_old, const IndexList& J_old,
                          const IndexList& I, const IndexList& J) {
  return fnorm(rows_of(t, I_old) - rows_of(t, I)) + fnorm(cols_of(t, J_old) - cols_of(t, J));
}

SelectionResult cosntf_select(const Tensor3& t, Index r1, Index r2, const CosntfOptions& opts) {
  if (r1 < 1 || r1 > t.m() || r2 < 1 || r2 > t.n()) {
    throw InvalidArgument("cosntf_select: need 1 <= r1 <= m and 1 <= r2 <= n");
  }
  if (opts.maxiter < 0 || opts.delta < 0.0) throw InvalidArgument("cosntf_select: bad delta/maxiter");
  for (double v : t.data()) {
    if (v < 0.0) throw InvalidArgument("cosntf_select: tensor must be nonnegative");
  }

  auto pick_rows = [&](const Tensor3& lateral) {
    return snmf_fgm_select(unfold(ttranspose(lateral)), r1, Mode::horizontal, opts.fgm);
  };
  auto pick_cols = [&](const IndexList& I) {
    return snmf_fgm_select(unfold(rows_of(t, I)), r2, Mode::lateral, opts.fgm);
  };

  SelectionResult out;
  out.I = pick_rows(t);
  out.J = pick_cols(out.I);
  out.converged = false;
  for (int it = 1; it <= opts.maxiter; ++it) {
    const IndexList I_old = out.I, J_old = out.J;
    out.I = pick_rows(cols_of(t, out.J));
    out.J = pick_cols(out.I);
    const double change = cosntf_step_change(t, I_old, J_old, out.I, out.J);
    out.history.push_back(change);
    out.outer_iterations = it;
    if (change <= opts.delta) {
      out.converged = true;
      break;
    }
  }
  return out;
}

SelectionResult hybrid_select(const Tensor3& t, Index r1, Index r2, std::uint64_t seed,
                              const HybridOptions& opts) {
  if (r1 < 1 || r1 > t.m() || r2 < 1 || r2 > t.n()) {
    throw InvalidArgument("hybrid_select: need 1 <= r1 <= m and 1 <= r2 <= n");
  }
  std::mt19937_64 rng(seed);
  const std::vector<double> wr(static_cast<std::size_t>(t.m()), 1.0);
  const std::vector<double> wc(static_cast<std::size_t>(t.n()), 1.0);
  std::vector<Index> rows =
      sample_distinct(wr, oversample_count(r1, t.m()), r1, rng, opts.max_rounds);
  std::vector<Index> cols =
      sample_distinct(wc, oversample_count(r2, t.n()), r2, rng, opts.max_rounds);
  std::sort(rows.begin(), rows.end());
  std::sort(cols.begin(), cols.end());

  SelectionResult sub = cosntf_select(subtensor(t, rows, cols), r1, r2, opts.cosntf);
  std::vector<Index> I, J;
  for (Index i : sub.I) I.push_back(rows[static_cast<std::size_t>(i)]);
  for (Index j : sub.J) J.push_back(cols[static_cast<std::size_t>(j)]);
  sub.I = IndexList(Mode::horizontal, std::move(I));
  sub.J = IndexList(Mode::lateral, std::move(J));
  return sub;
}

}  // namespace cosntf
