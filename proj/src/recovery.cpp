#include "cosntf/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace cosntf {

namespace {

void check_nonnegative(const Tensor3& t, const char* who) {
  for (double v : t.data()) {
    if (v < 0.0) throw InvalidArgument(std::string(who) + ": tensor must be nonnegative");
  }
}

// Gram quantities of the structured system unfold(A) = bcirc(Q) unfold(X):
// bcirc(Q)^T bcirc(Q) = bcirc(Q^T * Q) and bcirc(Q)^T unfold(A) = unfold(Q^T * A).
struct Normal {
  Matrix G;
  Matrix H;
};

Normal structured_normal(const Tensor3& Q, const Tensor3& A) {
  const Tensor3 Qt = ttranspose(Q);
  return {bcirc(tprod(Qt, Q)), unfold(tprod(Qt, A))};
}

NnlsResult solve_step(const Normal& sys, Matrix X0, double f0, const NnlsOptions& opts) {
  if (opts.solver == NnlsSolver::hals) return nnls_cd_normal(sys.G, sys.H, std::move(X0), f0, opts);
  return nnls_active_set(sys.G, sys.H, X0);
}

double half_residual(const Tensor3& t, const Tensor3& P1, const Tensor3& core, const Tensor3& P2) {
  const double r = fnorm(t - tprod(tprod(P1, core), P2));
  return 0.5 * r * r;
}

// Solves G_PP z_P = h_P for the passive set P (z zero elsewhere).
// Factorizations are cached per passive set: neighbouring columns of one
// NNLS problem tend to end on the same support.
class PassiveSolver {
 public:
  explicit PassiveSolver(const Matrix& G) : G_(G) {}

  Eigen::VectorXd solve(const Eigen::VectorXd& h, const std::vector<Index>& P) {
    const auto k = static_cast<Index>(P.size());
    Eigen::VectorXd hp(k);
    for (Index a = 0; a < k; ++a) hp(a) = h(P[static_cast<std::size_t>(a)]);
    const Factor& f = factor(P);
    const Eigen::VectorXd zp = f.ok ? Eigen::VectorXd(f.llt.solve(hp)) : Eigen::VectorXd(f.cod.solve(hp));
    Eigen::VectorXd z = Eigen::VectorXd::Zero(G_.rows());
    for (Index a = 0; a < k; ++a) z(P[static_cast<std::size_t>(a)]) = zp(a);
    return z;
  }

 private:
  struct Factor {
    bool ok = false;
    Eigen::LLT<Matrix> llt;
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
  };

  const Factor& factor(const std::vector<Index>& P) {
    auto it = cache_.find(P);
    if (it != cache_.end()) return it->second;
    if (cache_.size() > 256) cache_.clear();
    const auto k = static_cast<Index>(P.size());
    Matrix Gp(k, k);
    for (Index a = 0; a < k; ++a)
      for (Index b = 0; b < k; ++b) Gp(a, b) = G_(P[static_cast<std::size_t>(a)], P[static_cast<std::size_t>(b)]);
    Factor f;
    f.llt.compute(Gp);
    f.ok = f.llt.info() == Eigen::Success;
    if (!f.ok) f.cod.compute(Gp);
    return cache_.emplace(P, std::move(f)).first->second;
  }

  const Matrix& G_;
  std::map<std::vector<Index>, Factor> cache_;
};

// Lawson-Hanson for one column: min_{x >= 0} 1/2 x^T G x - h^T x.
int lawson_hanson(const Matrix& G, PassiveSolver& solver, const Eigen::VectorXd& h,
                  Eigen::VectorXd& x) {
  const Index r = G.rows();
  std::vector<bool> passive(static_cast<std::size_t>(r), false);
  for (Index i = 0; i < r; ++i) passive[static_cast<std::size_t>(i)] = x(i) > 0.0;
  const double scale = std::max(h.cwiseAbs().maxCoeff(), G.diagonal().maxCoeff());
  const double tol = 1e-13 * std::max(scale, 1e-300);

  // Moves x towards the passive-set solution until it is strictly feasible.
  auto settle = [&]() {
    for (Index guard = 0; guard <= r; ++guard) {
      std::vector<Index> P;
      for (Index i = 0; i < r; ++i) {
        if (passive[static_cast<std::size_t>(i)]) P.push_back(i);
      }
      if (P.empty()) {
        x.setZero();
        return;
      }
      const Eigen::VectorXd z = solver.solve(h, P);
      double alpha = 1.0;
      Index blocking = -1;
      for (Index i : P) {
        if (z(i) > 0.0) continue;
        const double a = x(i) / (x(i) - z(i));
        if (a < alpha) {
          alpha = a;
          blocking = i;
        }
      }
      if (blocking < 0) {
        x = z;
        return;
      }
      x += alpha * (z - x);
      x(blocking) = 0.0;
      for (Index i : P) {
        if (x(i) <= 0.0) {
          x(i) = 0.0;
          passive[static_cast<std::size_t>(i)] = false;
        }
      }
    }
  };

  settle();
  int iter = 0;
  const int max_iter = 3 * static_cast<int>(r) + 10;
  while (iter < max_iter) {
    const Eigen::VectorXd w = h - G * x;
    Index best = -1;
    for (Index i = 0; i < r; ++i) {
      if (passive[static_cast<std::size_t>(i)]) continue;
      if (w(i) > tol && (best < 0 || w(i) > w(best))) best = i;
    }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;
    ++iter;
    const Eigen::VectorXd before = x;
    settle();
    // Numerical deadlock: the entering variable dropped straight out again.
    if ((x - before).cwiseAbs().maxCoeff() == 0.0) break;
  }
  return iter;
}

}  // namespace

NnlsResult nnls_active_set(const Matrix& G, const Matrix& H, const Matrix& X0, double half_b_sq) {
  const Index r = G.rows();
  if (G.cols() != r || H.rows() != r) throw DimensionError("nnls_active_set: shape mismatch");
  const bool warm = X0.size() > 0;
  if (warm && (X0.rows() != r || X0.cols() != H.cols())) {
    throw DimensionError("nnls_active_set: X0 shape mismatch");
  }
  if (warm && (X0.array() < 0.0).any()) throw InvalidArgument("nnls_active_set: X0 must be nonnegative");

  NnlsResult out;
  out.X = warm ? X0 : Matrix::Zero(r, H.cols());
  PassiveSolver solver(G);
  for (Index c = 0; c < H.cols(); ++c) {
    Eigen::VectorXd x = out.X.col(c);
    out.sweeps = std::max(out.sweeps, lawson_hanson(G, solver, H.col(c), x));
    out.X.col(c) = x.cwiseMax(0.0);
  }
  out.objective = half_b_sq - H.cwiseProduct(out.X).sum() + 0.5 * out.X.cwiseProduct(G * out.X).sum();
  return out;
}

NnlsResult nnls_cd_normal(const Matrix& G, const Matrix& H, Matrix X0, double f0,
                          const NnlsOptions& opts) {
  const Index r = G.rows();
  if (G.cols() != r || H.rows() != r || X0.rows() != r || X0.cols() != H.cols()) {
    throw DimensionError("nnls_cd: shape mismatch");
  }
  if ((X0.array() < 0.0).any()) throw InvalidArgument("nnls_cd: X0 must be nonnegative");

  NnlsResult out;
  out.X = std::move(X0);
  out.objective = f0;
  Eigen::RowVectorXd g(out.X.cols()), next(out.X.cols());
  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    // Exact decrease of the sweep, accumulated row by row; avoids the
    // cancellation in ||B||^2 - 2<H, X> + <X, G X> near a zero residual.
    double decrease = 0.0;
    for (Index k = 0; k < r; ++k) {
      const double gkk = G(k, k);
      if (gkk <= opts.diag_floor) continue;
      g.noalias() = H.row(k) - G.col(k).transpose() * out.X;
      next = (out.X.row(k) + g / gkk).cwiseMax(0.0);
      const Eigen::RowVectorXd d = next - out.X.row(k);
      decrease += g.dot(d) - 0.5 * gkk * d.squaredNorm();
      out.X.row(k) = next;
    }
    out.sweeps = sweep + 1;
    const double before = out.objective;
    out.objective = std::max(0.0, before - decrease);
    if (decrease <= opts.rel_tol * before) break;
  }
  return out;
}

NnlsResult nnls_cd(const Matrix& B, const Matrix& Q, const Matrix& X0, const NnlsOptions& opts) {
  if (Q.rows() != B.rows() || X0.rows() != Q.cols() || X0.cols() != B.cols()) {
    throw DimensionError("nnls_cd: shape mismatch");
  }
  const double f0 = 0.5 * (B - Q * X0).squaredNorm();
  return nnls_cd_normal(Q.transpose() * Q, Q.transpose() * B, X0, f0, opts);
}

CosepModel make_model(Tensor3 P1, Tensor3 core, Tensor3 P2, IndexList I, IndexList J) {
  if (P1.n() != core.m() || core.n() != P2.m() || P1.p() != core.p() || core.p() != P2.p()) {
    throw DimensionError("make_model: factors are not conformable");
  }
  CosepModel mdl;
  mdl.P1 = std::move(P1);
  mdl.core = std::move(core);
  mdl.P2 = std::move(P2);
  mdl.I = std::move(I);
  mdl.J = std::move(J);
  return mdl;
}

CosepModel recover_factors(const Tensor3& t, const IndexList& I, const IndexList& J,
                           const RecoverOptions& opts) {
  check_nonnegative(t, "recover_factors");
  if (I.empty() || J.empty()) throw InvalidArgument("recover_factors: empty index set");
  I.check_range(t.m());
  J.check_range(t.n());
  if (opts.maxiter < 0 || opts.delta < 0.0) throw InvalidArgument("recover_factors: bad delta/maxiter");

  const Index p = t.p();
  const Tensor3 tt = ttranspose(t);
  const Matrix A = unfold(t);
  const double half_sq = 0.5 * A.squaredNorm();

  CosepModel mdl;
  mdl.I = I;
  mdl.J = J;
  mdl.core = subtensor(t, I, J);
  const Index r1 = I.size(), r2 = J.size();

  // A ~= A(I,:,:)-based P1 and A(:,J,:)-based P2, each from zero. The P1
  // problem runs on the transpose: A^T = A(I,:,:)^T * P1^T.
  {
    const Normal n1 = structured_normal(ttranspose(rows_of(t, I)), tt);
    const NnlsResult x1 = solve_step(n1, Matrix::Zero(r1 * p, t.m()), half_sq, opts.nnls);
    mdl.P1 = ttranspose(fold(x1.X, p));
    const Normal n2 = structured_normal(cols_of(t, J), t);
    const NnlsResult x2 = solve_step(n2, Matrix::Zero(r2 * p, t.n()), half_sq, opts.nnls);
    mdl.P2 = fold(x2.X, p);
  }
  double f = half_residual(t, mdl.P1, mdl.core, mdl.P2);
  mdl.objective_history.push_back(2.0 * f);

  for (int it = 1; it <= opts.maxiter; ++it) {
    const Tensor3 P1_old = mdl.P1, P2_old = mdl.P2;

    const Normal n2 = structured_normal(tprod(mdl.P1, mdl.core), t);
    const NnlsResult x2 = solve_step(n2, unfold(mdl.P2), f, opts.nnls);
    mdl.P2 = fold(x2.X, p);

    const Normal n1 = structured_normal(ttranspose(tprod(mdl.core, mdl.P2)), tt);
    const NnlsResult x1 =
        solve_step(n1, unfold(ttranspose(mdl.P1)), half_residual(t, mdl.P1, mdl.core, mdl.P2), opts.nnls);
    mdl.P1 = ttranspose(fold(x1.X, p));

    f = half_residual(t, mdl.P1, mdl.core, mdl.P2);
    mdl.objective_history.push_back(2.0 * f);
    mdl.iterations = it;
    if (fnorm(P1_old - mdl.P1) + fnorm(P2_old - mdl.P2) <= opts.delta) {
      mdl.converged = true;
      break;
    }
  }
  return mdl;
}

Tensor3 reconstruct(const CosepModel& mdl) { return tprod(tprod(mdl.P1, mdl.core), mdl.P2); }

double rel_error(const Tensor3& a, const Tensor3& b) {
  if (!a.same_shape(b)) throw DimensionError("rel_error: shape mismatch");
  const double na = fnorm(a);
  if (na == 0.0) throw InvalidArgument("rel_error: reference tensor is zero");
  return fnorm(a - b) / na;
}

double rel_approx(const Tensor3& a, const Tensor3& b) { return 1.0 - rel_error(a, b); }

}  // namespace cosntf
