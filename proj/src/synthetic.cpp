#include "cosntf/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace cosntf {

namespace {

Tensor3 uniform_tensor(Index m, Index n, Index p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Tensor3 t(m, n, p);
  for (double& v : t.data()) v = u(rng);
  return t;
}

std::vector<Index> random_permutation(Index n, std::mt19937_64& rng) {
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

std::vector<Index> sorted_head(const std::vector<Index>& perm, Index r) {
  std::vector<Index> head(perm.begin(), perm.begin() + r);
  std::sort(head.begin(), head.end());
  return head;
}

// Pi1 * t * Pi2 with Pi1 = permutation_tensor(rows) and
// Pi2 = permutation_tensor(cols)^T, moved entry by entry so that no rounding
// from the Fourier route creeps in: (rows[i], cols[j], k) <- (i, j, k).
Tensor3 permute(const Tensor3& t, const std::vector<Index>& rows, const std::vector<Index>& cols) {
  Tensor3 out(t.m(), t.n(), t.p());
  for (Index k = 0; k < t.p(); ++k) {
    for (Index i = 0; i < t.m(); ++i) {
      for (Index j = 0; j < t.n(); ++j) {
        out(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)], k) = t(i, j, k);
      }
    }
  }
  return out;
}

}  // namespace

std::pair<Eigen::VectorXd, Eigen::VectorXd> sinkhorn(const Matrix& T, double row_target,
                                                     double col_target, int max_rounds,
                                                     double tol) {
  if ((T.array() <= 0.0).any()) throw InvalidArgument("sinkhorn: matrix must be positive");
  Eigen::VectorXd dr = Eigen::VectorXd::Ones(T.rows());
  Eigen::VectorXd dc = Eigen::VectorXd::Ones(T.cols());
  double dev = 0.0;
  for (int round = 0; round < max_rounds; ++round) {
    dr = row_target * (T * dc).cwiseInverse();
    dc = col_target * (T.transpose() * dr).cwiseInverse();
    // Columns are exact after the last half step; rows carry the error.
    const Eigen::VectorXd rows = dr.asDiagonal() * (T * dc);
    dev = (rows.array() - row_target).abs().maxCoeff();
    if (dev <= tol) return {dr, dc};
  }
  throw ConvergenceError("sinkhorn: row sums off by " + std::to_string(dev) + " after " +
                             std::to_string(max_rounds) + " rounds",
                         dev);
}

SynthData gen_synthetic(const SynthSpec& spec) {
  const Index m = spec.m, n = spec.n, p = spec.p, r1 = spec.r1, r2 = spec.r2;
  if (m < 1 || n < 1 || p < 1) throw InvalidArgument("gen_synthetic: extents must be >= 1");
  if (r1 < 1 || r1 > m || r2 < 1 || r2 > n) {
    throw InvalidArgument("gen_synthetic: need 1 <= r1 <= m and 1 <= r2 <= n");
  }
  if (!(spec.noise >= 0.0) || !std::isfinite(spec.noise)) {
    throw InvalidArgument("gen_synthetic: noise must be finite and >= 0");
  }
  if (!(spec.slice_sum > 0.0)) throw InvalidArgument("gen_synthetic: slice_sum must be > 0");

  std::mt19937_64 rng(spec.seed);
  const Tensor3 S = uniform_tensor(r1, r2, p, rng);
  const Tensor3 M = r1 < m ? uniform_tensor(m - r1, r1, p, rng) : Tensor3();
  const Tensor3 H = r2 < n ? uniform_tensor(r2, n - r2, p, rng) : Tensor3();
  const std::vector<Index> perm1 = random_permutation(m, rng);
  const std::vector<Index> perm2 = random_permutation(n, rng);

  Tensor3 block = S;
  if (r2 < n) block = concat_lateral(block, tprod(S, H));
  if (r1 < m) {
    const Tensor3 MS = tprod(M, S);
    block = concat_horizontal(block, r2 < n ? concat_lateral(MS, tprod(MS, H)) : MS);
  }

  // Slice sums only see the tube sums, and first-slice-only diagonal factors
  // scale every frontal slice alike.
  Matrix tube_sums = Matrix::Zero(m, n);
  for (Index k = 0; k < p; ++k) tube_sums += block.slice(k);
  const double col_target = spec.slice_sum * static_cast<double>(m) / static_cast<double>(n);
  const auto [dr, dc] = sinkhorn(tube_sums, spec.slice_sum, col_target);
  // D_r * block * D_c, applied entrywise.
  Tensor3 scaled = block;
  for (Index k = 0; k < p; ++k) scaled.slice(k) = dr.asDiagonal() * block.slice(k) * dc.asDiagonal();

  std::normal_distribution<double> gauss(0.0, 1.0);
  Tensor3 noise(m, n, p);
  for (double& v : noise.data()) v = gauss(rng);
  Tensor3 noisy = scaled;
  if (spec.noise > 0.0) {
    const double nn = fnorm(noise);
    if (nn > 0.0) noisy += (spec.noise * fnorm(scaled) / nn) * noise;
    for (double& v : noisy.data()) v = std::max(0.0, v);
  }

  SynthData out;
  out.tensor = permute(noisy, perm1, perm2);
  out.noiseless = permute(scaled, perm1, perm2);
  out.I = IndexList(Mode::horizontal, sorted_head(perm1, r1));
  out.J = IndexList(Mode::lateral, sorted_head(perm2, r2));
  return out;
}

}  // namespace cosntf
