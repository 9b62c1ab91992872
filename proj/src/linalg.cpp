#include "cosntf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace cosntf {

namespace {

using Complex = std::complex<double>;

// Hestenes one-sided Jacobi for rows >= cols. Orthogonalises the columns of
// B = A V by plane rotations applied from the right.
ComplexSvd jacobi_tall(const CMatrix& A, const JacobiOptions& opts) {
  const Index m = A.rows();
  const Index n = A.cols();
  CMatrix B = A;
  CMatrix V = CMatrix::Identity(n, n);

  bool converged = n < 2;
  double worst = 0.0;
  int sweep = 0;
  Eigen::VectorXd sq(n);
  for (Index j = 0; j < n; ++j) sq(j) = B.col(j).squaredNorm();
  // Columns this small are rounding residue of a rank-deficient input;
  // rotating them against each other only churns. They are left alone and
  // their U columns come from the unitary completion below.
  const double tiny = std::numeric_limits<double>::epsilon() * static_cast<double>(n);
  const double negligible = tiny * tiny * sq.sum();
  while (!converged && sweep < opts.max_sweeps) {
    ++sweep;
    worst = 0.0;
    bool rotated = false;
    for (Index i = 0; i + 1 < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        const double a = sq(i);
        const double b = sq(j);
        if (a <= negligible || b <= negligible) continue;
        const Complex g = B.col(i).dot(B.col(j));
        const double ag = std::abs(g);
        const double coupling = ag / std::sqrt(a * b);
        worst = std::max(worst, coupling);
        if (coupling <= opts.tol) continue;
        rotated = true;

        const double zeta = (b - a) / (2.0 * ag);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const Complex e = g / ag;

        // [b_i, b_j] <- [b_i, b_j] [[c, s e], [-s conj(e), c]]
        const Complex lo = -s * std::conj(e), hi = s * e;
        const Eigen::VectorXcd bi = B.col(i);
        B.col(i) = c * bi + lo * B.col(j);
        B.col(j) = hi * bi + c * B.col(j);
        const Eigen::VectorXcd vi = V.col(i);
        V.col(i) = c * vi + lo * V.col(j);
        V.col(j) = hi * vi + c * V.col(j);
        sq(i) = B.col(i).squaredNorm();
        sq(j) = B.col(j).squaredNorm();
      }
    }
    converged = !rotated;
  }
  if (!converged) {
    throw ConvergenceError("complex_svd: no convergence after " + std::to_string(opts.max_sweeps) +
                               " sweeps (coupling " + std::to_string(worst) + ")",
                           worst);
  }

  Eigen::VectorXd norms(n);
  for (Index j = 0; j < n; ++j) norms(j) = B.col(j).norm();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index x, Index y) { return norms(x) > norms(y); });

  ComplexSvd out;
  out.sweeps = sweep;
  out.sigma.resize(n);
  out.V.resize(n, n);
  out.U = CMatrix::Zero(m, m);
  std::vector<bool> filled(static_cast<std::size_t>(m), false);
  for (Index pos = 0; pos < n; ++pos) {
    const Index src = order[static_cast<std::size_t>(pos)];
    out.sigma(pos) = norms(src);
    out.V.col(pos) = V.col(src);
    if (norms(src) * norms(src) > negligible) {
      out.U.col(pos) = B.col(src) / norms(src);
      filled[static_cast<std::size_t>(pos)] = true;
    }
  }

  // Complete U to a unitary basis with the trailing columns of a full QR of
  // the columns already set.
  std::vector<Index> done, missing;
  for (Index c = 0; c < m; ++c) (filled[static_cast<std::size_t>(c)] ? done : missing).push_back(c);
  if (!missing.empty()) {
    CMatrix basis(m, static_cast<Index>(done.size()));
    for (std::size_t c = 0; c < done.size(); ++c) basis.col(static_cast<Index>(c)) = out.U.col(done[c]);
    const CMatrix Q = done.empty() ? CMatrix(CMatrix::Identity(m, m))
                                   : CMatrix(basis.householderQr().householderQ());
    for (std::size_t c = 0; c < missing.size(); ++c) {
      out.U.col(missing[c]) = Q.col(static_cast<Index>(done.size() + c));
    }
  }
  return out;
}

bool self_conjugate(Index k, Index p) { return k == 0 || 2 * k == p; }

}  // namespace

ComplexSvd complex_svd(const CMatrix& M, const JacobiOptions& opts) {
  if (!M.allFinite()) throw InvalidArgument("complex_svd: non-finite input");
  if (M.rows() >= M.cols()) return jacobi_tall(M, opts);
  ComplexSvd h = jacobi_tall(M.adjoint(), opts);
  ComplexSvd out;
  out.U = std::move(h.V);
  out.V = std::move(h.U);
  out.sigma = std::move(h.sigma);
  out.sweeps = h.sweeps;
  return out;
}

Eigen::VectorXd singular_values(const CMatrix& M) { return complex_svd(M).sigma; }

TsvdFactors tsvd(const Tensor3& t) {
  const Index m = t.m(), n = t.n(), p = t.p();
  const SpectralTensor spec = dft3(t);
  std::vector<CMatrix> w(static_cast<std::size_t>(p)), s(static_cast<std::size_t>(p)),
      v(static_cast<std::size_t>(p));
  for (Index k = 0; k <= p / 2; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    ComplexSvd svd = complex_svd(spec.slice(k));
    s[kk] = CMatrix::Zero(m, n);
    for (Index i = 0; i < svd.sigma.size(); ++i) s[kk](i, i) = svd.sigma(i);
    w[kk] = std::move(svd.U);
    v[kk] = std::move(svd.V);
    if (!self_conjugate(k, p)) {
      const auto mirror = static_cast<std::size_t>(p - k);
      w[mirror] = w[kk].conjugate();
      s[mirror] = s[kk];
      v[mirror] = v[kk].conjugate();
    }
  }
  TsvdFactors out;
  out.W = idft3(SpectralTensor(m, m, std::move(w)));
  out.Sigma = idft3(SpectralTensor(m, n, std::move(s)));
  out.V = idft3(SpectralTensor(n, n, std::move(v)));
  return out;
}

Tensor3 tpinv(const Tensor3& t, double rank_tol) {
  const Index m = t.m(), n = t.n(), p = t.p();
  const SpectralTensor spec = dft3(t);
  std::vector<ComplexSvd> svds(static_cast<std::size_t>(p / 2 + 1));
  double sigma_max = 0.0;
  for (Index k = 0; k <= p / 2; ++k) {
    svds[static_cast<std::size_t>(k)] = complex_svd(spec.slice(k));
    const auto& sig = svds[static_cast<std::size_t>(k)].sigma;
    if (sig.size() > 0) sigma_max = std::max(sigma_max, sig(0));
  }
  const double cutoff = rank_tol * sigma_max;
  std::vector<CMatrix> inv(static_cast<std::size_t>(p));
  for (Index k = 0; k <= p / 2; ++k) {
    const ComplexSvd& svd = svds[static_cast<std::size_t>(k)];
    CMatrix acc = CMatrix::Zero(n, m);
    for (Index i = 0; i < svd.sigma.size(); ++i) {
      if (svd.sigma(i) <= cutoff) break;
      acc += (svd.V.col(i) / svd.sigma(i)) * svd.U.col(i).adjoint();
    }
    if (!self_conjugate(k, p)) inv[static_cast<std::size_t>(p - k)] = acc.conjugate();
    inv[static_cast<std::size_t>(k)] = std::move(acc);
  }
  return idft3(SpectralTensor(n, m, std::move(inv)));
}

Tensor3 tinv(const Tensor3& t, double rank_tol) {
  if (t.m() != t.n()) throw DimensionError("tinv: tensor is not square");
  const Index n = t.n(), p = t.p();
  const SpectralTensor spec = dft3(t);
  std::vector<ComplexSvd> svds(static_cast<std::size_t>(p / 2 + 1));
  double sigma_max = 0.0;
  for (Index k = 0; k <= p / 2; ++k) {
    svds[static_cast<std::size_t>(k)] = complex_svd(spec.slice(k));
    sigma_max = std::max(sigma_max, svds[static_cast<std::size_t>(k)].sigma(0));
  }
  for (Index k = 0; k <= p / 2; ++k) {
    const double smin = svds[static_cast<std::size_t>(k)].sigma(n - 1);
    if (!(smin > rank_tol * sigma_max)) {
      throw SingularError("tinv: Fourier slice " + std::to_string(k + 1) + " is singular", k);
    }
  }
  std::vector<CMatrix> inv(static_cast<std::size_t>(p));
  for (Index k = 0; k <= p / 2; ++k) {
    const ComplexSvd& svd = svds[static_cast<std::size_t>(k)];
    CMatrix acc = svd.V * svd.sigma.cwiseInverse().asDiagonal() * svd.U.adjoint();
    if (!self_conjugate(k, p)) inv[static_cast<std::size_t>(p - k)] = acc.conjugate();
    inv[static_cast<std::size_t>(k)] = std::move(acc);
  }
  return idft3(SpectralTensor(n, n, std::move(inv)));
}

RankReport ranks(const Tensor3& t, double rank_tol) {
  const Index p = t.p();
  const Index q = std::min(t.m(), t.n());
  const SpectralTensor spec = dft3(t);
  std::vector<Eigen::VectorXd> sv(static_cast<std::size_t>(p));
  double sigma_max = 0.0;
  for (Index k = 0; k <= p / 2; ++k) {
    sv[static_cast<std::size_t>(k)] = singular_values(spec.slice(k));
    sigma_max = std::max(sigma_max, sv[static_cast<std::size_t>(k)](0));
    if (!self_conjugate(k, p)) sv[static_cast<std::size_t>(p - k)] = sv[static_cast<std::size_t>(k)];
  }

  RankReport out;
  out.rank_tol = rank_tol;
  out.multirank.assign(static_cast<std::size_t>(p), 0);
  if (sigma_max == 0.0) return out;

  const double cutoff = rank_tol * sigma_max;
  for (Index k = 0; k < p; ++k) {
    const auto& s = sv[static_cast<std::size_t>(k)];
    out.multirank[static_cast<std::size_t>(k)] = (s.array() > cutoff).count();
  }
  for (Index i = 0; i < q; ++i) {
    double tube_sq = 0.0;
    for (Index k = 0; k < p; ++k) tube_sq += sv[static_cast<std::size_t>(k)](i) * sv[static_cast<std::size_t>(k)](i);
    // ||Sigma_ii:||_F in the original domain.
    if (std::sqrt(tube_sq / static_cast<double>(p)) > cutoff) ++out.tubalrank;
  }
  const double f = fnorm(t);
  out.stable_rank = f * f / (sigma_max * sigma_max);
  return out;
}

}  // namespace cosntf
