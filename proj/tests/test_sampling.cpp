#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <Eigen/SVD>

#include <cosntf/linalg.hpp>
#include <cosntf/sampling.hpp>

#include "test_util.hpp"

using namespace cosntf;
using testutil::low_tubal_rank;
using testutil::random_tensor;

namespace {

// Textbook DEIM on the columns of U (Sorensen & Chaturantabut style).
std::vector<Index> matrix_deim(const Matrix& U) {
  std::vector<Index> p;
  Eigen::Index best;
  U.col(0).cwiseAbs().maxCoeff(&best);
  p.push_back(best);
  for (Index j = 1; j < U.cols(); ++j) {
    Matrix Up(j, j);
    Eigen::VectorXd up(j);
    for (Index a = 0; a < j; ++a) {
      up(a) = U(p[static_cast<std::size_t>(a)], j);
      for (Index b = 0; b < j; ++b) Up(a, b) = U(p[static_cast<std::size_t>(a)], b);
    }
    const Eigen::VectorXd c = Up.partialPivLu().solve(up);
    const Eigen::VectorXd r = U.col(j) - U.leftCols(j) * c;
    r.cwiseAbs().maxCoeff(&best);
    p.push_back(best);
  }
  return p;
}

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST(Distribution, UniformAndSliceSize) {
  std::mt19937_64 rng(31);
  Tensor3 a = random_tensor(5, 4, 3, rng);
  for (Index j = 0; j < 4; ++j)
    for (Index k = 0; k < 3; ++k) a(2, j, k) = 0.0;
  const SamplingDistribution u = build_distribution(a, Mode::horizontal, Distribution::uniform);
  for (double w : u.weights) EXPECT_DOUBLE_EQ(w, 0.2);

  const SamplingDistribution s = build_distribution(a, Mode::horizontal, Distribution::slice_size);
  EXPECT_NEAR(sum(s.weights), 1.0, 1e-14);
  EXPECT_EQ(s.weights[2], 0.0);
  const double total = fnorm(a) * fnorm(a);
  const double row0 = fnorm(rows_of(a, std::vector<Index>{0}));
  EXPECT_NEAR(s.weights[0], row0 * row0 / total, 1e-14);

  const SamplingDistribution c = build_distribution(a, Mode::lateral, Distribution::slice_size);
  ASSERT_EQ(c.weights.size(), 4u);
  EXPECT_NEAR(sum(c.weights), 1.0, 1e-14);
}

TEST(Distribution, LeverageMatchesMatrixCaseAndSumsToOne) {
  const Matrix M = (Matrix(5, 3) << 1, 2, 0, 0, 1, 1, 3, 0, 1, 1, 1, 1, 0, 0, 2).finished();
  Tensor3 a(5, 3, 1);
  for (Index i = 0; i < 5; ++i)
    for (Index j = 0; j < 3; ++j) a(i, j, 0) = M(i, j);
  const SamplingDistribution lev = build_distribution(a, Mode::horizontal, Distribution::leverage, 2);
  const Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU);
  for (Index i = 0; i < 5; ++i) {
    EXPECT_NEAR(lev.weights[static_cast<std::size_t>(i)], svd.matrixU().row(i).head(2).squaredNorm() / 2.0, 1e-12);
  }

  std::mt19937_64 rng(32);
  const Tensor3 b = random_tensor(6, 5, 4, rng);
  const SamplingDistribution lc = build_distribution(b, Mode::lateral, Distribution::leverage, 3);
  EXPECT_NEAR(sum(lc.weights), 1.0, 1e-12);
  EXPECT_THROW(build_distribution(b, Mode::lateral, Distribution::leverage), InvalidArgument);
  EXPECT_THROW(build_distribution(b, Mode::lateral, Distribution::leverage, 6), InvalidArgument);
}

TEST(Oversampling, CeilRLogClamped) {
  EXPECT_EQ(oversample_count(3, 100), 14);
  EXPECT_EQ(oversample_count(10, 100), 47);
  EXPECT_EQ(oversample_count(1, 2), 1);
  EXPECT_EQ(oversample_count(10, 12), 12);
  EXPECT_EQ(oversample_count(5, 5), 5);
}

TEST(SampleDistinct, DeterministicDistinctAndSupportShortcut) {
  std::vector<double> w(50, 1.0);
  std::mt19937_64 r1(7), r2(7);
  const auto a = sample_distinct(w, 20, 5, r1);
  const auto b = sample_distinct(w, 20, 5, r2);
  EXPECT_EQ(a, b);
  EXPECT_EQ(std::set<Index>(a.begin(), a.end()).size(), a.size());
  EXPECT_LE(a.size(), 20u);

  std::vector<double> sparse = {0.0, 1.0, 0.0, 2.0, 1.0};
  std::mt19937_64 r3(1);
  EXPECT_EQ(sample_distinct(sparse, 3, 1, r3), (std::vector<Index>{1, 3, 4}));

  std::vector<double> single = {0.0, 1.0, 0.0, 0.0};
  std::mt19937_64 r4(1);
  EXPECT_THROW(sample_distinct(single, 1, 2, r4), SamplingError);
}

TEST(Tcur, ExactOnLowTubalRank) {
  std::mt19937_64 rng(33);
  const Tensor3 a = low_tubal_rank(30, 25, 4, 3, rng);
  const auto rows = build_distribution(a, Mode::horizontal, Distribution::uniform);
  const auto cols = build_distribution(a, Mode::lateral, Distribution::slice_size);
  const TcurResult cur = tcur(a, oversample_count(3, 30), oversample_count(3, 25), rows, cols, 5);
  ASSERT_EQ(ranks(cur.U).multirank, ranks(a).multirank);
  EXPECT_LE(fnorm(a - tcur_reconstruct(cur)), 1e-8 * fnorm(a));
  EXPECT_EQ(cur.C, cols_of(a, cur.J));
  EXPECT_EQ(cur.R, rows_of(a, cur.I));
}

TEST(Tcur, PEqualsOneIsMatrixCur) {
  std::mt19937_64 rng(34);
  const Tensor3 a = low_tubal_rank(12, 10, 1, 2, rng);
  const std::vector<Index> I = {0, 3, 7}, J = {1, 4, 8};
  TcurResult cur;
  cur.I = IndexList(Mode::horizontal, I);
  cur.J = IndexList(Mode::lateral, J);
  cur.C = cols_of(a, J);
  cur.R = rows_of(a, I);
  cur.U = subtensor(a, I, J);
  const Matrix A = a.slice(0), C = cur.C.slice(0), U = cur.U.slice(0), R = cur.R.slice(0);
  const Matrix ref = C * U.completeOrthogonalDecomposition().pseudoInverse() * R;
  EXPECT_LE((Matrix(tcur_reconstruct(cur).slice(0)) - ref).norm(), 1e-10 * A.norm());
  EXPECT_LE((ref - A).norm(), 1e-10 * A.norm());
}

TEST(Tdeim, PEqualsOneMatchesMatrixDeim) {
  std::mt19937_64 rng(35);
  const Matrix G = Matrix::Random(9, 4);
  const Eigen::JacobiSVD<Matrix> svd(G, Eigen::ComputeThinU);
  const Matrix U = svd.matrixU();
  Tensor3 u(9, 4, 1);
  for (Index i = 0; i < 9; ++i)
    for (Index j = 0; j < 4; ++j) u(i, j, 0) = U(i, j);
  const DeimResult d = tdeim(u);
  EXPECT_EQ(d.indices.values(), matrix_deim(U));
  EXPECT_FALSE(d.used_pinv);
}

TEST(Tdeim, PicksAreDistinctAndRespectCount) {
  std::mt19937_64 rng(36);
  const TsvdFactors f = tsvd(random_tensor(10, 6, 3, rng));
  const DeimResult d = tdeim(cols_of(f.W, std::vector<Index>{0, 1, 2, 3}));
  ASSERT_EQ(d.indices.size(), 4);
  EXPECT_FALSE(d.indices.has_duplicates());
  EXPECT_EQ(tdeim(f.W, 2).indices.size(), 2);
  EXPECT_THROW(tdeim(Tensor3(3, 5, 2)), DimensionError);
}

TEST(Tdeim, IdentityBasisPicksDiagonal) {
  const DeimResult d = tdeim(cols_of(identity_tensor(5, 2), std::vector<Index>{2, 0, 4}));
  EXPECT_EQ(d.indices.values(), (std::vector<Index>{2, 0, 4}));
}

TEST(TcurDeimSelect, ReturnsValidSetsAndIsDeterministic) {
  std::mt19937_64 rng(37);
  const Tensor3 a = low_tubal_rank(40, 30, 5, 3, rng);
  for (Distribution d : {Distribution::uniform, Distribution::slice_size, Distribution::leverage}) {
    TcurDeimOptions o;
    o.distribution = d;
    const SelectionResult s = tcur_deim_select(a, 4, 3, 11, o);
    EXPECT_EQ(s.I.size(), 4);
    EXPECT_EQ(s.J.size(), 3);
    EXPECT_FALSE(s.I.has_duplicates());
    EXPECT_FALSE(s.J.has_duplicates());
    s.I.check_range(40);
    s.J.check_range(30);
    const SelectionResult again = tcur_deim_select(a, 4, 3, 11, o);
    EXPECT_EQ(s.I, again.I);
    EXPECT_EQ(s.J, again.J);
  }
  // The transposed pairing maps V positions into I and W positions into J,
  // so it only lines up when both sampled sets have the same size.
  const Tensor3 sq = low_tubal_rank(30, 30, 5, 3, rng);
  TcurDeimOptions sw;
  sw.swap_pairing = true;
  const SelectionResult s = tcur_deim_select(sq, 3, 3, 11, sw);
  EXPECT_EQ(s.I.size(), 3);
  EXPECT_EQ(s.J.size(), 3);
  EXPECT_THROW(tcur_deim_select(a, 0, 3, 1), InvalidArgument);
}
