#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include <cosntf/selection.hpp>
#include <cosntf/synthetic.hpp>

#include "test_util.hpp"

using namespace cosntf;

namespace {

// M = W [I_r, H] with the columns of H on the simplex, columns shuffled.
// Returns M and the positions of the r pure columns.
std::pair<Matrix, std::vector<Index>> separable_matrix(Index m, Index n, Index r,
                                                       std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix W(m, r);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < r; ++j) W(i, j) = u(rng);
  Matrix H = Matrix::Zero(r, n);
  H.leftCols(r).setIdentity();
  for (Index j = r; j < n; ++j) {
    for (Index k = 0; k < r; ++k) H(k, j) = u(rng);
    H.col(j) /= H.col(j).sum();
  }
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Matrix M(m, n);
  const Matrix WH = W * H;
  for (Index j = 0; j < n; ++j) M.col(perm[static_cast<std::size_t>(j)]) = WH.col(j);
  std::vector<Index> pure(perm.begin(), perm.begin() + r);
  std::sort(pure.begin(), pure.end());
  return {M, pure};
}

}  // namespace

TEST(ProjectOmega, FeasibleAndIdempotent) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-0.5, 1.5), w(0.1, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 3 + trial % 6;
    Matrix Y(n, n);
    Eigen::VectorXd wt(n);
    for (Index i = 0; i < n; ++i) {
      wt(i) = trial % 4 == 0 && i == 1 ? 0.0 : w(rng);
      for (Index j = 0; j < n; ++j) Y(i, j) = u(rng);
    }
    project_omega(Y, wt);
    EXPECT_EQ(omega_violation(Y, wt), 0.0);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        EXPECT_GE(Y(i, j), 0.0);
        EXPECT_LE(Y(i, j), 1.0);
        if (i != j) {
          EXPECT_LE(wt(i) * Y(i, j), wt(j) * Y(i, i));
        }
      }
    Matrix again = Y;
    project_omega(again, wt);
    EXPECT_EQ(again, Y);
  }
}

TEST(ProjectOmega, ZeroWeightRowsAndColumnsVanish) {
  Matrix Y = Matrix::Constant(3, 3, 0.5);
  project_omega(Y, Eigen::Vector3d(1.0, 0.0, 2.0));
  EXPECT_EQ(Y.row(1).norm(), 0.0);
  EXPECT_EQ(Y.col(1).norm(), 0.0);
  EXPECT_EQ(Y(0, 0), 0.5);
  // w_0 Y_02 <= w_2 Y_00 holds; w_2 Y_20 <= w_0 Y_22 caps Y_20 at 0.25.
  EXPECT_EQ(Y(0, 2), 0.5);
  EXPECT_EQ(Y(2, 0), 0.25);
}

TEST(FgmObjective, MatchesGramForm) {
  std::mt19937_64 rng(42);
  const Matrix M = testutil::random_tensor(6, 4, 1, rng, 0.0, 1.0).slice(0);
  Matrix Y = Matrix::Identity(4, 4);
  EXPECT_NEAR(fgm_objective(M, Y, 0.5), 2.0, 1e-14);
  Y.setZero();
  EXPECT_NEAR(fgm_objective(M, Y, 0.5), 0.5 * M.squaredNorm(), 1e-14);
}

TEST(Fgm, MonotoneCheckpointsAndFeasibleIterates) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 5; ++trial) {
    const auto [M, pure] = separable_matrix(15, 12, 3, rng);
    const FgmResult r = fgm_solve(M);
    ASSERT_GE(r.checkpoints.size(), 2u);
    for (std::size_t k = 1; k < r.checkpoints.size(); ++k) {
      EXPECT_LE(r.checkpoints[k], r.checkpoints[k - 1]);
    }
    EXPECT_EQ(r.max_violation, 0.0);
    EXPECT_EQ(omega_violation(r.Y, r.weights), 0.0);
    EXPECT_NEAR(r.objective, fgm_objective(M, r.Y, 0.25), 1e-9 * (1.0 + r.objective));
    EXPECT_LT(r.objective, r.checkpoints.front());
  }
}

TEST(Fgm, LipschitzIsLargestGramEigenvalue) {
  std::mt19937_64 rng(44);
  const auto [M, pure] = separable_matrix(10, 8, 2, rng);
  const FgmResult r = fgm_solve(M);
  const Eigen::SelfAdjointEigenSolver<Matrix> es(M.transpose() * M);
  EXPECT_NEAR(r.lipschitz, es.eigenvalues().maxCoeff(), 1e-6 * es.eigenvalues().maxCoeff());
}

TEST(Fgm, RejectsNegativeInput) {
  Matrix M = Matrix::Ones(3, 3);
  M(1, 1) = -1.0;
  EXPECT_THROW(fgm_solve(M), InvalidArgument);
}

TEST(SnmfSelect, FindsPureColumns) {
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 5; ++trial) {
    const auto [M, pure] = separable_matrix(20, 15, 4, rng);
    EXPECT_EQ(snmf_fgm_select(M, 4, Mode::lateral).values(), pure) << "trial " << trial;
  }
}

TEST(SnmfSelect, DuplicatedColumnKeepsLowestIndex) {
  // Columns 0 and 2 are identical extreme columns; ties go to the lower index.
  Matrix M(3, 4);
  M << 1, 0, 1, 0.5,
       0, 1, 0, 0.5,
       0, 0, 0, 0.0;
  const IndexList pick = snmf_fgm_select(M, 2, Mode::lateral);
  EXPECT_EQ(pick.size(), 2);
  EXPECT_TRUE(std::find(pick.begin(), pick.end(), 1) != pick.end());
  EXPECT_EQ(std::count_if(pick.begin(), pick.end(), [](Index j) { return j == 0 || j == 2; }), 1);
}

TEST(SnmfSelect, ZeroColumnsNeverChosen) {
  Matrix M = Matrix::Zero(3, 4);
  M(0, 1) = 1.0;
  M(1, 3) = 2.0;
  EXPECT_EQ(snmf_fgm_select(M, 2, Mode::lateral).values(), (std::vector<Index>{1, 3}));
  EXPECT_THROW(snmf_fgm_select(M, 3, Mode::lateral), InvalidArgument);
}

TEST(CosntfSelect, RecoversPlantedIndicesOnSmallSynthetic) {
  SynthSpec spec;
  spec.m = 30;
  spec.n = 25;
  spec.p = 4;
  spec.r1 = 4;
  spec.r2 = 3;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    spec.seed = seed;
    const SynthData d = gen_synthetic(spec);
    const SelectionResult s = cosntf_select(d.tensor, 4, 3);
    EXPECT_EQ(s.I, d.I) << "seed " << seed;
    EXPECT_EQ(s.J, d.J) << "seed " << seed;
    EXPECT_TRUE(s.converged);
    ASSERT_FALSE(s.history.empty());
    EXPECT_LE(s.history.back(), 1e-6);
  }
}

TEST(CosntfSelect, StepChangeIsZeroForSameSets) {
  std::mt19937_64 rng(46);
  const Tensor3 t = testutil::random_tensor(5, 4, 2, rng, 0.0, 1.0);
  const IndexList I(Mode::horizontal, {0, 2}), J(Mode::lateral, {1, 3});
  EXPECT_EQ(cosntf_step_change(t, I, J, I, J), 0.0);
  const IndexList I2(Mode::horizontal, {0, 3});
  const double expect = fnorm(rows_of(t, std::vector<Index>{2}) - rows_of(t, std::vector<Index>{3}));
  EXPECT_NEAR(cosntf_step_change(t, I, J, I2, J), expect, 1e-14);
}

TEST(CosntfSelect, ArgumentChecks) {
  Tensor3 t(4, 4, 2);
  for (double& v : t.data()) v = 1.0;
  EXPECT_THROW(cosntf_select(t, 0, 1), InvalidArgument);
  EXPECT_THROW(cosntf_select(t, 1, 5), InvalidArgument);
  t(0, 0, 0) = -1.0;
  EXPECT_THROW(cosntf_select(t, 1, 1), InvalidArgument);
}

TEST(HybridSelect, DeterministicAndWithinRange) {
  SynthSpec spec;
  spec.m = 40;
  spec.n = 30;
  spec.p = 3;
  spec.r1 = 3;
  spec.r2 = 2;
  spec.seed = 9;
  const SynthData d = gen_synthetic(spec);
  const SelectionResult a = hybrid_select(d.tensor, 3, 2, 5);
  const SelectionResult b = hybrid_select(d.tensor, 3, 2, 5);
  EXPECT_EQ(a.I, b.I);
  EXPECT_EQ(a.J, b.J);
  ASSERT_EQ(a.I.size(), 3);
  ASSERT_EQ(a.J.size(), 2);
  a.I.check_range(40);
  a.J.check_range(30);
  EXPECT_TRUE(std::is_sorted(a.I.begin(), a.I.end()));
}
