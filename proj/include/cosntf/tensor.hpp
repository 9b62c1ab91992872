#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cosntf/error.hpp"

namespace cosntf {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Tolerance on the imaginary residue left by an inverse DFT of a
/// conjugate-symmetric spectrum, relative to (1 + ||result||_F).
inline constexpr double kDftTol = 1e-10;

/// Dense real m x n x p tensor.
///
/// Entries are stored slice-major (k outermost) and row-major inside each
/// frontal slice, i.e. entry (i, j, k) lives at k*m*n + i*n + j. That order is
/// also the on-disk order of .t3t files. Indices are 0-based in C++; the file
/// formats and the CLI are 1-based.
class Tensor3 {
 public:
  using Slice = Eigen::Map<RowMatrix>;
  using ConstSlice = Eigen::Map<const RowMatrix>;

  /// Empty 0 x 0 x 0 tensor, only useful as a placeholder.
  Tensor3() = default;
  /// Zero tensor. All extents must be >= 1.
  Tensor3(Index m, Index n, Index p);
  /// Takes ownership of `data` in storage order. Rejects wrong lengths and
  /// non-finite entries.
  Tensor3(Index m, Index n, Index p, std::vector<double> data);

  /// Builds a tensor from p frontal slices of identical shape.
  static Tensor3 from_slices(std::span<const Matrix> slices);

  Index m() const noexcept { return m_; }
  Index n() const noexcept { return n_; }
  Index p() const noexcept { return p_; }
  Index size() const noexcept { return m_ * n_ * p_; }
  bool empty() const noexcept { return data_.empty(); }

  double operator()(Index i, Index j, Index k) const { return data_[offset(i, j, k)]; }
  double& operator()(Index i, Index j, Index k) { return data_[offset(i, j, k)]; }

  ConstSlice slice(Index k) const {
    return ConstSlice(data_.data() + k * m_ * n_, m_, n_);
  }
  Slice slice(Index k) { return Slice(data_.data() + k * m_ * n_, m_, n_); }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  bool same_shape(const Tensor3& other) const noexcept {
    return m_ == other.m_ && n_ == other.n_ && p_ == other.p_;
  }
  bool operator==(const Tensor3& other) const = default;

  Tensor3& operator+=(const Tensor3& other);
  Tensor3& operator-=(const Tensor3& other);
  Tensor3& operator*=(double s);

 private:
  std::size_t offset(Index i, Index j, Index k) const noexcept {
    return static_cast<std::size_t>((k * m_ + i) * n_ + j);
  }

  Index m_ = 0;
  Index n_ = 0;
  Index p_ = 0;
  std::vector<double> data_;
};

Tensor3 operator+(Tensor3 a, const Tensor3& b);
Tensor3 operator-(Tensor3 a, const Tensor3& b);
Tensor3 operator*(double s, Tensor3 a);

/// Which mode an index list addresses.
enum class Mode { horizontal, lateral };

/// Ordered list of 0-based slice indices into one mode.
class IndexList {
 public:
  IndexList() = default;
  IndexList(Mode mode, std::vector<Index> indices)
      : mode_(mode), indices_(std::move(indices)) {}

  static IndexList from_one_based(Mode mode, std::span<const Index> one_based);
  /// 0, 1, ..., extent-1.
  static IndexList all(Mode mode, Index extent);

  Mode mode() const noexcept { return mode_; }
  Index size() const noexcept { return static_cast<Index>(indices_.size()); }
  bool empty() const noexcept { return indices_.empty(); }
  Index operator[](Index pos) const { return indices_[static_cast<std::size_t>(pos)]; }
  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }
  const std::vector<Index>& values() const noexcept { return indices_; }
  operator std::span<const Index>() const noexcept { return indices_; }

  std::vector<Index> one_based() const;
  bool has_duplicates() const;
  /// Throws IndexError when any index falls outside [0, extent).
  void check_range(Index extent) const;

  bool operator==(const IndexList& other) const = default;

 private:
  Mode mode_ = Mode::horizontal;
  std::vector<Index> indices_;
};

/// Frontal slices of a tensor after the DFT along the third mode.
class SpectralTensor {
 public:
  SpectralTensor() = default;
  SpectralTensor(Index m, Index n, std::vector<CMatrix> slices);

  Index m() const noexcept { return m_; }
  Index n() const noexcept { return n_; }
  Index p() const noexcept { return static_cast<Index>(slices_.size()); }
  const CMatrix& slice(Index k) const { return slices_[static_cast<std::size_t>(k)]; }
  CMatrix& slice(Index k) { return slices_[static_cast<std::size_t>(k)]; }
  const std::vector<CMatrix>& slices() const noexcept { return slices_; }

  /// sum_k ||A_k||_F^2.
  double squared_norm() const;

 private:
  Index m_ = 0;
  Index n_ = 0;
  std::vector<CMatrix> slices_;
};

/// Vertical stack of frontal slices: (m*p) x n.
Matrix unfold(const Tensor3& t);
/// Inverse of unfold. Throws DimensionError unless rows % p == 0.
Tensor3 fold(const Matrix& mat, Index p);
/// Block circulant matrix (m*p) x (n*p); block (r, c) is slice (r - c) mod p.
Matrix bcirc(const Tensor3& t);

/// Unnormalised DFT along mode 3 (forward unscaled, inverse scaled by 1/p).
SpectralTensor dft3(const Tensor3& t);
/// Inverse DFT. Throws InvalidArgument if the imaginary residue exceeds
/// kDftTol * (1 + ||result||_F), i.e. the spectrum did not come from a real
/// tensor.
Tensor3 idft3(const SpectralTensor& s);

/// t-product a * b, computed slice-wise in the Fourier domain.
Tensor3 tprod(const Tensor3& a, const Tensor3& b);
/// Slice-wise product of two spectra (no transform).
SpectralTensor spectral_product(const SpectralTensor& a, const SpectralTensor& b);

/// Tensor transpose: slice 0 transposed, slice k <- transpose of slice p-k.
Tensor3 ttranspose(const Tensor3& t);
Tensor3 identity_tensor(Index n, Index p);
/// First-slice-only f-diagonal tensor diag(d), all other slices zero.
Tensor3 fdiag_first_slice(const Eigen::VectorXd& d, Index p);
/// Permutation tensor whose first slice maps row i of X to row perm[i] in
/// P * X, i.e. (P_::1)(perm[i], i) = 1.
Tensor3 permutation_tensor(std::span<const Index> perm, Index p);

double fnorm(const Tensor3& t);
/// max_k sigma_max(A_k) over the Fourier slices.
double specnorm(const Tensor3& t);
double max_abs(const Tensor3& t);
double max_abs_diff(const Tensor3& a, const Tensor3& b);

/// A(rows, cols, :), taken in the listed order (duplicates reproduced).
Tensor3 subtensor(const Tensor3& t, std::span<const Index> rows, std::span<const Index> cols);
/// A(rows, :, :).
Tensor3 rows_of(const Tensor3& t, std::span<const Index> rows);
/// A(:, cols, :).
Tensor3 cols_of(const Tensor3& t, std::span<const Index> cols);

/// [a b] along mode 2.
Tensor3 concat_lateral(const Tensor3& a, const Tensor3& b);
/// [a; b] along mode 1.
Tensor3 concat_horizontal(const Tensor3& a, const Tensor3& b);

}  // namespace cosntf
