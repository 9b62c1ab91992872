#include "cosntf/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <unordered_set>

#include "cosntf/linalg.hpp"

namespace cosntf {

namespace {

void require_positive(Index m, Index n, Index p) {
  if (m < 1 || n < 1 || p < 1) {
    throw DimensionError("tensor extents must be positive, got " + std::to_string(m) +
                         "x" + std::to_string(n) + "x" + std::to_string(p));
  }
}

void require_same_shape(const Tensor3& a, const Tensor3& b, const char* op) {
  if (!a.same_shape(b)) {
    throw DimensionError(std::string(op) + ": shape mismatch");
  }
}

// w[j] = exp(sign * 2*pi*i*j/p)
std::vector<std::complex<double>> twiddles(Index p, double sign) {
  std::vector<std::complex<double>> w(static_cast<std::size_t>(p));
  for (Index j = 0; j < p; ++j) {
    const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(j) /
                         static_cast<double>(p);
    double re = std::cos(angle), im = std::sin(angle);
    // Exact zeros at multiples of pi/2 keep self-conjugate slices real.
    if (std::abs(re) < 1e-15) re = 0.0;
    if (std::abs(im) < 1e-15) im = 0.0;
    w[static_cast<std::size_t>(j)] = {re, im};
  }
  return w;
}

void check_indices(std::span<const Index> idx, Index extent, const char* what) {
  for (Index v : idx) {
    if (v < 0 || v >= extent) {
      throw IndexError(std::string(what) + " index " + std::to_string(v + 1) +
                       " outside [1, " + std::to_string(extent) + "]");
    }
  }
}

}  // namespace

Tensor3::Tensor3(Index m, Index n, Index p)
    : m_(m), n_(n), p_(p) {
  require_positive(m, n, p);
  data_.assign(static_cast<std::size_t>(m * n * p), 0.0);
}

Tensor3::Tensor3(Index m, Index n, Index p, std::vector<double> data)
    : m_(m), n_(n), p_(p), data_(std::move(data)) {
  require_positive(m, n, p);
  if (data_.size() != static_cast<std::size_t>(m * n * p)) {
    throw DimensionError("tensor data length " + std::to_string(data_.size()) +
                         " does not match " + std::to_string(m * n * p));
  }
  for (double v : data_) {
    if (!std::isfinite(v)) throw InvalidArgument("tensor entries must be finite");
  }
}

Tensor3 Tensor3::from_slices(std::span<const Matrix> slices) {
  if (slices.empty()) throw DimensionError("from_slices: no slices");
  const Index m = slices[0].rows();
  const Index n = slices[0].cols();
  Tensor3 t(m, n, static_cast<Index>(slices.size()));
  for (Index k = 0; k < t.p(); ++k) {
    const Matrix& s = slices[static_cast<std::size_t>(k)];
    if (s.rows() != m || s.cols() != n) throw DimensionError("from_slices: ragged slices");
    if (!s.allFinite()) throw InvalidArgument("tensor entries must be finite");
    t.slice(k) = s;
  }
  return t;
}

Tensor3& Tensor3::operator+=(const Tensor3& other) {
  require_same_shape(*this, other, "operator+");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Tensor3& Tensor3::operator-=(const Tensor3& other) {
  require_same_shape(*this, other, "operator-");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Tensor3& Tensor3::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
Tensor3 operator*(double s, Tensor3 a) { return a *= s; }

// ---------------------------------------------------------------------------

IndexList IndexList::from_one_based(Mode mode, std::span<const Index> one_based) {
  std::vector<Index> v;
  v.reserve(one_based.size());
  for (Index i : one_based) {
    if (i < 1) throw IndexError("1-based index must be >= 1, got " + std::to_string(i));
    v.push_back(i - 1);
  }
  return IndexList(mode, std::move(v));
}

IndexList IndexList::all(Mode mode, Index extent) {
  std::vector<Index> v(static_cast<std::size_t>(extent));
  for (Index i = 0; i < extent; ++i) v[static_cast<std::size_t>(i)] = i;
  return IndexList(mode, std::move(v));
}

std::vector<Index> IndexList::one_based() const {
  std::vector<Index> v(indices_);
  for (Index& i : v) ++i;
  return v;
}

bool IndexList::has_duplicates() const {
  std::unordered_set<Index> seen;
  for (Index i : indices_) {
    if (!seen.insert(i).second) return true;
  }
  return false;
}

void IndexList::check_range(Index extent) const {
  check_indices(indices_, extent, mode_ == Mode::horizontal ? "horizontal" : "lateral");
}

// ---------------------------------------------------------------------------

SpectralTensor::SpectralTensor(Index m, Index n, std::vector<CMatrix> slices)
    : m_(m), n_(n), slices_(std::move(slices)) {
  for (const CMatrix& s : slices_) {
    if (s.rows() != m || s.cols() != n) throw DimensionError("SpectralTensor: ragged slices");
  }
}

double SpectralTensor::squared_norm() const {
  double s = 0.0;
  for (const CMatrix& k : slices_) s += k.squaredNorm();
  return s;
}

// ---------------------------------------------------------------------------

Matrix unfold(const Tensor3& t) {
  Matrix out(t.m() * t.p(), t.n());
  for (Index k = 0; k < t.p(); ++k) out.middleRows(k * t.m(), t.m()) = t.slice(k);
  return out;
}

Tensor3 fold(const Matrix& mat, Index p) {
  if (p < 1 || mat.rows() % p != 0) {
    throw DimensionError("fold: row count " + std::to_string(mat.rows()) +
                         " not divisible by p = " + std::to_string(p));
  }
  const Index m = mat.rows() / p;
  Tensor3 t(m, mat.cols(), p);
  for (Index k = 0; k < p; ++k) t.slice(k) = mat.middleRows(k * m, m);
  return t;
}

Matrix bcirc(const Tensor3& t) {
  const Index m = t.m(), n = t.n(), p = t.p();
  Matrix out(m * p, n * p);
  for (Index r = 0; r < p; ++r) {
    for (Index c = 0; c < p; ++c) {
      out.block(r * m, c * n, m, n) = t.slice(((r - c) % p + p) % p);
    }
  }
  return out;
}

SpectralTensor dft3(const Tensor3& t) {
  const Index p = t.p();
  const auto w = twiddles(p, -1.0);
  std::vector<CMatrix> slices(static_cast<std::size_t>(p));
  for (Index k = 0; k < p; ++k) {
    CMatrix acc = CMatrix::Zero(t.m(), t.n());
    for (Index s = 0; s < p; ++s) {
      acc += w[static_cast<std::size_t>((k * s) % p)] * t.slice(s).cast<std::complex<double>>();
    }
    slices[static_cast<std::size_t>(k)] = std::move(acc);
  }
  return SpectralTensor(t.m(), t.n(), std::move(slices));
}

Tensor3 idft3(const SpectralTensor& s) {
  const Index p = s.p();
  if (p < 1) throw DimensionError("idft3: empty spectrum");
  const auto w = twiddles(p, 1.0);
  Tensor3 t(s.m(), s.n(), p);
  double imag_sq = 0.0;
  for (Index k = 0; k < p; ++k) {
    CMatrix acc = CMatrix::Zero(s.m(), s.n());
    for (Index f = 0; f < p; ++f) acc += w[static_cast<std::size_t>((k * f) % p)] * s.slice(f);
    acc /= static_cast<double>(p);
    imag_sq += acc.imag().squaredNorm();
    t.slice(k) = acc.real();
  }
  if (std::sqrt(imag_sq) > kDftTol * (1.0 + fnorm(t))) {
    throw InvalidArgument("idft3: spectrum is not conjugate-symmetric (imaginary residue " +
                          std::to_string(std::sqrt(imag_sq)) + ")");
  }
  return t;
}

SpectralTensor spectral_product(const SpectralTensor& a, const SpectralTensor& b) {
  if (a.n() != b.m() || a.p() != b.p()) throw DimensionError("spectral_product: shape mismatch");
  std::vector<CMatrix> slices(static_cast<std::size_t>(a.p()));
  for (Index k = 0; k < a.p(); ++k) {
    slices[static_cast<std::size_t>(k)].noalias() = a.slice(k) * b.slice(k);
  }
  return SpectralTensor(a.m(), b.n(), std::move(slices));
}

Tensor3 tprod(const Tensor3& a, const Tensor3& b) {
  if (a.n() != b.m() || a.p() != b.p()) {
    throw DimensionError("tprod: cannot multiply " + std::to_string(a.m()) + "x" +
                         std::to_string(a.n()) + "x" + std::to_string(a.p()) + " by " +
                         std::to_string(b.m()) + "x" + std::to_string(b.n()) + "x" +
                         std::to_string(b.p()));
  }
  if (a.p() == 1) {
    Tensor3 c(a.m(), b.n(), 1);
    c.slice(0).noalias() = a.slice(0) * b.slice(0);
    return c;
  }
  return idft3(spectral_product(dft3(a), dft3(b)));
}

Tensor3 ttranspose(const Tensor3& t) {
  const Index p = t.p();
  Tensor3 out(t.n(), t.m(), p);
  out.slice(0) = t.slice(0).transpose();
  for (Index k = 1; k < p; ++k) out.slice(k) = t.slice(p - k).transpose();
  return out;
}

Tensor3 identity_tensor(Index n, Index p) {
  Tensor3 t(n, n, p);
  t.slice(0).setIdentity();
  return t;
}

Tensor3 fdiag_first_slice(const Eigen::VectorXd& d, Index p) {
  Tensor3 t(d.size(), d.size(), p);
  t.slice(0).diagonal() = d;
  return t;
}

Tensor3 permutation_tensor(std::span<const Index> perm, Index p) {
  const Index n = static_cast<Index>(perm.size());
  Tensor3 t(n, n, p);
  std::vector<bool> hit(perm.size(), false);
  for (Index i = 0; i < n; ++i) {
    const Index target = perm[static_cast<std::size_t>(i)];
    if (target < 0 || target >= n || hit[static_cast<std::size_t>(target)]) {
      throw InvalidArgument("permutation_tensor: not a permutation");
    }
    hit[static_cast<std::size_t>(target)] = true;
    t(target, i, 0) = 1.0;
  }
  return t;
}

double fnorm(const Tensor3& t) {
  double s = 0.0;
  for (double v : t.data()) s += v * v;
  return std::sqrt(s);
}

double specnorm(const Tensor3& t) {
  const SpectralTensor s = dft3(t);
  double best = 0.0;
  for (const CMatrix& k : s.slices()) {
    const auto sv = singular_values(k);
    if (sv.size() > 0) best = std::max(best, sv[0]);
  }
  return best;
}

double max_abs(const Tensor3& t) {
  double best = 0.0;
  for (double v : t.data()) best = std::max(best, std::abs(v));
  return best;
}

double max_abs_diff(const Tensor3& a, const Tensor3& b) {
  require_same_shape(a, b, "max_abs_diff");
  double best = 0.0;
  for (Index i = 0; i < a.size(); ++i) {
    best = std::max(best, std::abs(a.data()[static_cast<std::size_t>(i)] -
                                   b.data()[static_cast<std::size_t>(i)]));
  }
  return best;
}

Tensor3 subtensor(const Tensor3& t, std::span<const Index> rows, std::span<const Index> cols) {
  check_indices(rows, t.m(), "horizontal");
  check_indices(cols, t.n(), "lateral");
  if (rows.empty() || cols.empty()) throw DimensionError("subtensor: empty index list");
  Tensor3 out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()), t.p());
  for (Index k = 0; k < t.p(); ++k) {
    for (Index a = 0; a < out.m(); ++a) {
      for (Index b = 0; b < out.n(); ++b) {
        out(a, b, k) = t(rows[static_cast<std::size_t>(a)], cols[static_cast<std::size_t>(b)], k);
      }
    }
  }
  return out;
}

Tensor3 rows_of(const Tensor3& t, std::span<const Index> rows) {
  check_indices(rows, t.m(), "horizontal");
  if (rows.empty()) throw DimensionError("rows_of: empty index list");
  Tensor3 out(static_cast<Index>(rows.size()), t.n(), t.p());
  for (Index k = 0; k < t.p(); ++k) {
    for (Index a = 0; a < out.m(); ++a) {
      out.slice(k).row(a) = t.slice(k).row(rows[static_cast<std::size_t>(a)]);
    }
  }
  return out;
}

Tensor3 cols_of(const Tensor3& t, std::span<const Index> cols) {
  check_indices(cols, t.n(), "lateral");
  if (cols.empty()) throw DimensionError("cols_of: empty index list");
  Tensor3 out(t.m(), static_cast<Index>(cols.size()), t.p());
  for (Index k = 0; k < t.p(); ++k) {
    for (Index b = 0; b < out.n(); ++b) {
      out.slice(k).col(b) = t.slice(k).col(cols[static_cast<std::size_t>(b)]);
    }
  }
  return out;
}

Tensor3 concat_lateral(const Tensor3& a, const Tensor3& b) {
  if (a.m() != b.m() || a.p() != b.p()) throw DimensionError("concat_lateral: shape mismatch");
  Tensor3 out(a.m(), a.n() + b.n(), a.p());
  for (Index k = 0; k < a.p(); ++k) {
    out.slice(k).leftCols(a.n()) = a.slice(k);
    out.slice(k).rightCols(b.n()) = b.slice(k);
  }
  return out;
}

Tensor3 concat_horizontal(const Tensor3& a, const Tensor3& b) {
  if (a.n() != b.n() || a.p() != b.p()) throw DimensionError("concat_horizontal: shape mismatch");
  Tensor3 out(a.m() + b.m(), a.n(), a.p());
  for (Index k = 0; k < a.p(); ++k) {
    out.slice(k).topRows(a.m()) = a.slice(k);
    out.slice(k).bottomRows(b.m()) = b.slice(k);
  }
  return out;
}

}  // namespace cosntf
