#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <cosntf/tensor.hpp>

namespace testutil {

using cosntf::Index;
using cosntf::Matrix;
using cosntf::Tensor3;

inline Tensor3 random_tensor(Index m, Index n, Index p, std::mt19937_64& rng, double lo = -1.0,
                             double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Tensor3 t(m, n, p);
  for (double& v : t.data()) v = u(rng);
  return t;
}

// Circular convolution along the tubes, straight from the definition.
inline Tensor3 naive_tprod(const Tensor3& a, const Tensor3& b) {
  const Index m = a.m(), r = a.n(), n = b.n(), p = a.p();
  Tensor3 c(m, n, p);
  for (Index k = 0; k < p; ++k)
    for (Index l = 0; l < p; ++l) {
      const Index kb = ((k - l) % p + p) % p;
      for (Index i = 0; i < m; ++i)
        for (Index s = 0; s < r; ++s) {
          const double x = a(i, s, l);
          for (Index j = 0; j < n; ++j) c(i, j, k) += x * b(s, j, kb);
        }
    }
  return c;
}

inline Tensor3 from_slices(Index m, Index n, std::initializer_list<std::initializer_list<double>> slices) {
  Tensor3 t(m, n, static_cast<Index>(slices.size()));
  Index k = 0;
  for (const auto& s : slices) {
    Index pos = 0;
    for (double v : s) {
      t(pos / n, pos % n, k) = v;
      ++pos;
    }
    ++k;
  }
  return t;
}

// Nonnegative rank-r tensor W * H with first-slice-heavy factors.
inline Tensor3 low_tubal_rank(Index m, Index n, Index p, Index r, std::mt19937_64& rng) {
  return naive_tprod(random_tensor(m, r, p, rng, 0.0, 1.0), random_tensor(r, n, p, rng, 0.0, 1.0));
}

}  // namespace testutil
