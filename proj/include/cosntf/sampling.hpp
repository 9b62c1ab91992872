#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "cosntf/selection_result.hpp"
#include "cosntf/tensor.hpp"

namespace cosntf {

enum class Distribution { uniform, slice_size, leverage };

/// Probability vector over the horizontal or lateral slices of a tensor.
struct SamplingDistribution {
  Distribution kind = Distribution::uniform;
  Mode mode = Mode::horizontal;
  std::vector<double> weights;
  /// Target tubal rank used by leverage scores; 0 otherwise.
  Index leverage_rank = 0;
};

/// uniform: 1/extent. slice_size: ||A_i::||_F^2 / ||A||_F^2.
/// leverage: (1/r) ||W_{i,1:r,:}||_F^2 from the t-SVD (V for lateral).
/// Zero slices get weight 0 under slice_size and leverage. Throws
/// InvalidArgument for leverage without r, or r outside [1, min(m, n)].
SamplingDistribution build_distribution(const Tensor3& t, Mode mode, Distribution kind,
                                        std::optional<Index> r = std::nullopt);

/// ceil(r * ln(extent)), clamped to [r, extent].
Index oversample_count(Index r, Index extent);

/// Draws `draws` indices i.i.d. with replacement from `weights` and
/// deduplicates them (first occurrence kept). When `draws` covers every index
/// of positive weight, those indices are returned in order without sampling.
/// Redraws up to `max_rounds` times until at least `min_unique` distinct
/// indices come out; throws SamplingError otherwise.
std::vector<Index> sample_distinct(const std::vector<double>& weights, Index draws,
                                   Index min_unique, std::mt19937_64& rng, int max_rounds = 10);

struct TcurResult {
  Tensor3 C;  ///< A(:, J, :)
  Tensor3 U;  ///< A(I, J, :)
  Tensor3 R;  ///< A(I, :, :)
  IndexList I{Mode::horizontal, {}};
  IndexList J{Mode::lateral, {}};
};

struct TcurOptions {
  Index min_unique_rows = 1;
  Index min_unique_cols = 1;
  int max_rounds = 10;
};

/// Randomised t-CUR: sample d1 horizontal and d2 lateral indices.
TcurResult tcur(const Tensor3& t, Index d1, Index d2, const SamplingDistribution& rows,
                const SamplingDistribution& cols, std::uint64_t seed, const TcurOptions& opts = {});

/// C * pinv(U) * R.
Tensor3 tcur_reconstruct(const TcurResult& cur);

struct DeimResult {
  IndexList indices{Mode::horizontal, {}};
  /// |R(i, j, :)|_F at each chosen index, as it was picked.
  std::vector<double> pivots;
  /// Largest residual tube norm seen at an already chosen index.
  double max_chosen_residual = 0.0;
  bool used_pinv = false;
};

/// t-DEIM on the first `count` lateral slices of u (all of them when
/// count < 0). Requires count <= m. Ties go to the lowest index and chosen
/// indices are never picked twice.
DeimResult tdeim(const Tensor3& u, Index count = -1);

struct TcurDeimOptions {
  Distribution distribution = Distribution::uniform;
  /// Rank for leverage scores; min(r1, r2) when unset.
  std::optional<Index> leverage_rank;
  /// false: I from t-DEIM(W), J from t-DEIM(V). true: the transposed
  /// pairing (I from V, J from W); indices that fall outside the sampled
  /// sets raise IndexError.
  bool swap_pairing = false;
  int max_rounds = 10;
};

/// t-CUR sampling with ceil(r*ln(dim)) oversampling, then t-DEIM on the
/// t-SVD of the sampled core down to r1 x r2.
SelectionResult tcur_deim_select(const Tensor3& t, Index r1, Index r2, std::uint64_t seed,
                                 const TcurDeimOptions& opts = {});

}  // namespace cosntf
