#include "cosntf/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_set>

#include "cosntf/linalg.hpp"

namespace cosntf {

namespace {

std::vector<double> normalised(std::vector<double> w) {
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (total <= 0.0) throw InvalidArgument("sampling distribution has zero total weight");
  for (double& v : w) v /= total;
  return w;
}

std::vector<Index> range_of(Index first, Index count) {
  std::vector<Index> v(static_cast<std::size_t>(count));
  std::iota(v.begin(), v.end(), first);
  return v;
}

Index argmax_excluding(const std::vector<double>& values, const std::vector<bool>& excluded) {
  Index best = -1;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (excluded[i]) continue;
    if (best < 0 || values[i] > values[static_cast<std::size_t>(best)]) best = static_cast<Index>(i);
  }
  return best;
}

// ||A_i::||_F^2 (horizontal) or ||A_:j:||_F^2 (lateral).
std::vector<double> slice_norms_sq(const Tensor3& t, Mode mode) {
  std::vector<double> w(static_cast<std::size_t>(mode == Mode::horizontal ? t.m() : t.n()), 0.0);
  for (Index k = 0; k < t.p(); ++k) {
    for (Index i = 0; i < t.m(); ++i) {
      for (Index j = 0; j < t.n(); ++j) {
        const double v = t(i, j, k);
        w[static_cast<std::size_t>(mode == Mode::horizontal ? i : j)] += v * v;
      }
    }
  }
  return w;
}

}  // namespace

SamplingDistribution build_distribution(const Tensor3& t, Mode mode, Distribution kind,
                                        std::optional<Index> r) {
  const Index extent = mode == Mode::horizontal ? t.m() : t.n();
  SamplingDistribution d;
  d.kind = kind;
  d.mode = mode;
  switch (kind) {
    case Distribution::uniform:
      d.weights.assign(static_cast<std::size_t>(extent), 1.0 / static_cast<double>(extent));
      break;
    case Distribution::slice_size:
      d.weights = normalised(slice_norms_sq(t, mode));
      break;
    case Distribution::leverage: {
      if (!r) throw InvalidArgument("leverage sampling needs a target rank r");
      if (*r < 1 || *r > std::min(t.m(), t.n())) {
        throw InvalidArgument("leverage rank " + std::to_string(*r) + " outside [1, min(m, n)]");
      }
      const TsvdFactors f = tsvd(t);
      const Tensor3& basis = mode == Mode::horizontal ? f.W : f.V;
      std::vector<double> w(static_cast<std::size_t>(extent), 0.0);
      for (Index k = 0; k < basis.p(); ++k) {
        for (Index i = 0; i < extent; ++i) {
          w[static_cast<std::size_t>(i)] += basis.slice(k).row(i).head(*r).squaredNorm();
        }
      }
      // Zero slices carry no information even though an orthogonal completion
      // of W (or V) may give them leverage.
      const std::vector<double> sizes = slice_norms_sq(t, mode);
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (sizes[i] == 0.0) w[i] = 0.0;
      }
      for (double& v : w) v /= static_cast<double>(*r);
      d.weights = normalised(std::move(w));
      d.leverage_rank = *r;
      break;
    }
  }
  return d;
}

Index oversample_count(Index r, Index extent) {
  const double raw = std::ceil(static_cast<double>(r) * std::log(static_cast<double>(extent)));
  return std::clamp(static_cast<Index>(raw), r, extent);
}

std::vector<Index> sample_distinct(const std::vector<double>& weights, Index draws,
                                   Index min_unique, std::mt19937_64& rng, int max_rounds) {
  std::vector<Index> support;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) support.push_back(static_cast<Index>(i));
  }
  if (static_cast<Index>(support.size()) < min_unique) {
    throw SamplingError("only " + std::to_string(support.size()) +
                        " indices have positive weight, need " + std::to_string(min_unique));
  }
  if (draws >= static_cast<Index>(support.size())) return support;

  std::discrete_distribution<Index> pick(weights.begin(), weights.end());
  for (int round = 0; round < max_rounds; ++round) {
    std::vector<Index> out;
    std::unordered_set<Index> seen;
    for (Index d = 0; d < draws; ++d) {
      const Index i = pick(rng);
      if (seen.insert(i).second) out.push_back(i);
    }
    if (static_cast<Index>(out.size()) >= min_unique) return out;
  }
  throw SamplingError("fewer than " + std::to_string(min_unique) + " distinct indices after " +
                      std::to_string(max_rounds) + " sampling rounds");
}

TcurResult tcur(const Tensor3& t, Index d1, Index d2, const SamplingDistribution& rows,
                const SamplingDistribution& cols, std::uint64_t seed, const TcurOptions& opts) {
  if (static_cast<Index>(rows.weights.size()) != t.m() ||
      static_cast<Index>(cols.weights.size()) != t.n()) {
    throw DimensionError("tcur: distribution length does not match tensor");
  }
  if (d1 < 1 || d2 < 1) throw InvalidArgument("tcur: sample counts must be >= 1");
  std::mt19937_64 rng(seed);
  TcurResult out;
  out.I = IndexList(Mode::horizontal,
                    sample_distinct(rows.weights, d1, opts.min_unique_rows, rng, opts.max_rounds));
  out.J = IndexList(Mode::lateral,
                    sample_distinct(cols.weights, d2, opts.min_unique_cols, rng, opts.max_rounds));
  out.C = cols_of(t, out.J);
  out.R = rows_of(t, out.I);
  out.U = subtensor(t, out.I, out.J);
  return out;
}

Tensor3 tcur_reconstruct(const TcurResult& cur) {
  return tprod(tprod(cur.C, tpinv(cur.U)), cur.R);
}

DeimResult tdeim(const Tensor3& u, Index count) {
  const Index m = u.m();
  if (count < 0) count = u.n();
  if (count > u.n()) throw DimensionError("tdeim: count exceeds number of lateral slices");
  if (count > m) throw DimensionError("tdeim: needs at least as many rows as selected columns");

  DeimResult out;
  std::vector<Index> chosen;
  std::vector<bool> taken(static_cast<std::size_t>(m), false);
  std::vector<double> norms(static_cast<std::size_t>(m));

  auto tube_norms = [&](const Tensor3& r) {
    for (Index i = 0; i < m; ++i) {
      double s = 0.0;
      for (Index k = 0; k < r.p(); ++k) s += r(i, 0, k) * r(i, 0, k);
      norms[static_cast<std::size_t>(i)] = std::sqrt(s);
    }
  };
  auto pick = [&]() {
    const Index best = argmax_excluding(norms, taken);
    for (Index c : chosen) {
      out.max_chosen_residual = std::max(out.max_chosen_residual, norms[static_cast<std::size_t>(c)]);
    }
    out.pivots.push_back(norms[static_cast<std::size_t>(best)]);
    taken[static_cast<std::size_t>(best)] = true;
    chosen.push_back(best);
  };

  if (count == 0) {
    out.indices = IndexList(Mode::horizontal, {});
    return out;
  }
  tube_norms(cols_of(u, std::vector<Index>{0}));
  pick();

  for (Index j = 1; j < count; ++j) {
    const std::vector<Index> prev = range_of(0, j);
    const Tensor3 basis = cols_of(u, prev);
    const Tensor3 square = subtensor(u, chosen, prev);
    const Tensor3 rhs = subtensor(u, chosen, std::vector<Index>{j});
    Tensor3 inv;
    try {
      inv = tinv(square);
    } catch (const SingularError&) {
      inv = tpinv(square);
      out.used_pinv = true;
    }
    const Tensor3 residual =
        cols_of(u, std::vector<Index>{j}) - tprod(basis, tprod(inv, rhs));
    tube_norms(residual);
    pick();
  }
  out.indices = IndexList(Mode::horizontal, std::move(chosen));
  return out;
}

SelectionResult tcur_deim_select(const Tensor3& t, Index r1, Index r2, std::uint64_t seed,
                                 const TcurDeimOptions& opts) {
  if (r1 < 1 || r1 > t.m() || r2 < 1 || r2 > t.n()) {
    throw InvalidArgument("tcur_deim_select: need 1 <= r1 <= m and 1 <= r2 <= n");
  }
  const Index lev_rank = opts.leverage_rank.value_or(std::min(r1, r2));
  const auto lev = opts.distribution == Distribution::leverage ? std::optional<Index>(lev_rank)
                                                               : std::nullopt;
  const SamplingDistribution rows = build_distribution(t, Mode::horizontal, opts.distribution, lev);
  const SamplingDistribution cols = build_distribution(t, Mode::lateral, opts.distribution, lev);

  TcurOptions topts;
  topts.max_rounds = opts.max_rounds;
  // The transposed pairing runs t-DEIM(V) for r1 rows and t-DEIM(W) for r2
  // columns, so both sampled sets must hold max(r1, r2) indices.
  topts.min_unique_rows = opts.swap_pairing ? std::max(r1, r2) : r1;
  topts.min_unique_cols = opts.swap_pairing ? std::max(r1, r2) : r2;
  if (topts.min_unique_rows > t.m() || topts.min_unique_cols > t.n()) {
    throw InvalidArgument("tcur_deim_select: swapped pairing needs max(r1, r2) <= min(m, n)");
  }
  const TcurResult cur = tcur(t, oversample_count(r1, t.m()), oversample_count(r2, t.n()), rows,
                              cols, seed, topts);
  const TsvdFactors f = tsvd(cur.U);

  const Tensor3& row_basis = opts.swap_pairing ? f.V : f.W;
  const Tensor3& col_basis = opts.swap_pairing ? f.W : f.V;
  const DeimResult p = tdeim(cols_of(row_basis, range_of(0, r1)));
  const DeimResult q = tdeim(cols_of(col_basis, range_of(0, r2)));

  SelectionResult out;
  std::vector<Index> I, J;
  for (Index pos : p.indices) {
    if (pos >= cur.I.size()) throw IndexError("t-DEIM row pick outside the sampled horizontal set");
    I.push_back(cur.I[pos]);
  }
  for (Index pos : q.indices) {
    if (pos >= cur.J.size()) throw IndexError("t-DEIM column pick outside the sampled lateral set");
    J.push_back(cur.J[pos]);
  }
  out.I = IndexList(Mode::horizontal, std::move(I));
  out.J = IndexList(Mode::lateral, std::move(J));
  out.outer_iterations = 1;
  out.deim_used_pinv = p.used_pinv || q.used_pinv;
  return out;
}

}  // namespace cosntf
