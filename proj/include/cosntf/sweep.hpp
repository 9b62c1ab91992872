#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cosntf/recovery.hpp"
#include "cosntf/selection.hpp"
#include "cosntf/synthetic.hpp"

namespace cosntf {

enum class Method { cosntf, tcur_uniform, tcur_slice, tcur_leverage, hybrid };

/// "cosntf", "tcur-uniform", "tcur-slice", "tcur-leverage", "hybrid".
std::string_view method_name(Method m);
std::optional<Method> parse_method(std::string_view name);
std::vector<Method> all_methods();

/// 1e-7, 1e-6, ..., 1e-1.
std::vector<double> default_noise_levels();

struct SweepConfig {
  /// Shape and scaling of every generated tensor; noise and seed are set per trial.
  SynthSpec base;
  std::vector<double> noise_levels = default_noise_levels();
  int trials = 10;
  std::vector<Method> methods = all_methods();
  /// Trial t of every level uses seed + t, for generation and for sampling.
  std::uint64_t seed = 0;
  CosntfOptions cosntf;
  RecoverOptions recover;
};

struct ExperimentRecord {
  Method method = Method::cosntf;
  Index r1 = 0;
  Index r2 = 0;
  std::uint64_t seed = 0;
  double noise = 0.0;
  double rel_error = 0.0;
  double rel_approx = 0.0;
  double wall_ms = 0.0;
  IndexList I{Mode::horizontal, {}};
  IndexList J{Mode::lateral, {}};
  /// Empty on success; a failed trial keeps NaN scores and the message.
  std::string error;
};

struct MeanRecord {
  Method method = Method::cosntf;
  Index r1 = 0;
  Index r2 = 0;
  double noise = 0.0;
  double rel_error = 0.0;
  double rel_approx = 0.0;
  double wall_ms = 0.0;
  /// Successful trials that went into the mean.
  int count = 0;
};

struct SweepResult {
  /// Ordered by noise level, then trial, then method.
  std::vector<ExperimentRecord> trials;
  /// One row per (noise level, method), same order.
  std::vector<MeanRecord> means;
};

/// Selects with `method`, recovers P1 and P2 and scores against data.tensor.
/// Errors are caught and recorded in the returned record.
ExperimentRecord run_trial(const SynthData& data, Method method, Index r1, Index r2,
                           std::uint64_t seed, const CosntfOptions& sel,
                           const RecoverOptions& rec);

SweepResult run_sweep(const SweepConfig& cfg);

/// Header method,r1,r2,seed,noise,rel_error,rel_approx,wall_ms; trial rows
/// then mean rows (seed column "mean"). wall_ms is written as 0 unless
/// `timing` is set so that reruns produce identical bytes.
void write_sweep_csv(std::ostream& os, const SweepResult& res, bool timing = false);

}  // namespace cosntf
