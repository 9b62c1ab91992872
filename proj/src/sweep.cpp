#include "cosntf/sweep.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include "cosntf/io.hpp"
#include "cosntf/sampling.hpp"

namespace cosntf {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

SelectionResult select_with(const Tensor3& t, Method method, Index r1, Index r2,
                            std::uint64_t seed, const CosntfOptions& sel) {
  TcurDeimOptions deim;
  switch (method) {
    case Method::cosntf:
      return cosntf_select(t, r1, r2, sel);
    case Method::hybrid: {
      HybridOptions h;
      h.cosntf = sel;
      return hybrid_select(t, r1, r2, seed, h);
    }
    case Method::tcur_uniform:
      deim.distribution = Distribution::uniform;
      break;
    case Method::tcur_slice:
      deim.distribution = Distribution::slice_size;
      break;
    case Method::tcur_leverage:
      deim.distribution = Distribution::leverage;
      break;
  }
  return tcur_deim_select(t, r1, r2, seed, deim);
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::cosntf: return "cosntf";
    case Method::tcur_uniform: return "tcur-uniform";
    case Method::tcur_slice: return "tcur-slice";
    case Method::tcur_leverage: return "tcur-leverage";
    case Method::hybrid: return "hybrid";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : all_methods()) {
    if (method_name(m) == name) return m;
  }
  return std::nullopt;
}

std::vector<Method> all_methods() {
  return {Method::cosntf, Method::tcur_uniform, Method::tcur_slice, Method::tcur_leverage,
          Method::hybrid};
}

std::vector<double> default_noise_levels() {
  std::vector<double> v;
  for (int e = -7; e <= -1; ++e) v.push_back(std::pow(10.0, e));
  return v;
}

ExperimentRecord run_trial(const SynthData& data, Method method, Index r1, Index r2,
                           std::uint64_t seed, const CosntfOptions& sel,
                           const RecoverOptions& rec) {
  ExperimentRecord out;
  out.method = method;
  out.r1 = r1;
  out.r2 = r2;
  out.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  try {
    const SelectionResult s = select_with(data.tensor, method, r1, r2, seed, sel);
    const CosepModel mdl = recover_factors(data.tensor, s.I, s.J, rec);
    out.rel_error = rel_error(data.tensor, reconstruct(mdl));
    out.rel_approx = 1.0 - out.rel_error;
    out.I = s.I;
    out.J = s.J;
  } catch (const std::exception& e) {
    out.rel_error = kNaN;
    out.rel_approx = kNaN;
    out.error = e.what();
  }
  out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                    .count();
  return out;
}

SweepResult run_sweep(const SweepConfig& cfg) {
  if (cfg.trials < 1) throw InvalidArgument("sweep: trials must be >= 1");
  if (cfg.noise_levels.empty() || cfg.methods.empty()) {
    throw InvalidArgument("sweep: need at least one noise level and one method");
  }
  SweepResult res;
  for (double eps : cfg.noise_levels) {
    std::vector<MeanRecord> level(cfg.methods.size());
    for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
      level[mi].method = cfg.methods[mi];
      level[mi].r1 = cfg.base.r1;
      level[mi].r2 = cfg.base.r2;
      level[mi].noise = eps;
    }
    for (int trial = 0; trial < cfg.trials; ++trial) {
      SynthSpec spec = cfg.base;
      spec.noise = eps;
      spec.seed = cfg.seed + static_cast<std::uint64_t>(trial);
      const SynthData data = gen_synthetic(spec);
      for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
        ExperimentRecord r =
            run_trial(data, cfg.methods[mi], spec.r1, spec.r2, spec.seed, cfg.cosntf, cfg.recover);
        r.noise = eps;
        if (r.error.empty()) {
          level[mi].rel_error += r.rel_error;
          level[mi].wall_ms += r.wall_ms;
          ++level[mi].count;
        }
        res.trials.push_back(std::move(r));
      }
    }
    for (MeanRecord& m : level) {
      if (m.count > 0) {
        m.rel_error /= m.count;
        m.wall_ms /= m.count;
        m.rel_approx = 1.0 - m.rel_error;
      } else {
        m.rel_error = m.rel_approx = m.wall_ms = kNaN;
      }
      res.means.push_back(m);
    }
  }
  return res;
}

void write_sweep_csv(std::ostream& os, const SweepResult& res, bool timing) {
  auto num = [](double v) { return std::isnan(v) ? std::string("nan") : format_double(v); };
  os << "method,r1,r2,seed,noise,rel_error,rel_approx,wall_ms\n";
  for (const ExperimentRecord& r : res.trials) {
    os << method_name(r.method) << ',' << r.r1 << ',' << r.r2 << ',' << r.seed << ','
       << num(r.noise) << ',' << num(r.rel_error) << ',' << num(r.rel_approx) << ','
       << (timing ? num(r.wall_ms) : "0") << '\n';
  }
  for (const MeanRecord& m : res.means) {
    os << method_name(m.method) << ',' << m.r1 << ',' << m.r2 << ",mean," << num(m.noise) << ','
       << num(m.rel_error) << ',' << num(m.rel_approx) << ','
       << (timing ? num(m.wall_ms) : "0") << '\n';
  }
}

}  // namespace cosntf
