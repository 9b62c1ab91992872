// Command-line front end. Talks to the library through the C interface only.
#include <cosntf/cosntf.h>

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

struct Failure : std::runtime_error {
  Failure(cosntf_status s, const std::string& what) : std::runtime_error(what), status(s) {}
  cosntf_status status;
};

void check(cosntf_status s, const char* context) {
  if (s == COSNTF_OK) return;
  std::string msg = std::string(context) + ": " + cosntf_status_string(s);
  const std::string detail = cosntf_last_error();
  if (!detail.empty()) msg += " (" + detail + ")";
  throw Failure(s, msg);
}

using TensorPtr = std::unique_ptr<cosntf_tensor, decltype(&cosntf_tensor_free)>;
using SelectionPtr = std::unique_ptr<cosntf_selection, decltype(&cosntf_selection_free)>;
using ModelPtr = std::unique_ptr<cosntf_model, decltype(&cosntf_model_free)>;

TensorPtr own(cosntf_tensor* t) { return TensorPtr(t, &cosntf_tensor_free); }
SelectionPtr own(cosntf_selection* s) { return SelectionPtr(s, &cosntf_selection_free); }
ModelPtr own(cosntf_model* m) { return ModelPtr(m, &cosntf_model_free); }

TensorPtr load_tensor(const std::string& path) {
  cosntf_tensor* t = nullptr;
  check(cosntf_tensor_read(path.c_str(), &t), ("reading " + path).c_str());
  return own(t);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void add_spec_flags(CLI::App* cmd, cosntf_synth_spec& spec) {
  cmd->add_option("--m", spec.m, "rows")->capture_default_str();
  cmd->add_option("--n", spec.n, "columns")->capture_default_str();
  cmd->add_option("--p", spec.p, "frontal slices")->capture_default_str();
  cmd->add_option("--r1", spec.r1, "selected horizontal slices")->capture_default_str();
  cmd->add_option("--r2", spec.r2, "selected lateral slices")->capture_default_str();
  cmd->add_option("--slice-sum", spec.slice_sum, "target slice sum")->capture_default_str();
}

// "HxW" -> (H, W)
std::pair<size_t, size_t> parse_size(const std::string& s) {
  const auto x = s.find_first_of("xX");
  if (x == std::string::npos) throw CLI::ValidationError("--resize", "expected HxW, got " + s);
  try {
    size_t used = 0;
    const unsigned long h = std::stoul(s.substr(0, x), &used);
    if (used != x) throw std::invalid_argument(s);
    const std::string tail = s.substr(x + 1);
    const unsigned long w = std::stoul(tail, &used);
    if (used != tail.size() || h == 0 || w == 0) throw std::invalid_argument(s);
    return {h, w};
  } catch (const std::logic_error&) {
    throw CLI::ValidationError("--resize", "expected HxW with positive sizes, got " + s);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coseparable nonnegative tensor factorization"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cosntf_version()));

  // gen
  cosntf_synth_spec gspec;
  cosntf_synth_default(&gspec);
  std::string gen_out, gen_truth, gen_clean;
  auto* gen = app.add_subcommand("gen", "generate a noisy coseparable tensor");
  add_spec_flags(gen, gspec);
  gen->add_option("--noise", gspec.noise, "relative noise level")->capture_default_str();
  gen->add_option("--seed", gspec.seed, "random seed")->capture_default_str();
  gen->add_option("-o,--output", gen_out, "tensor file (.t3t)")->required();
  gen->add_option("--truth", gen_truth, "ground-truth index file (.idx)");
  gen->add_option("--noiseless", gen_clean, "noise-free tensor file (.t3t)");

  // select
  cosntf_select_options sopt;
  cosntf_select_defaults(&sopt);
  std::string sel_in, sel_out, sel_method = "cosntf", sel_dist = "uniform";
  bool sel_swap = false;
  auto* sel = app.add_subcommand("select", "choose the coseparable index sets I and J");
  sel->add_option("tensor", sel_in, "input tensor (.t3t)")->required();
  sel->add_option("-o,--output", sel_out, "index file (.idx)")->required();
  sel->add_option("--method", sel_method, "cosntf | tcur | hybrid")
      ->check(CLI::IsMember({"cosntf", "tcur", "hybrid"}))
      ->capture_default_str();
  sel->add_option("--dist", sel_dist, "t-CUR sampling: uniform | slice | leverage")
      ->check(CLI::IsMember({"uniform", "slice", "leverage"}))
      ->capture_default_str();
  sel->add_option("--r1", sopt.r1)->capture_default_str();
  sel->add_option("--r2", sopt.r2)->capture_default_str();
  sel->add_option("--seed", sopt.seed)->capture_default_str();
  sel->add_option("--delta", sopt.delta, "outer stopping tolerance")->capture_default_str();
  sel->add_option("--maxiter", sopt.maxiter, "outer iterations")->capture_default_str();
  sel->add_option("--lambda", sopt.lambda, "trace penalty")->capture_default_str();
  sel->add_flag("--swap-pairing", sel_swap, "t-CUR: I from V, J from W");

  // factor
  cosntf_recover_options ropt;
  cosntf_recover_defaults(&ropt);
  std::string fac_in, fac_idx, fac_prefix, fac_recon;
  bool fac_hals = false;
  auto* fac = app.add_subcommand("factor", "recover P1 and P2 for given I and J");
  fac->add_option("tensor", fac_in, "input tensor (.t3t)")->required();
  fac->add_option("indices", fac_idx, "index file (.idx)")->required();
  fac->add_option("--prefix", fac_prefix, "write <prefix>P1.t3t, <prefix>core.t3t, <prefix>P2.t3t");
  fac->add_option("--reconstruction", fac_recon, "write P1 * core * P2 (.t3t)");
  fac->add_option("--maxiter", ropt.maxiter)->capture_default_str();
  fac->add_option("--delta", ropt.delta)->capture_default_str();
  fac->add_flag("--hals", fac_hals, "coordinate-descent NNLS instead of active set");

  // eval
  std::string ev_a, ev_b;
  auto* ev = app.add_subcommand("eval", "relative error of an approximation");
  ev->add_option("reference", ev_a, "reference tensor")->required();
  ev->add_option("approximation", ev_b, "approximating tensor")->required();

  // sweep
  cosntf_sweep_config wcfg;
  cosntf_sweep_defaults(&wcfg);
  std::vector<double> levels;
  std::string sw_out, sw_methods = "cosntf,tcur-uniform,tcur-slice,tcur-leverage,hybrid";
  bool sw_timing = false;
  auto* sw = app.add_subcommand("sweep", "noise sweep over synthetic tensors");
  add_spec_flags(sw, wcfg.base);
  sw->add_option("--noise-levels", levels, "noise levels (default 1e-7 ... 1e-1)")->delimiter(',');
  sw->add_option("--trials", wcfg.trials, "tensors per level")->capture_default_str();
  sw->add_option("--methods", sw_methods, "comma-separated methods")->capture_default_str();
  sw->add_option("--seed", wcfg.seed, "first trial seed")->capture_default_str();
  sw->add_option("--delta", wcfg.delta)->capture_default_str();
  sw->add_option("--maxiter", wcfg.maxiter)->capture_default_str();
  sw->add_option("--lambda", wcfg.lambda)->capture_default_str();
  sw->add_option("--recover-maxiter", wcfg.recover_maxiter)->capture_default_str();
  sw->add_option("--recover-delta", wcfg.recover_delta)->capture_default_str();
  sw->add_flag("--timing", sw_timing, "record wall-clock time (breaks byte reproducibility)");
  sw->add_option("-o,--output", sw_out, "CSV file")->required();

  // ingest
  std::string in_dir, in_out, in_resize;
  auto* ing = app.add_subcommand("ingest", "stack a directory of PGM images into a tensor");
  ing->add_option("dir", in_dir, "directory of .pgm files")->required();
  ing->add_option("--resize", in_resize, "target size HxW");
  ing->add_option("-o,--output", in_out, "tensor file (.t3t)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      cosntf_tensor *t = nullptr, *clean = nullptr;
      cosntf_selection* truth = nullptr;
      check(cosntf_gen_synthetic(&gspec, &t, gen_clean.empty() ? nullptr : &clean,
                                 gen_truth.empty() ? nullptr : &truth),
            "gen");
      auto tp = own(t);
      auto cp = own(clean);
      auto sp = own(truth);
      check(cosntf_tensor_write(t, gen_out.c_str()), "writing tensor");
      if (clean) check(cosntf_tensor_write(clean, gen_clean.c_str()), "writing noiseless tensor");
      if (truth) check(cosntf_selection_write(truth, gen_truth.c_str()), "writing truth");
    } else if (*sel) {
      auto t = load_tensor(sel_in);
      sopt.method = sel_method == "cosntf" ? COSNTF_METHOD_COSNTF
                    : sel_method == "tcur" ? COSNTF_METHOD_TCUR
                                           : COSNTF_METHOD_HYBRID;
      sopt.dist = sel_dist == "uniform" ? COSNTF_DIST_UNIFORM
                  : sel_dist == "slice" ? COSNTF_DIST_SLICE
                                        : COSNTF_DIST_LEVERAGE;
      sopt.swap_pairing = sel_swap ? 1 : 0;
      cosntf_selection* s = nullptr;
      check(cosntf_select(t.get(), &sopt, &s), "select");
      auto sp = own(s);
      check(cosntf_selection_write(s, sel_out.c_str()), "writing indices");
      int outer = 0, conv = 0;
      check(cosntf_selection_info(s, &outer, &conv), "select");
      if (sopt.method != COSNTF_METHOD_TCUR) {
        std::printf("outer_iterations %d\nconverged %s\n", outer, conv ? "yes" : "no");
      }
    } else if (*fac) {
      auto t = load_tensor(fac_in);
      cosntf_selection* s = nullptr;
      check(cosntf_selection_read(fac_idx.c_str(), &s), ("reading " + fac_idx).c_str());
      auto sp = own(s);
      ropt.use_hals = fac_hals ? 1 : 0;
      cosntf_model* m = nullptr;
      check(cosntf_recover(t.get(), s, &ropt, &m), "factor");
      auto mp = own(m);
      cosntf_tensor* r = nullptr;
      check(cosntf_model_reconstruct(m, &r), "reconstruct");
      auto rp = own(r);
      double err = 0.0;
      check(cosntf_rel_error(t.get(), r, &err), "rel_error");
      int iters = 0, conv = 0;
      check(cosntf_model_info(m, &iters, &conv), "factor");
      if (!fac_prefix.empty()) {
        const std::pair<const char*, cosntf_status (*)(const cosntf_model*, cosntf_tensor**)>
            parts[] = {{"P1", cosntf_model_p1}, {"core", cosntf_model_core}, {"P2", cosntf_model_p2}};
        for (const auto& [name, get] : parts) {
          cosntf_tensor* x = nullptr;
          check(get(m, &x), name);
          auto xp = own(x);
          const std::string path = fac_prefix + name + ".t3t";
          check(cosntf_tensor_write(x, path.c_str()), ("writing " + path).c_str());
        }
      }
      if (!fac_recon.empty()) check(cosntf_tensor_write(r, fac_recon.c_str()), "writing reconstruction");
      std::printf("iterations %d\nconverged %s\nrel_error %s\nrel_approx %s%%\n", iters,
                  conv ? "yes" : "no", fmt(err).c_str(), fmt(100.0 * (1.0 - err)).c_str());
    } else if (*ev) {
      auto a = load_tensor(ev_a);
      auto b = load_tensor(ev_b);
      double err = 0.0;
      check(cosntf_rel_error(a.get(), b.get(), &err), "eval");
      std::printf("rel_error %s\nrel_approx %s%%\n", fmt(err).c_str(),
                  fmt(100.0 * (1.0 - err)).c_str());
    } else if (*sw) {
      if (!levels.empty()) {
        wcfg.noise_levels = levels.data();
        wcfg.n_levels = levels.size();
      }
      wcfg.methods = sw_methods.c_str();
      wcfg.timing = sw_timing ? 1 : 0;
      check(cosntf_sweep_run(&wcfg, sw_out.c_str()), "sweep");
    } else if (*ing) {
      size_t h = 0, w = 0;
      if (!in_resize.empty()) std::tie(h, w) = parse_size(in_resize);
      cosntf_tensor* t = nullptr;
      check(cosntf_ingest_images(in_dir.c_str(), h, w, &t), "ingest");
      auto tp = own(t);
      check(cosntf_tensor_write(t, in_out.c_str()), "writing tensor");
      size_t m = 0, n = 0, p = 0;
      check(cosntf_tensor_dims(t, &m, &n, &p), "ingest");
      std::printf("tensor %zu x %zu x %zu\n", m, n, p);
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const Failure& f) {
    std::fprintf(stderr, "cosntf: %s\n", f.what());
    return 1 + static_cast<int>(f.status);
  }
  return 0;
}
