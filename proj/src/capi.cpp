#include "cosntf/cosntf.h"

#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "cosntf/images.hpp"
#include "cosntf/io.hpp"
#include "cosntf/recovery.hpp"
#include "cosntf/sampling.hpp"
#include "cosntf/selection.hpp"
#include "cosntf/sweep.hpp"
#include "cosntf/synthetic.hpp"

struct cosntf_tensor {
  cosntf::Tensor3 value;
};

struct cosntf_selection {
  cosntf::SelectionResult value;
};

struct cosntf_model {
  cosntf::CosepModel value;
};

namespace {

thread_local std::string g_last_error;

cosntf_status fail(cosntf_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Runs f, translating exceptions into status codes.
template <class F>
cosntf_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return COSNTF_OK;
  } catch (const cosntf::DimensionError& e) {
    return fail(COSNTF_ERR_DIMENSION, e.what());
  } catch (const cosntf::IndexError& e) {
    return fail(COSNTF_ERR_INDEX, e.what());
  } catch (const cosntf::InvalidArgument& e) {
    return fail(COSNTF_ERR_INVALID_ARGUMENT, e.what());
  } catch (const cosntf::IoError& e) {
    return fail(COSNTF_ERR_IO, e.what());
  } catch (const cosntf::FormatError& e) {
    return fail(COSNTF_ERR_FORMAT, e.what());
  } catch (const cosntf::ConvergenceError& e) {
    return fail(COSNTF_ERR_CONVERGENCE, e.what());
  } catch (const cosntf::SingularError& e) {
    return fail(COSNTF_ERR_SINGULAR, e.what());
  } catch (const cosntf::SamplingError& e) {
    return fail(COSNTF_ERR_SAMPLING, e.what());
  } catch (const std::bad_alloc&) {
    return fail(COSNTF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(COSNTF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(COSNTF_ERR_INTERNAL, "unknown error");
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) throw cosntf::InvalidArgument(std::string(what) + " is NULL");
}

cosntf::Index to_index(size_t v) { return static_cast<cosntf::Index>(v); }

cosntf_tensor* wrap(cosntf::Tensor3 t) { return new cosntf_tensor{std::move(t)}; }

std::vector<cosntf::Method> parse_methods(const char* list) {
  if (list == nullptr) return cosntf::all_methods();
  std::vector<cosntf::Method> out;
  std::stringstream ss(list);
  std::string name;
  while (std::getline(ss, name, ',')) {
    const auto m = cosntf::parse_method(name);
    if (!m) throw cosntf::InvalidArgument("unknown method '" + name + "'");
    out.push_back(*m);
  }
  if (out.empty()) throw cosntf::InvalidArgument("empty method list");
  return out;
}

cosntf::SynthSpec to_spec(const cosntf_synth_spec& s) {
  cosntf::SynthSpec out;
  out.m = to_index(s.m);
  out.n = to_index(s.n);
  out.p = to_index(s.p);
  out.r1 = to_index(s.r1);
  out.r2 = to_index(s.r2);
  out.noise = s.noise;
  out.slice_sum = s.slice_sum;
  out.seed = s.seed;
  return out;
}

}  // namespace

extern "C" {

const char* cosntf_version(void) { return "0.1.0"; }

const char* cosntf_status_string(cosntf_status status) {
  switch (status) {
    case COSNTF_OK: return "ok";
    case COSNTF_ERR_INVALID_ARGUMENT: return "invalid argument";
    case COSNTF_ERR_DIMENSION: return "dimension mismatch";
    case COSNTF_ERR_INDEX: return "index out of range";
    case COSNTF_ERR_IO: return "i/o error";
    case COSNTF_ERR_FORMAT: return "malformed input";
    case COSNTF_ERR_CONVERGENCE: return "no convergence";
    case COSNTF_ERR_SINGULAR: return "singular tensor";
    case COSNTF_ERR_SAMPLING: return "sampling failed";
    case COSNTF_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* cosntf_last_error(void) { return g_last_error.c_str(); }

cosntf_status cosntf_tensor_create(size_t m, size_t n, size_t p, const double* data,
                                   cosntf_tensor** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    if (data == nullptr) {
      *out = wrap(cosntf::Tensor3(to_index(m), to_index(n), to_index(p)));
    } else {
      std::vector<double> v(data, data + m * n * p);
      *out = wrap(cosntf::Tensor3(to_index(m), to_index(n), to_index(p), std::move(v)));
    }
  });
}

void cosntf_tensor_free(cosntf_tensor* t) { delete t; }

cosntf_status cosntf_tensor_dims(const cosntf_tensor* t, size_t* m, size_t* n, size_t* p) {
  return guarded([&] {
    need(t, "tensor");
    if (m) *m = static_cast<size_t>(t->value.m());
    if (n) *n = static_cast<size_t>(t->value.n());
    if (p) *p = static_cast<size_t>(t->value.p());
  });
}

cosntf_status cosntf_tensor_copy_data(const cosntf_tensor* t, double* out, size_t len) {
  return guarded([&] {
    need(t, "tensor");
    need(out, "out");
    const auto d = t->value.data();
    if (len < d.size()) throw cosntf::DimensionError("output buffer too small");
    std::copy(d.begin(), d.end(), out);
  });
}

cosntf_status cosntf_tensor_get(const cosntf_tensor* t, size_t i, size_t j, size_t k, double* out) {
  return guarded([&] {
    need(t, "tensor");
    need(out, "out");
    const auto& v = t->value;
    if (i < 1 || j < 1 || k < 1 || to_index(i) > v.m() || to_index(j) > v.n() ||
        to_index(k) > v.p()) {
      throw cosntf::IndexError("tensor index out of range");
    }
    *out = v(to_index(i) - 1, to_index(j) - 1, to_index(k) - 1);
  });
}

cosntf_status cosntf_tensor_read(const char* path, cosntf_tensor** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    *out = wrap(cosntf::read_t3t(std::filesystem::path(path)));
  });
}

cosntf_status cosntf_tensor_write(const cosntf_tensor* t, const char* path) {
  return guarded([&] {
    need(t, "tensor");
    need(path, "path");
    cosntf::write_t3t(std::filesystem::path(path), t->value);
  });
}

cosntf_status cosntf_tprod(const cosntf_tensor* a, const cosntf_tensor* b, cosntf_tensor** out) {
  return guarded([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    *out = nullptr;
    *out = wrap(cosntf::tprod(a->value, b->value));
  });
}

cosntf_status cosntf_rel_error(const cosntf_tensor* a, const cosntf_tensor* b, double* out) {
  return guarded([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    *out = cosntf::rel_error(a->value, b->value);
  });
}

void cosntf_synth_default(cosntf_synth_spec* spec) {
  if (spec == nullptr) return;
  const cosntf::SynthSpec d;
  *spec = cosntf_synth_spec{static_cast<size_t>(d.m),  static_cast<size_t>(d.n),
                            static_cast<size_t>(d.p),  static_cast<size_t>(d.r1),
                            static_cast<size_t>(d.r2), d.noise,
                            d.slice_sum,               d.seed};
}

cosntf_status cosntf_gen_synthetic(const cosntf_synth_spec* spec, cosntf_tensor** tensor,
                                   cosntf_tensor** noiseless, cosntf_selection** truth) {
  return guarded([&] {
    need(spec, "spec");
    need(tensor, "tensor");
    *tensor = nullptr;
    if (noiseless) *noiseless = nullptr;
    if (truth) *truth = nullptr;
    cosntf::SynthData d = cosntf::gen_synthetic(to_spec(*spec));
    *tensor = wrap(std::move(d.tensor));
    if (noiseless) *noiseless = wrap(std::move(d.noiseless));
    if (truth) {
      cosntf::SelectionResult s;
      s.I = std::move(d.I);
      s.J = std::move(d.J);
      *truth = new cosntf_selection{std::move(s)};
    }
  });
}

void cosntf_select_defaults(cosntf_select_options* opts) {
  if (opts == nullptr) return;
  const cosntf::CosntfOptions d;
  *opts = cosntf_select_options{COSNTF_METHOD_COSNTF, COSNTF_DIST_UNIFORM, 10, 3, 0,
                                d.delta, d.maxiter, d.fgm.lambda, 0};
}

cosntf_status cosntf_select(const cosntf_tensor* t, const cosntf_select_options* opts,
                            cosntf_selection** out) {
  return guarded([&] {
    need(t, "tensor");
    need(opts, "options");
    need(out, "out");
    *out = nullptr;
    cosntf::CosntfOptions co;
    co.delta = opts->delta;
    co.maxiter = opts->maxiter;
    co.fgm.lambda = opts->lambda;
    const auto r1 = to_index(opts->r1), r2 = to_index(opts->r2);
    cosntf::SelectionResult res;
    switch (opts->method) {
      case COSNTF_METHOD_COSNTF:
        res = cosntf::cosntf_select(t->value, r1, r2, co);
        break;
      case COSNTF_METHOD_HYBRID: {
        cosntf::HybridOptions h;
        h.cosntf = co;
        res = cosntf::hybrid_select(t->value, r1, r2, opts->seed, h);
        break;
      }
      case COSNTF_METHOD_TCUR: {
        cosntf::TcurDeimOptions d;
        switch (opts->dist) {
          case COSNTF_DIST_UNIFORM: d.distribution = cosntf::Distribution::uniform; break;
          case COSNTF_DIST_SLICE: d.distribution = cosntf::Distribution::slice_size; break;
          case COSNTF_DIST_LEVERAGE: d.distribution = cosntf::Distribution::leverage; break;
          default: throw cosntf::InvalidArgument("unknown sampling distribution");
        }
        d.swap_pairing = opts->swap_pairing != 0;
        res = cosntf::tcur_deim_select(t->value, r1, r2, opts->seed, d);
        break;
      }
      default:
        throw cosntf::InvalidArgument("unknown selection method");
    }
    *out = new cosntf_selection{std::move(res)};
  });
}

cosntf_status cosntf_selection_create(const size_t* I, size_t nI, const size_t* J, size_t nJ,
                                      cosntf_selection** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    if (nI == 0 || nJ == 0) throw cosntf::InvalidArgument("index sets must be nonempty");
    need(I, "I");
    need(J, "J");
    std::vector<cosntf::Index> i(I, I + nI), j(J, J + nJ);
    cosntf::SelectionResult s;
    s.I = cosntf::IndexList::from_one_based(cosntf::Mode::horizontal, i);
    s.J = cosntf::IndexList::from_one_based(cosntf::Mode::lateral, j);
    *out = new cosntf_selection{std::move(s)};
  });
}

void cosntf_selection_free(cosntf_selection* s) { delete s; }

cosntf_status cosntf_selection_sizes(const cosntf_selection* s, size_t* nI, size_t* nJ) {
  return guarded([&] {
    need(s, "selection");
    if (nI) *nI = static_cast<size_t>(s->value.I.size());
    if (nJ) *nJ = static_cast<size_t>(s->value.J.size());
  });
}

cosntf_status cosntf_selection_indices(const cosntf_selection* s, size_t* I, size_t* J) {
  return guarded([&] {
    need(s, "selection");
    if (I) {
      for (cosntf::Index v : s->value.I) *I++ = static_cast<size_t>(v + 1);
    }
    if (J) {
      for (cosntf::Index v : s->value.J) *J++ = static_cast<size_t>(v + 1);
    }
  });
}

cosntf_status cosntf_selection_info(const cosntf_selection* s, int* outer_iterations,
                                    int* converged) {
  return guarded([&] {
    need(s, "selection");
    if (outer_iterations) *outer_iterations = s->value.outer_iterations;
    if (converged) *converged = s->value.converged ? 1 : 0;
  });
}

cosntf_status cosntf_selection_read(const char* path, cosntf_selection** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    auto [I, J] = cosntf::read_idx(std::filesystem::path(path));
    cosntf::SelectionResult s;
    s.I = std::move(I);
    s.J = std::move(J);
    s.outer_iterations = 1;
    *out = new cosntf_selection{std::move(s)};
  });
}

cosntf_status cosntf_selection_write(const cosntf_selection* s, const char* path) {
  return guarded([&] {
    need(s, "selection");
    need(path, "path");
    cosntf::write_idx(std::filesystem::path(path), s->value.I, s->value.J);
  });
}

void cosntf_recover_defaults(cosntf_recover_options* opts) {
  if (opts == nullptr) return;
  const cosntf::RecoverOptions d;
  *opts = cosntf_recover_options{d.maxiter, d.delta, 0};
}

cosntf_status cosntf_recover(const cosntf_tensor* t, const cosntf_selection* s,
                             const cosntf_recover_options* opts, cosntf_model** out) {
  return guarded([&] {
    need(t, "tensor");
    need(s, "selection");
    need(out, "out");
    *out = nullptr;
    cosntf::RecoverOptions ro;
    if (opts) {
      ro.maxiter = opts->maxiter;
      ro.delta = opts->delta;
      ro.nnls.solver = opts->use_hals ? cosntf::NnlsSolver::hals : cosntf::NnlsSolver::active_set;
    }
    *out = new cosntf_model{cosntf::recover_factors(t->value, s->value.I, s->value.J, ro)};
  });
}

void cosntf_model_free(cosntf_model* mdl) { delete mdl; }

cosntf_status cosntf_model_p1(const cosntf_model* mdl, cosntf_tensor** out) {
  return guarded([&] {
    need(mdl, "model");
    need(out, "out");
    *out = wrap(mdl->value.P1);
  });
}

cosntf_status cosntf_model_core(const cosntf_model* mdl, cosntf_tensor** out) {
  return guarded([&] {
    need(mdl, "model");
    need(out, "out");
    *out = wrap(mdl->value.core);
  });
}

cosntf_status cosntf_model_p2(const cosntf_model* mdl, cosntf_tensor** out) {
  return guarded([&] {
    need(mdl, "model");
    need(out, "out");
    *out = wrap(mdl->value.P2);
  });
}

cosntf_status cosntf_model_reconstruct(const cosntf_model* mdl, cosntf_tensor** out) {
  return guarded([&] {
    need(mdl, "model");
    need(out, "out");
    *out = nullptr;
    *out = wrap(cosntf::reconstruct(mdl->value));
  });
}

cosntf_status cosntf_model_info(const cosntf_model* mdl, int* iterations, int* converged) {
  return guarded([&] {
    need(mdl, "model");
    if (iterations) *iterations = mdl->value.iterations;
    if (converged) *converged = mdl->value.converged ? 1 : 0;
  });
}

cosntf_status cosntf_ingest_images(const char* dir, size_t height, size_t width,
                                   cosntf_tensor** out) {
  return guarded([&] {
    need(dir, "dir");
    need(out, "out");
    *out = nullptr;
    std::optional<std::pair<cosntf::Index, cosntf::Index>> resize;
    if (height != 0 || width != 0) resize = std::make_pair(to_index(height), to_index(width));
    *out = wrap(cosntf::ingest_images(std::filesystem::path(dir), resize));
  });
}

void cosntf_sweep_defaults(cosntf_sweep_config* cfg) {
  if (cfg == nullptr) return;
  const cosntf::SweepConfig d;
  cosntf_synth_default(&cfg->base);
  cfg->noise_levels = nullptr;
  cfg->n_levels = 0;
  cfg->trials = d.trials;
  cfg->methods = nullptr;
  cfg->seed = d.seed;
  cfg->delta = d.cosntf.delta;
  cfg->maxiter = d.cosntf.maxiter;
  cfg->lambda = d.cosntf.fgm.lambda;
  cfg->recover_maxiter = d.recover.maxiter;
  cfg->recover_delta = d.recover.delta;
  cfg->timing = 0;
}

cosntf_status cosntf_sweep_run(const cosntf_sweep_config* cfg, const char* csv_path) {
  return guarded([&] {
    need(cfg, "config");
    need(csv_path, "csv_path");
    cosntf::SweepConfig sc;
    sc.base = to_spec(cfg->base);
    if (cfg->noise_levels != nullptr) {
      sc.noise_levels.assign(cfg->noise_levels, cfg->noise_levels + cfg->n_levels);
    }
    sc.trials = cfg->trials;
    sc.methods = parse_methods(cfg->methods);
    sc.seed = cfg->seed;
    sc.cosntf.delta = cfg->delta;
    sc.cosntf.maxiter = cfg->maxiter;
    sc.cosntf.fgm.lambda = cfg->lambda;
    sc.recover.maxiter = cfg->recover_maxiter;
    sc.recover.delta = cfg->recover_delta;
    const cosntf::SweepResult res = cosntf::run_sweep(sc);
    std::ofstream os(csv_path, std::ios::binary | std::ios::trunc);
    if (!os) throw cosntf::IoError(std::string("cannot open ") + csv_path + " for writing");
    cosntf::write_sweep_csv(os, res, cfg->timing != 0);
    if (!os) throw cosntf::IoError(std::string("write to ") + csv_path + " failed");
  });
}

}  // extern "C"
