#include "urnlab/urnlab.h"

#include <new>
#include <string>

#include "urnlab/asymptotics.hpp"
#include "urnlab/experiment.hpp"
#include "urnlab/simulator.hpp"

struct urnlab_spec {
  urnlab::ReinforcementSpec value;
};

struct urnlab_law {
  urnlab::SampleSizeLaw value;
};

struct urnlab_text {
  std::string value;
};

struct urnlab_experiment {
  urnlab::ExperimentOutcome value;
  std::string output;
};

namespace {

std::string& last_error() {
  thread_local std::string message;
  return message;
}

urnlab_status fail(urnlab_status status, const char* message) {
  last_error() = message;
  return status;
}

urnlab::ModelParams to_params(const urnlab_params* p) {
  urnlab::ModelParams m;
  m.p = p->p;
  m.q = p->q;
  m.q1 = p->q1;
  m.q2 = p->q2;
  m.N = p->N;
  return m;
}

void fill(const urnlab::FixedPointReport& r, urnlab_fixed_point* out) {
  out->x_star = r.x_star;
  out->y_star = r.y_star;
  out->z_star = r.z_star;
  out->alpha_star = r.alpha_star;
  out->beta_star = r.beta_star;
  out->kappa = r.kappa;
  out->rho = r.rho;
  out->residual = r.residual;
  out->contraction_margin = r.margin;
  out->iterations = r.iterations;
  out->smoothed_map = r.map_kind == urnlab::MapKind::Smoothed ? 1 : 0;
}

}  // namespace

#define URNLAB_REQUIRE_ARG(cond) \
  if (!(cond)) return fail(URNLAB_E_INVALID_ARGUMENT, "null argument: " #cond)

#define URNLAB_API_PROLOGUE try {

#define URNLAB_API_EPILOGUE \
  } \
  catch (const urnlab::Error& e) { \
    return fail(static_cast<urnlab_status>(e.code()), e.what()); \
  } \
  catch (const std::bad_alloc&) { \
    return fail(URNLAB_E_INTERNAL, "out of memory"); \
  } \
  catch (const std::exception& e) { \
    return fail(URNLAB_E_INTERNAL, e.what()); \
  } \
  catch (...) { \
    return fail(URNLAB_E_INTERNAL, "unknown error"); \
  }

extern "C" {

const char* urnlab_version(void) { return "0.1.0"; }

const char* urnlab_last_error(void) { return last_error().c_str(); }

const char* urnlab_status_name(int status) {
  if (status == 0) return "ok";
  if (status < 1 || status > 14) return "unknown";
  return urnlab::to_string(static_cast<urnlab::ErrorCode>(status));
}

const char* urnlab_text_data(const urnlab_text* text) { return text ? text->value.c_str() : ""; }

void urnlab_text_free(urnlab_text* text) { delete text; }

urnlab_status urnlab_spec_parse(const char* descriptor, urnlab_spec** out) {
  URNLAB_REQUIRE_ARG(descriptor && out);
  URNLAB_API_PROLOGUE
  *out = new urnlab_spec{urnlab::ReinforcementSpec::parse(descriptor)};
  return URNLAB_OK;
  URNLAB_API_EPILOGUE
}

void urnlab_spec_free(urnlab_spec* spec) { delete spec; }

urnlab_status urnlab_spec_eval(const urnlab_spec* spec, double x, double y, double* out) {
  URNLAB_REQUIRE_ARG(spec && out);
  URNLAB_API_PROLOGUE
  if (!urnlab::in_simplex({x, y})) return fail(URNLAB_E_DOMAIN, "point is outside the simplex");
  *out = spec->value.f(x, y);
  return URNLAB_OK;
  URNLAB_API_EPILOGUE
}

urnlab_status urnlab_spec_descriptor(const urnlab_spec* spec, urnlab_text** out) {
  URNLAB_REQUIRE_ARG(spec && out);
  URNLAB_API_PROLOGUE
  *out = new urnlab_text{spec->value.descriptor()};
  return URNLAB_OK;
  URNLAB_API_EPILOGUE
}

urnlab_status urnlab_law_parse(const char* descriptor, urnlab_law** out) {
  URNLAB_REQUIRE_ARG(descriptor && out);
  URNLAB_API_PROLOGUE
  *out = new urnlab_law{urnlab::SampleSizeLaw::parse(descriptor)};
  return URNLAB_OK;
  URNLAB_API_EPILOGUE
}

void urnlab_law_free(urnlab_law* law) { delete law; }

urnlab_status urnlab_law_pmf(const urnlab_law* law, int64_t n, int64_t k, double* out) {
  URNLAB_REQUIRE_ARG(law && out);
  URNLAB_API_PROLOGUE
  *out = law->value.pmf(n, k);
  return URNLAB_OK;
  URNLAB_API_EPILOGUE
}

urnlab_status urnlab_law_inverse_moment(const urnlab_law* law, int64_t n, double power, double* out) {
  URNLAB_REQUIRE_ARG(law && out);
  URNLAB_API_PROLOGUE
  *out = law->value.inverse_moment(n, power);
  return URNLAB_OK;
  URNLAB_API_EPILOGUE
}

urnlab_status urnlab_hn_eval(const urnlab_spec* spec, const urnlab_law* law, const urnlab_params* params,
                             int64_t n, double x, double y, double* out) {
  URNLAB_REQUIRE_ARG(spec && law && params && out);
  URNLAB_API_PROLOGUE
  *out = urnlab::hn_eval(spec->value, to_params(params), law->value, n, {x, y});
  return URNLAB_OK;
  URNLAB_API_EPILOGUE
}

urnlab_status urnlab_en_eval(const urnlab_spec* spec, const urnlab_law* law, const urnlab_params* params,
                             int64_t n, int64_t r1, int64_t r2, double* out) {
  URNLAB_REQUIRE_ARG(spec && law && params && out);
  URNLAB_API_PROLOGUE
  *out = urnlab::en_eval(spec->value, to_params(params), law->value, {n, r1, r2});
  return URNLAB_OK;
  URNLAB_API_EPILOGUE
}

urnlab_status urnlab_gap_bound(const urnlab_spec* spec, const urnlab_law* law, const urnlab_params* params,
                               int64_t n, urnlab_lemma lemma, double* out) {
  URNLAB_REQUIRE_ARG(spec && law && params && out);
  URNLAB_API_PROLOGUE
  urnlab::GapLemma l;
  switch (lemma) {
    case URNLAB_LEMMA_HOLDER: l = urnlab::GapLemma::Holder; break;
    case URNLAB_LEMMA_MODULUS: l = urnlab::GapLemma::Modulus; break;
    case URNLAB_LEMMA_HESSIAN: l = urnlab::GapLemma::Hessian; break;
    default: return fail(URNLAB_E_INVALID_ARGUMENT, "unknown lemma");
  }
  *out = urnlab::bernstein_gap_bound(spec->value, to_params(params), law->value, n, l).bound;
  return URNLAB_OK;
  URNLAB_API_EPILOGUE
}

urnlab_status urnlab_solve_fixed_point(const urnlab_spec* spec, const urnlab_law* law,
                                       const urnlab_params* params, urnlab_fixed_point* out) {
  URNLAB_REQUIRE_ARG(spec && law && params && out);
  URNLAB_API_PROLOGUE
  const auto map = urnlab::SelectionMap::for_law(spec->value, to_params(params), law->value);
  fill(urnlab::analyze_fixed_point(map), out);
  return URNLAB_OK;
  URNLAB_API_EPILOGUE
}

urnlab_status urnlab_analyze(const urnlab_spec* spec, const urnlab_law* law, const urnlab_params* params,
                             urnlab_asymptotics* out) {
  URNLAB_REQUIRE_ARG(spec && law && params && out);
  URNLAB_API_PROLOGUE
  const auto map = urnlab::SelectionMap::for_law(spec->value, to_params(params), law->value);
  const urnlab::AsymptoticsReport r = urnlab::analyze_asymptotics(urnlab::analyze_fixed_point(map));
  *out = urnlab_asymptotics{};
  fill(r.fp, &out->fixed_point);
  out->regime = static_cast<urnlab_regime>(static_cast<int>(r.regime));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out->gamma[3 * i + j] = r.matrices.gamma(i, j);
  if (r.sigma) {
    out->has_sigma = 1;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) out->sigma[3 * i + j] = (*r.sigma)(i, j);
  }
  if (r.direction)
    for (int i = 0; i < 3; ++i) out->direction[i] = (*r.direction)[i];
  return URNLAB_OK;
  URNLAB_API_EPILOGUE
}

urnlab_status urnlab_simulate(const urnlab_spec* spec, const urnlab_law* law, const urnlab_params* params,
                              urnlab_scheme scheme, int64_t n_max, uint64_t seed, uint64_t replication,
                              int64_t counts[4]) {
  URNLAB_REQUIRE_ARG(spec && law && params && counts);
  URNLAB_API_PROLOGUE
  urnlab::RunConfig cfg;
  cfg.params = to_params(params);
  cfg.spec = spec->value;
  cfg.law = law->value;
  cfg.scheme = scheme == URNLAB_WITHOUT_REPLACEMENT ? urnlab::SamplingScheme::WithoutReplacement
                                                    : urnlab::SamplingScheme::WithReplacement;
  cfg.n_max = n_max;
  cfg.checkpoints = {n_max};
  cfg.seed = seed;
  cfg.validate();
  const urnlab::Trajectory t = urnlab::run_trajectory(cfg, static_cast<std::int64_t>(replication));
  const auto& r = t.records.back();
  counts[0] = r.a;
  counts[1] = r.b;
  counts[2] = r.c;
  counts[3] = r.d;
  return URNLAB_OK;
  URNLAB_API_EPILOGUE
}

urnlab_status urnlab_experiment_run(const char* config_path, const char* output_dir, unsigned threads,
                                    urnlab_experiment** out) {
  URNLAB_REQUIRE_ARG(config_path && out);
  URNLAB_API_PROLOGUE
  urnlab::ExperimentOverrides ov;
  if (output_dir) ov.output = output_dir;
  if (threads != 0) ov.threads = threads;
  auto* exp = new urnlab_experiment{urnlab::run_experiment(config_path, ov), {}};
  exp->output = exp->value.output.string();
  *out = exp;
  return URNLAB_OK;
  URNLAB_API_EPILOGUE
}

urnlab_status urnlab_report_load(const char* dir, urnlab_experiment** out) {
  URNLAB_REQUIRE_ARG(dir && out);
  URNLAB_API_PROLOGUE
  auto* exp = new urnlab_experiment{urnlab::load_report(dir), {}};
  exp->output = exp->value.output.string();
  *out = exp;
  return URNLAB_OK;
  URNLAB_API_EPILOGUE
}

int urnlab_experiment_exit_code(const urnlab_experiment* exp) { return exp ? exp->value.exit_code : -1; }

const char* urnlab_experiment_summary(const urnlab_experiment* exp) {
  return exp ? exp->value.summary.c_str() : "";
}

const char* urnlab_experiment_report_json(const urnlab_experiment* exp) {
  return exp ? exp->value.report_json.c_str() : "";
}

const char* urnlab_experiment_output_dir(const urnlab_experiment* exp) {
  return exp ? exp->output.c_str() : "";
}

void urnlab_experiment_free(urnlab_experiment* exp) { delete exp; }

urnlab_status urnlab_catalog(urnlab_text** out) {
  URNLAB_REQUIRE_ARG(out);
  URNLAB_API_PROLOGUE
  *out = new urnlab_text{urnlab::catalog_text()};
  return URNLAB_OK;
  URNLAB_API_EPILOGUE
}

}  // extern "C"
