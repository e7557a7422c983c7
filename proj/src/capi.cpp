#include "berger_c.h"

#include "berger/functionals.hpp"
#include "berger/harmonics.hpp"
#include "berger/runners.hpp"
#include "berger/stability.hpp"

#include <cstring>
#include <new>
#include <string>

struct berger_context {
  berger::BergerContext ctx;
};

struct berger_result {
  int exit_code = 0;
  std::string output;
  std::string report;
  std::string svg;
};

namespace {

thread_local std::string last_error;

berger_status status_of(berger::ErrorCode code) {
  switch (code) {
    case berger::ErrorCode::InvalidArgument: return BERGER_INVALID_ARGUMENT;
    case berger::ErrorCode::DimensionMismatch: return BERGER_DIMENSION_MISMATCH;
    case berger::ErrorCode::NotOnSphere: return BERGER_NOT_ON_SPHERE;
    case berger::ErrorCode::NotTangent: return BERGER_NOT_TANGENT;
    case berger::ErrorCode::DomainViolation: return BERGER_DOMAIN_VIOLATION;
    case berger::ErrorCode::NotInHypothesisClass: return BERGER_NOT_IN_CLASS;
    case berger::ErrorCode::Incompatible: return BERGER_INCOMPATIBLE;
  }
  return BERGER_INTERNAL;
}

template <class F>
berger_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return BERGER_OK;
  } catch (const berger::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const nlohmann::json::exception& e) {
    last_error = std::string("invalid configuration: ") + e.what();
    return BERGER_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return BERGER_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return BERGER_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw berger::Error(berger::ErrorCode::InvalidArgument, what);
}

berger::FunctionalId functional_id(berger_functional f, double lambda) {
  switch (f) {
    case BERGER_ENERGY: return berger::FunctionalId::energy();
    case BERGER_VOLUME: return berger::FunctionalId::volume();
    case BERGER_GENERALIZED_ENERGY: return berger::FunctionalId::generalized(lambda);
  }
  throw berger::Error(berger::ErrorCode::InvalidArgument, "unknown functional");
}

void copy_text(char* dst, std::size_t cap, const std::string& src) {
  std::strncpy(dst, src.c_str(), cap - 1);
  dst[cap - 1] = '\0';
}

const char* view(const std::string& s, size_t* size) {
  if (size) *size = s.size();
  return s.c_str();
}

}  // namespace

extern "C" {

const char* berger_version(void) { return berger::library_version(); }

const char* berger_last_error(void) { return last_error.c_str(); }

const char* berger_status_name(berger_status status) {
  switch (status) {
    case BERGER_OK: return "ok";
    case BERGER_INVALID_ARGUMENT: return "invalid argument";
    case BERGER_DIMENSION_MISMATCH: return "dimension mismatch";
    case BERGER_NOT_ON_SPHERE: return "not on sphere";
    case BERGER_NOT_TANGENT: return "not tangent";
    case BERGER_DOMAIN_VIOLATION: return "domain violation";
    case BERGER_NOT_IN_CLASS: return "not in hypothesis class";
    case BERGER_INCOMPATIBLE: return "incompatible";
    case BERGER_INTERNAL: return "internal error";
  }
  return "unknown status";
}

berger_status berger_context_create(int m, double mu, berger_context** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    *out = nullptr;
    *out = new berger_context{berger::BergerContext(m, mu)};
  });
}

void berger_context_destroy(berger_context* ctx) { delete ctx; }

berger_status berger_context_info(const berger_context* ctx, int* m, double* mu, int* eps) {
  return guarded([&] {
    require(ctx != nullptr, "context must not be null");
    if (m) *m = ctx->ctx.m();
    if (mu) *mu = ctx->ctx.mu();
    if (eps) *eps = ctx->ctx.eps();
  });
}

berger_status berger_mixed_eigenvalue(int k, int l, double mu, int m, double* out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    *out = berger::mixed_eigenvalue(k, l, mu, m);
  });
}

berger_status berger_c2s_coefficients_get(const berger_context* ctx, double s, const double* lambda,
                                          berger_c2s_coefficients* out) {
  return guarded([&] {
    require(ctx != nullptr && out != nullptr, "context and out must not be null");
    const auto c = berger::hess_c2s_coefficients(s, ctx->ctx.m(), ctx->ctx.mu(),
                                                 lambda ? std::optional<double>(*lambda) : std::nullopt);
    *out = {};
    out->energy = c.energy;
    out->f_vol = c.f_vol;
    out->volume = c.volume;
    out->has_lambda = c.e_lambda.has_value();
    if (c.e_lambda) out->e_lambda = *c.e_lambda;
    if (c.generalized) out->generalized = *c.generalized;
  });
}

berger_status berger_hessian_c2s(const berger_context* ctx, berger_functional functional, double lambda, int s,
                                 double* closed_form, double* exact) {
  return guarded([&] {
    require(ctx != nullptr, "context must not be null");
    require(s >= 1, "s must be positive");
    const auto id = functional_id(functional, lambda);
    const auto field = berger::field_C2s(s, 1, ctx->ctx);
    berger::HessianOptions options;
    options.finite_differences = false;
    options.general_forms = false;
    const auto r = berger::hessian_report(field, id, ctx->ctx, options);
    if (r.verdict == "error") throw berger::Error(berger::ErrorCode::DomainViolation, r.error);
    if (closed_form) *closed_form = r.closed_form;
    if (exact) *exact = r.exact;
  });
}

berger_status berger_classify(const berger_context* ctx, berger_functional functional, double lambda, int s_max,
                              berger_classification* out) {
  return guarded([&] {
    require(ctx != nullptr && out != nullptr, "context and out must not be null");
    require(s_max >= 1, "s_max must be positive");
    const auto c = berger::classify_general(ctx->ctx.m(), ctx->ctx.mu(), functional_id(functional, lambda), s_max);
    *out = {};
    out->region = c.region == berger::Region::Stable     ? BERGER_STABLE
                  : c.region == berger::Region::Unstable ? BERGER_UNSTABLE
                                                         : BERGER_UNKNOWN;
    copy_text(out->predicate, sizeof out->predicate, c.predicate);
    out->has_witness = c.witness.has_value();
    if (c.witness) {
      copy_text(out->witness_family, sizeof out->witness_family, c.witness->family);
      out->witness_s = c.witness->s;
      out->witness_coefficient = c.witness->coefficient;
    }
    out->doubly_classified = c.doubly_classified;
  });
}

berger_status berger_run(const char* command, const char* config_json, berger_result** out) {
  return guarded([&] {
    require(command != nullptr && out != nullptr, "command and out must not be null");
    *out = nullptr;
    nlohmann::json config;
    if (config_json && *config_json) config = nlohmann::json::parse(config_json);
    auto r = berger::run_command(command, config);
    *out = new berger_result{r.exit_code, std::move(r.output), r.report.dump(2), std::move(r.svg)};
  });
}

berger_status berger_run_verify(const char* config_json, berger_result** out) {
  return berger_run("verify", config_json, out);
}

berger_status berger_run_hessian(const char* config_json, berger_result** out) {
  return berger_run("hessian", config_json, out);
}

berger_status berger_run_region(const char* config_json, berger_result** out) {
  return berger_run("region", config_json, out);
}

int berger_result_exit_code(const berger_result* result) { return result ? result->exit_code : -1; }

const char* berger_result_output(const berger_result* result, size_t* size) {
  static const std::string empty;
  return view(result ? result->output : empty, size);
}

const char* berger_result_report(const berger_result* result, size_t* size) {
  static const std::string empty;
  return view(result ? result->report : empty, size);
}

const char* berger_result_svg(const berger_result* result, size_t* size) {
  static const std::string empty;
  return view(result ? result->svg : empty, size);
}

void berger_result_destroy(berger_result* result) { delete result; }

}  // extern "C"
