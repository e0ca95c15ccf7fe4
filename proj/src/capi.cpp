#include "crhull/crhull.h"

#include <fstream>
#include <sstream>
#include <string>

#include "crhull/certify.hpp"
#include "crhull/commands.hpp"
#include "crhull/error.hpp"
#include "crhull/manifest.hpp"
#include "crhull/normalform.hpp"
#include "crhull/numerics.hpp"

struct crhull_manifest {
  crhull::Manifest manifest;
  std::string canonical;
  std::string fingerprint;
};

struct crhull_report {
  crhull::Report report;
};

namespace {

thread_local std::string last_error;

crhull_status map(crhull::ErrorCode code) {
  using crhull::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return CRHULL_ERR_INVALID_ARGUMENT;
    case ErrorCode::Domain: return CRHULL_ERR_DOMAIN;
    case ErrorCode::Arity: return CRHULL_ERR_ARITY;
    case ErrorCode::OutOfDomain: return CRHULL_ERR_OUT_OF_DOMAIN;
    case ErrorCode::NonHyperbolic: return CRHULL_ERR_NON_HYPERBOLIC;
    case ErrorCode::SingularJacobian: return CRHULL_ERR_SINGULAR_JACOBIAN;
    case ErrorCode::DegenerateJet: return CRHULL_ERR_DEGENERATE_JET;
    case ErrorCode::OffLocus: return CRHULL_ERR_OFF_LOCUS;
    case ErrorCode::BranchDomain: return CRHULL_ERR_BRANCH_DOMAIN;
    case ErrorCode::OrderTwoViolation: return CRHULL_ERR_ORDER_TWO_VIOLATION;
    case ErrorCode::NotFlat: return CRHULL_ERR_NOT_FLAT;
    case ErrorCode::IllConditioned: return CRHULL_ERR_ILL_CONDITIONED;
    case ErrorCode::Schema: return CRHULL_ERR_SCHEMA;
  }
  return CRHULL_ERR_INTERNAL;
}

crhull_status fail(crhull_status s, std::string message) {
  last_error = std::move(message);
  return s;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
crhull_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const crhull::Error& e) {
    return fail(map(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(CRHULL_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CRHULL_ERR_INTERNAL, e.what());
  }
}

crhull::RunOptions convert(const crhull_run_options* o) {
  crhull::RunOptions r;
  if (!o) return r;
  if (o->grid_radial > 0 && o->grid_angular > 0) {
    r.grid_radial = o->grid_radial;
    r.grid_angular = o->grid_angular;
  }
  if (o->t_grid > 0) r.t_grid = o->t_grid;
  if (o->degree > 0) r.degree = o->degree;
  if (o->tol > 0.0) r.tol = o->tol;
  if (o->has_seed) r.seed = o->seed;
  r.timing = o->timing != 0;
  return r;
}

}  // namespace

extern "C" {

const char* crhull_version(void) { return crhull::kToolVersion; }

const char* crhull_status_string(crhull_status status) {
  switch (status) {
    case CRHULL_OK: return "ok";
    case CRHULL_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case CRHULL_ERR_DOMAIN: return "domain";
    case CRHULL_ERR_ARITY: return "arity-mismatch";
    case CRHULL_ERR_OUT_OF_DOMAIN: return "out-of-domain";
    case CRHULL_ERR_NON_HYPERBOLIC: return "non-hyperbolic";
    case CRHULL_ERR_SINGULAR_JACOBIAN: return "singular-jacobian";
    case CRHULL_ERR_DEGENERATE_JET: return "degenerate-jet";
    case CRHULL_ERR_OFF_LOCUS: return "off-locus";
    case CRHULL_ERR_BRANCH_DOMAIN: return "branch-domain";
    case CRHULL_ERR_ORDER_TWO_VIOLATION: return "order-two-in-w-violation";
    case CRHULL_ERR_NOT_FLAT: return "not-flat";
    case CRHULL_ERR_ILL_CONDITIONED: return "ill-conditioned";
    case CRHULL_ERR_SCHEMA: return "schema";
    case CRHULL_ERR_IO: return "io";
    case CRHULL_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* crhull_last_error(void) { return last_error.c_str(); }

crhull_status crhull_manifest_parse(const char* text, size_t length, crhull_manifest** out) {
  if (!out) return fail(CRHULL_ERR_INVALID_ARGUMENT, "out is null");
  *out = nullptr;
  if (!text) return fail(CRHULL_ERR_INVALID_ARGUMENT, "text is null");
  return guarded([&] {
    auto h = std::make_unique<crhull_manifest>();
    h->manifest = crhull::parse_manifest(std::string_view(text, length));
    h->canonical = crhull::serialize_manifest(h->manifest);
    h->fingerprint = crhull::fingerprint(h->manifest);
    *out = h.release();
    return CRHULL_OK;
  });
}

crhull_status crhull_manifest_load(const char* path, crhull_manifest** out) {
  if (!out) return fail(CRHULL_ERR_INVALID_ARGUMENT, "out is null");
  *out = nullptr;
  if (!path) return fail(CRHULL_ERR_INVALID_ARGUMENT, "path is null");
  std::ifstream in(path, std::ios::binary);
  if (!in) return fail(CRHULL_ERR_IO, std::string("cannot open ") + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  return crhull_manifest_parse(text.data(), text.size(), out);
}

void crhull_manifest_destroy(crhull_manifest* manifest) { delete manifest; }

size_t crhull_manifest_diagnostic_count(const crhull_manifest* manifest) {
  return manifest ? manifest->manifest.diagnostics.size() : 0;
}

const char* crhull_manifest_diagnostic(const crhull_manifest* manifest, size_t index) {
  if (!manifest || index >= manifest->manifest.diagnostics.size()) return nullptr;
  return manifest->manifest.diagnostics[index].c_str();
}

const char* crhull_manifest_canonical(const crhull_manifest* manifest) {
  return manifest ? manifest->canonical.c_str() : nullptr;
}

const char* crhull_manifest_fingerprint(const crhull_manifest* manifest) {
  return manifest ? manifest->fingerprint.c_str() : nullptr;
}

void crhull_run_options_init(crhull_run_options* options) {
  if (options) *options = crhull_run_options{0, 0, 0, 0, 0.0, 0, 0, 0};
}

crhull_status crhull_run(const crhull_manifest* manifest, const char* command,
                         const crhull_run_options* options, crhull_report** out) {
  if (!out) return fail(CRHULL_ERR_INVALID_ARGUMENT, "out is null");
  *out = nullptr;
  if (!manifest || !command) return fail(CRHULL_ERR_INVALID_ARGUMENT, "manifest or command is null");
  return guarded([&] {
    *out = new crhull_report{crhull::run_command(manifest->manifest, command, convert(options))};
    return CRHULL_OK;
  });
}

crhull_status crhull_run_text(const char* text, size_t length, const char* command,
                              const crhull_run_options* options, crhull_report** out) {
  if (!out) return fail(CRHULL_ERR_INVALID_ARGUMENT, "out is null");
  *out = nullptr;
  if (!text || !command) return fail(CRHULL_ERR_INVALID_ARGUMENT, "text or command is null");
  return guarded([&] {
    *out = new crhull_report{
        crhull::run_command_text(std::string_view(text, length), command, convert(options))};
    return CRHULL_OK;
  });
}

void crhull_report_destroy(crhull_report* report) { delete report; }

const char* crhull_report_json(const crhull_report* report) {
  return report ? report->report.json.c_str() : nullptr;
}

const char* crhull_report_csv(const crhull_report* report) {
  return report ? report->report.csv.c_str() : nullptr;
}

const char* crhull_report_verdict(const crhull_report* report) {
  return report ? crhull::to_string(report->report.verdict) : nullptr;
}

int crhull_report_exit_code(const crhull_report* report) {
  return report ? crhull::exit_code(report->report.verdict) : 2;
}

size_t crhull_command_count(void) { return crhull::command_names().size(); }

const char* crhull_command_name(size_t index) {
  const auto& names = crhull::command_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

crhull_status crhull_sqrt1p_deviation(double re, double im, double* out_re, double* out_im) {
  if (!out_re || !out_im) return fail(CRHULL_ERR_INVALID_ARGUMENT, "output is null");
  return guarded([&] {
    const crhull::Complex q = crhull::sqrt1p_deviation({re, im});
    *out_re = q.real();
    *out_im = q.imag();
    return CRHULL_OK;
  });
}

crhull_status crhull_normal_form_threshold(double gamma, double* out) {
  if (!out) return fail(CRHULL_ERR_INVALID_ARGUMENT, "output is null");
  return guarded([&] {
    *out = crhull::normal_form_threshold(gamma);
    return CRHULL_OK;
  });
}

crhull_status crhull_certify_radius(double gamma, const crhull_term* terms, size_t count, double R,
                                    crhull_radius* out) {
  if (!out || (count > 0 && !terms)) return fail(CRHULL_ERR_INVALID_ARGUMENT, "null pointer");
  return guarded([&] {
    crhull::BiPoly F(0);
    for (size_t i = 0; i < count; ++i) {
      if (terms[i].b < 0 || terms[i].c < 0)
        throw crhull::Error(crhull::ErrorCode::InvalidArgument, "negative exponent");
      if (terms[i].b + terms[i].c < 3)
        throw crhull::Error(crhull::ErrorCode::InvalidArgument,
                            "F order-3 violation at " +
                                crhull::describe(crhull::Monomial{{}, terms[i].b, terms[i].c}));
      F.add_term(crhull::Monomial{{}, terms[i].b, terms[i].c}, {terms[i].re, terms[i].im});
    }
    const crhull::CertifiedRadius cr = crhull::certify_radius(gamma, F, R);
    *out = crhull_radius{cr.r, cr.threshold, cr.c2_at_r, cr.bisection_steps, cr.certified ? 1 : 0};
    return CRHULL_OK;
  });
}

}  // extern "C"
