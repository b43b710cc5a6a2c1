#include "gfluct/gfluct.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "gfluct/error.hpp"
#include "gfluct/requests.hpp"

struct gf_graphon {
  gfluct::StepGraphon W;
};

namespace {

thread_local gf_status last_code = GF_OK;
thread_local std::string last_message;

gf_status status_of(gfluct::ErrorKind k) {
  using gfluct::ErrorKind;
  switch (k) {
    case ErrorKind::Validation: return GF_ERR_VALIDATION;
    case ErrorKind::Domain: return GF_ERR_DOMAIN;
    case ErrorKind::Range: return GF_ERR_RANGE;
    case ErrorKind::Resource: return GF_ERR_RESOURCE_GUARD;
    case ErrorKind::RegimeDivergent: return GF_ERR_REGIME_DIVERGENT;
    case ErrorKind::RegimeUnknown: return GF_ERR_REGIME_UNKNOWN;
    case ErrorKind::Io: return GF_ERR_IO;
  }
  return GF_ERR_INTERNAL;
}

gf_status set_error(gf_status s, std::string msg) {
  last_code = s;
  last_message = std::move(msg);
  return s;
}

// Runs f, translating exceptions into status codes.
template <class F>
gf_status guarded(F&& f) {
  try {
    f();
    last_code = GF_OK;
    last_message.clear();
    return GF_OK;
  } catch (const gfluct::Error& e) {
    return set_error(status_of(e.kind()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return set_error(GF_ERR_VALIDATION, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(GF_ERR_RESOURCE_GUARD, "out of memory");
  } catch (const std::exception& e) {
    return set_error(GF_ERR_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

gfluct::Json parse_request(const char* text) {
  gfluct::require(text != nullptr, gfluct::ErrorKind::Validation, "null request");
  try {
    return gfluct::Json::parse(text);
  } catch (const gfluct::Json::parse_error& e) {
    gfluct::fail(gfluct::ErrorKind::Validation, std::string("request is not JSON: ") + e.what());
  }
}

gf_status run_handler(const char* name, const char* request, char** out) {
  if (!out) return set_error(GF_ERR_VALIDATION, "null output pointer");
  *out = nullptr;
  return guarded([&] { *out = dup_string(gfluct::dispatch_request(name, parse_request(request)).dump()); });
}

}  // namespace

extern "C" {

gf_status gf_last_error_code(void) { return last_code; }
const char* gf_last_error_message(void) { return last_message.c_str(); }

const char* gf_status_name(gf_status s) {
  switch (s) {
    case GF_OK: return "OK";
    case GF_ERR_VALIDATION: return "VALIDATION";
    case GF_ERR_DOMAIN: return "DOMAIN";
    case GF_ERR_RANGE: return "RANGE";
    case GF_ERR_RESOURCE_GUARD: return "RESOURCE_GUARD";
    case GF_ERR_REGIME_DIVERGENT: return "REGIME_DIVERGENT";
    case GF_ERR_REGIME_UNKNOWN: return "REGIME_UNKNOWN";
    case GF_ERR_IO: return "IO";
    case GF_ERR_INTERNAL: return "INTERNAL";
  }
  return "INTERNAL";
}

int gf_status_exit_code(gf_status s) {
  switch (s) {
    case GF_OK: return 0;
    case GF_ERR_RESOURCE_GUARD: return 2;
    case GF_ERR_REGIME_DIVERGENT: return 3;
    default: return 1;
  }
}

const char* gf_version(void) { return gfluct::version_string(); }

gf_status gf_catalog(const char* r, char** out) { return run_handler("catalog", r, out); }
gf_status gf_theory(const char* r, char** out) { return run_handler("theory", r, out); }
gf_status gf_simulate(const char* r, char** out) { return run_handler("simulate", r, out); }
gf_status gf_compare(const char* r, char** out) { return run_handler("compare", r, out); }
gf_status gf_oracle(const char* r, char** out) { return run_handler("oracle", r, out); }

gf_status gf_result_csv(const char* result, char** out) {
  if (!out) return set_error(GF_ERR_VALIDATION, "null output pointer");
  *out = nullptr;
  return guarded([&] { *out = dup_string(gfluct::result_table_csv(parse_request(result))); });
}

gf_status gf_sample_edge_list(const char* request, char** out) {
  if (!out) return set_error(GF_ERR_VALIDATION, "null output pointer");
  *out = nullptr;
  return guarded([&] { *out = dup_string(gfluct::handle_sample(parse_request(request))); });
}

void gf_string_free(char* s) { std::free(s); }

gf_status gf_graphon_from_blocks(const double* values, size_t k, const double* measures,
                                 gf_graphon** out) {
  if (!out) return set_error(GF_ERR_VALIDATION, "null output pointer");
  *out = nullptr;
  return guarded([&] {
    gfluct::require(values != nullptr && k > 0, gfluct::ErrorKind::Validation, "empty block matrix");
    const auto n = static_cast<Eigen::Index>(k);
    Eigen::MatrixXd B(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) B(i, j) = values[i * n + j];
    std::vector<double> m;
    if (measures) m.assign(measures, measures + k);
    *out = new gf_graphon{gfluct::StepGraphon(B, m)};
  });
}

gf_status gf_graphon_load(const char* path, gf_graphon** out) {
  if (!out) return set_error(GF_ERR_VALIDATION, "null output pointer");
  *out = nullptr;
  return guarded([&] {
    gfluct::require(path != nullptr, gfluct::ErrorKind::Validation, "null path");
    *out = new gf_graphon{gfluct::load_graphon(path)};
  });
}

void gf_graphon_free(gf_graphon* w) { delete w; }

size_t gf_graphon_block_count(const gf_graphon* w) { return w ? w->W.block_count() : 0; }

gf_status gf_graphon_transform_prime(const gf_graphon* w, double p, gf_graphon** out) {
  if (!out || !w) return set_error(GF_ERR_VALIDATION, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new gf_graphon{gfluct::transform_prime(w->W, p)}; });
}

gf_status gf_graphon_l1_distance(const gf_graphon* a, const gf_graphon* b, double* out) {
  if (!a || !b || !out) return set_error(GF_ERR_VALIDATION, "null argument");
  return guarded([&] { *out = gfluct::l1_distance(a->W, b->W); });
}

gf_status gf_hom_density(const gf_graphon* w, unsigned vertices, const unsigned* a,
                         const unsigned* b, const unsigned* mult, size_t edges, double* out) {
  if (!w || !out || (edges > 0 && (!a || !b))) return set_error(GF_ERR_VALIDATION, "null argument");
  return guarded([&] {
    gfluct::Multigraph F(vertices);
    for (size_t e = 0; e < edges; ++e) F.add_edge(a[e], b[e], mult ? mult[e] : 1u);
    *out = gfluct::hom_density(F, w->W);
  });
}

}  // extern "C"
