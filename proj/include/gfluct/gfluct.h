#ifndef GFLUCT_GFLUCT_H
#define GFLUCT_GFLUCT_H

#include <stddef.h>

#if defined(GFLUCT_BUILDING_LIBRARY)
#define GF_API __attribute__((visibility("default")))
#else
#define GF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gf_status {
  GF_OK = 0,
  GF_ERR_VALIDATION = 1,
  GF_ERR_DOMAIN = 2,
  GF_ERR_RANGE = 3,
  GF_ERR_RESOURCE_GUARD = 4,
  GF_ERR_REGIME_DIVERGENT = 5,
  GF_ERR_REGIME_UNKNOWN = 6,
  GF_ERR_IO = 7,
  GF_ERR_INTERNAL = 8
} gf_status;

typedef struct gf_graphon gf_graphon;

/* Per-thread record of the last failure. The message stays valid until the
   next call on the same thread. */
GF_API gf_status gf_last_error_code(void);
GF_API const char* gf_last_error_message(void);
GF_API const char* gf_status_name(gf_status s); /* "REGIME_DIVERGENT", ... */
/* Exit status convention: 2 resource guard, 3 regime divergent, 1 otherwise. */
GF_API int gf_status_exit_code(gf_status s);

GF_API const char* gf_version(void);

/* Request handlers. `request_json` is a JSON object; on success *out receives
   a JSON document (with an embedded run manifest) to be released with
   gf_string_free. On failure *out is NULL. */
GF_API gf_status gf_catalog(const char* request_json, char** out);
GF_API gf_status gf_theory(const char* request_json, char** out);
GF_API gf_status gf_simulate(const char* request_json, char** out);
GF_API gf_status gf_compare(const char* request_json, char** out);
GF_API gf_status gf_oracle(const char* request_json, char** out);

/* Flat CSV table (17 significant digits) of a result document. */
GF_API gf_status gf_result_csv(const char* result_json, char** out);

/* Edge list "u v" per line of one sampled graph for a simulate-style request
   (optional "replicate" field, default 0). */
GF_API gf_status gf_sample_edge_list(const char* request_json, char** out);

GF_API void gf_string_free(char* s);

/* Step graphons. `values` is row-major k x k; `measures` may be NULL for
   uniform blocks. */
GF_API gf_status gf_graphon_from_blocks(const double* values, size_t k, const double* measures,
                                        gf_graphon** out);
GF_API gf_status gf_graphon_load(const char* path, gf_graphon** out);
GF_API void gf_graphon_free(gf_graphon* w);
GF_API size_t gf_graphon_block_count(const gf_graphon* w);
GF_API gf_status gf_graphon_transform_prime(const gf_graphon* w, double p, gf_graphon** out);
GF_API gf_status gf_graphon_l1_distance(const gf_graphon* a, const gf_graphon* b, double* out);

/* t(F, W) for the multigraph on `vertices` vertices whose edges are
   (a[i], b[i]) with multiplicity mult[i] (mult may be NULL for all ones). */
GF_API gf_status gf_hom_density(const gf_graphon* w, unsigned vertices, const unsigned* a,
                                const unsigned* b, const unsigned* mult, size_t edges,
                                double* out);

#ifdef __cplusplus
}
#endif

#endif
