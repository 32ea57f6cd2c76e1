#ifndef DRG_H
#define DRG_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum DrgStatus {
  DRG_STATUS_OK = 0,
  /*
   A null pointer or out-of-range argument.
   */
  DRG_STATUS_INVALID_ARGUMENT = 1,
  /*
   Malformed array, graph or family text.
   */
  DRG_STATUS_PARSE_ERROR = 2,
  /*
   An internal invariant failed.
   */
  DRG_STATUS_INTERNAL = 3,
  /*
   A search hit its time limit.
   */
  DRG_STATUS_TIMEOUT = 4,
  /*
   The caller's buffer is too small; the required size was written.
   */
  DRG_STATUS_BUFFER_TOO_SMALL = 5,
  /*
   The requested object does not exist (for instance, no array for a
   graph that is not distance-regular).
   */
  DRG_STATUS_NOT_FOUND = 6,
  /*
   The array is infeasible, so the requested data is undefined.
   */
  DRG_STATUS_INFEASIBLE = 7,
  DRG_STATUS_PANIC = 8,
} DrgStatus;

typedef enum DrgCoreTag {
  DRG_CORE_TAG_BIPARTITE_CORE_K2 = 0,
  DRG_CORE_TAG_PROVEN_CORE = 1,
  DRG_CORE_TAG_PROVEN_CORE_COMPLETE = 2,
  DRG_CORE_TAG_SMALLER_DIAMETER_CANDIDATE = 3,
  DRG_CORE_TAG_NO_SMALL_DIAMETER_ENDOMORPHISM = 4,
  DRG_CORE_TAG_INCONCLUSIVE = 5,
} DrgCoreTag;

typedef enum DrgGraphFormat {
  DRG_GRAPH_FORMAT_EDGE_LIST = 0,
  DRG_GRAPH_FORMAT_GRAPH6 = 1,
} DrgGraphFormat;

typedef enum DrgHomResult {
  DRG_HOM_RESULT_FOUND = 0,
  DRG_HOM_RESULT_NO_HOMOMORPHISM = 1,
  DRG_HOM_RESULT_UNKNOWN = 2,
} DrgHomResult;

/*
 Opaque intersection array.
 */
typedef struct DrgArray DrgArray;

/*
 Opaque simple graph.
 */
typedef struct DrgGraph DrgGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or null. The pointer
 stays valid until the next `drg_*` call on the same thread.
 */
const char *drg_last_error_message(void);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must come from this library and not have been freed already.
 */
void drg_string_free(char *s);

/*
 Parses `{b0,...;c1,...}`.

 # Safety
 `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum DrgStatus drg_array_parse(const char *text_, struct DrgArray **out);

/*
 # Safety
 `a` must come from [`drg_array_parse`] or be null.
 */
void drg_array_free(struct DrgArray *a);

/*
 # Safety
 Pointers must be valid.
 */
enum DrgStatus drg_array_diameter(const struct DrgArray *a, uintptr_t *out);

/*
 Whether the array passes every feasibility check.

 # Safety
 Pointers must be valid.
 */
enum DrgStatus drg_array_is_feasible(const struct DrgArray *a, bool *out);

/*
 Full analysis as a JSON document.

 # Safety
 Pointers must be valid; free `*out` with [`drg_string_free`].
 */
enum DrgStatus drg_array_analyze_json(const struct DrgArray *a, char **out);

/*
 Core verdict of a feasible array.

 # Safety
 Pointers must be valid.
 */
enum DrgStatus drg_array_verdict(const struct DrgArray *a, enum DrgCoreTag *out);

/*
 Writes the triples for image diameter `e` as `α, β, γ` groups into
 `buf` (capacity `cap` integers) and their number to `count`. With
 `DRG_STATUS_BUFFER_TOO_SMALL`, `count` still holds the number of triples.

 # Safety
 `buf` must have room for `cap` values (it may be null when `cap` is 0).
 */
enum DrgStatus drg_array_triples(const struct DrgArray *a,
                                 uintptr_t e,
                                 uint64_t *buf,
                                 uintptr_t cap,
                                 uintptr_t *count);

/*
 Feasible arrays of diameter `d` with valency up to `k_max` as JSON lines.
 `family` is `primitive`, `antipodal`, `bipartite` or `all`.

 # Safety
 Pointers must be valid; free `*out` with [`drg_string_free`].
 */
enum DrgStatus drg_enumerate_jsonl(uintptr_t d, uint64_t k_max, const char *family, char **out);

/*
 # Safety
 `text` must be NUL-terminated and `out` valid.
 */
enum DrgStatus drg_graph_parse(const char *text_,
                               enum DrgGraphFormat format,
                               struct DrgGraph **out);

/*
 Builds a named graph such as `kneser(7,3)`, `hamming(3,3)` or `petersen`.

 # Safety
 `spec` must be NUL-terminated and `out` valid.
 */
enum DrgStatus drg_graph_named(const char *spec, struct DrgGraph **out);

/*
 # Safety
 `g` must come from this library or be null.
 */
void drg_graph_free(struct DrgGraph *g);

/*
 # Safety
 Pointers must be valid.
 */
enum DrgStatus drg_graph_vertex_count(const struct DrgGraph *g, uintptr_t *out);

/*
 Intersection array of a distance-regular graph as text;
 `DRG_STATUS_NOT_FOUND` if the graph is not distance-regular.

 # Safety
 Pointers must be valid; free `*out` with [`drg_string_free`].
 */
enum DrgStatus drg_graph_recognize(const struct DrgGraph *g, char **out);

/*
 Searches for a homomorphism `x → y`. On `DRG_HOM_RESULT_FOUND` the image of
 vertex `i` is in `image[i]`; `image` needs room for the vertex count of `x`.
 A non-positive `timeout_seconds` means no limit. Hitting the limit sets
 `result` to `DRG_HOM_RESULT_UNKNOWN` and returns `DRG_STATUS_TIMEOUT`.

 # Safety
 Pointers must be valid and `image` must hold `cap` entries.
 */
enum DrgStatus drg_graph_search_hom(const struct DrgGraph *x,
                                    const struct DrgGraph *y,
                                    double timeout_seconds,
                                    uintptr_t *image,
                                    uintptr_t cap,
                                    enum DrgHomResult *result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DRG_H */
