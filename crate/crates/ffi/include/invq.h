#ifndef INVQ_H
#define INVQ_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define INVQ_OK 0

// A required pointer argument was null.
#define INVQ_ERR_NULL 1

// Bad predicate, parameter, algorithm or query ids.
#define INVQ_ERR_INVALID 2

// Coordinates were not finite or dimensions disagree.
#define INVQ_ERR_DATA 3

// Duplicate object id in the input.
#define INVQ_ERR_DUPLICATE_ID 4

// A Rust panic was caught at the boundary.
#define INVQ_ERR_PANIC 5

#define INVQ_ERR_OTHER 6

#define INVQ_PRED_EPS 0

#define INVQ_PRED_KNN 1

#define INVQ_PRED_SKYLINE 2

#define INVQ_ALGO_MQF 0

#define INVQ_ALGO_SQF 1

#define INVQ_ALGO_NAIVE 2

// Opaque query result.
typedef struct InvqResult InvqResult;

// Opaque aggregate R-tree.
typedef struct InvqTree InvqTree;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread. The pointer stays valid
// until the next failing call on the same thread.
const char *invq_last_error(void);

// Builds a tree over `n` points of dimension `dim`, stored row-major in
// `coords`. `ids` may be null, in which case ids are `0..n`. A `page_size`
// of 0 selects 1024 bytes.
//
// # Safety
// `coords` must point to `n * dim` doubles, `ids` (if non-null) to `n`
// integers, and `out` must be writable.
int32_t invq_tree_build(const double *coords,
                        const uint64_t *ids,
                        size_t n,
                        size_t dim,
                        size_t page_size,
                        struct InvqTree **out);

// # Safety
// `tree` must be null or a handle from [`invq_tree_build`] not yet freed.
void invq_tree_free(struct InvqTree *tree);

// Number of objects, or 0 for a null handle.
//
// # Safety
// `tree` must be null or a live handle.
size_t invq_tree_len(const struct InvqTree *tree);

// # Safety
// `tree` must be null or a live handle.
size_t invq_tree_dim(const struct InvqTree *tree);

// Runs an inverse query whose query objects are the objects of `tree` with
// ids `query_ids[0..m]`. `param` is ε for range queries, k for kNN and is
// ignored for skylines. When `candidates` is non-null the query is
// bichromatic and results are drawn from that tree. `seed` only affects SQF's
// pivot choice.
//
// # Safety
// `tree` must be a live handle, `candidates` null or a live handle,
// `query_ids` must point to `m` integers and `out` must be writable.
int32_t invq_query(const struct InvqTree *tree,
                   const struct InvqTree *candidates,
                   int32_t predicate_kind,
                   double param,
                   const uint64_t *query_ids,
                   size_t m,
                   int32_t algo,
                   uint64_t seed,
                   struct InvqResult **out);

// # Safety
// `res` must be null or a handle from [`invq_query`] not yet freed.
void invq_result_free(struct InvqResult *res);

// Number of result ids.
//
// # Safety
// `res` must be null or a live handle.
size_t invq_result_len(const struct InvqResult *res);

// Copies up to `cap` result ids, in ascending order, into `buf` and returns
// the total number of results.
//
// # Safety
// `res` must be null or a live handle and `buf` must have room for `cap`
// integers (it may be null when `cap` is 0).
size_t invq_result_ids(const struct InvqResult *res, uint64_t *buf, size_t cap);

// Index nodes read while answering the query.
//
// # Safety
// `res` must be null or a live handle.
uint64_t invq_result_node_reads(const struct InvqResult *res);

// 1 when the answer was proved empty before touching the index.
//
// # Safety
// `res` must be null or a live handle.
int32_t invq_result_validated_empty(const struct InvqResult *res);

// Wall-clock time of the query in milliseconds.
//
// # Safety
// `res` must be null or a live handle.
double invq_result_time_ms(const struct InvqResult *res);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* INVQ_H */
