#ifndef KBPKIT_H
#define KBPKIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum KbpMode {
  KBP_MODE_AUTO = 0,
  KBP_MODE_FIXPOINT = 1,
  KBP_MODE_EPISTEMIC = 2,
  KBP_MODE_POSITIVE = 3,
  KBP_MODE_SEQUENCE = 4,
  KBP_MODE_BOUNDED = 5,
  KBP_MODE_WFOE = 6,
} KbpMode;

typedef enum KbpStatus {
  KBP_STATUS_OK = 0,
  KBP_STATUS_NULL_ARGUMENT = 1,
  KBP_STATUS_INVALID_UTF8 = 2,
  KBP_STATUS_SYNTAX = 3,
  /**
   * The problem or plan is well-formed but fails validation.
   */
  KBP_STATUS_INVALID = 4,
  KBP_STATUS_NON_TERMINATING = 5,
  KBP_STATUS_LIMIT_EXCEEDED = 6,
  KBP_STATUS_PRECONDITION = 7,
  KBP_STATUS_PANIC = 8,
} KbpStatus;

typedef enum KbpVerdict {
  KBP_VERDICT_VALID = 0,
  KBP_VERDICT_INVALID = 1,
  KBP_VERDICT_NON_TERMINATING = 2,
  KBP_VERDICT_EXISTS = 3,
  KBP_VERDICT_NONE = 4,
  KBP_VERDICT_UNKNOWN = 5,
} KbpVerdict;

/**
 * A program over the actions of some problem.
 */
typedef struct KbpPlan KbpPlan;

/**
 * A parsed and validated planning problem.
 */
typedef struct KbpProblem KbpProblem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Owned by the
 * library; valid until the next call.
 */
const char *kbp_last_error(void);

/**
 * Parses a problem file.
 *
 * # Safety
 * `source` must be a nul-terminated string; `out` must be writable.
 */
enum KbpStatus kbp_problem_parse(const char *source, struct KbpProblem **out);

/**
 * # Safety
 * `problem` must come from [`kbp_problem_parse`] (or be null) and not be
 * used afterwards.
 */
void kbp_problem_free(struct KbpProblem *problem);

/**
 * Parses a program and checks that its actions belong to `problem`.
 *
 * # Safety
 * Pointers must be valid; `source` nul-terminated.
 */
enum KbpStatus kbp_plan_parse(const struct KbpProblem *problem,
                              const char *source,
                              struct KbpPlan **out);

/**
 * # Safety
 * `plan` must come from this library (or be null) and not be used
 * afterwards.
 */
void kbp_plan_free(struct KbpPlan *plan);

/**
 * Program size: actions count 1, conditions their formula size.
 *
 * # Safety
 * `plan` must be valid or null (size 0).
 */
size_t kbp_plan_size(const struct KbpPlan *plan);

/**
 * Writes the canonical text of `plan` to `*out`; free it with
 * [`kbp_string_free`].
 *
 * # Safety
 * Pointers must be valid.
 */
enum KbpStatus kbp_plan_to_string(const struct KbpProblem *problem,
                                  const struct KbpPlan *plan,
                                  char **out);

/**
 * # Safety
 * `s` must come from this library (or be null) and not be used afterwards.
 */
void kbp_string_free(char *s);

/**
 * Decides whether `plan` is valid for `problem`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum KbpStatus kbp_verify(const struct KbpProblem *problem,
                          const struct KbpPlan *plan,
                          enum KbpVerdict *verdict);

/**
 * Decides plan existence. A negative `bound` means the problem's own bound
 * (if any). On `KBP_VERDICT_EXISTS`, `*witness` receives a plan handle;
 * otherwise it is set to null. `witness` may be null.
 *
 * # Safety
 * Pointers must be valid.
 */
enum KbpStatus kbp_solve(const struct KbpProblem *problem,
                         enum KbpMode mode,
                         int64_t bound,
                         enum KbpVerdict *verdict,
                         struct KbpPlan **witness);

/**
 * Compiles `plan` into an equivalent standard policy.
 *
 * # Safety
 * Pointers must be valid.
 */
enum KbpStatus kbp_compile(const struct KbpProblem *problem,
                           const struct KbpPlan *plan,
                           struct KbpPlan **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KBPKIT_H */
