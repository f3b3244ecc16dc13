#ifndef CYCLIC_CORE_H
#define CYCLIC_CORE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CyclicStatus {
  CyclicStatus_Ok = 0,
  CyclicStatus_NullPointer = 1,
  CyclicStatus_InvalidUtf8 = 2,
  /**
   * The document or arguments were rejected.
   */
  CyclicStatus_InvalidInput = 3,
  CyclicStatus_Panic = 4,
} CyclicStatus;

/**
 * A parsed input document.
 */
typedef struct CyclicDocument CyclicDocument;

/**
 * The result of running a command on a document.
 */
typedef struct CyclicReport CyclicReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread. Valid until the next failing call on the same thread.
 */
const char *cyclic_last_error(void);

/**
 * Parse a JSON input document. On success `*out` owns a handle to free with [`cyclic_document_free`].
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum CyclicStatus cyclic_document_parse(const char *json,
                                        struct CyclicDocument **out);

/**
 * # Safety
 * `doc` must come from [`cyclic_document_parse`] and not be freed twice. Null is ignored.
 */
void cyclic_document_free(struct CyclicDocument *doc);

/**
 * Run `command` (`validate`, `hh`, `hc`, `equiv`, `enhance`, `ss` or `cy`) on a document.
 *
 * `variant` may be null. It selects the flavor for `hc` and `equiv` and the mode for `cy`;
 * other parameters come from the document's `job` section.
 *
 * # Safety
 * `doc` must be a live document handle, `command` a NUL-terminated string, `variant` null or
 * NUL-terminated, and `out` writable.
 */
enum CyclicStatus cyclic_run(const struct CyclicDocument *doc,
                             const char *command,
                             const char *variant,
                             struct CyclicReport **out);

/**
 * Canonical JSON of a report, owned by the handle.
 *
 * # Safety
 * `report` must be a live report handle.
 */
const char *cyclic_report_json(const struct CyclicReport *report);

/**
 * The exit code the `cyclic` binary would return for this report: 0 pass, 1 fail, 3 uncertified.
 *
 * # Safety
 * `report` must be a live report handle.
 */
int32_t cyclic_report_exit_code(const struct CyclicReport *report, bool require_certified);

/**
 * # Safety
 * `report` must come from [`cyclic_run`] and not be freed twice. Null is ignored.
 */
void cyclic_report_free(struct CyclicReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CYCLIC_CORE_H */
