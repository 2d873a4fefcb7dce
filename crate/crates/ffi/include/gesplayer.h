#ifndef GESPLAYER_H
#define GESPLAYER_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GpStatus {
  GP_STATUS_OK = 0,
  GP_STATUS_NULL_POINTER = 1,
  GP_STATUS_INVALID_UTF8 = 2,
  GP_STATUS_MALFORMED_RECORD = 3,
  GP_STATUS_SCHEMA_VIOLATION = 4,
  GP_STATUS_VALUE_OUT_OF_RANGE = 5,
  GP_STATUS_NON_MONOTONIC_TIMESTAMP = 6,
  GP_STATUS_INVALID_CONFIG = 7,
  GP_STATUS_SEGMENT_TOO_SHORT = 8,
  GP_STATUS_PANIC = 99,
} GpStatus;

typedef enum GpKind {
  GP_KIND_SEEK = 0,
  GP_KIND_VOLUME = 1,
  GP_KIND_BRIGHTNESS = 2,
} GpKind;

typedef enum GpPhase {
  GP_PHASE_BEGIN = 0,
  GP_PHASE_UPDATE = 1,
  GP_PHASE_END = 2,
} GpPhase;

/**
 * Opaque session handle.
 */
typedef struct GpSession GpSession;

typedef struct GpCommand {
  uint64_t t_ms;
  enum GpKind kind;
  enum GpPhase phase;
  /**
   * In [0, 1].
   */
  double value;
} GpCommand;

typedef struct GpPlayer {
  double position;
  double volume;
  double brightness;
  bool playing;
} GpPlayer;

typedef struct GpProjection {
  double t;
  double dist;
} GpProjection;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a session. `config_text` is a NUL-terminated `key = value`
 * configuration, or NULL for defaults.
 *
 * # Safety
 * `config_text` must be NULL or a valid C string; `out` must be a valid
 * pointer to writable storage for one handle.
 */
enum GpStatus gp_session_new(const char *config_text, struct GpSession **out);

/**
 * Releases a session. NULL is ignored.
 *
 * # Safety
 * `session` must be NULL or a handle from `gp_session_new` not yet freed.
 */
void gp_session_free(struct GpSession *session);

/**
 * Feeds one wire-format frame record (no trailing newline required).
 * Resulting commands are queued for `gp_session_next_command`. A rejected
 * record leaves the session unchanged.
 *
 * # Safety
 * `session` must be a live handle; `record` must point to `len` readable bytes.
 */
enum GpStatus gp_session_push_frame(struct GpSession *session, const uint8_t *record, size_t len);

/**
 * Number of queued commands.
 *
 * # Safety
 * `session` must be NULL or a live handle.
 */
size_t gp_session_pending(const struct GpSession *session);

/**
 * Pops the oldest queued command into `out`. Returns false when the queue
 * is empty or an argument is NULL.
 *
 * # Safety
 * `session` must be a live handle; `out` must be writable.
 */
bool gp_session_next_command(struct GpSession *session, struct GpCommand *out);

/**
 * Current player model of the session.
 *
 * # Safety
 * `session` must be a live handle; `out` must be writable.
 */
enum GpStatus gp_session_player(const struct GpSession *session, struct GpPlayer *out);

/**
 * Clamped projection of (px, py) onto the segment (ox, oy) → (tx, ty).
 *
 * # Safety
 * `out` must be writable.
 */
enum GpStatus gp_project_clamped(double px,
                                 double py,
                                 double ox,
                                 double oy,
                                 double tx,
                                 double ty,
                                 double min_segment_len,
                                 struct GpProjection *out);

/**
 * Copies the calling thread's last error message into `buf` (truncated,
 * always NUL-terminated when `cap > 0`). Returns the full message length
 * excluding the terminator.
 *
 * # Safety
 * `buf` must be NULL or point to `cap` writable bytes.
 */
size_t gp_last_error(char *buf, size_t cap);

/**
 * Library version as a static C string.
 */
const char *gp_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GESPLAYER_H */
