#pragma once

/* Generated from the Rust sources by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum TlStatus {
  TL_STATUS_OK = 0,
  TL_STATUS_NULL_ARGUMENT = 1,
  TL_STATUS_BAD_SPEC = 2,
  TL_STATUS_BAD_FIXTURE = 3,
  TL_STATUS_BAD_CONFIG = 4,
  TL_STATUS_BUDGET_EXCEEDED = 5,
  TL_STATUS_TABLE_SATURATED = 6,
  TL_STATUS_VALUE_MISMATCH = 7,
  TL_STATUS_INTERNAL = 8,
} TlStatus;

typedef struct TlGame TlGame;

typedef struct TlPos TlPos;

// Node counts of one measurement. `total` is `leaf + interior +
// tt_cutoffs`; `f` is the root value the measurement proves.
typedef struct TlCounts {
  uint64_t leaf;
  uint64_t interior;
  uint64_t tt_cutoffs;
  uint64_t total;
  int32_t f;
} TlCounts;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *tl_version(void);

// Message for the most recent failure on this thread. The pointer stays
// valid until the next failing call on the same thread.
const char *tl_last_error(void);

// Parses a game spec: "othello6", "minicheckers", or a synthetic
// parameter line like "seed=7 w=3 d=6 t=0.5".
//
// # Safety
// `spec` must be NUL-terminated; `out` must be a valid pointer.
enum TlStatus tl_game_parse(const char *spec, struct TlGame **out);

// Releases a game handle. Null is a no-op.
//
// # Safety
// `game` must have come from this library and not been freed before.
void tl_game_free(struct TlGame *game);

// Builds the game's start position.
//
// # Safety
// `game` must be a live handle; `out` must be a valid pointer.
enum TlStatus tl_game_initial(const struct TlGame *game, struct TlPos **out);

// Parses one fixture file's text into a game and a position.
//
// # Safety
// `text` must be NUL-terminated; both out pointers must be valid.
enum TlStatus tl_fixture_parse(const char *text, struct TlGame **out_game, struct TlPos **out_pos);

// Releases a position handle. Null is a no-op.
//
// # Safety
// `pos` must have come from this library and not been freed before.
void tl_pos_free(struct TlPos *pos);

// Position hash key; 0 for a null handle.
//
// # Safety
// `pos` must be a live handle or null.
uint64_t tl_pos_hash(const struct TlPos *pos);

// Fixed-depth iterative-deepening search. `engine` is one of
// "alphabeta", "negascout", "aspnegascout", "mtdf". Writes the root value
// to `out_value`.
//
// # Safety
// `game` and `pos` must be live handles from this library, `engine`
// NUL-terminated, `out_value` a valid pointer.
enum TlStatus tl_search(const struct TlGame *game,
                        const struct TlPos *pos,
                        uint32_t depth,
                        const char *engine,
                        int32_t *out_value);

// One minimal-graph measurement. `quantity` is "lfmt", "lfmg", "rmt", or
// "armg"; `mm_d` applies to "armg" only (plies redesignated above the
// leaves) and is ignored otherwise. Engine footprints come from
// `tl_search`, not from here.
//
// # Safety
// `game` and `pos` must be live handles from this library, `quantity`
// NUL-terminated, `out` a valid pointer.
enum TlStatus tl_metrology(const struct TlGame *game,
                           const struct TlPos *pos,
                           uint32_t depth,
                           const char *quantity,
                           uint32_t mm_d,
                           struct TlCounts *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus
