#ifndef HWYIMPACT_H
#define HWYIMPACT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum HwyStatus {
  HWY_STATUS_OK = 0,
  HWY_STATUS_NULL_POINTER = 1,
  HWY_STATUS_INVALID_UTF8 = 2,
  HWY_STATUS_INVALID_ARGUMENT = 3,
  HWY_STATUS_LEXICON = 4,
  HWY_STATUS_IO = 5,
  HWY_STATUS_INGEST = 6,
  HWY_STATUS_CONFIG = 7,
  HWY_STATUS_PANIC = 8,
} HwyStatus;

// Validated highway lexicon.
typedef struct HwyLexicon HwyLexicon;

// Compiled matcher plus the default stopword list.
typedef struct HwyMapper HwyMapper;

// Library version as a static NUL-terminated string.
const char *hwy_version(void);

// Message of the last failed call on this thread, or null. Valid until the
// next failing call on the same thread.
const char *hwy_last_error_message(void);

// # Safety
// `s` must be null or a string returned by this library, freed once.
void hwy_string_free(char *s);

// # Safety
// `out` must be valid for writes.
enum HwyStatus hwy_lexicon_builtin(struct HwyLexicon **out);

// # Safety
// `json` must be a NUL-terminated string; `out` must be valid for writes.
enum HwyStatus hwy_lexicon_from_json(const char *json, struct HwyLexicon **out);

// # Safety
// `path` must be a NUL-terminated string; `out` must be valid for writes.
enum HwyStatus hwy_lexicon_load(const char *path, struct HwyLexicon **out);

// Serializes the lexicon to JSON.
//
// # Safety
// `lex` must be a live handle; `out` must be valid for writes.
enum HwyStatus hwy_lexicon_to_json(const struct HwyLexicon *lex, char **out);

// Number of highway entries, or 0 for a null handle.
//
// # Safety
// `lex` must be null or a live handle.
size_t hwy_lexicon_len(const struct HwyLexicon *lex);

// # Safety
// `lex` must be null or a handle from this library, freed once.
void hwy_lexicon_free(struct HwyLexicon *lex);

// Compiles a mapper from a copy of `lex`; the lexicon handle stays owned by the caller.
//
// # Safety
// `lex` must be a live handle; `out` must be valid for writes.
enum HwyStatus hwy_mapper_new(const struct HwyLexicon *lex,
                              size_t adjacency_window,
                              struct HwyMapper **out);

// # Safety
// `m` must be null or a handle from this library, freed once.
void hwy_mapper_free(struct HwyMapper *m);

// Cleans and maps raw text. Writes a JSON object
// `{"tokens":[...],"highways":[...],"evidence":[{...}]}`.
//
// # Safety
// `m` must be a live handle, `text` a NUL-terminated string and `out` valid for writes.
enum HwyStatus hwy_mapper_map_text(const struct HwyMapper *m, const char *text, char **out);

// Cleans raw text with the bundled stopword list; writes a JSON array of tokens.
//
// # Safety
// `text` must be a NUL-terminated string and `out` valid for writes.
enum HwyStatus hwy_clean_text(const char *text, char **out);

// Runs the full assessment described by a JSON config file (same keys as
// the command-line config). Writes a JSON object with record counts.
//
// # Safety
// `config_path` must be a NUL-terminated string; `out` must be null or valid for writes.
enum HwyStatus hwy_run_assess(const char *config_path, char **out);

#endif  /* HWYIMPACT_H */
