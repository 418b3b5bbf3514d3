#ifndef EXACT_ASM_H
#define EXACT_ASM_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(EXACT_ASM_BUILDING)
#define EASM_API __declspec(dllexport)
#else
#define EASM_API __declspec(dllimport)
#endif
#else
#define EASM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum easm_status {
  EASM_OK = 0,
  EASM_ERR_ARGUMENT = 1,      /* null handle or out-of-range index */
  EASM_ERR_PARSE = 2,         /* program or term text */
  EASM_ERR_FORMAT = 3,        /* JSON layout, unreadable file */
  EASM_ERR_SPECIFICATION = 4, /* invalid vocabulary, state or spec */
  EASM_ERR_CONTRACT = 5,      /* documented precondition broken */
  EASM_ERR_SYNTHESIS = 6,
  EASM_ERR_INTERNAL = 7
} easm_status;

typedef enum easm_form { EASM_FORM_IF = 0, EASM_FORM_CASE = 1 } easm_form;

typedef enum easm_values {
  EASM_VALUES_BOOLEAN = 0,
  EASM_VALUES_DISTINGUISHED = 1
} easm_values;

typedef struct easm_program easm_program;
typedef struct easm_states easm_states;
typedef struct easm_spec easm_spec;

/* Strings returned through char** are owned by the caller and released
   with easm_string_free. On failure outputs are left untouched. */

EASM_API const char* easm_version(void);
/* Message of the last failed call on this thread; "" if none. */
EASM_API const char* easm_last_error(void);
EASM_API const char* easm_status_name(easm_status status);
EASM_API void easm_string_free(char* s);

/* ---- programs ---- */

/* `vocabulary` may be NULL; otherwise symbols and arities are checked
   against the vocabulary of its states. */
EASM_API easm_status easm_program_parse(const char* text, const easm_states* vocabulary,
                                        easm_program** out);
EASM_API void easm_program_free(easm_program* p);
EASM_API easm_status easm_program_print(const easm_program* p, char** out);
EASM_API easm_status easm_program_flatten(const easm_program* p, easm_program** out);
/* Nonzero iff the two programs are syntactically identical. */
EASM_API int easm_program_equal(const easm_program* a, const easm_program* b);

/* ---- states ---- */

/* A state object or an array of states (inline or file paths resolved
   against base_dir, which may be NULL). Inline "name" fields are kept. */
EASM_API easm_status easm_states_from_json(const char* json, const char* base_dir,
                                           easm_states** out);
/* {"blocks": [...]} Cartesian enumeration; at most 100000 states. */
EASM_API easm_status easm_states_enumerate(const char* json, const char* base_dir,
                                           easm_states** out);
/* The candidates visited by runs of p from any initial state. */
EASM_API easm_status easm_states_reachable(const easm_program* p, const easm_states* candidates,
                                           const easm_states* initial, easm_states** out);
EASM_API void easm_states_free(easm_states* s);
EASM_API size_t easm_states_count(const easm_states* s);
EASM_API easm_status easm_states_name(const easm_states* s, size_t index, char** out);
/* Array of states with their names. */
EASM_API easm_status easm_states_to_json(const easm_states* s, char** out);

/* ---- interpretation ----
   Outcome JSON: {"kind": "updates"|"halt-success"|"halt-clash"|"black-hole",
                  "updates": [[symbol, [args...], value], ...], "text": "..."} */

/* {"outcome": ..., "proposed": [...] or null for the black hole,
    "gamma": [{"term": "...", "roles": ["D","C","A"]}, ...]} */
EASM_API easm_status easm_evaluate(const easm_program* p, const easm_states* s, size_t index,
                                   int with_clash_terms, char** out);
/* {"outcome": ..., "next": state or null} */
EASM_API easm_status easm_step(const easm_program* p, const easm_states* s, size_t index,
                               char** out);
/* {"steps": n, "stop": "halt"|"black-hole"|"budget"|"self-loop",
    "entries": [{"state", "outcome", "gamma"}, ...]} */
EASM_API easm_status easm_run(const easm_program* p, const easm_states* s, size_t index,
                              size_t max_steps, int with_clash_terms, char** out);

/* ---- behavioral specifications ---- */

EASM_API easm_status easm_spec_from_json(const char* json, const char* base_dir,
                                         easm_spec** out);
/* Γ and Δ of p on every state; state names are kept. */
EASM_API easm_status easm_spec_from_program(const easm_program* p, const easm_states* s,
                                            easm_spec** out);
EASM_API void easm_spec_free(easm_spec* spec);
EASM_API size_t easm_spec_size(const easm_spec* spec);
EASM_API easm_status easm_spec_to_json(const easm_spec* spec, char** out);

typedef struct easm_check_options {
  easm_values values;
  int oracle_subsets;       /* cross-check discrimination by subset enumeration */
  size_t oracle_max_states; /* 0 selects the default of 12 */
} easm_check_options;

EASM_API void easm_check_options_init(easm_check_options* options);

/* postulate: "determination", "discrimination", "limitation",
   "abstract-state" or "all". `out` receives an array of reports
   {"postulate", "passed", "witnesses", ...}; *passed (may be NULL) is
   nonzero iff every report passed. options may be NULL. */
EASM_API easm_status easm_check(const easm_spec* spec, const char* postulate,
                                const easm_check_options* options, char** out, int* passed);

/* tree_out may be NULL; it receives {"states", "new_terms", "children"}. */
EASM_API easm_status easm_synthesize(const easm_spec* spec, easm_form form, easm_program** out,
                                     char** tree_out);
EASM_API easm_status easm_check_equivalence(const easm_program* p, const easm_spec* spec,
                                            char** out, int* passed);

/* ---- fixtures ---- */

/* JSON array of fixture names. */
EASM_API easm_status easm_fixture_names(char** out);
/* {"file name": "content", ...} */
EASM_API easm_status easm_fixture_files(const char* name, char** out);

#ifdef __cplusplus
}
#endif

#endif
