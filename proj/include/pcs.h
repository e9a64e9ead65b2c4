/* pcs.h -- C interface to the parameterized-coverability checker.
 *
 * The library parses a spec (process types, a topology grammar,
 * queries), runs one of the analysis pipelines, and hands back a
 * report: the stable verdict lines a front end prints to stdout, side
 * notes for stderr, and the suggested process exit code. All handles
 * are opaque; every entry point returns a status code and leaves a
 * human-readable message in pcs_last_error() on failure. Strings
 * returned by accessor functions stay owned by their handle.
 */

#ifndef PCS_H
#define PCS_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct pcs_spec pcs_spec;
typedef struct pcs_report pcs_report;

typedef enum pcs_status {
    PCS_OK = 0,
    PCS_E_IO = 1,       /* unreadable input or unwritable output */
    PCS_E_PARSE = 2,    /* malformed spec text (message carries file:line) */
    PCS_E_INVALID = 3,  /* well-formed input the requested analysis rejects */
    PCS_E_INTERNAL = 4, /* unexpected failure */
} pcs_status;

typedef enum pcs_mode {
    PCS_MODE_AUTO = 0,     /* exact mode when the whole spec fits its fragment */
    PCS_MODE_COUNTING = 1, /* sound abstraction: SAFE / UNKNOWN(...) verdicts */
    PCS_MODE_PEBBLE = 2,   /* exact decision: COVERABLE / UNCOVERABLE */
} pcs_mode;

typedef struct pcs_check_options {
    int mode;                /* a pcs_mode value */
    int witness;             /* nonzero: append WITNESS lines to positive verdicts */
    long long bounded_reach; /* >0: explore reach queries up to this many markings */
    const char* emit_lola;   /* directory for LoLA nets and formula files, or NULL */
    const char* emit_pnml;   /* directory for PNML nets, or NULL */
} pcs_check_options;

typedef struct pcs_oracle_options {
    int max_vertices;    /* <=0: default 8 */
    long long state_cap; /* <=0: default 1000000 */
    int threads;         /* <=0: one per hardware thread */
} pcs_oracle_options;

/* Fill an options struct with the defaults described above. */
void pcs_check_options_init(pcs_check_options* opt);
void pcs_oracle_options_init(pcs_oracle_options* opt);

/* Parse a spec from a file or from text (name labels error messages).
 * On success *out owns the spec; free it with pcs_spec_free. */
pcs_status pcs_spec_load(const char* path, pcs_spec** out);
pcs_status pcs_spec_parse(const char* text, const char* name, pcs_spec** out);
void pcs_spec_free(pcs_spec* spec);

/* Verdicts for every query in the spec, one QUERY line each. The exit
 * code is 0 when every query met its expectation -- an unstated
 * expectation is met by SAFE, UNCOVERABLE, or EXPORTED -- and 1
 * otherwise. opt may be NULL for defaults. */
pcs_status pcs_check(const pcs_spec* spec, const pcs_check_options* opt, pcs_report** out);

/* Write the abstraction's nets (and per-query formula files alongside
 * LoLA output) into the given directories; either may be NULL, not
 * both. One WROTE line per file. */
pcs_status pcs_export(const pcs_spec* spec, const char* lola_dir, const char* pnml_dir,
                      pcs_report** out);

/* Brute-force cross-validation of the pipelines on all small instances
 * of the grammar. Line-oriented report; exit code 1 iff discrepancies
 * were found. opt may be NULL for defaults. */
pcs_status pcs_oracle(const pcs_spec* spec, const pcs_oracle_options* opt, pcs_report** out);

size_t pcs_report_size(const pcs_report* rep);
const char* pcs_report_line(const pcs_report* rep, size_t i); /* NULL past the end */
size_t pcs_report_note_count(const pcs_report* rep);
const char* pcs_report_note(const pcs_report* rep, size_t i);
int pcs_report_exit_code(const pcs_report* rep);
void pcs_report_free(pcs_report* rep);

/* Message for the most recent failure on this thread. */
const char* pcs_last_error(void);

const char* pcs_version(void);

#ifdef __cplusplus
}
#endif

#endif /* PCS_H */
