/* Copyright (c) cfrkit contributors.
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface of libcfrkit. Handles are opaque and owned by the caller;
 * strings returned through char** are released with cfr_string_free.
 * On failure a call returns a non-zero status and cfr_last_error() holds
 * the message for the calling thread.
 */
#ifndef CFRKIT_H
#define CFRKIT_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct cfr_its cfr_its;
typedef struct cfr_options cfr_options;
typedef struct cfr_report cfr_report;

typedef enum cfr_status {
    CFR_OK = 0,
    CFR_ERR_PARSE = 1,
    CFR_ERR_INVALID = 2,
    CFR_ERR_IO = 3,
    CFR_ERR_INTERNAL = 4
} cfr_status;

typedef enum cfr_format { CFR_FMT_ITS = 0, CFR_FMT_DOT = 1, CFR_FMT_JSON = 2 } cfr_format;

const char* cfr_last_error(void);
const char* cfr_version(void);
void cfr_string_free(char* s);

cfr_status cfr_its_parse(const char* text, cfr_its** out);
cfr_status cfr_its_load(const char* path, cfr_its** out);
cfr_status cfr_its_emit(const cfr_its* t, cfr_format fmt, char** out);
int cfr_its_node_count(const cfr_its* t);
int cfr_its_edge_count(const cfr_its* t);
void cfr_its_free(cfr_its* t);

cfr_status cfr_options_new(cfr_options** out);
void cfr_options_free(cfr_options* o);
/* Comma separated subset of h, hv, c, cv, dh. An empty list clears the set. */
cfr_status cfr_options_set_props(cfr_options* o, const char* list);
/* Property file text; node names are checked against t. */
cfr_status cfr_options_add_user_props(cfr_options* o, const cfr_its* t, const char* text);
/* pre, post, both or off. */
cfr_status cfr_options_set_invariants(cfr_options* o, const char* mode);
cfr_status cfr_options_set_entry_ctx(cfr_options* o, const char* atoms);
void cfr_options_set_int_tighten(cfr_options* o, int on);
cfr_status cfr_options_set_scheme(cfr_options* o, int cfr_base, int cfr_after, int cfr_scc);
void cfr_options_set_llrf(cfr_options* o, int on);
/* Wall-clock budget for cfr_termin in seconds; 0 or less means none. */
void cfr_options_set_timeout(cfr_options* o, double seconds);

cfr_status cfr_refine(const cfr_its* t, const cfr_options* o, cfr_its** out);
cfr_status cfr_termin(const cfr_its* t, const cfr_options* o, cfr_report** out);
/* split is "node: f1; f2; ..." */
cfr_status cfr_mlrf_split(const cfr_its* t, const char* split, cfr_its** out);

int cfr_report_terminating(const cfr_report* r);
int cfr_report_timed_out(const cfr_report* r);
int cfr_report_failed_count(const cfr_report* r);
cfr_status cfr_report_json(const cfr_report* r, char** out);
/* Result of the last refinement step, or the analyzed input when none ran. */
cfr_status cfr_report_refined(const cfr_report* r, cfr_its** out);
void cfr_report_free(cfr_report* r);

#ifdef __cplusplus
}
#endif

#endif
