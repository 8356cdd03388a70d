/* C interface to the joint bidiagonalization GSVD library. */
#ifndef JBDGSVD_H
#define JBDGSVD_H

#include <stdint.h>

#if defined(JBD_BUILDING_LIBRARY)
#define JBD_API __attribute__((visibility("default")))
#else
#define JBD_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum jbd_status {
    JBD_OK = 0,
    JBD_ERR_INVALID_INPUT = 1,
    JBD_ERR_DEGENERATE_START = 2,
    JBD_ERR_LUCKY_BREAKDOWN = 3,
    JBD_ERR_INNER_STALLED = 4,
    JBD_ERR_NOT_REGULAR = 5,
    JBD_ERR_DENSE_CAP = 6,
    JBD_ERR_DIAGNOSTICS_UNAVAILABLE = 7,
    JBD_ERR_NUMERICAL_INCONSISTENCY = 8,
    JBD_ERR_PARSE = 9,
    JBD_ERR_UNSUPPORTED = 10,
    JBD_ERR_IO = 11,
    JBD_ERR_NO_CONVERGENCE = 12,
    JBD_ERR_INTERNAL = 13
} jbd_status;

typedef struct jbd_config jbd_config;
typedef struct jbd_pair jbd_pair;
typedef struct jbd_factorization jbd_factorization;

/* Message of the last failed call on this thread; never NULL. */
JBD_API const char* jbd_last_error(void);
JBD_API const char* jbd_status_name(jbd_status status);

/* Run configuration. Keys follow the CLI long flags without dashes:
   a, gen, l, steps, tau, tau-bar, reorth, inner, extract, seed, out,
   dense-cap, kappa, diag. */
JBD_API jbd_status jbd_config_create(jbd_config** out);
JBD_API void jbd_config_destroy(jbd_config* cfg);
JBD_API jbd_status jbd_config_set(jbd_config* cfg, const char* key, const char* value);

/* Runs a full experiment and writes its CSV and report files. *exit_code
   receives 0 on success, 2 after a breakdown with partial output, 1 on error;
   the return value is JBD_OK whenever the run itself was attempted. */
JBD_API jbd_status jbd_run_experiment(const jbd_config* cfg, int* exit_code, char* message, int message_capacity);

/* Matrix pairs. Index arrays are 0-based CSR. */
JBD_API jbd_status jbd_pair_from_csr(int64_t m, int64_t p, int64_t n,
                                     const int64_t* a_row_starts, const int64_t* a_cols, const double* a_vals,
                                     const int64_t* l_row_starts, const int64_t* l_cols, const double* l_vals,
                                     jbd_pair** out);
JBD_API jbd_status jbd_pair_read(const char* a_path, const char* l_path, jbd_pair** out);
/* generator: a1l1:N,KAPPA | a2l2:N | random:M,P,N[,SEED] */
JBD_API jbd_status jbd_pair_generate(const char* generator, jbd_pair** out);
JBD_API jbd_status jbd_pair_dims(const jbd_pair* pair, int64_t* m, int64_t* p, int64_t* n);
JBD_API void jbd_pair_destroy(jbd_pair* pair);

/* Runs the process on a pair using the steps, tau, reorth, inner and seed
   settings of cfg (NULL selects defaults). A breakdown still yields a
   factorization; query it with jbd_fact_termination. */
JBD_API jbd_status jbd_run(jbd_pair* pair, const jbd_config* cfg, jbd_factorization** out);
JBD_API void jbd_fact_destroy(jbd_factorization* fact);

JBD_API jbd_status jbd_fact_steps(const jbd_factorization* fact, int* steps);
/* JBD_OK, JBD_ERR_LUCKY_BREAKDOWN or JBD_ERR_INNER_STALLED. */
JBD_API jbd_status jbd_fact_termination(const jbd_factorization* fact, jbd_status* kind);

/* which = 0 for B_k, 1 for Bhat_k. diag needs steps entries, superdiag
   steps - 1. */
JBD_API jbd_status jbd_fact_bidiagonal(const jbd_factorization* fact, int which, double* diag, double* superdiag);

/* The count largest (largest != 0) or smallest Ritz pairs, from B_k
   (from_bhat == 0) or Bhat_k. */
JBD_API jbd_status jbd_fact_values(const jbd_factorization* fact, int count, int largest, int from_bhat,
                                   double* c, double* s);

#ifdef __cplusplus
}
#endif

#endif
