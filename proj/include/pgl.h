/* pgl.h - C API for the photonic post-selected gate simulator.
 *
 * All functions return a pgl_status; PGL_OK is 0. Objects are opaque handles
 * released with the matching *_free function. Strings returned through char**
 * are heap-allocated and released with pgl_string_free. A thread-local detail
 * message for the last failing call is available via pgl_last_error.
 */
#ifndef PGL_H
#define PGL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PGL_API __declspec(dllexport)
#else
#define PGL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pgl_status {
    PGL_OK = 0,
    PGL_ERR_INVALID_ARG = 1,
    PGL_ERR_REGISTRY = 2,
    PGL_ERR_VALIDATION = 3,
    PGL_ERR_ZERO_NORM = 4,
    PGL_ERR_SECTOR = 5,
    PGL_ERR_PRECONDITION = 6,
    PGL_ERR_CONFIG = 7,
    PGL_ERR_IO = 8,
    PGL_ERR_ASSERTION = 9,
    PGL_ERR_UNKNOWN = 10
} pgl_status;

typedef enum pgl_gate_kind { PGL_GATE_CPF = 0, PGL_GATE_TOFFOLI = 1 } pgl_gate_kind;

typedef struct pgl_gate_options {
    int with_bs;            /* nonzero: beam splitter present */
    int recycle;            /* nonzero: reroute the delayed photon for a second attempt */
    int apply_feed_forward; /* nonzero: apply conditional Pauli corrections */
} pgl_gate_options;

typedef struct pgl_circuit pgl_circuit;
typedef struct pgl_run_result pgl_run_result;

PGL_API const char* pgl_version(void);
PGL_API const char* pgl_last_error(void);
PGL_API void pgl_string_free(char* s);

/* ---- circuits ------------------------------------------------------- */

PGL_API pgl_status pgl_circuit_build(pgl_gate_kind kind, const pgl_gate_options* opts, pgl_circuit** out);
PGL_API pgl_status pgl_circuit_from_json(const char* json, pgl_circuit** out);
PGL_API pgl_status pgl_circuit_to_json(const pgl_circuit* c, char** json_out);
PGL_API void pgl_circuit_free(pgl_circuit* c);

/* ---- running -------------------------------------------------------- */

/* coeffs: 4 doubles per gate qubit (re alpha, im alpha, re beta, im beta);
 * n_qubits must match the gate (2 for the two-qubit gate, 3 for the
 * three-qubit gate). Ancilla photons are fixed by the circuit. */
PGL_API pgl_status pgl_run_product(const pgl_circuit* c, const double* coeffs, int n_qubits,
                                   pgl_run_result** out);
/* basis index interpreted MSB-first, control(s) then target, H = 0. */
PGL_API pgl_status pgl_run_basis(const pgl_circuit* c, int basis_index, pgl_run_result** out);
PGL_API void pgl_run_result_free(pgl_run_result* r);

PGL_API pgl_status pgl_result_branch_count(const pgl_run_result* r, int* count);
PGL_API pgl_status pgl_result_branch_probability(const pgl_run_result* r, int i, double* p);
PGL_API pgl_status pgl_result_branch_success(const pgl_run_result* r, int i, int* success);
PGL_API pgl_status pgl_result_branch_json(const pgl_run_result* r, int i, char** json_out);
PGL_API pgl_status pgl_result_success_probability(const pgl_run_result* r, double* p);
/* Probability-weighted |<ideal|branch>| over success branches. */
PGL_API pgl_status pgl_result_fidelity(const pgl_run_result* r, double* fidelity);

/* ---- one-shot reports (JSON / CSV text) ------------------------------ */

/* Branch table plus assertions (total success 1/4, per-branch 1/8, unit
 * fidelity). *pass is 1 when all assertions hold. */
PGL_API pgl_status pgl_cpf_verify(const double* coeffs2, char** report_json, int* pass);

/* Per-detector-combination verification of the three-qubit gate. */
PGL_API pgl_status pgl_toffoli_verify(const pgl_gate_options* opts, const double* coeffs3,
                                      char** report_json, int* pass);

PGL_API pgl_status pgl_truth_table(pgl_gate_kind kind, const pgl_gate_options* opts, char** json_out);

/* CSV with header alpha2,p_sim,p_paper,f_sim,f_paper,options,seed. threads=0
 * picks a default; identical inputs give byte-identical output. */
PGL_API pgl_status pgl_sweep_csv(double grid_start, double grid_stop, double grid_step,
                                 const pgl_gate_options* opts, uint64_t seed, int draws, int threads,
                                 char** csv_out);

/* Per-ket diff of a checkpoint snapshot against its closed-form expected
 * state, for the given input coefficients. */
PGL_API pgl_status pgl_trace_checkpoint(pgl_gate_kind kind, const pgl_gate_options* opts,
                                        const double* coeffs, const char* checkpoint, char** json_out);

/* Transition-amplitude cross-validation of the evolution engine against the
 * permanent oracle on random unitaries. *max_deviation reports the worst
 * amplitude difference observed. */
PGL_API pgl_status pgl_oracle_check(int modes, int max_photons, int trials, uint64_t seed,
                                    double* max_deviation, char** json_out);

#ifdef __cplusplus
}
#endif

#endif /* PGL_H */
