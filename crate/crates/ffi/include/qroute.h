#ifndef QROUTE_H
#define QROUTE_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QrStatus {
  QR_STATUS_OK = 0,
  QR_STATUS_NULL_ARGUMENT = 1,
  QR_STATUS_INVALID_UTF8 = 2,
  QR_STATUS_PARSE_ERROR = 3,
  QR_STATUS_ARCHITECTURE_ERROR = 4,
  QR_STATUS_INVALID_ARGUMENT = 5,
  QR_STATUS_CAPACITY_EXCEEDED = 6,
  QR_STATUS_TOO_MANY_QUBITS = 7,
  QR_STATUS_TIMEOUT = 8,
  QR_STATUS_IO_ERROR = 9,
  QR_STATUS_BUFFER_TOO_SMALL = 10,
  QR_STATUS_PANIC = 99,
} QrStatus;

typedef enum QrStrategy {
  QR_STRATEGY_FULL = 0,
  QR_STRATEGY_ARCH_LIMIT = 1,
  QR_STRATEGY_SUBGRAPH = 2,
  QR_STRATEGY_SUBGRAPH_LIMIT = 3,
} QrStrategy;

// Parsed input circuit.
typedef struct QrCircuit QrCircuit;

// Coupling graph of a device.
typedef struct QrCoupling QrCoupling;

// Outcome of a mapping run.
typedef struct QrResult QrResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. The pointer is
// valid until the next failing call on the same thread.
const char *qr_last_error(void);

// Library version as a static NUL-terminated string.
const char *qr_version(void);

// Releases a string returned by this library. NULL is ignored.
void qr_string_free(char *s);

// Resolves a built-in architecture name (`linear-5`, `ibmq-london`, ...)
// or reads a coupling file.
enum QrStatus qr_coupling_resolve(const char *spec, struct QrCoupling **out);

// Builds a coupling graph on `m` qubits from `num_edges` pairs stored
// flat in `edges` (`2 * num_edges` entries).
enum QrStatus qr_coupling_from_edges(size_t m,
                                     const size_t *edges,
                                     size_t num_edges,
                                     struct QrCoupling **out);

size_t qr_coupling_num_qubits(const struct QrCoupling *g);

// Longest shortest path between two qubits.
size_t qr_coupling_diameter(const struct QrCoupling *g);

void qr_coupling_free(struct QrCoupling *g);

// Parses OpenQASM 2 source text.
enum QrStatus qr_circuit_parse_qasm(const char *text, struct QrCircuit **out);

// Circuit of `num_gates` CNOTs on `n` qubits; `pairs` holds
// control/target indices flat.
enum QrStatus qr_circuit_from_cnots(size_t n,
                                    const size_t *pairs,
                                    size_t num_gates,
                                    struct QrCircuit **out);

size_t qr_circuit_num_qubits(const struct QrCircuit *c);

size_t qr_circuit_num_cnots(const struct QrCircuit *c);

void qr_circuit_free(struct QrCircuit *c);

// Maps `circuit` onto `coupling`. `max_expansions == 0` and
// `timeout_seconds <= 0` mean unlimited.
enum QrStatus qr_map(const struct QrCircuit *circuit,
                     const struct QrCoupling *coupling,
                     enum QrStrategy strategy,
                     bool relevance_filter,
                     uint64_t max_expansions,
                     double timeout_seconds,
                     struct QrResult **out);

// Permutation counts a strategy would consider, summed over gates
// (`total`) and for a single gate (`per_gate`). Either output may be NULL.
enum QrStatus qr_count_search_space(const struct QrCircuit *circuit,
                                    const struct QrCoupling *coupling,
                                    enum QrStrategy strategy,
                                    uint64_t *total,
                                    uint64_t *per_gate);

// Number of inserted SWAPs.
size_t qr_result_cost(const struct QrResult *r);

size_t qr_result_num_logical(const struct QrResult *r);

// Copies the initial physical position of each logical qubit into
// `buf[0..len]`; `len` must be at least [`qr_result_num_logical`].
enum QrStatus qr_result_initial_layout(const struct QrResult *r, size_t *buf, size_t len);

// Writes the mapped circuit as OpenQASM into `*out`; release it with
// [`qr_string_free`].
enum QrStatus qr_result_emit_qasm(const struct QrResult *r,
                                  const struct QrCircuit *circuit,
                                  bool swap_as_cnots,
                                  char **out);

// Replays the result against the coupling graph. `*ok` is set to whether
// all constraints hold; the violations are available from
// [`qr_last_error`] when it is false.
enum QrStatus qr_result_verify(const struct QrResult *r,
                               const struct QrCircuit *circuit,
                               const struct QrCoupling *coupling,
                               bool *ok);

void qr_result_free(struct QrResult *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QROUTE_H */
