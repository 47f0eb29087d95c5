#ifndef LOCKLAB_H
#define LOCKLAB_H

/* C interface to the logic locking laboratory: bench netlists, cone
 * analysis, locking schemes, the oracle-guided SAT attack, and experiment
 * sweeps. Handles are opaque; every fallible call returns a status code and
 * leaves a message for locklab_last_error() on failure. Returned strings
 * are heap copies owned by the caller; release them with
 * locklab_string_free(). The library never touches the filesystem. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum locklab_status {
    LOCKLAB_OK = 0,
    LOCKLAB_ERR_PARSE = 1,       /* malformed input text */
    LOCKLAB_ERR_VALIDATE = 2,    /* structurally invalid netlist */
    LOCKLAB_ERR_ARGUMENT = 3,    /* bad parameter */
    LOCKLAB_ERR_WIDTH = 4,       /* vector width mismatch */
    LOCKLAB_ERR_REPLAY = 5,      /* replayed vector distinguishes nothing */
    LOCKLAB_ERR_CONSTRAINT = 6,  /* key constraints exclude every correct key */
    LOCKLAB_ERR_UNSUPPORTED = 7, /* valid input outside the supported subset */
    LOCKLAB_ERR_INTERNAL = 8,
} locklab_status;

typedef struct locklab_circuit locklab_circuit; /* combinational netlist */
typedef struct locklab_locked locklab_locked;   /* netlist + key metadata */

const char* locklab_version(void);

/* Message from the most recent failing call on this thread. */
const char* locklab_last_error(void);

void locklab_string_free(char* s);
void locklab_circuit_free(locklab_circuit* c);
void locklab_locked_free(locklab_locked* lc);

/* --- netlists ---------------------------------------------------------- */

/* Parses bench text: INPUT/OUTPUT lines and gate assignments. `name` may be
 * NULL. */
locklab_status locklab_parse_bench(const char* text, const char* name,
                                   locklab_circuit** out);

locklab_status locklab_write_bench(const locklab_circuit* c, char** out);

/* {"name", "inputs", "outputs", "gates", "input_names", "output_names"} */
locklab_status locklab_circuit_summary_json(const locklab_circuit* c, char** out);

/* `input_bits` holds one '0'/'1' per primary input, declaration order;
 * `*output_bits` gets the outputs the same way. */
locklab_status locklab_simulate(const locklab_circuit* c, const char* input_bits,
                                char** output_bits);

/* --- cones ------------------------------------------------------------- */

/* Array of {"output", "nodes", "depth", "inputs"}, one entry per output. */
locklab_status locklab_cones_json(const locklab_circuit* c, char** out);

/* Extracts the largest output cone as a standalone circuit. */
locklab_status locklab_largest_cone(const locklab_circuit* c, locklab_circuit** out);

/* --- locking ----------------------------------------------------------- */

/* Key bit strings list bit i at position i. Pass NULL to draw the bits from
 * `seed` instead. locklab_lock_xor splices key gates onto the first `count`
 * positions of the largest cone's traversal order. */
locklab_status locklab_lock_xor(const locklab_circuit* c, size_t count,
                                const char* key_bits, uint64_t seed,
                                locklab_locked** out);

/* Point-function block pair on the first r inputs; the 2r-bit key repeats
 * `value_bits` twice. */
locklab_status locklab_lock_antisat(const locklab_circuit* c, int r,
                                    const char* value_bits, uint64_t seed,
                                    locklab_locked** out);

/* As antisat, with OR gates at the given cascade steps (each in 1..r-1). */
locklab_status locklab_lock_caslock(const locklab_circuit* c, int r,
                                    const int* or_positions, size_t n_or,
                                    const char* value_bits, uint64_t seed,
                                    locklab_locked** out);

/* Functionality stripping at Hamming distance `hd` from `pattern_bits`
 * (one bit per input). */
locklab_status locklab_lock_sfll(const locklab_circuit* c, const char* pattern_bits,
                                 int hd, uint64_t seed, locklab_locked** out);

locklab_status locklab_locked_write_bench(const locklab_locked* lc, char** out);

/* {"scheme", "width", "key", "key_inputs", "data_inputs", "blocks",
 *  "params"}; "key" is null when unknown. */
locklab_status locklab_locked_key_json(const locklab_locked* lc, char** out);

/* Rebuilds a locked circuit from bench text; inputs named keyinput* are the
 * key. `key_json` (may be NULL) restores scheme/key/block metadata written
 * by locklab_locked_key_json. */
locklab_status locklab_locked_from_bench(const char* text, const char* key_json,
                                         locklab_locked** out);

/* Substitutes the key and folds constants; the result has only data inputs.
 * `key_text` is bits, or hex when it does not look like an exact-width bit
 * string. */
locklab_status locklab_apply_key(const locklab_locked* lc, const char* key_text,
                                 locklab_circuit** out);

/* --- attack ------------------------------------------------------------ */

/* options_json may be NULL or an object with any of:
 *   "constraints": [{"index": 3, "value": 1}, ...]  key bits pinned all run
 *   "replay": ["1111", ...]   input vectors to use before free search
 *   "preload": bool           seed with the all-zeros/all-ones pairs
 *   "iteration_cap": int      max solver iterations, 0 = unlimited
 *   "time_budget_s": number   solver wall-clock budget, 0 = unlimited
 * *trace_json gets {"status", "recovered_key", "total_iterations",
 * "io_pairs", "total_s", "io_pairs_s", "unsat_s", "preloads", "iterations":
 * [{"index", "dip", "response", "key_a", "key_b", "solve_s",
 * "clauses_added"}]}. A run that ends by cap, budget, or inconsistent
 * constraints still returns LOCKLAB_OK with the status in the trace. */
locklab_status locklab_attack(const locklab_locked* lc, const locklab_circuit* oracle,
                              const char* options_json, char** trace_json);

/* *equivalent = 1 when the keyed circuit matches the oracle (exhaustive up
 * to 16 data inputs, sampled above that). */
locklab_status locklab_verify_key(const locklab_locked* lc, const locklab_circuit* oracle,
                                  const char* key_text, int* equivalent);

/* --- experiments ------------------------------------------------------- */

/* options_json may be NULL or {"seed": u64, "iteration_cap": int,
 * "time_budget_s": number}. Locks the largest cone with 1..max_keys key
 * gates, attacks each size, and returns the records as a JSON array. */
locklab_status locklab_sweep(const locklab_circuit* c, size_t max_keys,
                             const char* options_json, char** records_json);

/* Renders records produced by locklab_sweep. */
locklab_status locklab_report_csv(const char* records_json, char** out);
locklab_status locklab_report_text(const char* records_json, char** out);

/* --- CNF --------------------------------------------------------------- */

/* Consistency clauses for the circuit, DIMACS with net-name comments. */
locklab_status locklab_export_cnf(const locklab_circuit* c, char** dimacs);

/* Two-copy key-disagreement formula for a locked circuit. */
locklab_status locklab_export_miter_cnf(const locklab_locked* lc, char** dimacs);

/* Solves DIMACS text. *result_json gets {"result": "sat"|"unsat", "model":
 * bit string over variables 1..n or null, "conflicts", "decisions",
 * "propagations"}. */
locklab_status locklab_sat_solve(const char* dimacs, char** result_json);

#ifdef __cplusplus
}
#endif

#endif /* LOCKLAB_H */
