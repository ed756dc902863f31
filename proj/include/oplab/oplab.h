// Copyright 2026 The oplab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OPLAB_H_
#define OPLAB_H_

#include <stddef.h>
#include <stdint.h>

#if defined(OPLAB_BUILDING_LIBRARY)
#define OPLAB_API __attribute__((visibility("default")))
#else
#define OPLAB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Nonzero values match the library's error categories. */
typedef enum oplab_status {
    OPLAB_OK = 0,
    OPLAB_INVALID_ARGUMENT = 1,
    OPLAB_DOMAIN_ERROR = 2,
    OPLAB_NOT_PROBABILITY = 3,
    OPLAB_KERNEL_DOMAIN_ERROR = 4,
    OPLAB_CONDITIONING_ON_NULL = 5,
    OPLAB_CAPACITY_ERROR = 6,
    OPLAB_DIM_MISMATCH = 7,
    OPLAB_OUT_OF_SPECTRAL_RANGE = 8,
    OPLAB_NOT_A_QUESTION = 9,
    OPLAB_NOT_COMMUTING = 10,
    OPLAB_HORIZON_EXCEEDED = 11,
    OPLAB_TOO_SHORT = 12,
    OPLAB_PARTITION_DOES_NOT_COVER = 13,
    OPLAB_ZERO_CELL = 14,
    OPLAB_NO_ABSOLUTELY_CONTINUOUS_PART = 15,
    OPLAB_GRID_MISMATCH = 16,
    OPLAB_SINGULAR_FRAME = 17,
    OPLAB_NO_REALIZABLE_FRAME = 18,
    OPLAB_NOT_HERMITIAN = 19,
    OPLAB_NOT_DENSITY = 20,
    OPLAB_PARSE_ERROR = 21,
    OPLAB_IO_ERROR = 22,
    OPLAB_INTERNAL_ERROR = 99
} oplab_status;

typedef struct oplab_measure oplab_measure;
typedef struct oplab_observable oplab_observable;
typedef struct oplab_state oplab_state;

OPLAB_API const char* oplab_version(void);
OPLAB_API const char* oplab_status_name(oplab_status status);
/* Message for the last failing call on this thread; "" after success. */
OPLAB_API const char* oplab_last_error(void);
/* Releases strings returned through char** out-parameters. */
OPLAB_API void oplab_string_free(char* s);

/* Measures. `rational` selects exact arithmetic; otherwise doubles. */
OPLAB_API oplab_status oplab_measure_from_json(const char* json, int rational, oplab_measure** out);
OPLAB_API oplab_status oplab_measure_from_arrays(const double* points, const double* weights, size_t n, int rational,
                                                 oplab_measure** out);
OPLAB_API void oplab_measure_free(oplab_measure* m);
OPLAB_API int oplab_measure_is_rational(const oplab_measure* m);
OPLAB_API size_t oplab_measure_size(const oplab_measure* m);
OPLAB_API oplab_status oplab_measure_atom(const oplab_measure* m, size_t i, double* point, double* weight);
OPLAB_API oplab_status oplab_measure_to_json(const oplab_measure* m, char** out);
/* set_json: {"intervals": [[lo, hi]], "points": [...]}; exact value as a
   decimal or p/q string in *exact when non-null. */
OPLAB_API oplab_status oplab_measure_of(const oplab_measure* m, const char* set_json, double* value, char** exact);
OPLAB_API oplab_status oplab_measure_mean(const oplab_measure* m, double* value, char** exact);
OPLAB_API oplab_status oplab_measure_convolve(const oplab_measure* a, const oplab_measure* b, oplab_measure** out);
/* Splits nu against reference; either output may be null. */
OPLAB_API oplab_status oplab_measure_lebesgue(const oplab_measure* nu, const oplab_measure* reference,
                                              oplab_measure** continuous, oplab_measure** singular, double* chi);
OPLAB_API oplab_status oplab_measure_bayes(const oplab_measure* m, const char* set_json, oplab_measure** out);
/* Shannon entropy in bits of the cell probabilities under partition_json. */
OPLAB_API oplab_status oplab_shannon_entropy(const oplab_measure* m, const char* partition_json, double* bits);

/* Row-major d x d matrices; im may be null for real matrices. */
OPLAB_API oplab_status oplab_observable_create(size_t dim, const double* re, const double* im, oplab_observable** out);
OPLAB_API void oplab_observable_free(oplab_observable* a);
OPLAB_API oplab_status oplab_state_create(size_t dim, const double* re, const double* im, oplab_state** out);
OPLAB_API void oplab_state_free(oplab_state* rho);
OPLAB_API oplab_status oplab_expectation(const oplab_observable* a, const oplab_state* rho, double* value);
/* Double-mode measure of outcomes of a in state rho. */
OPLAB_API oplab_status oplab_spectral_measure(const oplab_observable* a, const oplab_state* rho, oplab_measure** out);
/* von Neumann entropy in nats and tr(rho^2). */
OPLAB_API oplab_status oplab_entropy_purity(const oplab_state* rho, double* entropy, double* purity);

/* Seeded Bernoulli trials: f[i] = xi(i+1)/(i+1), w[i] its running mean.
   Either output may be null. */
OPLAB_API oplab_status oplab_bernoulli_trace(double p, size_t n, uint64_t seed, double* f, double* w);
/* Estimate w_n from relative frequencies (n >= 100). */
OPLAB_API oplab_status oplab_estimate_probability(const double* f, size_t n, double* p_hat);

/* JSON in, JSON out. The input layouts match the "inputs" object of the
   corresponding command-line config. */
OPLAB_API oplab_status oplab_kolmogorov_json(const char* inputs_json, char** result_json);
OPLAB_API oplab_status oplab_tomography_json(const char* inputs_json, char** result_json);
OPLAB_API oplab_status oplab_validate_json(const char* inputs_json, char** result_json);

/* Runs one command of the batch harness and returns its exit code
   (0 success, 2 validation failure, 1 error). seed and mode may be null. */
OPLAB_API int oplab_run_experiment(const char* command, const char* config_path, const char* out_dir,
                                   const uint64_t* seed, const char* mode);
OPLAB_API int oplab_report(const char* const* inputs, size_t n, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* OPLAB_H_ */
