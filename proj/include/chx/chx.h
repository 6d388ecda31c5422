/* SPDX-License-Identifier: Apache-2.0
 *
 * chx - multipath parameter estimation and channel extrapolation toolkit
 * Copyright (C) 2026 chx developers
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 * ------------------------------------------------------------------------
 *
 * C interface of the chx shared library. All functions return a status
 * code; every non-zero return leaves a human-readable description in
 * chx_last_error() (thread-local). Objects are opaque handles released
 * with the matching *_free function.
 */

#ifndef CHX_H
#define CHX_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C"
{
#endif

/* Status codes. The chx_cmd_* values double as process exit codes. */
#define CHX_OK 0
#define CHX_ERR_INVALID 1 /* bad handle/argument use of this API */
#define CHX_ERR_CONFIG 2  /* invalid configuration or input domain */
#define CHX_ERR_NUMERIC 3 /* numerical failure (singular Gram, zero data) */
#define CHX_ERR_IO 4      /* file system or file format failure */

typedef struct chx_channel chx_channel;
typedef struct chx_pattern chx_pattern;
typedef struct chx_estimate chx_estimate;

/* Description of the most recent failure on this thread; empty on success. */
const char *chx_last_error(void);

/* Channel containers (CHX1 files). Samples are interleaved doubles
 * (re, im), antenna-major: sample (m, k) lives at index 2*(m*K + k). Stage
 * is 0 raw, 1 compensated, 2 normalized. */
int chx_channel_create(size_t m, size_t k, double f_start_hz, double spacing_hz, int stage,
                       const double *interleaved, chx_channel **out);
int chx_channel_load(const char *path, chx_channel **out);
int chx_channel_save(const chx_channel *ch, const char *path);
int chx_channel_dims(const chx_channel *ch, size_t *m, size_t *k);
int chx_channel_grid(const chx_channel *ch, double *f_start_hz, double *spacing_hz);
int chx_channel_stage(const chx_channel *ch, int *stage);
int chx_channel_data(const chx_channel *ch, double *interleaved);
void chx_channel_free(chx_channel *ch);

/* Calibrated array patterns (CHP1 files). */
int chx_pattern_load(const char *path, chx_pattern **out);
int chx_pattern_save(const chx_pattern *pat, const char *path);
void chx_pattern_free(chx_pattern *pat);

/* Multipath estimation. model is "vss" or "doa"; a pattern is required for
 * "doa" and ignored for "vss". The training channel must carry at least
 * two frequency columns. Pass 0 for delay_bins/max_cycles/tolerance to take
 * the defaults (4096 bins, 30 cycles, 1e-6). */
int chx_estimate_run(const chx_channel *training, const char *model, size_t l_paths,
                     size_t delay_bins, size_t max_cycles, double tolerance,
                     size_t refinement_levels, const chx_pattern *pattern, chx_estimate **out);
int chx_estimate_to_json(const chx_estimate *est, char **json_out);
int chx_estimate_from_json(const char *json, chx_estimate **out);
int chx_estimate_reconstruct(const chx_estimate *est, double f_start_hz, double spacing_hz,
                             size_t count, const chx_pattern *pattern, chx_channel **out);
void chx_estimate_free(chx_estimate *est);
void chx_string_free(char *s);

/* Experiment commands mirroring the CLI verbs. Optional fields use the
 * has_* flags; NULL pointers mean "not given". A config file overrides the
 * other options; the seed always wins. */
typedef struct chx_run_options
{
    const char *config_path;
    int has_seed;
    uint64_t seed;
    const char *model;
    int has_paths;
    size_t paths;
    int has_train_center;
    double train_center_hz;
    int has_train_width;
    double train_width_hz;
    const char *out_dir;
} chx_run_options;

int chx_cmd_synth(const chx_run_options *opt);
int chx_cmd_estimate(const chx_run_options *opt);
int chx_cmd_extrapolate(const chx_run_options *opt);
int chx_cmd_evaluate(const chx_run_options *opt);
int chx_cmd_pipeline(const chx_run_options *opt);

#ifdef __cplusplus
}
#endif

#endif
