#ifndef FRONTLAB_H
#define FRONTLAB_H

/* Generated by cbindgen from frontlab-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes of every fallible call.
 */
typedef enum {
  FRONTLAB_STATUS_OK = 0,
  FRONTLAB_STATUS_INVALID_ARGUMENT = 1,
  FRONTLAB_STATUS_CONFIG_ERROR = 2,
  FRONTLAB_STATUS_NUMERICAL_ERROR = 3,
  FRONTLAB_STATUS_CRITERION_FAILURE = 4,
} FrontlabStatus;

/**
 * Opaque reaction-diffusion model handle.
 */
typedef struct FrontlabModel FrontlabModel;

/**
 * Library version as a static C string.
 */
const char *frontlab_version(void);

/**
 * Message of the most recent error on this thread; valid until the next
 * failing call.
 */
const char *frontlab_last_error(void);

/**
 * Create a preset model. `params_json` is an optional JSON object of
 * numeric parameters (e.g. `{"alpha": 0.02, "beta": 0.5}`); NULL uses the
 * preset defaults. Returns NULL on error.
 *
 * # Safety
 * `name` and `params_json` must be NULL or valid NUL-terminated strings.
 */
FrontlabModel *frontlab_model_preset(const char *name, const char *params_json);

/**
 * Destroy a model handle. NULL is ignored.
 *
 * # Safety
 * `model` must be a pointer previously returned by
 * [`frontlab_model_preset`] and not yet freed.
 */
void frontlab_model_free(FrontlabModel *model);

/**
 * Number of components of the model, or -1 for NULL.
 *
 * # Safety
 * `model` must be a live handle or NULL.
 */
int frontlab_model_components(const FrontlabModel *model);

/**
 * Evaluate the reaction map F(U): `u` and `out` are arrays of length `n`.
 *
 * # Safety
 * `model` must be a live handle; `u` and `out` must point to `n` doubles.
 */
FrontlabStatus frontlab_eval_reaction(const FrontlabModel *model,
                                      const double *u,
                                      uintptr_t n,
                                      double *out);

/**
 * Linear spreading data at the equilibrium `at` (array of length `n`):
 * writes c_lin, the leading-edge decay rate eta, and the effective
 * diffusivity d_eff.
 *
 * # Safety
 * `model` must be a live handle; `at` must point to `n` doubles; the out
 * pointers must be valid or NULL (NULL outputs are skipped).
 */
FrontlabStatus frontlab_spreading_speed(const FrontlabModel *model,
                                        const double *at,
                                        uintptr_t n,
                                        double *out_c_lin,
                                        double *out_eta,
                                        double *out_d_eff);

/**
 * Run a named experiment into `out_dir`, writing its record files. When
 * `out_passed` is non-NULL it receives 1 if every criterion passed.
 * Returns CriterionFailure when the experiment ran but a criterion failed.
 *
 * # Safety
 * `name` and `out_dir` must be valid strings; `params_json` NULL or valid.
 */
FrontlabStatus frontlab_run_experiment(const char *name,
                                       const char *params_json,
                                       const char *out_dir,
                                       int *out_passed);

#endif  /* FRONTLAB_H */
