#ifndef ANCHORPLAN_H
#define ANCHORPLAN_H

/* Generated by cbindgen from anchorplan-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every API function.
typedef enum ApStatus {
  AP_STATUS_OK = 0,
  AP_STATUS_NULL_POINTER = 1,
  AP_STATUS_UTF8_ERROR = 2,
  AP_STATUS_INVALID_INPUT = 3,
  AP_STATUS_NO_COVERAGE = 4,
  AP_STATUS_INFEASIBLE = 5,
  AP_STATUS_NUMERIC_ERROR = 6,
  AP_STATUS_IO_ERROR = 7,
} ApStatus;

// Coverage membership rule.
typedef enum ApCoverageRule {
  AP_COVERAGE_RULE_AT_LEAST_THREE = 0,
  AP_COVERAGE_RULE_ALL_ANCHORS = 1,
} ApCoverageRule;

// Radius measurement semantics.
typedef enum ApRadiusSemantics {
  AP_RADIUS_SEMANTICS_LARGEST_COVERED_DISC = 0,
  AP_RADIUS_SEMANTICS_MAX_SERVICE_EXTENT = 1,
} ApRadiusSemantics;

// Path family selector for simulations.
typedef enum ApPathKind {
  AP_PATH_KIND_R1 = 0,
  AP_PATH_KIND_R2 = 1,
  AP_PATH_KIND_R3 = 2,
  AP_PATH_KIND_RANDOM = 3,
} ApPathKind;

// Opaque anchor-cluster handle.
typedef struct ApCluster ApCluster;

// Opaque deployment-plan handle.
typedef struct ApPlan ApPlan;

// Opaque sound-speed profile handle.
typedef struct ApProfile ApProfile;

// Scalar facts about a laid-out plan.
typedef struct ApPlanInfo {
  double side_m;
  uint32_t n_clusters;
  uint32_t per_axis;
  uint32_t placed_clusters;
  double d_c_m;
  double d_com_m;
  double d_h_m;
  double d_h1_m;
  uint32_t leftover_anchors;
  uint32_t unplaced_clusters;
} ApPlanInfo;

// Simulation parameters for [`ap_monte_carlo_summary`].
typedef struct ApSimConfig {
  double anchor_depth_m;
  double target_depth_m;
  double design_elevation_rad;
  double comm_range_m;
  double gamma;
  double sigma0_sq;
  double beta1;
  double beta2;
  double distance_unit_m;
  double speed_mps;
  double slot_s;
  double layer_thickness_m;
  enum ApPathKind path_kind;
  enum ApCoverageRule coverage_rule;
  uint32_t trials;
  uint64_t master_seed;
} ApSimConfig;

// Monte Carlo batch statistics of the per-trial mean error variance (m²).
typedef struct ApMcSummary {
  uint32_t trials;
  double mean;
  double std;
  double min;
  double max;
} ApMcSummary;

// Divergence-fit output; `beta2` is per unit of the input `delta_p`.
typedef struct ApFitResult {
  double sigma0_sq;
  double beta1;
  double beta2;
  double residual;
} ApFitResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static description of a status code.
const char *ap_status_message(enum ApStatus status);

// Create a built-in profile (`"iso1500"` or `"default-munk-like"`).
//
// # Safety
// `name` must be a NUL-terminated string; `out` must be a valid pointer.
enum ApStatus ap_profile_builtin(const char *name, struct ApProfile **out);

// Load a profile from a `depth_m,speed_mps` CSV file.
//
// # Safety
// `path` must be a NUL-terminated string; `out` must be a valid pointer.
enum ApStatus ap_profile_from_csv(const char *path, struct ApProfile **out);

// Resample a profile onto the slab between two depths with uniform layers.
//
// # Safety
// `profile` must be a live handle from this library; `out` must be valid.
enum ApStatus ap_profile_resample(const struct ApProfile *profile,
                                  double target_depth_m,
                                  double anchor_depth_m,
                                  double layer_thickness_m,
                                  struct ApProfile **out);

// Number of layers in the profile.
//
// # Safety
// `profile` must be a live handle; `out` must be valid.
enum ApStatus ap_profile_layer_count(const struct ApProfile *profile, size_t *out);

// Destroy a profile handle. Passing NULL is a no-op.
//
// # Safety
// `profile` must be a pointer previously returned by this library and not
// yet freed.
void ap_profile_free(struct ApProfile *profile);

// Refraction-aware LOS range variance (m²) at the given elevation angle.
//
// # Safety
// `profile` must be a live handle; `out` must be valid.
enum ApStatus ap_los_variance(const struct ApProfile *profile,
                              double elevation_rad,
                              double gamma,
                              double *out);

// Build an anchor ring sized by the design elevation angle.
//
// # Safety
// `out` must be a valid pointer.
enum ApStatus ap_cluster_ring(double center_x_m,
                              double center_y_m,
                              double anchor_depth_m,
                              double target_depth_m,
                              uint32_t n_anchors,
                              double design_elevation_rad,
                              struct ApCluster **out);

// Destroy a cluster handle. Passing NULL is a no-op.
//
// # Safety
// `cluster` must be a pointer previously returned by this library and not
// yet freed.
void ap_cluster_free(struct ApCluster *cluster);

// Coverage radius of a cluster at its design target depth.
//
// # Safety
// `cluster` must be a live handle; `out` must be valid.
enum ApStatus ap_coverage_radius(const struct ApCluster *cluster,
                                 double comm_range_m,
                                 enum ApCoverageRule rule,
                                 enum ApRadiusSemantics semantics,
                                 double *out);

// Closed-form center CRLB of a symmetric ring (m²).
//
// # Safety
// `out` must be a valid pointer.
enum ApStatus ap_center_crlb(uint32_t n_anchors,
                             double elevation_rad,
                             double sigma_d_sq,
                             double *out);

// CRLB trace (m²) at a point served by the cluster's in-range anchors. The
// profile must already span the slab from the point's depth to the anchor
// depth (see [`ap_profile_resample`]).
//
// # Safety
// `cluster` and `profile` must be live handles; `out` must be valid.
enum ApStatus ap_point_crlb(const struct ApCluster *cluster,
                            const struct ApProfile *profile,
                            double gamma,
                            double x_m,
                            double y_m,
                            double depth_m,
                            double comm_range_m,
                            enum ApCoverageRule rule,
                            double *out);

// Lay out clusters on the grid.
//
// # Safety
// `out` must be a valid pointer.
enum ApStatus ap_plan_layout(double side_km,
                             uint32_t n_total,
                             uint32_t per_cluster,
                             double d_com_m,
                             struct ApPlan **out);

// Destroy a plan handle. Passing NULL is a no-op.
//
// # Safety
// `plan` must be a pointer previously returned by this library and not yet
// freed.
void ap_plan_free(struct ApPlan *plan);

// Read the plan's derived scalar fields.
//
// # Safety
// `plan` must be a live handle; `out` must be valid.
enum ApStatus ap_plan_info(const struct ApPlan *plan, struct ApPlanInfo *out);

// Center coordinates of the cluster at `index` (row-major grid order).
//
// # Safety
// `plan` must be a live handle; `out_x` and `out_y` must be valid.
enum ApStatus ap_plan_center(const struct ApPlan *plan, size_t index, double *out_x, double *out_y);

// Stable-navigation margin (m²); positive means the condition holds.
//
// # Safety
// `out` must be a valid pointer.
enum ApStatus ap_stable_navigation_margin(double d_com_m,
                                          double d_h1_m,
                                          double sigma0_sq,
                                          double beta1,
                                          double beta2,
                                          double distance_unit_m,
                                          double *out);

// Largest serviceable region side (km). Returns `AP_STATUS_INFEASIBLE` when
// the margin is nonpositive for every gap; `out_side_km` is only written on
// `AP_STATUS_OK`.
//
// # Safety
// `out_side_km` must be a valid pointer.
enum ApStatus ap_max_coverage_side(uint32_t n_total,
                                   uint32_t per_cluster,
                                   double d_com_m,
                                   double sigma0_sq,
                                   double beta1,
                                   double beta2,
                                   double distance_unit_m,
                                   double *out_side_km);

// Closed-form expected voyage error (m²) of the scaling law.
//
// # Safety
// `out` must be a valid pointer.
enum ApStatus ap_scaling_law(uint32_t n_total,
                             uint32_t per_cluster,
                             double side_km,
                             double d_com_m,
                             double elevation_rad,
                             double sigma_d_sq,
                             double sigma0_sq,
                             double beta1,
                             double beta2,
                             double distance_unit_m,
                             double speed_mps,
                             double slot_s,
                             double *out);

// Seeded Monte Carlo voyages over the plan; deterministic for a given
// configuration and master seed.
//
// # Safety
// `plan` and `profile` must be live handles; `config` and `out` must be
// valid pointers.
enum ApStatus ap_monte_carlo_summary(const struct ApPlan *plan,
                                     const struct ApProfile *profile,
                                     const struct ApSimConfig *config,
                                     struct ApMcSummary *out);

// Least-squares fit of the exponential divergence law to parallel arrays of
// `delta_p` and `variance` samples.
//
// # Safety
// `delta_p` and `variance` must point to `len` readable doubles; `out` must
// be valid.
enum ApStatus ap_fit_divergence(const double *delta_p,
                                const double *variance,
                                size_t len,
                                struct ApFitResult *out);

// Library version as a static string.
const char *ap_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ANCHORPLAN_H */
