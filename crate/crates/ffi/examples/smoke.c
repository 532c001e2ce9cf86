/* Minimal end-to-end use of the C API.
 *
 * Build (after `cargo build -p anchorplan-ffi`):
 *   cc crates/ffi/examples/smoke.c -Icrates/ffi/include \
 *      -Ltarget/debug -lanchorplan_ffi -lm -o smoke
 *   LD_LIBRARY_PATH=target/debug ./smoke
 */
#include <assert.h>
#include <math.h>
#include <stdio.h>

#include "anchorplan.h"

int main(void) {
    ApProfile *profile = NULL;
    assert(ap_profile_builtin("iso1500", &profile) == AP_STATUS_OK);
    ApProfile *slab = NULL;
    assert(ap_profile_resample(profile, 500.0, 3000.0, 100.0, &slab) == AP_STATUS_OK);

    double alpha = 46.0 * M_PI / 180.0;
    double sigma_sq = 0.0;
    assert(ap_los_variance(slab, alpha, 0.001, &sigma_sq) == AP_STATUS_OK);

    ApCluster *cluster = NULL;
    assert(ap_cluster_ring(0.0, 0.0, 3000.0, 500.0, 4, alpha, &cluster) == AP_STATUS_OK);
    double radius = 0.0;
    assert(ap_coverage_radius(cluster, 5000.0, AP_COVERAGE_RULE_AT_LEAST_THREE,
                              AP_RADIUS_SEMANTICS_LARGEST_COVERED_DISC,
                              &radius) == AP_STATUS_OK);

    double crlb = 0.0;
    assert(ap_center_crlb(4, alpha, sigma_sq, &crlb) == AP_STATUS_OK);
    printf("sigma_d^2 = %.6e m^2, d_com = %.1f m, center CRLB = %.6e m^2\n",
           sigma_sq, radius, crlb);

    ApPlan *plan = NULL;
    assert(ap_plan_layout(20.0, 48, 4, radius, &plan) == AP_STATUS_OK);
    ApPlanInfo info;
    assert(ap_plan_info(plan, &info) == AP_STATUS_OK);
    printf("plan: %u clusters on a %ux%u grid, gap d_h1 = %.1f m\n",
           info.n_clusters, info.per_axis, info.per_axis, info.d_h1_m);

    ApSimConfig config = {
        .anchor_depth_m = 3000.0,
        .target_depth_m = 500.0,
        .design_elevation_rad = alpha,
        .comm_range_m = 5000.0,
        .gamma = 0.001,
        .sigma0_sq = 0.01,
        .beta1 = 0.039,
        .beta2 = 0.053,
        .distance_unit_m = 1000.0,
        .speed_mps = 2.0,
        .slot_s = 50.0,
        .layer_thickness_m = 100.0,
        .path_kind = AP_PATH_KIND_RANDOM,
        .coverage_rule = AP_COVERAGE_RULE_AT_LEAST_THREE,
        .trials = 20,
        .master_seed = 7,
    };
    ApMcSummary summary;
    assert(ap_monte_carlo_summary(plan, profile, &config, &summary) == AP_STATUS_OK);
    printf("monte carlo: %u trials, mean error %.5f m^2 (rms %.3f m)\n",
           summary.trials, summary.mean, sqrt(summary.mean));

    ap_plan_free(plan);
    ap_cluster_free(cluster);
    ap_profile_free(slab);
    ap_profile_free(profile);
    puts("ok");
    return 0;
}
