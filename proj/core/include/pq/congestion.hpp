#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pq/metric_space.hpp"
#include "pq/quotient.hpp"

namespace pq {

// Scale parameters for the congestion probe.
//   r      — inner probe radius: the neighborhood must cover B_r(x)
//   R      — locality bound for connectivity paths; infinity means whole-space
//            delta-components decide membership
//   delta  — connectivity resolution for the component graph
//   kappa_thin — skip x when its own component holds more than
//            kappa_thin * (2r/max_nn + 1) points of B_r(x); points inside a
//            delta-glued crowd are locally connected at sample resolution.
//            <= 0 disables the gate.
//   coarse — foreign structure must persist when the resolution is widened to
//            coarse*delta; <= 1 disables.
struct CongestionParams {
    double r = 0.0;
    double R = 0.0;
    double delta = 0.0;
    double kappa_thin = 1.8;
    double coarse = 1.0;

    void validate() const;
};

// delta = 2 * max nearest-neighbor distance, r = 3*delta, R unbounded.
CongestionParams default_scales(const MetricSpace& space);

// Multipliers only; lets the pipeline re-derive absolute scales on the
// quotient it builds.
struct ScalePolicy {
    double r_over_delta = 3.0;
    double R_over_delta = 0.0;  // 0 = unbounded locality
    double kappa_thin = 1.8;
    double coarse = 1.0;
    std::optional<double> explicit_delta;  // absolute override

    CongestionParams resolve(const MetricSpace& space) const;
};

struct CongestionResult {
    SubsetRef points;
    bool delta_graph_connected = true;
    int delta_component_count = 1;
    std::string warning;  // set when the delta-graph is disconnected
};

// x is congested when some y with d(x,y) <= r lies outside the
// delta-component of x within B_R(x), subject to the optional gates above.
CongestionResult congestion_set(const MetricSpace& space, const CongestionParams& params);

// F with its complement O, the components of F at resolution delta_F, and the
// assembled full partition (F-components plus singletons of O).
struct CanonicalDecomposition {
    SubsetRef N;   // detected congestion points (or F when built directly)
    SubsetRef F;   // closed hull: N, optionally thickened by a collar
    SubsetRef O;   // complement of F
    Partition SF;          // partition of F into delta_F-components
    Partition partition;   // full partition: SF classes + singletons of O
};

CanonicalDecomposition canonical_partition(const MetricSpace& space, const SubsetRef& F,
                                           double delta_F);

// All points within distance c of S (including S itself).
SubsetRef thicken(const MetricSpace& space, const SubsetRef& S, double c);

struct PipelineConfig {
    ScalePolicy scales;
    double delta_f = 0.0;    // 0 = use the resolved delta
    double tau_merge = 0.0;
    double collar = 0.0;
    // F override: when set, skip detection and use this subset as F
    std::optional<SubsetRef> f_override;
    // remove these points from F after detection (the F-dagger mode)
    std::optional<SubsetRef> exclude_from_f;
};

struct PipelineReport {
    CongestionParams scales_used;
    CongestionParams residual_scales_used;
    CanonicalDecomposition decomposition;
    QuotientSpace qspace;
    MetricSpace quotient_metric;
    CongestionResult primary;            // detection on the input
    SubsetRef residual;                  // congestion of the quotient (Q-class ids)
    std::vector<int> f_image_classes;    // Q-class ids of the F-side classes
    PropertyReport separation;
    PropertyReport local_isometry;
    PropertyReport pseudometric;
    std::string warning;
    double delta_f = 0.0;
    double tau_merge = 0.0;
    double collar = 0.0;
    bool residual_empty() const { return residual.empty(); }
    bool checks_ok() const {
        return separation.ok() && local_isometry.ok() && pseudometric.ok();
    }
};

// congestion_set -> canonical_partition -> delta_p -> quotient_space, then
// re-detects congestion on the quotient (scales re-derived there by the same
// policy) and embeds the separation / local-isometry / pseudo-metric checks.
PipelineReport peano_pipeline(const MetricSpace& space, const PipelineConfig& config);

// The F-dagger check: quotient by a hull that deliberately excludes some
// detected congestion points; the residual must be non-empty and contain
// images of the excluded points. Throws when nothing is excluded.
struct ResidualCheck {
    PipelineReport report;
    SubsetRef excluded;          // point ids excluded from F
    SubsetRef excluded_images;   // their Q-class ids
    bool residual_hits_excluded = false;
};

ResidualCheck residual_congestion_check(const MetricSpace& space, const SubsetRef& f_dagger,
                                        const PipelineConfig& config);

}  // namespace pq
