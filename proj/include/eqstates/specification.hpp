#pragma once

#include "eqstates/decomposition.hpp"
#include "eqstates/natural_extension.hpp"

#include <string>
#include <vector>

namespace eqs {

struct GlueOptions {
    /// Largest allowed transition; negative means mixing_time(eps).
    int tau_cap = -1;
    /// Segments must be longer than k0.
    int k0 = 1;
    /// A bridge is accepted once it reaches this fraction of the next
    /// segment's Bowen arc; otherwise the best overlap within the cap is used.
    double overlap_fraction = 0.4;
};

/// A realized gluing. Segment j is shadowed during times
/// [starts[j], starts[j] + n_j); schedule[j] = starts[j] + n_j and
/// starts[j+1] = schedule[j] + transitions[j].
///
/// `orbit` holds w_0 = glue_point, ..., w_T. It is rebuilt backward through
/// inverse branches, so it is an orbit up to rounding even where forward
/// iteration of glue_point in floating point would have lost all digits.
struct GluingPlan {
    std::vector<OrbitSegment> segments;
    double eps = 0.0;
    int tau_cap = 0;
    std::vector<int> transitions;
    std::vector<int> starts;
    std::vector<int> schedule;
    double glue_point = 0.0;
    std::vector<double> orbit;
};

GluingPlan glue_base(const MapSystem& map, const DecompositionConfig& cfg, const std::vector<OrbitSegment>& segments,
                     double eps, const GlueOptions& opts = {});

/// The gluing construction without the G_sigma precondition.
GluingPlan glue_orbits(const MapSystem& map, const std::vector<OrbitSegment>& segments, double eps, int tau_cap,
                       double overlap_fraction = 0.4);

/// Largest d(g^m x_j, w_{starts[j] + m}). Returns +inf when consecutive orbit
/// entries are not related by g to within 1e-9.
double verify_shadow(const MapSystem& map, const GluingPlan& plan);

struct ExtSegment {
    ExtPoint point;
    int length = 1;
};

/// Gluing in the natural extension. Segments after the first are prefixed by
/// tau_s backward coordinates so the glued point also follows their fibers
/// for tau_s steps; the base gluing runs at eps (a-1)/(2a).
struct ExtGluingPlan {
    std::vector<ExtSegment> segments;
    double eps = 0.0;
    ExtensionConfig cfg;
    double base_eps = 0.0;
    int tau_s = 0;
    int tau_cap = 0;
    std::vector<int> transitions;
    std::vector<int> starts;
    GluingPlan base;
    ExtPoint glue_point;
};

ExtGluingPlan glue_extension(const MapSystem& map, const DecompositionConfig& dec,
                             const std::vector<ExtSegment>& segments, double eps, const ExtensionConfig& cfg,
                             const GlueOptions& opts = {});

/// hat_g^t of the glued point, depth cfg.K.
ExtPoint glued_iterate(const ExtGluingPlan& plan, int t);

/// (largest truncated d^ between hat_g^m of each segment and the glued orbit,
/// tail bound).
std::pair<double, double> verify_shadow(const MapSystem& map, const ExtGluingPlan& plan);

std::string plan_to_json(const GluingPlan& plan, double verified);
std::string plan_to_json(const ExtGluingPlan& plan, double verified);

} // namespace eqs
