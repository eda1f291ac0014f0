#pragma once

#include "eqstates/orbit_geometry.hpp"

#include <optional>
#include <span>
#include <vector>

namespace eqs {

/// Hyperbolicity threshold: a window of the orbit is good when the average
/// of log sigma(g^i x) over it stays below log(sigma).
struct DecompositionConfig {
    double sigma = 0.9;

    explicit DecompositionConfig(double s = 0.9) : sigma(s)
    {
        require(s > 0.0 && s < 1.0, "sigma must lie in (0,1)");
    }
    double log_sigma() const { return std::log(sigma); }
};

enum class SegmentClass { good, bad, neither };

const char* to_string(SegmentClass c);

/// Split n = p + g + s of a segment. The prefix part is always empty here.
struct Decomposition {
    int p_len = 0;
    int g_len = 0;
    int s_len = 0;
};

struct ObstructionSample {
    int horizon = 0;
    std::vector<double> points;
    /// Smallest K <= horizon with every average over [0, n), K <= n <= horizon,
    /// at least log(sigma); empty when there is none.
    std::vector<std::optional<int>> first_time;
};

/// log sigma(g^i x) for i = 0..n-1.
std::vector<double> log_contraction_profile(const MapSystem& map, double x, int n);

/// x in Sigma^{j,n}: mean of log sigma(g^i x) over j <= i < n below log(sigma).
bool in_sigma_window(const MapSystem& map, const DecompositionConfig& cfg, double x, int j, int n);

SegmentClass classify_segment(const MapSystem& map, const DecompositionConfig& cfg, const OrbitSegment& seg);
SegmentClass classify_profile(std::span<const double> log_sigma, double log_threshold);

/// Split at the smallest m whose suffix (g^m x, n - m) is bad. The prefix
/// (x, m) is then good or empty.
Decomposition decompose(const MapSystem& map, const DecompositionConfig& cfg, const OrbitSegment& seg);
Decomposition decompose_profile(std::span<const double> log_sigma, double log_threshold);

/// Finite-horizon proxy for membership in the set A of points whose averages
/// eventually stay at or above log(sigma).
ObstructionSample obstruction_sample(const MapSystem& map, const DecompositionConfig& cfg,
                                     std::span<const double> points, int horizon);

/// Points y_0..y_n with y_n = `end` and y_k the inverse branch through g^k x
/// applied to y_{k+1}: the pull-back of `end` along the orbit of x.
std::vector<double> pull_back_along(const MapSystem& map, double x, int n, double end);

SegmentCollection good_collection(const MapSystem& map, const DecompositionConfig& cfg);
SegmentCollection bad_collection(const MapSystem& map, const DecompositionConfig& cfg);
/// Segments (x, n) with x in A_k at the given horizon.
SegmentCollection obstruction_collection(const MapSystem& map, const DecompositionConfig& cfg, int k, int horizon);

} // namespace eqs
