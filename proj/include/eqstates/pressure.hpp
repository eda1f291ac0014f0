#pragma once

#include "eqstates/decomposition.hpp"
#include "eqstates/orbit_geometry.hpp"
#include "eqstates/workers.hpp"

#include <string>
#include <vector>

namespace eqs {

struct PressureOptions {
    GeometryOptions geometry;
    WorkerPool workers{1};
};

/// Growth of log Lambda_n at a fixed scale. `rate` is the least-squares slope
/// of log Lambda_n against n over the upper half of the n range and
/// `rate_uncertainty` its standard error. `empty` means Lambda_n = 0 over the
/// whole fit window; rate is then -inf.
struct PressureEstimate {
    double eps = 0.0;
    std::vector<int> n_values;
    std::vector<double> log_partition_sums;
    std::vector<std::size_t> set_sizes;
    double rate = 0.0;
    double rate_uncertainty = 0.0;
    double limsup_proxy = 0.0;
    bool empty = false;
};

/// Fit of an already computed series.
PressureEstimate fit_growth(double eps, std::vector<int> n_values, std::vector<double> log_sums);

PressureEstimate pressure_at_scale(const MapSystem& map, const Potential& phi, const SegmentCollection& coll,
                                   double eps, int n_max, const PressureOptions& opts = {});

/// As pressure_at_scale, with seeds[n-1] kept first in the depth-n separated
/// set. The chosen sets are written to `chosen` when non-null. Seeding with
/// the sets of a subcollection makes Lambda_n monotone under inclusion.
PressureEstimate pressure_at_scale_seeded(const MapSystem& map, const Potential& phi, const SegmentCollection& coll,
                                          double eps, int n_max, const std::vector<CandidatePool>* seeds,
                                          std::vector<CandidatePool>* chosen, const PressureOptions& opts = {});

struct KatokCover {
    double log_value = -std::numeric_limits<double>::infinity();
    std::size_t centres = 0;
    double covered_mass = 0.0;
    double value() const { return std::exp(log_value); }
};

/// Greedy approximation of Katok's s_n(phi, delta, mu, eta) for the empirical
/// measure of `orbit_sample`. Two covers are built, greedy by uncovered mass
/// (ties to smaller S_n phi) and the prefix of the greedy separated set, and the
/// lighter one is kept.
KatokCover katok_cover(const MapSystem& map, const Potential& phi, std::span<const double> orbit_sample,
                       double delta, double eta, int n);
double katok_sn(const MapSystem& map, const Potential& phi, std::span<const double> orbit_sample, double delta,
                double eta, int n);

struct GapReport {
    double sigma = 0.0;
    int n_max = 0;
    PressureEstimate p_full;
    PressureEstimate p_bad;
    double gap = 0.0;
    double combined_uncertainty = 0.0;
    bool hypothesis_holds = false;
};

/// One report per sigma, in grid order. The full pressure is computed once.
/// S_sigma shrinks as sigma grows, so bad-set estimates are built for
/// decreasing sigma, each seeded with the sets of the previous (larger) sigma.
/// Lambda_n of p_bad is then nonincreasing in sigma for every n.
std::vector<GapReport> gap_report(const MapSystem& map, const Potential& phi, const std::vector<double>& sigma_grid,
                                  double eps, int n_max, const PressureOptions& opts = {});

GapReport make_gap_report(double sigma, PressureEstimate full, PressureEstimate bad);

struct HypothesisReport {
    bool pass = false;
    bool specification = false;
    bool bowen = false;
    bool gap = false;
    std::vector<std::string> blockers;
    std::string label;
};

HypothesisReport ct_hypothesis_check(const GapReport& gap, bool bowen_finite, bool spec_verified);

} // namespace eqs
