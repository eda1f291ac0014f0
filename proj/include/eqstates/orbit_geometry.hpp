#pragma once

#include "eqstates/maps.hpp"
#include "eqstates/potential.hpp"

#include <cstddef>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace eqs {

/// The finite orbit segment (x, g x, ..., g^{n-1} x).
struct OrbitSegment {
    double start = 0.0;
    int length = 1;
};

/// A collection D of orbit segments, given by its membership test. An empty
/// test means every segment belongs.
struct SegmentCollection {
    std::string name = "full";
    std::function<bool(double, int)> contains;

    static SegmentCollection full() { return {}; }
    bool test(double x, int n) const { return !contains || contains(x, n); }
};

double birkhoff_sum(const MapSystem& map, const Potential& phi, const OrbitSegment& seg);

/// d_n(x, y) = max_{0<=k<n} d(g^k x, g^k y).
double bowen_distance(const MapSystem& map, double x, double y, int n);

/// Geometric midpoints of the depth-n cylinders, in lexicographic address order
/// (which is also increasing position on [0,1)).
std::vector<double> cylinder_representatives(const MapSystem& map, int n, std::size_t node_cap);

struct GeometryOptions {
    std::size_t node_cap = std::size_t{1} << 22;
};

/// Representatives of D_n together with their orbits and Birkhoff sums.
struct CandidatePool {
    int n = 0;
    std::vector<double> points;
    std::vector<double> orbits; // row-major, points.size() x n
    std::vector<double> sums;   // S_n phi

    std::size_t size() const { return points.size(); }
    std::span<const double> orbit(std::size_t i) const
    {
        return {orbits.data() + i * static_cast<std::size_t>(n), static_cast<std::size_t>(n)};
    }

    static CandidatePool from_points(const MapSystem& map, const Potential& phi, std::span<const double> points,
                                     int n);
    /// Cylinder midpoints filtered by the collection's membership test.
    static CandidatePool cylinders(const MapSystem& map, const Potential& phi, const SegmentCollection& coll,
                                   int n, const GeometryOptions& opts = {});
};

struct SeparatedSet {
    CandidatePool chosen;
    double log_partition_sum = -std::numeric_limits<double>::infinity();
    std::size_t candidates = 0;
    /// Pool index of each chosen point, or npos for seed points.
    std::vector<std::size_t> source;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::size_t size() const { return chosen.size(); }
    const std::vector<double>& points() const { return chosen.points; }
    double partition_sum() const { return std::exp(log_partition_sum); }
};

/// Greedy maximal (n, eps)-separated subset of the pool, visited by descending
/// S_n phi and then by address. Points of `seed` are kept first; they must be
/// members of D_n and mutually separated, so a separated set found for a
/// smaller collection can be extended to a larger one. The weight is a lower
/// bound for the supremum in the partition sum.
SeparatedSet greedy_separated(const CandidatePool& pool, double eps, const CandidatePool* seed = nullptr);

std::vector<double> separated_set(const MapSystem& map, const SegmentCollection& coll, int n, double eps,
                                  const Potential* phi = nullptr, const GeometryOptions& opts = {});

double partition_sum_sep(const MapSystem& map, const Potential& phi, const SegmentCollection& coll, int n,
                         double eps, const GeometryOptions& opts = {});

/// Weight of the lighter of two (n, eps)-spanning sets of the pool: a greedy
/// set cover and the maximal separated set. Never exceeds partition_sum_sep.
double partition_sum_span(const MapSystem& map, const Potential& phi, const SegmentCollection& coll, int n,
                          double eps, const GeometryOptions& opts = {});

double log_partition_sum_span(const CandidatePool& pool, double eps);

/// Indices j with d_n(pool[i], pool[j]) < eps (or <= eps when `closed`), i excluded.
std::vector<std::vector<std::size_t>> neighbour_lists(const CandidatePool& pool, double eps, bool closed);

double log_sum_exp(std::span<const double> values);

} // namespace eqs
