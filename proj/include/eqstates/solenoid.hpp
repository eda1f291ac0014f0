#pragma once

#include "eqstates/decomposition.hpp"
#include "eqstates/natural_extension.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace eqs {

/// f(theta, u) = (2 theta mod 1, lambda_s u + r e(theta)) on the solid torus
/// S^1 x D, with e(theta) = (cos 2 pi theta, sin 2 pi theta).
struct SolenoidSystem {
    MapSystem base = MapSystem::doubling();
    double lambda_s = 0.25;
    double r = 0.5;

    SolenoidSystem() = default;
    SolenoidSystem(double lambda, double radius);

    /// Lipschitz constant of holonomies in the base distance: pi r / (1 - lambda_s / 2).
    double holonomy_lipschitz() const;
};

using Disk = std::array<double, 2>;

/// A point of a finite-depth approximant of the attractor. `backward` holds
/// base coordinates theta_0 = theta, theta_1, ..., theta_J with
/// g(theta_{j+1}) = theta_j; the disk coordinate is f^J applied to `seed`
/// placed over theta_J.
struct AttractorPoint {
    double theta = 0.0;
    Disk disk{0.0, 0.0};
    std::vector<double> backward;
    Disk seed{0.0, 0.0};

    int depth() const { return static_cast<int>(backward.size()) - 1; }
    /// Branch ids of theta_1, ..., theta_J.
    std::vector<int> itinerary(const MapSystem& base) const;
};

/// Distance on the solid torus: circle distance plus Euclidean disk distance.
double torus_distance(const AttractorPoint& p, const AttractorPoint& q);

AttractorPoint apply_f(const SolenoidSystem& sys, const AttractorPoint& p);

/// Point over `theta` with the given backward base orbit and seed.
AttractorPoint attractor_point(const SolenoidSystem& sys, std::vector<double> backward, Disk seed = {0.0, 0.0});

/// Point over theta following the branch ids in `itinerary`.
AttractorPoint attractor_point(const SolenoidSystem& sys, double theta, const std::vector<int>& itinerary,
                               Disk seed = {0.0, 0.0});

/// The 2^depth approximant points in the fiber over y, in lexicographic
/// itinerary order. Throws CapacityError above `max_depth`.
std::vector<AttractorPoint> fiber_sample(const SolenoidSystem& sys, double y, int depth, int max_depth = 22);

/// (theta_0, ..., theta_J).
ExtPoint conjugacy_h(const SolenoidSystem& sys, const AttractorPoint& p, int J);

/// Moves p to the fiber over y along its local unstable leaf: each backward
/// coordinate is replaced by the preimage nearest to p's own.
AttractorPoint holonomy(const SolenoidSystem& sys, const AttractorPoint& p, double y);

struct MetricBracket {
    double c_low = 0.0;  // min ratio d_M(x,y) / (d_X + d_M(h x, y))
    double c_high = 0.0; // max ratio
    double constant() const { return std::max(c_high, 1.0 / c_low); }
    int pairs = 0;
};

MetricBracket metric_equivalence(const SolenoidSystem& sys, int samples, std::uint64_t seed = 1, int depth = 20);

/// A potential on the solid torus with Hoelder data for torus_distance.
struct TorusPotential {
    std::string name;
    std::function<double(double, const Disk&)> fn;
    double holder_constant = 0.0;
    double holder_exponent = 1.0;

    double operator()(const AttractorPoint& p) const { return fn(p.theta, p.disk); }

    static TorusPotential constant(double c);
    /// cos(2 pi theta) + u, with constant 2 pi and exponent 1.
    static TorusPotential cos_plus_u();
};

struct AttractorBowen {
    double empirical_max = 0.0;
    double bound = 0.0;
    /// Times where d_M(f^i x, f^i y) exceeded eps sigma^{n-i} + lambda_s^i eps.
    int estimate_violations = 0;
    double worst_estimate_ratio = 0.0;
    int samples = 0;
    bool holds() const { return estimate_violations == 0 && empirical_max <= bound; }
};

/// C_0 eps^alpha (sigma^alpha / (1 - sigma^alpha) + 1 / (1 - lambda_s^alpha)).
double attractor_bowen_bound(const SolenoidSystem& sys, const DecompositionConfig& dec, const TorusPotential& phi,
                             double eps);

AttractorBowen attractor_bowen_check(const SolenoidSystem& sys, const DecompositionConfig& dec,
                                     const TorusPotential& phi, double eps, int n_samples, std::uint64_t seed = 1,
                                     int n_min = 5, int n_max = 20, int depth = 24);

/// Rows theta,u,v,itinerary.
void write_point_cloud(std::ostream& out, const SolenoidSystem& sys, const std::vector<AttractorPoint>& points);

} // namespace eqs
