#pragma once

#include "eqstates/decomposition.hpp"
#include "eqstates/potential.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace eqs {

/// Weighted metric on backward orbits: sum_n a^{-n} d(x_n, y_n), truncated
/// after coordinate K.
struct ExtensionConfig {
    double a = 2.0;
    int K = 20;
    double diam = Circle::diameter;

    ExtensionConfig() = default;
    ExtensionConfig(double a_, int K_) : a(a_), K(K_)
    {
        require(a_ > 1.0, "a must be > 1");
        require(K_ >= 0, "K must be >= 0");
    }

    /// diam a^{-K} a/(a-1), an upper bound for the neglected coordinates.
    double tail_bound() const { return diam * std::pow(a, -K) * a / (a - 1.0); }

    /// Smallest K whose tail bound is below `tolerance`.
    static int depth_for(double a, double tolerance, double diam = Circle::diameter);
};

/// A truncated backward orbit (x_0, ..., x_K) with g(x_{i+1}) = x_i.
struct ExtPoint {
    std::vector<double> coords;

    int depth() const { return static_cast<int>(coords.size()) - 1; }
    double x0() const { return coords.front(); }
};

/// How to choose preimages when a backward orbit is extended.
struct ExtendPolicy {
    enum class Kind { lex_min, random, user } kind = Kind::lex_min;
    std::uint64_t seed = 0;
    std::vector<int> branches;

    static ExtendPolicy lex_min() { return {}; }
    static ExtendPolicy random(std::uint64_t seed) { return {Kind::random, seed, {}}; }
    static ExtendPolicy user(std::vector<int> branches) { return {Kind::user, 0, std::move(branches)}; }

    /// Branch ids for `count` successive steps.
    std::vector<int> draw(int count, int degree) const;
};

ExtPoint extend(const MapSystem& map, double x, int K, const ExtendPolicy& policy = {});

/// (g(x_0), x_0, ..., x_{K-1}).
ExtPoint hat_g(const MapSystem& map, const ExtPoint& p);
/// (x_1, ..., x_K, y) with y a preimage of x_K chosen by the policy.
ExtPoint hat_g_inverse(const MapSystem& map, const ExtPoint& p, const ExtendPolicy& policy = {});

inline double project(const ExtPoint& p) { return p.x0(); }

/// (truncated sum, tail bound); the true distance lies in [first, first + second].
std::pair<double, double> hat_distance(const ExtensionConfig& cfg, const ExtPoint& p, const ExtPoint& q);

/// A potential on the extension. Projection mode evaluates psi(x_0); the
/// fiber-averaged mode evaluates sum_k a^{-k} psi(x_k) over the stored coords.
class LiftedPotential {
public:
    enum class Mode { projection, fiber_averaged };

    static LiftedPotential projection(Potential psi);
    static LiftedPotential fiber_averaged(Potential psi, double a);

    double operator()(const ExtPoint& p) const;

    Mode mode() const { return mode_; }
    const Potential& base() const { return psi_; }
    double holder_constant() const { return holder_constant_; }
    double holder_exponent() const { return psi_.holder_exponent(); }
    bool is_constant() const { return psi_.is_constant(); }

private:
    LiftedPotential(Mode mode, Potential psi, double a, double c);

    Mode mode_;
    Potential psi_;
    double a_;
    double holder_constant_;
};

/// C c^alpha (sigma^alpha / (1 - sigma^alpha) + 1 / (1 - a^{-alpha})) with
/// c = eps max(a / (a - sigma), 1).
double bowen_bound(const ExtensionConfig& cfg, const DecompositionConfig& dec, double holder_constant,
                   double holder_exponent, double eps);

struct BowenCheck {
    double empirical_max = 0.0;
    double bound = 0.0;
    /// Growth of the bound when eps is enlarged by the tail bound.
    double slack = 0.0;
    int samples = 0;
    int rejected = 0;
    bool holds() const { return empirical_max <= bound + slack; }
};

struct BowenSampling {
    int n_min = 5;
    int n_max = 20;
    std::uint64_t seed = 1;
    int max_attempts = 200;
};

/// Samples segments (x^, n) whose projection is in G_sigma, builds companions
/// in the d^_n Bowen ball (pull-back of a point near g^n x_0 plus a random
/// fiber switch) and records the largest |S_n phi^(x^) - S_n phi^(y^)|.
BowenCheck verify_bowen(const MapSystem& map, const ExtensionConfig& cfg, const DecompositionConfig& dec,
                        const LiftedPotential& phi, double eps, int n_samples, const BowenSampling& sampling = {});

/// Birkhoff sum of a lifted potential along hat_g.
double hat_birkhoff_sum(const MapSystem& map, const LiftedPotential& phi, ExtPoint p, int n);

/// Smallest k with diam a^{-k} a/(a-1) < target.
int fiber_sync_time(double diam, double a, double target);

} // namespace eqs
