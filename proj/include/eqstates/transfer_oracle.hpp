#pragma once

#include "eqstates/maps.hpp"
#include "eqstates/potential.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace eqs {

/// Discretized transfer operator on N uniform nodes i/N:
/// (L psi)(x_i) = sum_b e^{phi(y_b)} psi(y_b), with g(y_b) = x_i and psi
/// linearly interpolated between nodes.
struct OperatorGrid {
    struct Entry {
        std::size_t left = 0;  // node index left of the preimage
        double frac = 0.0;     // position between left and left + 1
        double weight = 0.0;   // e^{phi(preimage)}
    };

    int grid_size = 0;
    int degree = 0;
    std::vector<double> nodes;
    std::vector<Entry> entries; // grid_size x degree, row-major

    std::vector<double> apply(const std::vector<double>& psi) const;
    std::vector<double> apply_adjoint(const std::vector<double>& nu) const;
};

OperatorGrid build_operator(const MapSystem& map, const Potential& phi, int grid_size);

struct EigenData {
    double lambda = 0.0;
    double log_lambda = 0.0;
    std::vector<double> nodes;
    std::vector<double> eigenfunction;       // max = 1
    std::vector<double> eigenmeasure;        // sums to 1
    std::vector<double> equilibrium_density; // masses, sums to 1
    double residual = 0.0;                   // max |L h - lambda h|
    int iterations = 0;
    int adjoint_iterations = 0;
};

/// Power iteration for (lambda, h) and on the adjoint for nu. Stops when
/// successive Rayleigh quotients differ by less than `tol` (relative to
/// lambda) and the normalized iterate moves less than sqrt(tol). Throws
/// NumericalError when either iteration does not settle within `max_iters`.
EigenData leading_eigen(const OperatorGrid& op, double tol = 1e-13, int max_iters = 20000);

struct EquilibriumReport {
    double invariance_defect = 0.0;
    /// |log lambda - rate| when a pressure rate was supplied.
    std::optional<double> pressure_match;
};

EquilibriumReport check_equilibrium(const MapSystem& map, const EigenData& eigen,
                                    const std::vector<std::function<double(double)>>& test_functions,
                                    std::optional<double> pressure_rate = std::nullopt);

} // namespace eqs
