#include "eqstates/transfer_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace eqs {

std::vector<double> OperatorGrid::apply(const std::vector<double>& psi) const
{
    const auto n = static_cast<std::size_t>(grid_size);
    const auto d = static_cast<std::size_t>(degree);
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t b = 0; b < d; ++b) {
            const Entry& e = entries[i * d + b];
            const std::size_t right = e.left + 1 == n ? 0 : e.left + 1;
            acc += e.weight * ((1.0 - e.frac) * psi[e.left] + e.frac * psi[right]);
        }
        out[i] = acc;
    }
    return out;
}

std::vector<double> OperatorGrid::apply_adjoint(const std::vector<double>& nu) const
{
    const auto n = static_cast<std::size_t>(grid_size);
    const auto d = static_cast<std::size_t>(degree);
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t b = 0; b < d; ++b) {
            const Entry& e = entries[i * d + b];
            const std::size_t right = e.left + 1 == n ? 0 : e.left + 1;
            out[e.left] += nu[i] * e.weight * (1.0 - e.frac);
            out[right] += nu[i] * e.weight * e.frac;
        }
    }
    return out;
}

OperatorGrid build_operator(const MapSystem& map, const Potential& phi, int grid_size)
{
    require(grid_size >= map.degree() * 8, "build_operator: grid_size must be >= 8 * degree");
    OperatorGrid op;
    op.grid_size = grid_size;
    op.degree = map.degree();
    const auto n = static_cast<std::size_t>(grid_size);
    op.nodes.resize(n);
    op.entries.resize(n * static_cast<std::size_t>(op.degree));
    for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) / grid_size;
        op.nodes[i] = x;
        for (int b = 0; b < op.degree; ++b) {
            const double y = Circle::wrap(map.branch_inverse(b, x));
            const double pos = y * grid_size;
            const double fl = std::floor(pos);
            OperatorGrid::Entry e;
            e.left = static_cast<std::size_t>(fl) % n;
            e.frac = pos - fl;
            e.weight = std::exp(phi(y));
            require(e.weight > 0.0 && std::isfinite(e.weight), "build_operator: weights must be positive and finite");
            op.entries[i * static_cast<std::size_t>(op.degree) + static_cast<std::size_t>(b)] = e;
        }
    }
    return op;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

struct PowerResult {
    std::vector<double> vec;
    double lambda = 0.0;
    int iterations = 0;
};

/// Normalization: max = 1 when `by_max`, else sum = 1.
template <class Apply>
PowerResult power_iterate(Apply&& apply, std::size_t n, bool by_max, double tol, int max_iters, const char* what)
{
    std::vector<double> v(n, by_max ? 1.0 : 1.0 / static_cast<double>(n));
    double lambda = 0.0;
    const double move_tol = std::sqrt(tol);
    for (int it = 1; it <= max_iters; ++it) {
        auto w = apply(v);
        const double rq = dot(v, w) / dot(v, v);
        double scale = 0.0;
        for (double x : w) {
            scale = by_max ? std::max(scale, x) : scale + x;
        }
        if (!(scale > 0.0) || !std::isfinite(scale)) {
            throw NumericalError(std::string(what) + ": iterate lost positivity");
        }
        double move = 0.0;
        double top = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] /= scale;
            if (!(w[i] > 0.0)) {
                throw NumericalError(std::string(what) + ": iterate lost positivity");
            }
            move = std::max(move, std::fabs(w[i] - v[i]));
            top = std::max(top, w[i]);
        }
        move /= top;
        v = std::move(w);
        const bool settled = std::fabs(rq - lambda) < tol * std::max(1.0, rq) && move < move_tol;
        lambda = rq;
        if (settled) {
            return {std::move(v), lambda, it};
        }
    }
    throw NumericalError(std::string(what) + ": no convergence within " + std::to_string(max_iters) +
                         " iterations (no usable spectral gap at this grid?)");
}

} // namespace

EigenData leading_eigen(const OperatorGrid& op, double tol, int max_iters)
{
    require(tol > 0.0, "leading_eigen: tol must be positive");
    require(max_iters >= 1, "leading_eigen: max_iters must be positive");
    const auto n = static_cast<std::size_t>(op.grid_size);

    auto right = power_iterate([&](const std::vector<double>& v) { return op.apply(v); }, n, true, tol, max_iters,
                               "leading_eigen");
    auto left = power_iterate([&](const std::vector<double>& v) { return op.apply_adjoint(v); }, n, false, tol,
                              max_iters, "leading_eigen (adjoint)");

    EigenData out;
    out.nodes = op.nodes;
    out.lambda = right.lambda;
    out.log_lambda = std::log(right.lambda);
    out.iterations = right.iterations;
    out.adjoint_iterations = left.iterations;
    out.eigenfunction = std::move(right.vec);
    out.eigenmeasure = std::move(left.vec);

    const auto lh = op.apply(out.eigenfunction);
    for (std::size_t i = 0; i < n; ++i) {
        out.residual = std::max(out.residual, std::fabs(lh[i] - out.lambda * out.eigenfunction[i]));
    }
    out.equilibrium_density.resize(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        out.equilibrium_density[i] = out.eigenfunction[i] * out.eigenmeasure[i];
        total += out.equilibrium_density[i];
    }
    for (double& m : out.equilibrium_density) {
        m /= total;
    }
    return out;
}

EquilibriumReport check_equilibrium(const MapSystem& map, const EigenData& eigen,
                                    const std::vector<std::function<double(double)>>& test_functions,
                                    std::optional<double> pressure_rate)
{
    require(!eigen.equilibrium_density.empty(), "check_equilibrium: eigen data is empty");
    EquilibriumReport r;
    const auto& mu = eigen.equilibrium_density;
    for (const auto& psi : test_functions) {
        double before = 0.0;
        double after = 0.0;
        for (std::size_t i = 0; i < mu.size(); ++i) {
            const double x = eigen.nodes[i];
            before += mu[i] * psi(x);
            after += mu[i] * psi(map(x));
        }
        r.invariance_defect = std::max(r.invariance_defect, std::fabs(after - before));
    }
    if (pressure_rate) {
        r.pressure_match = std::fabs(eigen.log_lambda - *pressure_rate);
    }
    return r;
}

} // namespace eqs
