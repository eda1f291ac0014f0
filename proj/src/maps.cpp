#include "eqstates/maps.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace eqs {

namespace {

constexpr double kRootTol = 1e-12;
constexpr double kSafety = 1.01;
constexpr int kLipschitzSamples = 64;

} // namespace

MapSystem::MapSystem(Kind kind, double param, int degree, std::vector<double> knots)
    : kind_(kind), param_(param), degree_(degree), knots_(std::move(knots)), epsilon0_(0.0)
{
    double max_slope = 0.0;
    switch (kind_) {
    case Kind::doubling:
        max_slope = 2.0;
        break;
    case Kind::manneville_pomeau:
        max_slope = 2.0 + param_;
        break;
    case Kind::perturbed:
        max_slope = 2.0 + std::fabs(param_);
        break;
    case Kind::tabulated: {
        const double m = static_cast<double>(knots_.size() - 1);
        for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
            max_slope = std::max(max_slope, (knots_[i + 1] - knots_[i]) * m);
        }
        break;
    }
    }
    epsilon0_ = 0.5 / max_slope;
}

MapSystem MapSystem::doubling()
{
    return MapSystem(Kind::doubling, 0.0, 2, {});
}

MapSystem MapSystem::manneville_pomeau(double alpha)
{
    require(alpha > 0.0 && alpha < 1.0, "manneville_pomeau: alpha must lie in (0,1)");
    return MapSystem(Kind::manneville_pomeau, alpha, 2, {});
}

MapSystem MapSystem::perturbed(double delta)
{
    require(std::fabs(delta) < 1.0, "perturbed: |delta| must be below 1");
    return MapSystem(Kind::perturbed, delta, 2, {});
}

MapSystem MapSystem::tabulated(std::vector<double> knots)
{
    require(knots.size() >= 3, "tabulated: need at least 3 knots");
    require(knots.front() == 0.0, "tabulated: first knot must be 0");
    const double top = knots.back();
    const int degree = static_cast<int>(std::lround(top));
    require(degree >= 2 && std::fabs(top - degree) < 1e-12,
            "tabulated: last knot must be an integer degree >= 2");
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        require(knots[i + 1] > knots[i], "tabulated: knots must be strictly increasing");
    }
    knots.back() = degree;
    return MapSystem(Kind::tabulated, 0.0, degree, std::move(knots));
}

std::string MapSystem::name() const
{
    std::ostringstream os;
    switch (kind_) {
    case Kind::doubling:
        os << "doubling";
        break;
    case Kind::manneville_pomeau:
        os << "manneville_pomeau(" << param_ << ")";
        break;
    case Kind::perturbed:
        os << "perturbed(" << param_ << ")";
        break;
    case Kind::tabulated:
        os << "tabulated(" << knots_.size() << " knots)";
        break;
    }
    return os.str();
}

double MapSystem::lift(double x) const
{
    switch (kind_) {
    case Kind::doubling:
        return 2.0 * x;
    case Kind::manneville_pomeau:
        return x + std::pow(x, 1.0 + param_);
    case Kind::perturbed:
        return 2.0 * x + param_ / (2.0 * std::numbers::pi) * std::sin(2.0 * std::numbers::pi * x);
    case Kind::tabulated: {
        const double m = static_cast<double>(knots_.size() - 1);
        const double s = std::clamp(x, 0.0, 1.0) * m;
        const auto i = std::min(static_cast<std::size_t>(s), knots_.size() - 2);
        const double f = s - static_cast<double>(i);
        return knots_[i] + f * (knots_[i + 1] - knots_[i]);
    }
    }
    return 0.0;
}

double MapSystem::derivative(double x) const
{
    switch (kind_) {
    case Kind::doubling:
        return 2.0;
    case Kind::manneville_pomeau:
        return 1.0 + (1.0 + param_) * std::pow(x, param_);
    case Kind::perturbed:
        return 2.0 + param_ * std::cos(2.0 * std::numbers::pi * x);
    case Kind::tabulated: {
        const double m = static_cast<double>(knots_.size() - 1);
        const double s = std::clamp(x, 0.0, 1.0) * m;
        const auto i = std::min(static_cast<std::size_t>(s), knots_.size() - 2);
        return (knots_[i + 1] - knots_[i]) * m;
    }
    }
    return 0.0;
}

double MapSystem::operator()(double x) const
{
    return Circle::wrap(lift(Circle::wrap(x)));
}

double MapSystem::iterate(double x, int n) const
{
    for (int k = 0; k < n; ++k) {
        x = (*this)(x);
    }
    return x;
}

std::vector<double> MapSystem::orbit(double x, int count) const
{
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(std::max(count, 0)));
    x = Circle::wrap(x);
    for (int k = 0; k < count; ++k) {
        out.push_back(x);
        x = (*this)(x);
    }
    return out;
}

double MapSystem::lifted(double t) const
{
    const double k = std::floor(t);
    return lift(t - k) + degree_ * k;
}

double MapSystem::unit_lift_inverse(double v) const
{
    if (kind_ == Kind::doubling) {
        return 0.5 * v;
    }
    if (kind_ == Kind::tabulated) {
        const auto it = std::upper_bound(knots_.begin(), knots_.end(), v);
        std::size_t i = it == knots_.begin() ? 0 : static_cast<std::size_t>(it - knots_.begin()) - 1;
        i = std::min(i, knots_.size() - 2);
        const double m = static_cast<double>(knots_.size() - 1);
        const double f = (v - knots_[i]) / (knots_[i + 1] - knots_[i]);
        return (static_cast<double>(i) + f) / m;
    }

    // Bracketed Newton: the lift is strictly increasing, so bisection on
    // [0,1] always converges and Newton only accelerates inside the bracket.
    double lo = 0.0;
    double hi = 1.0;
    double x = v / degree_;
    for (int it = 0; it < 200; ++it) {
        const double f = lift(x) - v;
        if (f == 0.0) {
            return x;
        }
        if (f < 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        double next = x - f / derivative(x);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (std::fabs(next - x) < 1e-16 || hi - lo < 1e-16) {
            x = next;
            break;
        }
        x = next;
    }
    // Newton refinement once the bracket is tight.
    for (int it = 0; it < 2; ++it) {
        const double f = lift(x) - v;
        const double next = x - f / derivative(x);
        if (next >= 0.0 && next <= 1.0) {
            x = next;
        }
    }
    if (std::fabs(lift(x) - v) > kRootTol * std::max(1.0, std::fabs(v))) {
        std::ostringstream os;
        os << name() << ": inverse branch solve failed to converge at value " << v;
        throw NumericalError(os.str());
    }
    return x;
}

double MapSystem::lifted_inverse(double y) const
{
    const double k = std::floor(y / degree_);
    const double r = y - k * degree_;
    return k + unit_lift_inverse(std::clamp(r, 0.0, static_cast<double>(degree_)));
}

int MapSystem::branch_of(double x) const
{
    const int b = static_cast<int>(std::floor(lift(Circle::wrap(x))));
    return std::clamp(b, 0, degree_ - 1);
}

double MapSystem::branch_inverse(int branch, double y) const
{
    require(branch >= 0 && branch < degree_, "branch_inverse: branch id out of range");
    const double x = unit_lift_inverse(Circle::wrap(y) + branch);
    return x >= 1.0 ? 0.0 : x;
}

std::vector<Preimage> MapSystem::inverse_branches(double y) const
{
    std::vector<Preimage> out;
    out.reserve(static_cast<std::size_t>(degree_));
    for (int b = 0; b < degree_; ++b) {
        out.push_back({branch_inverse(b, y), b});
    }
    return out;
}

double MapSystem::local_inverse(double through, double y) const
{
    const double base = lifted(through);
    return lifted_inverse(base + Circle::delta(base, y));
}

Arc MapSystem::local_inverse(double through, const Arc& arc) const
{
    const double base = lifted(through);
    const double shift = Circle::delta(base, arc.mid()) - (arc.mid() - base);
    return {lifted_inverse(arc.lo + shift), lifted_inverse(arc.hi + shift)};
}

double MapSystem::inverse_derivative_sup(double lo, double hi) const
{
    switch (kind_) {
    case Kind::doubling:
        return 0.5;
    case Kind::manneville_pomeau: {
        // F' increases on (0,1); the sup of 1/F' sits at the left end, or at
        // the neutral point when the interval wraps through an integer.
        if (std::floor(lo) != std::floor(hi) || lo == std::floor(lo)) {
            return 1.0;
        }
        return 1.0 / derivative(lo - std::floor(lo));
    }
    case Kind::tabulated: {
        const double m = static_cast<double>(knots_.size() - 1);
        double best = 0.0;
        const long first = static_cast<long>(std::floor(lo * m));
        const long last = static_cast<long>(std::floor(hi * m));
        for (long s = first; s <= last; ++s) {
            const long i = ((s % static_cast<long>(m)) + static_cast<long>(m)) % static_cast<long>(m);
            const double slope = (knots_[static_cast<std::size_t>(i) + 1] - knots_[static_cast<std::size_t>(i)]) * m;
            best = std::max(best, 1.0 / slope);
        }
        return best;
    }
    case Kind::perturbed: {
        double best = 0.0;
        for (int i = 0; i <= kLipschitzSamples; ++i) {
            const double t = lo + (hi - lo) * i / kLipschitzSamples;
            best = std::max(best, 1.0 / derivative(Circle::wrap(t)));
        }
        return kSafety * best;
    }
    }
    return 1.0;
}

double MapSystem::branch_lipschitz(double x) const
{
    const double base = lifted(Circle::wrap(x));
    return inverse_derivative_sup(lifted_inverse(base - epsilon0_), lifted_inverse(base + epsilon0_));
}

int mixing_time(const MapSystem& map, double eps, int cap, int grid)
{
    require(eps > 0.0 && eps <= map.epsilon0(), "mixing_time: eps must lie in (0, epsilon0]");
    require(grid >= 1, "mixing_time: grid must be positive");
    int worst = 0;
    for (int i = 0; i < grid; ++i) {
        const double y = static_cast<double>(i) / grid;
        double lo = y - eps;
        double hi = y + eps;
        int steps = 0;
        while (hi - lo < 1.0 - 1e-12) {
            if (++steps > cap) {
                throw NumericalError("mixing_time: exceeded cap of " + std::to_string(cap) +
                                     " iterations (map not exact, or eps too small)");
            }
            const double shift = std::floor(lo);
            lo = map.lifted(lo - shift);
            hi = map.lifted(hi - shift);
        }
        worst = std::max(worst, steps);
    }
    return worst;
}

} // namespace eqs
