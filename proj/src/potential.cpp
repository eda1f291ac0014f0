#include "eqstates/potential.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

namespace eqs {

Potential::Potential(std::string name, std::function<double(double)> fn, double c, double alpha, double jump)
    : name_(std::move(name)), fn_(std::move(fn)), holder_constant_(c), holder_exponent_(alpha), wrap_jump_(jump)
{
    require(c >= 0.0, "potential: Hoelder constant must be nonnegative");
    require(alpha > 0.0 && alpha <= 1.0, "potential: Hoelder exponent must lie in (0,1]");
    require(jump >= 0.0, "potential: wrap jump must be nonnegative");
}

Potential Potential::zero()
{
    return Potential("zero", [](double) { return 0.0; }, 0.0, 1.0, 0.0);
}

Potential Potential::constant(double c)
{
    std::ostringstream os;
    os << "constant(" << c << ")";
    return Potential(os.str(), [c](double) { return c; }, 0.0, 1.0, 0.0);
}

Potential Potential::geometric(const MapSystem& map, double t)
{
    std::ostringstream os;
    os << "geometric(" << t << ")";
    const double at = std::fabs(t);
    switch (map.kind()) {
    case MapSystem::Kind::doubling: {
        const double v = -t * std::log(2.0);
        return Potential(os.str(), [v](double) { return v; }, 0.0, 1.0, 0.0);
    }
    case MapSystem::Kind::manneville_pomeau: {
        // log is 1-Lipschitz on [1, inf) and x^a is a-Hoelder with constant 1.
        const double a = map.parameter();
        return Potential(
            os.str(), [map, t](double x) { return -t * std::log(map.derivative(Circle::wrap(x))); },
            at * (1.0 + a), a, at * std::log(2.0 + a));
    }
    case MapSystem::Kind::perturbed: {
        const double d = std::fabs(map.parameter());
        const double lip = 2.0 * std::numbers::pi * d / (2.0 - d);
        return Potential(
            os.str(), [map, t](double x) { return -t * std::log(map.derivative(Circle::wrap(x))); },
            at * lip, 1.0, 0.0);
    }
    case MapSystem::Kind::tabulated:
        break;
    }
    throw std::invalid_argument("geometric potential requires a differentiable map, not " + map.name());
}

Potential Potential::cosine(double amplitude)
{
    std::ostringstream os;
    os << "cosine(" << amplitude << ")";
    return Potential(
        os.str(), [amplitude](double x) { return amplitude * std::cos(2.0 * std::numbers::pi * x); },
        2.0 * std::numbers::pi * std::fabs(amplitude), 1.0, 0.0);
}

Potential Potential::tabulated(std::vector<double> samples, double holder_constant, double holder_exponent)
{
    require(samples.size() >= 2, "tabulated potential: need at least 2 samples");
    auto table = std::make_shared<const std::vector<double>>(std::move(samples));
    auto fn = [table](double x) {
        const auto& s = *table;
        const double pos = Circle::wrap(x) * static_cast<double>(s.size());
        const auto i = static_cast<std::size_t>(pos) % s.size();
        const double f = pos - std::floor(pos);
        return (1.0 - f) * s[i] + f * s[(i + 1) % s.size()];
    };
    return Potential("tabulated", fn, holder_constant, holder_exponent, 0.0);
}

Potential Potential::custom(std::string name, std::function<double(double)> fn, double holder_constant,
                            double holder_exponent, double wrap_jump)
{
    return Potential(std::move(name), std::move(fn), holder_constant, holder_exponent, wrap_jump);
}

} // namespace eqs
