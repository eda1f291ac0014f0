#pragma once

#include "eqstates/maps.hpp"

#include <functional>
#include <string>
#include <vector>

namespace eqs {

/// A real potential on the circle with declared Hoelder data
/// |phi(x) - phi(y)| <= C d(x,y)^alpha.
///
/// Some potentials of interest (x itself, -log g' for the intermittent map)
/// are Hoelder on [0,1) but jump at the point 0 = 1. For those the jump size is
/// declared separately; pairs whose shortest arc crosses 0 may differ by up
/// to C d^alpha + wrap_jump.
class Potential {
public:
    static Potential zero();
    static Potential constant(double c);
    /// -t log g'.
    static Potential geometric(const MapSystem& map, double t);
    /// amplitude * cos(2 pi x).
    static Potential cosine(double amplitude);
    /// Linear interpolation of uniform periodic samples, with declared Hoelder data.
    static Potential tabulated(std::vector<double> samples, double holder_constant, double holder_exponent);
    static Potential custom(std::string name, std::function<double(double)> fn, double holder_constant,
                            double holder_exponent, double wrap_jump = 0.0);

    double operator()(double x) const { return fn_(x); }

    const std::string& name() const { return name_; }
    double holder_constant() const { return holder_constant_; }
    double holder_exponent() const { return holder_exponent_; }
    double wrap_jump() const { return wrap_jump_; }
    bool is_constant() const { return holder_constant_ == 0.0 && wrap_jump_ == 0.0; }

private:
    Potential(std::string name, std::function<double(double)> fn, double c, double alpha, double jump);

    std::string name_;
    std::function<double(double)> fn_;
    double holder_constant_;
    double holder_exponent_;
    double wrap_jump_;
};

} // namespace eqs
