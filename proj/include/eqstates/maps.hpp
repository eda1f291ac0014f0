#pragma once

#include "eqstates/circle.hpp"

#include <string>
#include <vector>

namespace eqs {

struct Preimage {
    double point;
    int branch;
};

/// A degree-d covering map of the circle, described by its lift
/// F : [0,1] -> [0,d], continuous and strictly increasing with F(0) = 0 and
/// F(1) = d. The map is g(x) = F(x) mod 1 and branch b is F^{-1}([b, b+1)).
///
/// The lift extends to a homeomorphism L of the real line through
/// L(t + k) = L(t) + d k; arcs are pushed forward and pulled back through L,
/// which keeps every arc computation exact up to root-solve tolerance.
class MapSystem {
public:
    enum class Kind { doubling, manneville_pomeau, perturbed, tabulated };

    static MapSystem doubling();
    /// g(x) = x + x^{1+alpha} mod 1 with a neutral fixed point at 0.
    static MapSystem manneville_pomeau(double alpha);
    /// g(x) = 2x + delta/(2 pi) sin(2 pi x) mod 1, uniformly expanding for |delta| < 1.
    static MapSystem perturbed(double delta);
    /// Piecewise-linear lift through the knots (i/m, knots[i]), i = 0..m.
    static MapSystem tabulated(std::vector<double> knots);

    Kind kind() const { return kind_; }
    std::string name() const;
    int degree() const { return degree_; }
    double parameter() const { return param_; }
    const std::vector<double>& knots() const { return knots_; }

    /// Uniform local-invertibility radius: 1 / (2 max F').
    double epsilon0() const { return epsilon0_; }

    double operator()(double x) const;
    double iterate(double x, int n) const;
    /// `count` points x, g(x), ..., g^{count-1}(x).
    std::vector<double> orbit(double x, int count) const;

    double lift(double x) const;
    double derivative(double x) const;
    double lifted(double t) const;
    double lifted_inverse(double y) const;

    int branch_of(double x) const;
    double branch_inverse(int branch, double y) const;
    std::vector<Preimage> inverse_branches(double y) const;

    /// The inverse branch through `through`, evaluated at a point y within
    /// 1/2 of g(through). The result is a real number near `through`.
    double local_inverse(double through, double y) const;
    /// Image of a lift-coordinate arc near g(through) under the same branch.
    Arc local_inverse(double through, const Arc& arc) const;

    /// Lipschitz bound for the inverse branch through x on B_{epsilon0}(g(x)).
    double branch_lipschitz(double x) const;
    /// Upper bound of 1/F' over the lift interval [lo, hi].
    double inverse_derivative_sup(double lo, double hi) const;

private:
    MapSystem(Kind kind, double param, int degree, std::vector<double> knots);

    double unit_lift_inverse(double v) const;

    Kind kind_;
    double param_;
    int degree_;
    std::vector<double> knots_;
    double epsilon0_;
};

/// Smallest N with g^N(B_eps(y)) covering the circle for every y on a uniform
/// verification grid. Throws NumericalError when N would exceed `cap`.
int mixing_time(const MapSystem& map, double eps, int cap = 64, int grid = 4096);

} // namespace eqs
