#include "doctest.h"

#include "eqstates/transfer_oracle.hpp"

#include <cmath>
#include <numbers>

using namespace eqs;

TEST_CASE("operator on constants")
{
    const auto op = build_operator(MapSystem::doubling(), Potential::constant(0.3), 64);
    CHECK(op.nodes.size() == 64);
    CHECK(op.entries.size() == 128);
    for (double v : op.apply(std::vector<double>(64, 1.0))) {
        CHECK(v == doctest::Approx(2.0 * std::exp(0.3)));
    }
    CHECK_THROWS_AS(build_operator(MapSystem::doubling(), Potential::zero(), 8), std::invalid_argument);
}

TEST_CASE("doubling eigenvalues in closed form")
{
    const auto d = MapSystem::doubling();
    for (double t : {0.5, 1.0, 2.0}) {
        const auto eig = leading_eigen(build_operator(d, Potential::constant(-std::log(2.0) * t), 1024));
        CHECK(std::fabs(eig.lambda - std::pow(2.0, 1.0 - t)) < 1e-10);
        CHECK(eig.log_lambda == doctest::Approx((1.0 - t) * std::log(2.0)));
    }
    const auto eig = leading_eigen(build_operator(d, Potential::zero(), 256));
    double total = 0.0;
    for (double m : eig.equilibrium_density) {
        CHECK(m == doctest::Approx(1.0 / 256));
        total += m;
    }
    CHECK(total == doctest::Approx(1.0));
    const auto rep = check_equilibrium(d, eig, {[](double x) { return std::cos(2.0 * std::numbers::pi * x); },
                                                [](double x) { return x * x; }},
                                       std::log(2.0));
    // left-endpoint quadrature of x^2 on 256 and 128 cells differs by 1/512 - 1/(6 * 128^2) + 1/(6 * 256^2)
    CHECK(rep.invariance_defect == doctest::Approx(1.0 / 512 - 1.0 / (6.0 * 128 * 128) + 1.0 / (6.0 * 256 * 256)));
    REQUIRE(rep.pressure_match.has_value());
    CHECK(*rep.pressure_match < 1e-12);
}

TEST_CASE("full branches give lambda equal to the degree")
{
    const auto eig = leading_eigen(build_operator(MapSystem::manneville_pomeau(0.5), Potential::zero(), 1024));
    CHECK(eig.lambda == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("Lebesgue is conformal for the geometric potential of a smooth expanding map")
{
    const auto g = MapSystem::perturbed(0.5);
    const auto eig = leading_eigen(build_operator(g, Potential::geometric(g, 1.0), 1024));
    CHECK(std::fabs(eig.lambda - 1.0) < 1e-4);
    for (double m : eig.eigenmeasure) {
        CHECK(m == doctest::Approx(1.0 / 1024).epsilon(1e-3));
    }
    CHECK(eig.residual < 1e-9);
}

TEST_CASE("grid refinement settles")
{
    const auto mp = MapSystem::manneville_pomeau(0.5);
    const auto phi = Potential::geometric(mp, 0.5);
    double prev = 0.0;
    double prev_diff = 1.0;
    for (int n : {128, 256, 512, 1024}) {
        const double l = leading_eigen(build_operator(mp, phi, n)).log_lambda;
        if (n > 128) {
            const double diff = std::fabs(l - prev);
            CHECK(diff <= prev_diff);
            prev_diff = diff;
        }
        prev = l;
    }
}

TEST_CASE("non-convergence is reported")
{
    const auto mp = MapSystem::manneville_pomeau(0.5);
    CHECK_THROWS_AS(leading_eigen(build_operator(mp, Potential::geometric(mp, 1.0), 1024), 1e-13, 3),
                    NumericalError);
}
