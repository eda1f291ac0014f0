#include "doctest.h"

#include "eqstates/natural_extension.hpp"

#include <cmath>
#include <random>

using namespace eqs;

namespace {

Potential identity_potential()
{
    return Potential::custom("x", [](double x) { return x; }, 1.0, 1.0, 1.0);
}

} // namespace

TEST_CASE("extend")
{
    const auto d = MapSystem::doubling();
    CHECK(extend(d, 0.3, 0).coords == std::vector<double>{0.3});
    for (double c : extend(d, 0.0, 6).coords) {
        CHECK(c == 0.0);
    }
    const auto p = extend(d, 0.5, 3);
    REQUIRE(p.depth() == 3);
    CHECK(p.coords[1] == doctest::Approx(0.25));
    CHECK(p.coords[2] == doctest::Approx(0.125));
    CHECK(p.coords[3] == doctest::Approx(0.0625));
    const auto u = extend(d, 0.5, 2, ExtendPolicy::user({1, 0}));
    CHECK(u.coords[1] == doctest::Approx(0.75));
    CHECK(u.coords[2] == doctest::Approx(0.375));
    CHECK_THROWS_AS(extend(d, 0.5, 3, ExtendPolicy::user({1})), std::invalid_argument);

    const auto mp = MapSystem::manneville_pomeau(0.5);
    const auto r = extend(mp, 0.42, 15, ExtendPolicy::random(4));
    for (int i = 0; i < r.depth(); ++i) {
        CHECK(Circle::distance(mp(r.coords[static_cast<std::size_t>(i) + 1]), r.coords[static_cast<std::size_t>(i)]) <
              1e-12);
    }
}

TEST_CASE("shift and inverse shift")
{
    const auto d = MapSystem::doubling();
    const auto p = extend(d, 0.5, 5);
    const auto f = hat_g(d, p);
    CHECK(f.depth() == 5);
    CHECK(f.coords[0] == 0.0);
    CHECK(f.coords[1] == 0.5);
    CHECK(f.coords[2] == 0.25);
    const auto back = hat_g_inverse(d, f);
    CHECK(back.depth() == 5);
    for (int i = 0; i < 5; ++i) {
        CHECK(back.coords[static_cast<std::size_t>(i)] == p.coords[static_cast<std::size_t>(i)]);
    }
}

TEST_CASE("hat distance")
{
    const ExtensionConfig cfg(2.0, 20);
    CHECK(cfg.tail_bound() == doctest::Approx(std::ldexp(1.0, -20)));
    const auto d = MapSystem::doubling();
    const auto p = extend(d, 0.3, 20);
    const auto [zero, tail] = hat_distance(cfg, p, p);
    CHECK(zero == 0.0);
    CHECK(tail == cfg.tail_bound());
    auto q = p;
    q.coords[0] = 0.35;
    CHECK(hat_distance(cfg, p, q).first == doctest::Approx(0.05));
    CHECK_THROWS_AS(hat_distance(cfg, p, extend(d, 0.3, 5)), std::invalid_argument);
    CHECK_THROWS_AS(ExtensionConfig(1.0, 3), std::invalid_argument);
    CHECK(ExtensionConfig::depth_for(2.0, std::ldexp(1.0, -20)) == 21);
}

TEST_CASE("projection, semiconjugacy, triangle inequality")
{
    const auto mp = MapSystem::manneville_pomeau(0.5);
    const ExtensionConfig cfg(2.0, 20);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const auto p = extend(mp, unit(rng), 20, ExtendPolicy::random(rng()));
        const auto q = extend(mp, unit(rng), 20, ExtendPolicy::random(rng()));
        const auto r = extend(mp, unit(rng), 20, ExtendPolicy::random(rng()));
        CHECK(project(hat_g(mp, p)) == mp(project(p)));
        CHECK(Circle::distance(project(p), project(q)) <= hat_distance(cfg, p, q).first + 1e-15);
        CHECK(hat_distance(cfg, p, r).first <=
              hat_distance(cfg, p, q).first + hat_distance(cfg, q, r).first + 1e-15);
    }
}

TEST_CASE("fiber contraction")
{
    const auto d = MapSystem::doubling();
    const ExtensionConfig cfg(2.0, 20);
    for (std::uint64_t s = 0; s < 50; ++s) {
        auto p = extend(d, 0.37, 20, ExtendPolicy::random(s));
        auto q = extend(d, 0.37, 20, ExtendPolicy::random(s + 1000));
        for (int k = 0; k <= 15; ++k) {
            const auto [trunc, tail] = hat_distance(cfg, p, q);
            CHECK(trunc <= 0.5 * std::pow(2.0, -k) * 2.0 + 1e-15);
            p = hat_g(d, p);
            q = hat_g(d, q);
        }
    }
}

TEST_CASE("lifted potentials")
{
    const auto d = MapSystem::doubling();
    const auto p = extend(d, 0.5, 3);
    CHECK(LiftedPotential::projection(Potential::zero())(p) == 0.0);
    CHECK(LiftedPotential::projection(identity_potential())(p) == 0.5);
    const auto fa = LiftedPotential::fiber_averaged(identity_potential(), 2.0);
    CHECK(fa(p) == doctest::Approx(0.6640625));
    CHECK(fa.holder_constant() == doctest::Approx(2.0));
    CHECK(LiftedPotential::projection(identity_potential()).holder_constant() == 1.0);
}

TEST_CASE("closed-form bowen bound")
{
    const ExtensionConfig cfg(2.0, 20);
    CHECK(bowen_bound(cfg, DecompositionConfig(0.5), 1.0, 1.0, 1.0 / 16) == doctest::Approx(0.25));
    CHECK(bowen_bound(cfg, DecompositionConfig(0.5), 0.0, 1.0, 1.0 / 16) == 0.0);
    const auto mp = MapSystem::manneville_pomeau(0.5);
    const auto geo = Potential::geometric(mp, 1.0);
    const double k = bowen_bound(cfg, DecompositionConfig(0.9), geo.holder_constant(), geo.holder_exponent(), 1.0 / 32);
    CHECK(std::isfinite(k));
    CHECK(k > 0.0);
}

TEST_CASE("empirical bowen variation")
{
    const ExtensionConfig cfg(2.0, 20);
    const auto d = MapSystem::doubling();
    const DecompositionConfig dec(0.9);
    const auto zero = verify_bowen(d, cfg, dec, LiftedPotential::projection(Potential::constant(3.0)), 1.0 / 8, 50);
    CHECK(zero.empirical_max == 0.0);

    BowenSampling sampling;
    sampling.seed = 3;
    const auto tent = Potential::custom("tent", [](double x) { return Circle::distance(x, 0.0); }, 1.0, 1.0);
    for (const auto& lifted : {LiftedPotential::projection(tent), LiftedPotential::fiber_averaged(tent, 2.0)}) {
        const auto r = verify_bowen(d, cfg, dec, lifted, 1.0 / 8, 300, sampling);
        CHECK(r.samples == 300);
        CHECK(r.holds());
        CHECK(r.empirical_max > 0.0);
    }
    const auto mp = MapSystem::manneville_pomeau(0.5);
    const auto geo = LiftedPotential::projection(Potential::geometric(mp, 1.0));
    const auto r = verify_bowen(mp, cfg, dec, geo, 1.0 / 32, 300, sampling);
    CHECK(r.holds());
}

TEST_CASE("hat birkhoff sums of projection potentials match the base")
{
    const auto mp = MapSystem::manneville_pomeau(0.5);
    const auto psi = Potential::cosine(1.0);
    const auto p = extend(mp, 0.31, 10);
    double base = 0.0;
    double x = 0.31;
    for (int i = 0; i < 7; ++i) {
        base += psi(x);
        x = mp(x);
    }
    CHECK(hat_birkhoff_sum(mp, LiftedPotential::projection(psi), p, 7) == doctest::Approx(base));
}
