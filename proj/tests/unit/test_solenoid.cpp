#include "doctest.h"

#include "eqstates/solenoid.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

using namespace eqs;

namespace {

std::vector<int> random_itinerary(std::mt19937_64& rng, int depth)
{
    std::vector<int> it(static_cast<std::size_t>(depth));
    for (int& b : it) {
        b = static_cast<int>(rng() % 2);
    }
    return it;
}

double disk_gap(const AttractorPoint& p, const AttractorPoint& q)
{
    return std::hypot(p.disk[0] - q.disk[0], p.disk[1] - q.disk[1]);
}

} // namespace

TEST_CASE("solenoid map")
{
    const SolenoidSystem sys;
    AttractorPoint p;
    p.backward = {0.0};
    const auto q = apply_f(sys, p);
    CHECK(q.theta == 0.0);
    CHECK(q.disk[0] == doctest::Approx(0.5));
    CHECK(q.disk[1] == doctest::Approx(0.0));
    CHECK_THROWS_AS(SolenoidSystem(0.6, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(SolenoidSystem(0.25, 0.8), std::invalid_argument);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        AttractorPoint a;
        AttractorPoint b;
        a.theta = b.theta = unit(rng);
        a.backward = b.backward = {a.theta};
        a.disk = {unit(rng) - 0.5, unit(rng) - 0.5};
        b.disk = {unit(rng) - 0.5, unit(rng) - 0.5};
        const auto fa = apply_f(sys, a);
        const auto fb = apply_f(sys, b);
        CHECK(fa.theta == sys.base(a.theta));
        CHECK(disk_gap(fa, fb) == doctest::Approx(0.25 * disk_gap(a, b)).epsilon(1e-12));
    }
}

TEST_CASE("fiber samples")
{
    const SolenoidSystem sys;
    CHECK(fiber_sample(sys, 0.3, 1).size() == 2);
    double previous = 0.0;
    for (int depth = 1; depth <= 8; ++depth) {
        const auto pts = fiber_sample(sys, 0.3, depth);
        CHECK(pts.size() == (std::size_t{1} << depth));
        double min_gap = 10.0;
        double diameter = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            CHECK(std::hypot(pts[i].disk[0], pts[i].disk[1]) <= 1.0);
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                min_gap = std::min(min_gap, disk_gap(pts[i], pts[j]));
                diameter = std::max(diameter, disk_gap(pts[i], pts[j]));
            }
        }
        CHECK(min_gap > 0.0);
        CHECK(diameter <= 2.0 * sys.r / (1.0 - sys.lambda_s));
        CHECK(diameter >= previous - 1e-12);
        previous = diameter;
    }
    CHECK_THROWS_AS(fiber_sample(sys, 0.3, 30), CapacityError);
}

TEST_CASE("nesting of approximants")
{
    const SolenoidSystem sys;
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double theta = unit(rng);
        auto deep = attractor_point(sys, theta, random_itinerary(rng, 9));
        // the depth-9 point is f of a depth-8 point over its first preimage
        std::vector<double> tail(deep.backward.begin() + 1, deep.backward.end());
        const auto shallow = attractor_point(sys, tail, deep.seed);
        const auto image = apply_f(sys, shallow);
        CHECK(disk_gap(image, deep) < 1e-15);
        CHECK(Circle::distance(image.theta, deep.theta) < 1e-15);
        CHECK(std::equal(image.backward.begin() + 1, image.backward.end(), deep.backward.begin() + 1));
    }
}

TEST_CASE("conjugacy to the natural extension")
{
    const SolenoidSystem sys;
    const auto p0 = attractor_point(sys, 0.0, std::vector<int>(8, 0));
    for (double c : conjugacy_h(sys, p0, 8).coords) {
        CHECK(c == 0.0);
    }
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const ExtensionConfig cfg(2.0, 24);
    for (int i = 0; i < 200; ++i) {
        const auto p = attractor_point(sys, unit(rng), random_itinerary(rng, 24));
        const auto lhs = conjugacy_h(sys, apply_f(sys, p), 24);
        const auto rhs = hat_g(sys.base, conjugacy_h(sys, p, 24));
        CHECK(hat_distance(cfg, lhs, rhs).first == 0.0);
        const auto h = conjugacy_h(sys, p, 24);
        for (int j = 0; j < 24; ++j) {
            CHECK(Circle::distance(sys.base(h.coords[static_cast<std::size_t>(j) + 1]),
                                   h.coords[static_cast<std::size_t>(j)]) < 1e-15);
        }
    }
    CHECK_THROWS_AS(conjugacy_h(sys, p0, 9), std::invalid_argument);
}

TEST_CASE("holonomies")
{
    const SolenoidSystem sys;
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        const auto x = attractor_point(sys, unit(rng), random_itinerary(rng, 20));
        // identity on the same fiber
        const auto same = holonomy(sys, x, x.theta);
        CHECK(same.backward == x.backward);
        CHECK(disk_gap(same, x) == 0.0);

        const double y = Circle::wrap(x.theta + (unit(rng) - 0.5) / 8.0);
        const auto lhs = apply_f(sys, holonomy(sys, x, y));
        const auto rhs = holonomy(sys, apply_f(sys, x), sys.base(y));
        CHECK(lhs.backward == rhs.backward);
        CHECK(disk_gap(lhs, rhs) == 0.0);
        // Lipschitz in the base distance
        CHECK(disk_gap(holonomy(sys, x, y), x) <= sys.holonomy_lipschitz() * Circle::distance(x.theta, y) + 1e-15);
    }
}

TEST_CASE("metric equivalence bracket")
{
    const SolenoidSystem sys;
    const auto b = metric_equivalence(sys, 2000, 1);
    const double lh = sys.holonomy_lipschitz();
    CHECK(b.pairs == 2000);
    CHECK(b.c_low >= 1.0 / (1.0 + lh) - 1e-12);
    CHECK(b.c_high <= 1.0 + lh + 1e-12);
    CHECK(b.c_low <= 1.0);
    CHECK(b.c_high >= 1.0);
    const auto b2 = metric_equivalence(sys, 4000, 2);
    CHECK(std::fabs(b2.constant() - b.constant()) <= 0.1 * b.constant());
    CHECK_THROWS_AS(metric_equivalence(sys, 10), std::invalid_argument);
}

TEST_CASE("attractor bowen estimate")
{
    const SolenoidSystem sys;
    const DecompositionConfig dec(0.6);
    const auto phi = TorusPotential::cos_plus_u();
    const double eps = 1.0 / 8;
    CHECK(attractor_bowen_bound(sys, dec, phi, eps) ==
          doctest::Approx(2.0 * M_PI * eps * (1.5 + 4.0 / 3.0)));
    const auto r = attractor_bowen_check(sys, dec, phi, eps, 300);
    CHECK(r.samples == 300);
    CHECK(r.estimate_violations == 0);
    CHECK(r.holds());
    const auto c = attractor_bowen_check(sys, dec, TorusPotential::constant(2.0), eps, 50);
    CHECK(c.empirical_max == 0.0);
}

TEST_CASE("point cloud export")
{
    const SolenoidSystem sys;
    std::ostringstream out;
    write_point_cloud(out, sys, fiber_sample(sys, 0.25, 2));
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "theta,u,v,itinerary");
    std::set<std::string> itins;
    while (std::getline(in, line)) {
        itins.insert(line.substr(line.rfind(',') + 1));
    }
    CHECK(itins == std::set<std::string>{"00", "01", "10", "11"});
}
