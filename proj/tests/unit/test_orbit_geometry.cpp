#include "doctest.h"
#include "oracle.hpp"

#include "eqstates/orbit_geometry.hpp"

#include <cmath>
#include <random>

using namespace eqs;

namespace {

Potential identity_potential()
{
    return Potential::custom("x", [](double x) { return x; }, 1.0, 1.0, 1.0);
}

} // namespace

TEST_CASE("birkhoff sums and bowen distance by hand")
{
    const auto d = MapSystem::doubling();
    // 0.1 + 0.2 + 0.4
    CHECK(birkhoff_sum(d, identity_potential(), {0.1, 3}) == doctest::Approx(0.7));
    // 0.1 + 0.2 + 0.4 + 0.8 + 0.6
    CHECK(birkhoff_sum(d, identity_potential(), {0.1, 5}) == doctest::Approx(2.1));
    CHECK(birkhoff_sum(d, Potential::constant(0.5), {0.3, 4}) == doctest::Approx(2.0));
    // orbits of 0 and 1/8: distances 1/8, 1/4, 1/2
    CHECK(bowen_distance(d, 0.0, 0.125, 1) == doctest::Approx(0.125));
    CHECK(bowen_distance(d, 0.0, 0.125, 3) == doctest::Approx(0.5));
    CHECK_THROWS_AS(bowen_distance(d, 0.0, 0.1, 0), std::invalid_argument);
}

TEST_CASE("cylinder representatives")
{
    const auto d = MapSystem::doubling();
    const auto reps = cylinder_representatives(d, 3, 1 << 20);
    REQUIRE(reps.size() == 8);
    for (std::size_t k = 0; k < reps.size(); ++k) {
        CHECK(reps[k] == doctest::Approx((k + 0.5) / 8.0));
    }
    CHECK_THROWS_AS(cylinder_representatives(d, 12, 100), CapacityError);
    const auto mp = MapSystem::manneville_pomeau(0.5);
    const auto r = cylinder_representatives(mp, 6, 1 << 20);
    CHECK(r.size() == 64);
    for (std::size_t k = 1; k < r.size(); ++k) {
        CHECK(r[k] > r[k - 1]);
    }
}

TEST_CASE("eight point separated set")
{
    const auto d = MapSystem::doubling();
    const auto pts = separated_set(d, SegmentCollection::full(), 3, 1.0 / 16);
    REQUIRE(pts.size() == 8);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            CHECK(bowen_distance(d, pts[i], pts[j], 3) >= 1.0 / 8 - 1e-15);
        }
    }
    CHECK(partition_sum_sep(d, Potential::zero(), SegmentCollection::full(), 3, 1.0 / 16) == doctest::Approx(8.0));
    CHECK(partition_sum_span(d, Potential::zero(), SegmentCollection::full(), 3, 1.0 / 16) <= 8.0 + 1e-9);
}

TEST_CASE("greedy cardinality equals exhaustive optimum on doubling cylinders")
{
    const auto d = MapSystem::doubling();
    for (int n = 1; n <= 4; ++n) {
        for (double eps : {0.125, 0.0625}) {
            const auto pool = CandidatePool::cylinders(d, Potential::zero(), SegmentCollection::full(), n);
            const auto greedy = greedy_separated(pool, eps);
            // literal search over every subset of the representatives
            const std::size_t m = pool.size();
            std::size_t best = 0;
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
                std::size_t count = 0;
                bool ok = true;
                for (std::size_t i = 0; i < m && ok; ++i) {
                    if (!(mask >> i & 1)) {
                        continue;
                    }
                    ++count;
                    for (std::size_t j = i + 1; j < m && ok; ++j) {
                        if ((mask >> j & 1) && bowen_distance(d, pool.points[i], pool.points[j], n) < eps) {
                            ok = false;
                        }
                    }
                }
                if (ok) {
                    best = std::max(best, count);
                }
            }
            CHECK(greedy.size() == best);
        }
    }
}

TEST_CASE("greedy separated set is separated, maximal and weight ordered")
{
    const auto mp = MapSystem::manneville_pomeau(0.5);
    const auto phi = Potential::geometric(mp, 0.5);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> pts(300);
    for (auto& p : pts) {
        p = unit(rng);
    }
    const int n = 5;
    const double eps = 1.0 / 16;
    const auto pool = CandidatePool::from_points(mp, phi, pts, n);
    const auto set = greedy_separated(pool, eps);
    for (std::size_t i = 0; i < set.size(); ++i) {
        for (std::size_t j = i + 1; j < set.size(); ++j) {
            CHECK(bowen_distance(mp, set.points()[i], set.points()[j], n) >= eps);
        }
    }
    for (double p : pts) {
        double nearest = 1.0;
        for (double q : set.points()) {
            nearest = std::min(nearest, bowen_distance(mp, p, q, n));
        }
        CHECK(nearest < eps);
    }
    // a maximal separated set is spanning, so the span weight is not larger
    CHECK(log_partition_sum_span(pool, eps) <= set.log_partition_sum + 1e-12);
}

TEST_CASE("seeding keeps seed points first")
{
    const auto d = MapSystem::doubling();
    const auto phi = Potential::zero();
    const std::vector<double> seed_pts{0.3};
    const auto seed = CandidatePool::from_points(d, phi, seed_pts, 4);
    const auto pool = CandidatePool::cylinders(d, phi, SegmentCollection::full(), 4);
    const auto set = greedy_separated(pool, 1.0 / 8, &seed);
    REQUIRE(set.size() >= 1);
    CHECK(set.points()[0] == 0.3);
    CHECK(set.source[0] == SeparatedSet::npos);
}

TEST_CASE("neighbour lists match pairwise bowen distances")
{
    const auto d = MapSystem::perturbed(0.5);
    std::vector<double> pts;
    for (int i = 0; i < 60; ++i) {
        pts.push_back(i / 60.0 + 0.001);
    }
    const auto pool = CandidatePool::from_points(d, Potential::zero(), pts, 3);
    const auto nb = neighbour_lists(pool, 0.05, false);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        std::size_t expected = 0;
        for (std::size_t j = 0; j < pts.size(); ++j) {
            expected += j != i && bowen_distance(d, pts[i], pts[j], 3) < 0.05;
        }
        CHECK(nb[i].size() == expected);
    }
}

TEST_CASE("log_sum_exp")
{
    const std::vector<double> v{std::log(1.0), std::log(2.0), std::log(5.0)};
    CHECK(log_sum_exp(v) == doctest::Approx(std::log(8.0)));
    CHECK(std::isinf(log_sum_exp(std::vector<double>{})));
}
