#include "eqstates/solenoid.hpp"

#include "eqstates/csv.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>

namespace eqs {

namespace {

Disk circle_point(double theta)
{
    const double a = 2.0 * std::numbers::pi * theta;
    return {std::cos(a), std::sin(a)};
}

/// f^J applied to `seed` over theta_J, one step per backward coordinate.
Disk horner(const SolenoidSystem& sys, const std::vector<double>& backward, const Disk& seed)
{
    Disk u = seed;
    for (std::size_t j = backward.size(); j-- > 1;) {
        const Disk e = circle_point(backward[j]);
        u = {sys.lambda_s * u[0] + sys.r * e[0], sys.lambda_s * u[1] + sys.r * e[1]};
    }
    return u;
}

double disk_distance(const Disk& a, const Disk& b)
{
    return std::hypot(a[0] - b[0], a[1] - b[1]);
}

} // namespace

SolenoidSystem::SolenoidSystem(double lambda, double radius) : lambda_s(lambda), r(radius)
{
    require(lambda > 0.0 && lambda < 0.5, "solenoid: lambda_s must lie in (0, 1/2)");
    require(radius > 0.0 && lambda + radius <= 1.0, "solenoid: need r > 0 and lambda_s + r <= 1");
}

double SolenoidSystem::holonomy_lipschitz() const
{
    return std::numbers::pi * r / (1.0 - lambda_s / 2.0);
}

std::vector<int> AttractorPoint::itinerary(const MapSystem& base) const
{
    std::vector<int> out;
    for (std::size_t j = 1; j < backward.size(); ++j) {
        out.push_back(base.branch_of(backward[j]));
    }
    return out;
}

double torus_distance(const AttractorPoint& p, const AttractorPoint& q)
{
    return Circle::distance(p.theta, q.theta) + disk_distance(p.disk, q.disk);
}

AttractorPoint apply_f(const SolenoidSystem& sys, const AttractorPoint& p)
{
    AttractorPoint q;
    q.theta = sys.base(p.theta);
    const Disk e = circle_point(p.theta);
    q.disk = {sys.lambda_s * p.disk[0] + sys.r * e[0], sys.lambda_s * p.disk[1] + sys.r * e[1]};
    q.backward.reserve(p.backward.size() + 1);
    q.backward.push_back(q.theta);
    q.backward.insert(q.backward.end(), p.backward.begin(), p.backward.end());
    q.seed = p.seed;
    return q;
}

AttractorPoint attractor_point(const SolenoidSystem& sys, std::vector<double> backward, Disk seed)
{
    require(!backward.empty(), "attractor_point: empty backward orbit");
    AttractorPoint p;
    p.theta = backward.front();
    p.backward = std::move(backward);
    p.seed = seed;
    p.disk = horner(sys, p.backward, seed);
    return p;
}

AttractorPoint attractor_point(const SolenoidSystem& sys, double theta, const std::vector<int>& itinerary, Disk seed)
{
    std::vector<double> backward{Circle::wrap(theta)};
    for (int b : itinerary) {
        backward.push_back(Circle::wrap(sys.base.branch_inverse(b, backward.back())));
    }
    return attractor_point(sys, std::move(backward), seed);
}

std::vector<AttractorPoint> fiber_sample(const SolenoidSystem& sys, double y, int depth, int max_depth)
{
    require(depth >= 1, "fiber_sample: depth must be >= 1");
    if (depth > max_depth) {
        throw CapacityError("fiber_sample: depth " + std::to_string(depth) + " exceeds cap " +
                            std::to_string(max_depth));
    }
    const int d = sys.base.degree();
    std::size_t count = 1;
    for (int i = 0; i < depth; ++i) {
        count *= static_cast<std::size_t>(d);
    }
    std::vector<AttractorPoint> out;
    out.reserve(count);
    std::vector<int> itin(static_cast<std::size_t>(depth));
    for (std::size_t code = 0; code < count; ++code) {
        std::size_t c = code;
        for (int j = depth - 1; j >= 0; --j) {
            itin[static_cast<std::size_t>(j)] = static_cast<int>(c % static_cast<std::size_t>(d));
            c /= static_cast<std::size_t>(d);
        }
        out.push_back(attractor_point(sys, y, itin));
    }
    return out;
}

ExtPoint conjugacy_h(const SolenoidSystem&, const AttractorPoint& p, int J)
{
    require(J >= 0, "conjugacy_h: J must be >= 0");
    require(p.depth() >= J, "conjugacy_h: point lacks backward itinerary data to depth J");
    ExtPoint out;
    out.coords.assign(p.backward.begin(), p.backward.begin() + J + 1);
    return out;
}

AttractorPoint holonomy(const SolenoidSystem& sys, const AttractorPoint& p, double y)
{
    require(!p.backward.empty(), "holonomy: point lacks backward itinerary data");
    std::vector<double> coords{Circle::wrap(y)};
    for (std::size_t j = 1; j < p.backward.size(); ++j) {
        double best = 0.0;
        double best_d = 2.0;
        for (int b = 0; b < sys.base.degree(); ++b) {
            const double c = Circle::wrap(sys.base.branch_inverse(b, coords.back()));
            const double dist = Circle::distance(c, p.backward[j]);
            if (dist < best_d) {
                best_d = dist;
                best = c;
            }
        }
        coords.push_back(best);
    }
    return attractor_point(sys, std::move(coords), p.seed);
}

MetricBracket metric_equivalence(const SolenoidSystem& sys, int samples, std::uint64_t seed, int depth)
{
    require(samples >= 100, "metric_equivalence: samples must be >= 100");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto itinerary = [&] {
        std::vector<int> it(static_cast<std::size_t>(depth));
        for (int& b : it) {
            b = static_cast<int>(rng() % static_cast<std::uint64_t>(sys.base.degree()));
        }
        return it;
    };

    MetricBracket out;
    out.c_low = std::numeric_limits<double>::infinity();
    while (out.pairs < samples) {
        const double tx = unit(rng);
        const bool same_fiber = unit(rng) < 0.25;
        const double ty = same_fiber ? tx : Circle::wrap(tx + (unit(rng) - 0.5) / 4.0);
        const auto x = attractor_point(sys, tx, itinerary());
        const auto y = attractor_point(sys, ty, itinerary());
        const auto hx = holonomy(sys, x, ty);
        const double middle = Circle::distance(tx, ty) + disk_distance(hx.disk, y.disk);
        if (middle == 0.0) {
            continue;
        }
        const double ratio = torus_distance(x, y) / middle;
        out.c_low = std::min(out.c_low, ratio);
        out.c_high = std::max(out.c_high, ratio);
        ++out.pairs;
    }
    return out;
}

TorusPotential TorusPotential::constant(double c)
{
    return {"constant", [c](double, const Disk&) { return c; }, 0.0, 1.0};
}

TorusPotential TorusPotential::cos_plus_u()
{
    return {"cos_plus_u", [](double theta, const Disk& u) { return std::cos(2.0 * std::numbers::pi * theta) + u[0]; },
            2.0 * std::numbers::pi, 1.0};
}

double attractor_bowen_bound(const SolenoidSystem& sys, const DecompositionConfig& dec, const TorusPotential& phi,
                             double eps)
{
    const double al = phi.holder_exponent;
    const double sa = std::pow(dec.sigma, al);
    const double la = std::pow(sys.lambda_s, al);
    return phi.holder_constant * std::pow(eps, al) * (sa / (1.0 - sa) + 1.0 / (1.0 - la));
}

AttractorBowen attractor_bowen_check(const SolenoidSystem& sys, const DecompositionConfig& dec,
                                     const TorusPotential& phi, double eps, int n_samples, std::uint64_t seed,
                                     int n_min, int n_max, int depth)
{
    require(eps > 0.0 && eps <= sys.base.epsilon0(), "attractor_bowen_check: eps must lie in (0, epsilon0]");
    require(n_samples >= 1, "attractor_bowen_check: n_samples must be >= 1");
    require(n_min >= 1 && n_max >= n_min, "attractor_bowen_check: bad length range");
    require(depth >= 1, "attractor_bowen_check: depth must be >= 1");

    AttractorBowen out;
    out.bound = attractor_bowen_bound(sys, dec, phi, eps);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int degree = sys.base.degree();
    const double base_radius = eps / (1.0 + sys.holonomy_lipschitz()) * (1.0 - 1e-9);
    const double fiber_radius = eps * (1.0 - 1e-9);

    for (int s = 0; s < n_samples; ++s) {
        double theta = 0.0;
        int n = 0;
        bool found = false;
        for (int attempt = 0; attempt < 10000 && !found; ++attempt) {
            theta = unit(rng);
            n = n_min + static_cast<int>(rng() % static_cast<std::uint64_t>(n_max - n_min + 1));
            found = classify_segment(sys.base, dec, {theta, n}) == SegmentClass::good;
        }
        if (!found) {
            throw NumericalError("attractor_bowen_check: could not sample a good segment");
        }
        std::vector<int> itin(static_cast<std::size_t>(depth));
        for (int& b : itin) {
            b = static_cast<int>(rng() % static_cast<std::uint64_t>(degree));
        }
        const auto x = attractor_point(sys, theta, itin);

        const double v = sys.base.iterate(theta, n) + (2.0 * unit(rng) - 1.0) * base_radius;
        const double ty = pull_back_along(sys.base, theta, n, v).front();
        const auto hx = holonomy(sys, x, ty);

        // Companion in the same fiber as hx, differing in its deep past.
        AttractorPoint y;
        for (;;) {
            const int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(depth));
            std::vector<double> coords(hx.backward.begin(), hx.backward.begin() + k);
            for (int j = k; j <= depth; ++j) {
                const int b = static_cast<int>(rng() % static_cast<std::uint64_t>(degree));
                coords.push_back(Circle::wrap(sys.base.branch_inverse(b, coords.back())));
            }
            y = attractor_point(sys, std::move(coords), hx.seed);
            if (disk_distance(y.disk, hx.disk) <= fiber_radius) {
                break;
            }
        }

        AttractorPoint xi = x;
        AttractorPoint yi = y;
        double sx = 0.0;
        double sy = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = torus_distance(xi, yi);
            const double est = eps * std::pow(dec.sigma, n - i) + std::pow(sys.lambda_s, i) * eps;
            out.worst_estimate_ratio = std::max(out.worst_estimate_ratio, d / est);
            if (d > est * (1.0 + 1e-12)) {
                ++out.estimate_violations;
            }
            sx += phi(xi);
            sy += phi(yi);
            xi = apply_f(sys, xi);
            yi = apply_f(sys, yi);
        }
        out.empirical_max = std::max(out.empirical_max, std::fabs(sx - sy));
        ++out.samples;
    }
    return out;
}

void write_point_cloud(std::ostream& out, const SolenoidSystem& sys, const std::vector<AttractorPoint>& points)
{
    out << "theta,u,v,itinerary\n";
    for (const auto& p : points) {
        std::string itin;
        for (int b : p.itinerary(sys.base)) {
            itin += static_cast<char>('0' + b);
        }
        out << csv_join({csv_number(p.theta), csv_number(p.disk[0]), csv_number(p.disk[1]), itin}) << '\n';
    }
}

} // namespace eqs
