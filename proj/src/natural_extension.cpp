#include "eqstates/natural_extension.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace eqs {

int ExtensionConfig::depth_for(double a, double tolerance, double diam)
{
    return fiber_sync_time(diam, a, tolerance);
}

std::vector<int> ExtendPolicy::draw(int count, int degree) const
{
    std::vector<int> out(static_cast<std::size_t>(std::max(count, 0)), 0);
    switch (kind) {
    case Kind::lex_min:
        break;
    case Kind::random: {
        std::mt19937_64 rng(seed);
        for (int& b : out) {
            b = static_cast<int>(rng() % static_cast<std::uint64_t>(degree));
        }
        break;
    }
    case Kind::user:
        require(branches.size() >= out.size(), "extend policy: user branch list is shorter than the depth");
        for (std::size_t i = 0; i < out.size(); ++i) {
            require(branches[i] >= 0 && branches[i] < degree, "extend policy: branch id out of range");
            out[i] = branches[i];
        }
        break;
    }
    return out;
}

ExtPoint extend(const MapSystem& map, double x, int K, const ExtendPolicy& policy)
{
    require(K >= 0, "extend: K must be >= 0");
    const auto branches = policy.draw(K, map.degree());
    ExtPoint p;
    p.coords.reserve(static_cast<std::size_t>(K) + 1);
    p.coords.push_back(Circle::wrap(x));
    for (int b : branches) {
        p.coords.push_back(Circle::wrap(map.branch_inverse(b, p.coords.back())));
    }
    return p;
}

ExtPoint hat_g(const MapSystem& map, const ExtPoint& p)
{
    require(!p.coords.empty(), "hat_g: empty point");
    ExtPoint q;
    q.coords.reserve(p.coords.size());
    q.coords.push_back(map(p.coords.front()));
    q.coords.insert(q.coords.end(), p.coords.begin(), p.coords.end() - 1);
    return q;
}

ExtPoint hat_g_inverse(const MapSystem& map, const ExtPoint& p, const ExtendPolicy& policy)
{
    require(!p.coords.empty(), "hat_g_inverse: empty point");
    const int b = policy.draw(1, map.degree()).front();
    ExtPoint q;
    q.coords.assign(p.coords.begin() + 1, p.coords.end());
    q.coords.push_back(Circle::wrap(map.branch_inverse(b, p.coords.back())));
    return q;
}

std::pair<double, double> hat_distance(const ExtensionConfig& cfg, const ExtPoint& p, const ExtPoint& q)
{
    require(p.coords.size() == q.coords.size(), "hat_distance: depth mismatch");
    double sum = 0.0;
    double w = 1.0;
    const std::size_t m = std::min(p.coords.size(), static_cast<std::size_t>(cfg.K) + 1);
    for (std::size_t i = 0; i < m; ++i) {
        sum += w * Circle::distance(p.coords[i], q.coords[i]);
        w /= cfg.a;
    }
    return {sum, cfg.tail_bound()};
}

LiftedPotential::LiftedPotential(Mode mode, Potential psi, double a, double c)
    : mode_(mode), psi_(std::move(psi)), a_(a), holder_constant_(c)
{
}

LiftedPotential LiftedPotential::projection(Potential psi)
{
    const double c = psi.holder_constant();
    return LiftedPotential(Mode::projection, std::move(psi), 2.0, c);
}

LiftedPotential LiftedPotential::fiber_averaged(Potential psi, double a)
{
    require(a > 1.0, "a must be > 1");
    const double c = psi.holder_constant() * a / (a - 1.0);
    return LiftedPotential(Mode::fiber_averaged, std::move(psi), a, c);
}

double LiftedPotential::operator()(const ExtPoint& p) const
{
    if (mode_ == Mode::projection) {
        return psi_(p.x0());
    }
    double sum = 0.0;
    double w = 1.0;
    for (double x : p.coords) {
        sum += w * psi_(x);
        w /= a_;
    }
    return sum;
}

double bowen_bound(const ExtensionConfig& cfg, const DecompositionConfig& dec, double holder_constant,
                   double holder_exponent, double eps)
{
    require(eps > 0.0, "bowen_bound: eps must be positive");
    require(holder_exponent > 0.0 && holder_exponent <= 1.0, "bowen_bound: exponent must lie in (0,1]");
    const double a = cfg.a;
    const double s = dec.sigma;
    const double al = holder_exponent;
    const double c = eps * std::max(a / (a - s), 1.0);
    const double sa = std::pow(s, al);
    return holder_constant * std::pow(c, al) * (sa / (1.0 - sa) + 1.0 / (1.0 - std::pow(a, -al)));
}

double hat_birkhoff_sum(const MapSystem& map, const LiftedPotential& phi, ExtPoint p, int n)
{
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        sum += phi(p);
        p = hat_g(map, p);
    }
    return sum;
}

BowenCheck verify_bowen(const MapSystem& map, const ExtensionConfig& cfg, const DecompositionConfig& dec,
                        const LiftedPotential& phi, double eps, int n_samples, const BowenSampling& sampling)
{
    require(eps > 0.0 && eps <= map.epsilon0(), "verify_bowen: eps must lie in (0, epsilon0]");
    require(n_samples >= 1, "verify_bowen: n_samples must be >= 1");
    require(sampling.n_min >= 1 && sampling.n_max >= sampling.n_min, "verify_bowen: bad length range");

    BowenCheck out;
    out.bound = bowen_bound(cfg, dec, phi.holder_constant(), phi.holder_exponent(), eps);
    out.slack = bowen_bound(cfg, dec, phi.holder_constant(), phi.holder_exponent(), eps + cfg.tail_bound()) -
                out.bound;
    if (phi.is_constant()) {
        out.samples = n_samples;
        return out;
    }

    std::mt19937_64 rng(sampling.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto span = static_cast<std::uint64_t>(sampling.n_max - sampling.n_min + 1);
    const double radius = eps * (1.0 - 1e-9);

    for (int s = 0; s < n_samples; ++s) {
        double x0 = 0.0;
        int n = 0;
        bool found = false;
        for (int attempt = 0; attempt < sampling.max_attempts * 50 && !found; ++attempt) {
            x0 = unit(rng);
            n = sampling.n_min + static_cast<int>(rng() % span);
            found = classify_segment(map, dec, {x0, n}) == SegmentClass::good;
        }
        if (!found) {
            throw NumericalError("verify_bowen: could not sample a good segment");
        }
        const ExtPoint xhat = extend(map, x0, cfg.K, ExtendPolicy::random(rng()));
        const double end = map.iterate(x0, n);

        bool accepted = false;
        for (int attempt = 0; attempt < sampling.max_attempts && !accepted; ++attempt) {
            const double v = end + (2.0 * unit(rng) - 1.0) * radius;
            const auto pulled = pull_back_along(map, x0, n, v);
            ExtPoint yhat;
            yhat.coords.resize(xhat.coords.size());
            yhat.coords[0] = pulled[0];
            // Follow x^'s own branches up to a random depth, then switch fibers.
            const bool keep = cfg.K == 0 || unit(rng) < 0.5;
            const int switch_at =
                keep ? cfg.K + 1 : 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(cfg.K));
            const auto tail = ExtendPolicy::random(rng()).draw(cfg.K, map.degree());
            for (int m = 1; m <= cfg.K; ++m) {
                const auto mm = static_cast<std::size_t>(m);
                yhat.coords[mm] = m < switch_at
                                      ? Circle::wrap(map.local_inverse(xhat.coords[mm], yhat.coords[mm - 1]))
                                      : Circle::wrap(map.branch_inverse(tail[mm - 1], yhat.coords[mm - 1]));
            }

            ExtPoint p = xhat;
            ExtPoint q = yhat;
            double sx = 0.0;
            double sy = 0.0;
            bool inside = true;
            for (int i = 0; i < n && inside; ++i) {
                inside = hat_distance(cfg, p, q).first < eps;
                sx += phi(p);
                sy += phi(q);
                p = hat_g(map, p);
                q = hat_g(map, q);
            }
            if (!inside) {
                ++out.rejected;
                continue;
            }
            accepted = true;
            out.empirical_max = std::max(out.empirical_max, std::fabs(sx - sy));
        }
        if (accepted) {
            ++out.samples;
        }
    }
    return out;
}

int fiber_sync_time(double diam, double a, double target)
{
    require(a > 1.0, "fiber_sync_time: a must be > 1");
    require(target > 0.0, "fiber_sync_time: target must be positive");
    int k = 0;
    while (diam * std::pow(a, -k) * a / (a - 1.0) >= target) {
        ++k;
    }
    return k;
}

} // namespace eqs
