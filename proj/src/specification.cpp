#include "eqstates/specification.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eqs {

namespace {

constexpr double kShrink = 1e-9;
constexpr double kConsistency = 1e-9;

Arc intersect(const Arc& a, const Arc& b)
{
    return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

Arc push(const MapSystem& map, const Arc& a)
{
    return {map.lifted(a.lo), map.lifted(a.hi)};
}

struct Fit {
    long shift = 0;
    double overlap = -1.0;
};

/// Integer k maximizing |E ∩ (A + k)|, smallest k on ties.
Fit best_shift(const Arc& e, const Arc& a)
{
    Fit best;
    const auto first = static_cast<long>(std::floor(e.lo - a.hi));
    const auto last = static_cast<long>(std::ceil(e.hi - a.lo));
    for (long k = first; k <= last; ++k) {
        const double ov = std::min(e.hi, a.hi + k) - std::max(e.lo, a.lo + k);
        if (ov > best.overlap) {
            best = {k, ov};
        }
    }
    return best;
}

/// Arcs around g^m x whose points stay within r of the segment orbit through
/// the end, following the segment's own inverse branches.
std::vector<Arc> bowen_arcs(const MapSystem& map, const std::vector<double>& orbit, double r)
{
    const std::size_t n = orbit.size();
    std::vector<Arc> arcs(n);
    arcs[n - 1] = {orbit[n - 1] - r, orbit[n - 1] + r};
    for (std::size_t m = n - 1; m-- > 0;) {
        const Arc pulled = map.local_inverse(orbit[m], arcs[m + 1]);
        arcs[m] = intersect(pulled, {orbit[m] - r, orbit[m] + r});
        if (arcs[m].empty()) {
            throw NumericalError("gluing: Bowen arc of a segment is empty at this eps");
        }
    }
    return arcs;
}

} // namespace

GluingPlan glue_orbits(const MapSystem& map, const std::vector<OrbitSegment>& segments, double eps, int tau_cap,
                       double overlap_fraction)
{
    require(!segments.empty(), "glue: need at least one segment");
    require(eps > 0.0 && eps <= map.epsilon0(), "glue: eps must lie in (0, epsilon0]");
    require(tau_cap >= 0, "glue: tau cap must be >= 0");
    for (const auto& s : segments) {
        require(s.length >= 1, "glue: segment lengths must be >= 1");
    }

    GluingPlan plan;
    plan.segments = segments;
    plan.eps = eps;
    plan.tau_cap = tau_cap;

    if (segments.size() == 1) {
        plan.starts = {0};
        plan.schedule = {segments[0].length};
        plan.glue_point = Circle::wrap(segments[0].start);
        plan.orbit = map.orbit(plan.glue_point, segments[0].length);
        return plan;
    }

    const double r = eps * (1.0 - kShrink);
    std::vector<std::vector<double>> orbits;
    std::vector<std::vector<Arc>> arcs;
    for (const auto& s : segments) {
        orbits.push_back(map.orbit(Circle::wrap(s.start), s.length));
        arcs.push_back(bowen_arcs(map, orbits.back(), r));
    }

    // Forward pass: D[t] is the arc of admissible positions at time t and
    // D[t] is contained in L(D[t-1]) - q[t].
    std::vector<Arc> d{arcs[0][0]};
    std::vector<double> q{0.0};
    plan.starts.push_back(0);

    for (std::size_t j = 0; j < segments.size(); ++j) {
        if (j > 0) {
            const Arc& target = arcs[j][0];
            std::vector<Arc> free;
            std::vector<double> free_q;
            Arc cur = d.back();
            int chosen = -1;
            Fit chosen_fit;
            std::vector<Arc> best_free;
            std::vector<double> best_free_q;
            int best_steps = -1;
            Fit best_fit;
            for (int steps = 1; steps <= tau_cap + 1; ++steps) {
                const Arc e = push(map, cur);
                const Fit fit = best_shift(e, target);
                if (fit.overlap > best_fit.overlap) {
                    best_fit = fit;
                    best_steps = steps;
                    best_free = free;
                    best_free_q = free_q;
                }
                if (fit.overlap >= overlap_fraction * target.length()) {
                    chosen = steps;
                    chosen_fit = fit;
                    break;
                }
                const double k = std::floor(e.lo);
                cur = {e.lo - k, e.hi - k};
                free.push_back(cur);
                free_q.push_back(k);
            }
            if (chosen < 0) {
                if (best_steps < 0 || !(best_fit.overlap > 0.0)) {
                    throw NumericalError("glue: no bridge within tau cap " + std::to_string(tau_cap) +
                                         "; retry with a larger cap");
                }
                chosen = best_steps;
                chosen_fit = best_fit;
                free = std::move(best_free);
                free_q = std::move(best_free_q);
            }
            free.resize(static_cast<std::size_t>(chosen - 1));
            free_q.resize(static_cast<std::size_t>(chosen - 1));
            const Arc before = free.empty() ? d.back() : free.back();
            d.insert(d.end(), free.begin(), free.end());
            q.insert(q.end(), free_q.begin(), free_q.end());
            const Arc e = push(map, before);
            const auto k = static_cast<double>(chosen_fit.shift);
            d.push_back(intersect({e.lo - k, e.hi - k}, target));
            q.push_back(k);
            plan.transitions.push_back(chosen - 1);
            plan.starts.push_back(static_cast<int>(d.size()) - 1);
        }
        for (std::size_t m = 1; m < orbits[j].size(); ++m) {
            const Arc e = push(map, d.back());
            const Fit fit = best_shift(e, arcs[j][m]);
            const auto k = static_cast<double>(fit.shift);
            const Arc next = intersect({e.lo - k, e.hi - k}, arcs[j][m]);
            if (next.empty()) {
                throw NumericalError("glue: admissible set became empty inside a segment");
            }
            d.push_back(next);
            q.push_back(k);
        }
        plan.schedule.push_back(plan.starts[j] + segments[j].length);
    }

    // Backward pass from the last segment's endpoint.
    const std::size_t T = d.size() - 1;
    std::vector<double> w(T + 1);
    w[T] = std::clamp(orbits.back().back(), d[T].lo, d[T].hi);
    for (std::size_t t = T; t-- > 0;) {
        w[t] = std::clamp(map.lifted_inverse(w[t + 1] + q[t + 1]), d[t].lo, d[t].hi);
    }
    plan.orbit.resize(T + 1);
    std::transform(w.begin(), w.end(), plan.orbit.begin(), [](double v) { return Circle::wrap(v); });
    plan.glue_point = plan.orbit.front();
    return plan;
}

GluingPlan glue_base(const MapSystem& map, const DecompositionConfig& cfg, const std::vector<OrbitSegment>& segments,
                     double eps, const GlueOptions& opts)
{
    require(eps > 0.0 && eps <= map.epsilon0(), "glue: eps must lie in (0, epsilon0]");
    require(opts.k0 >= 0, "glue: k0 must be >= 0");
    for (const auto& s : segments) {
        require(s.length > opts.k0, "glue: segment length must exceed k0");
        require(classify_segment(map, cfg, s) == SegmentClass::good, "glue: segment is not in G_sigma");
    }
    const int cap = opts.tau_cap >= 0 ? opts.tau_cap : mixing_time(map, eps);
    return glue_orbits(map, segments, eps, cap, opts.overlap_fraction);
}

double verify_shadow(const MapSystem& map, const GluingPlan& plan)
{
    for (std::size_t t = 0; t + 1 < plan.orbit.size(); ++t) {
        if (Circle::distance(map(plan.orbit[t]), plan.orbit[t + 1]) > kConsistency) {
            return std::numeric_limits<double>::infinity();
        }
    }
    double worst = 0.0;
    for (std::size_t j = 0; j < plan.segments.size(); ++j) {
        const auto& s = plan.segments[j];
        const auto orbit = map.orbit(Circle::wrap(s.start), s.length);
        for (int m = 0; m < s.length; ++m) {
            const auto t = static_cast<std::size_t>(plan.starts[j] + m);
            if (t >= plan.orbit.size()) {
                return std::numeric_limits<double>::infinity();
            }
            worst = std::max(worst, Circle::distance(orbit[static_cast<std::size_t>(m)], plan.orbit[t]));
        }
    }
    return worst;
}

ExtGluingPlan glue_extension(const MapSystem& map, const DecompositionConfig& dec,
                             const std::vector<ExtSegment>& segments, double eps, const ExtensionConfig& cfg,
                             const GlueOptions& opts)
{
    require(!segments.empty(), "glue_extension: need at least one segment");
    require(eps > 0.0 && eps <= map.epsilon0(), "glue_extension: eps must lie in (0, epsilon0]");

    ExtGluingPlan plan;
    plan.segments = segments;
    plan.eps = eps;
    plan.cfg = cfg;
    plan.tau_s = fiber_sync_time(cfg.diam, cfg.a, eps / 2.0);
    plan.base_eps = eps * (cfg.a - 1.0) / (2.0 * cfg.a);
    require(plan.tau_s <= cfg.K, "glue_extension: depth K is below the fiber synchronization time");

    std::vector<OrbitSegment> base;
    for (std::size_t j = 0; j < segments.size(); ++j) {
        const auto& s = segments[j];
        require(s.point.depth() == cfg.K, "glue_extension: segment depth must equal K");
        require(s.length > opts.k0, "glue_extension: segment length must exceed k0");
        require(classify_segment(map, dec, {s.point.x0(), s.length}) == SegmentClass::good,
                "glue_extension: projected segment is not in G_sigma");
        if (j == 0) {
            base.push_back({s.point.x0(), s.length});
        } else {
            base.push_back({s.point.coords[static_cast<std::size_t>(plan.tau_s)], s.length + plan.tau_s});
        }
    }

    const int cap = opts.tau_cap >= 0 ? opts.tau_cap : mixing_time(map, plan.base_eps);
    plan.base = glue_orbits(map, base, plan.base_eps, cap, opts.overlap_fraction);
    plan.tau_cap = cap + plan.tau_s;

    plan.starts.push_back(0);
    for (std::size_t j = 1; j < segments.size(); ++j) {
        plan.starts.push_back(plan.base.starts[j] + plan.tau_s);
        plan.transitions.push_back(plan.starts[j] - (plan.starts[j - 1] + segments[j - 1].length));
    }

    // Backward tail of the glued point follows the first segment's fiber.
    const auto& first = segments.front().point.coords;
    plan.glue_point.coords.resize(first.size());
    plan.glue_point.coords[0] = plan.base.glue_point;
    for (std::size_t i = 1; i < first.size(); ++i) {
        plan.glue_point.coords[i] = Circle::wrap(map.local_inverse(first[i], plan.glue_point.coords[i - 1]));
    }
    return plan;
}

ExtPoint glued_iterate(const ExtGluingPlan& plan, int t)
{
    const auto& w = plan.base.orbit;
    const auto& tail = plan.glue_point.coords;
    require(t >= 0 && static_cast<std::size_t>(t) < w.size(), "glued_iterate: time outside the plan");
    ExtPoint p;
    p.coords.resize(tail.size());
    for (std::size_t i = 0; i < tail.size(); ++i) {
        const long back = static_cast<long>(t) - static_cast<long>(i);
        p.coords[i] = back >= 0 ? w[static_cast<std::size_t>(back)] : tail[static_cast<std::size_t>(-back)];
    }
    return p;
}

std::pair<double, double> verify_shadow(const MapSystem& map, const ExtGluingPlan& plan)
{
    const auto& w = plan.base.orbit;
    for (std::size_t t = 0; t + 1 < w.size(); ++t) {
        if (Circle::distance(map(w[t]), w[t + 1]) > kConsistency) {
            return {std::numeric_limits<double>::infinity(), plan.cfg.tail_bound()};
        }
    }
    double worst = 0.0;
    for (std::size_t j = 0; j < plan.segments.size(); ++j) {
        ExtPoint p = plan.segments[j].point;
        for (int m = 0; m < plan.segments[j].length; ++m) {
            const ExtPoint z = glued_iterate(plan, plan.starts[j] + m);
            worst = std::max(worst, hat_distance(plan.cfg, p, z).first);
            p = hat_g(map, p);
        }
    }
    return {worst, plan.cfg.tail_bound()};
}

namespace {

nlohmann::json base_json(const GluingPlan& plan)
{
    nlohmann::json segs = nlohmann::json::array();
    for (const auto& s : plan.segments) {
        segs.push_back({{"start", s.start}, {"length", s.length}});
    }
    return {{"segments", segs},         {"eps", plan.eps},
            {"tau_cap", plan.tau_cap},  {"transitions", plan.transitions},
            {"starts", plan.starts},    {"schedule", plan.schedule},
            {"glue_point", plan.glue_point}};
}

} // namespace

std::string plan_to_json(const GluingPlan& plan, double verified)
{
    auto j = base_json(plan);
    j["verified_max_distance"] = verified;
    return j.dump(2);
}

std::string plan_to_json(const ExtGluingPlan& plan, double verified)
{
    nlohmann::json segs = nlohmann::json::array();
    for (const auto& s : plan.segments) {
        segs.push_back({{"coords", s.point.coords}, {"length", s.length}});
    }
    nlohmann::json j = {{"segments", segs},
                        {"eps", plan.eps},
                        {"a", plan.cfg.a},
                        {"K", plan.cfg.K},
                        {"base_eps", plan.base_eps},
                        {"tau_s", plan.tau_s},
                        {"tau_cap", plan.tau_cap},
                        {"transitions", plan.transitions},
                        {"starts", plan.starts},
                        {"glue_point", plan.glue_point.coords},
                        {"tail_bound", plan.cfg.tail_bound()},
                        {"verified_max_distance", verified},
                        {"base", base_json(plan.base)}};
    return j.dump(2);
}

} // namespace eqs
