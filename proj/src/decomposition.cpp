#include "eqstates/decomposition.hpp"

#include <cmath>

namespace eqs {

const char* to_string(SegmentClass c)
{
    switch (c) {
    case SegmentClass::good:
        return "in_G";
    case SegmentClass::bad:
        return "in_S";
    case SegmentClass::neither:
        return "neither";
    }
    return "?";
}

std::vector<double> log_contraction_profile(const MapSystem& map, double x, int n)
{
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(std::max(n, 0)));
    x = Circle::wrap(x);
    for (int i = 0; i < n; ++i) {
        out.push_back(std::log(map.branch_lipschitz(x)));
        x = map(x);
    }
    return out;
}

bool in_sigma_window(const MapSystem& map, const DecompositionConfig& cfg, double x, int j, int n)
{
    require(n >= 1 && j >= 0 && j <= n - 1, "in_sigma_window: need 0 <= j <= n-1");
    const auto ls = log_contraction_profile(map, x, n);
    double sum = 0.0;
    for (int i = j; i < n; ++i) {
        sum += ls[static_cast<std::size_t>(i)];
    }
    return sum / (n - j) < cfg.log_sigma();
}

SegmentClass classify_profile(std::span<const double> ls, double log_threshold)
{
    const auto n = static_cast<int>(ls.size());
    if (n == 0) {
        return SegmentClass::neither;
    }
    double suffix = 0.0;
    bool all = true;
    for (int j = n - 1; j >= 0; --j) {
        suffix += ls[static_cast<std::size_t>(j)];
        const bool ok = suffix / (n - j) < log_threshold;
        if (j == 0 && !ok) {
            return SegmentClass::bad;
        }
        all = all && ok;
    }
    return all ? SegmentClass::good : SegmentClass::neither;
}

SegmentClass classify_segment(const MapSystem& map, const DecompositionConfig& cfg, const OrbitSegment& seg)
{
    require(seg.length >= 1, "classify_segment: length must be >= 1");
    return classify_profile(log_contraction_profile(map, seg.start, seg.length), cfg.log_sigma());
}

Decomposition decompose_profile(std::span<const double> ls, double log_threshold)
{
    const auto n = static_cast<int>(ls.size());
    std::vector<double> suffix(ls.size() + 1, 0.0);
    for (int j = n - 1; j >= 0; --j) {
        suffix[static_cast<std::size_t>(j)] = suffix[static_cast<std::size_t>(j) + 1] + ls[static_cast<std::size_t>(j)];
    }
    int m = n;
    for (int j = 0; j < n; ++j) {
        if (!(suffix[static_cast<std::size_t>(j)] / (n - j) < log_threshold)) {
            m = j;
            break;
        }
    }
    return {0, m, n - m};
}

Decomposition decompose(const MapSystem& map, const DecompositionConfig& cfg, const OrbitSegment& seg)
{
    require(seg.length >= 0, "decompose: length must be >= 0");
    return decompose_profile(log_contraction_profile(map, seg.start, seg.length), cfg.log_sigma());
}

ObstructionSample obstruction_sample(const MapSystem& map, const DecompositionConfig& cfg,
                                     std::span<const double> points, int horizon)
{
    require(horizon >= 1, "obstruction_sample: horizon must be >= 1");
    ObstructionSample out;
    out.horizon = horizon;
    const double lt = cfg.log_sigma();
    for (double p : points) {
        const auto ls = log_contraction_profile(map, p, horizon);
        std::vector<double> prefix(ls.size() + 1, 0.0);
        for (std::size_t i = 0; i < ls.size(); ++i) {
            prefix[i + 1] = prefix[i] + ls[i];
        }
        std::optional<int> first;
        for (int n = horizon; n >= 1; --n) {
            if (prefix[static_cast<std::size_t>(n)] / n >= lt) {
                first = n;
            } else {
                break;
            }
        }
        out.points.push_back(p);
        out.first_time.push_back(first);
    }
    return out;
}

std::vector<double> pull_back_along(const MapSystem& map, double x, int n, double end)
{
    const auto orbit = map.orbit(x, n + 1);
    std::vector<double> out(static_cast<std::size_t>(n) + 1);
    out[static_cast<std::size_t>(n)] = Circle::wrap(end);
    for (int k = n - 1; k >= 0; --k) {
        const auto kk = static_cast<std::size_t>(k);
        out[kk] = Circle::wrap(map.local_inverse(orbit[kk], out[kk + 1]));
    }
    return out;
}

SegmentCollection good_collection(const MapSystem& map, const DecompositionConfig& cfg)
{
    SegmentCollection c;
    c.name = "G_sigma";
    c.contains = [map, cfg](double x, int n) {
        return classify_segment(map, cfg, {x, n}) == SegmentClass::good;
    };
    return c;
}

SegmentCollection bad_collection(const MapSystem& map, const DecompositionConfig& cfg)
{
    SegmentCollection c;
    c.name = "S_sigma";
    c.contains = [map, cfg](double x, int n) {
        return classify_segment(map, cfg, {x, n}) == SegmentClass::bad;
    };
    return c;
}

SegmentCollection obstruction_collection(const MapSystem& map, const DecompositionConfig& cfg, int k, int horizon)
{
    require(k >= 1 && k <= horizon, "obstruction_collection: need 1 <= k <= horizon");
    SegmentCollection c;
    c.name = "A_k";
    c.contains = [map, cfg, k, horizon](double x, int) {
        const double pts[1] = {x};
        const auto s = obstruction_sample(map, cfg, pts, horizon);
        return s.first_time[0].has_value() && *s.first_time[0] <= k;
    };
    return c;
}

} // namespace eqs
