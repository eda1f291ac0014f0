#include "eqstates/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>

namespace eqs {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

} // namespace

PressureEstimate fit_growth(double eps, std::vector<int> n_values, std::vector<double> log_sums)
{
    require(n_values.size() == log_sums.size(), "fit_growth: size mismatch");
    require(!n_values.empty(), "fit_growth: empty series");
    for (std::size_t i = 1; i < n_values.size(); ++i) {
        require(n_values[i] > n_values[i - 1], "fit_growth: n values must increase");
    }
    PressureEstimate est;
    est.eps = eps;
    est.n_values = std::move(n_values);
    est.log_partition_sums = std::move(log_sums);

    const std::size_t m = est.n_values.size();
    const std::size_t half = m / 2;
    std::vector<double> xs, ys;
    for (std::size_t i = half; i < m; ++i) {
        if (std::isfinite(est.log_partition_sums[i])) {
            xs.push_back(est.n_values[i]);
            ys.push_back(est.log_partition_sums[i]);
        }
    }

    est.limsup_proxy = -inf;
    for (std::size_t i = m - std::max<std::size_t>(1, m / 4); i < m; ++i) {
        est.limsup_proxy = std::max(est.limsup_proxy, est.log_partition_sums[i] / est.n_values[i]);
    }

    if (xs.empty()) {
        est.empty = true;
        est.rate = -inf;
        est.rate_uncertainty = 0.0;
        return est;
    }
    if (xs.size() == 1) {
        est.rate = ys[0] / xs[0];
        est.rate_uncertainty = inf;
        return est;
    }
    const double k = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / k;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / k;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    est.rate = sxy / sxx;
    if (xs.size() > 2) {
        double ssr = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double r = ys[i] - (my + est.rate * (xs[i] - mx));
            ssr += r * r;
        }
        est.rate_uncertainty = std::sqrt(ssr / (k - 2.0) / sxx);
    }
    return est;
}

PressureEstimate pressure_at_scale_seeded(const MapSystem& map, const Potential& phi, const SegmentCollection& coll,
                                          double eps, int n_max, const std::vector<CandidatePool>* seeds,
                                          std::vector<CandidatePool>* chosen, const PressureOptions& opts)
{
    require(eps > 0.0, "pressure: eps must be positive");
    require(n_max >= 4, "pressure: n_max must be >= 4");
    require(seeds == nullptr || seeds->size() == static_cast<std::size_t>(n_max),
            "pressure: need one seed pool per n");

    const auto count = static_cast<std::size_t>(n_max);
    std::vector<int> ns(count);
    std::vector<double> logs(count);
    std::vector<std::size_t> sizes(count);
    std::vector<CandidatePool> kept(chosen ? count : 0);

    opts.workers.for_each(count, [&](std::size_t i) {
        const int n = static_cast<int>(i) + 1;
        const auto pool = CandidatePool::cylinders(map, phi, coll, n, opts.geometry);
        const CandidatePool* seed = seeds ? &(*seeds)[i] : nullptr;
        auto set = greedy_separated(pool, eps, seed);
        ns[i] = n;
        logs[i] = set.log_partition_sum;
        sizes[i] = set.size();
        if (chosen) {
            kept[i] = std::move(set.chosen);
        }
    });

    auto est = fit_growth(eps, std::move(ns), std::move(logs));
    est.set_sizes = std::move(sizes);
    if (chosen) {
        *chosen = std::move(kept);
    }
    return est;
}

PressureEstimate pressure_at_scale(const MapSystem& map, const Potential& phi, const SegmentCollection& coll,
                                   double eps, int n_max, const PressureOptions& opts)
{
    return pressure_at_scale_seeded(map, phi, coll, eps, n_max, nullptr, nullptr, opts);
}

KatokCover katok_cover(const MapSystem& map, const Potential& phi, std::span<const double> orbit_sample,
                       double delta, double eta, int n)
{
    require(!orbit_sample.empty(), "katok_sn: orbit sample must be nonempty");
    require(eta > 0.0 && eta < 1.0, "katok_sn: eta must lie in (0,1)");
    require(delta > 0.0, "katok_sn: delta must be positive");
    require(n >= 1, "katok_sn: n must be >= 1");

    const auto pool = CandidatePool::from_points(map, phi, orbit_sample, n);
    const auto nbrs = neighbour_lists(pool, delta, false);
    const double total = static_cast<double>(pool.size());
    const double target = eta * total;

    auto mark = [&](std::vector<char>& covered, std::size_t i) {
        std::size_t fresh = 0;
        if (!covered[i]) {
            covered[i] = 1;
            ++fresh;
        }
        for (std::size_t j : nbrs[i]) {
            if (!covered[j]) {
                covered[j] = 1;
                ++fresh;
            }
        }
        return fresh;
    };

    // Greedy by uncovered mass, lazy evaluation.
    KatokCover greedy;
    {
        using Entry = std::tuple<std::size_t, double, std::size_t>;
        auto worse = [](const Entry& a, const Entry& b) {
            if (std::get<0>(a) != std::get<0>(b)) {
                return std::get<0>(a) < std::get<0>(b);
            }
            if (std::get<1>(a) != std::get<1>(b)) {
                return std::get<1>(a) > std::get<1>(b);
            }
            return std::get<2>(a) > std::get<2>(b);
        };
        std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
        for (std::size_t i = 0; i < pool.size(); ++i) {
            heap.emplace(nbrs[i].size() + 1, pool.sums[i], i);
        }
        std::vector<char> covered(pool.size(), 0);
        std::vector<double> sums;
        double mass = 0.0;
        while (mass < target && !heap.empty()) {
            auto [g, s, i] = heap.top();
            heap.pop();
            std::size_t fresh = covered[i] ? 0 : 1;
            for (std::size_t j : nbrs[i]) {
                fresh += covered[j] ? 0 : 1;
            }
            if (fresh != g) {
                if (fresh > 0) {
                    heap.emplace(fresh, s, i);
                }
                continue;
            }
            mass += static_cast<double>(mark(covered, i));
            sums.push_back(s);
        }
        greedy.log_value = log_sum_exp(sums);
        greedy.centres = sums.size();
        greedy.covered_mass = mass / total;
    }

    // Prefix of the maximal separated set, which spans the whole sample.
    KatokCover prefix;
    {
        const auto sep = greedy_separated(pool, delta);
        std::vector<char> covered(pool.size(), 0);
        std::vector<double> sums;
        double mass = 0.0;
        for (std::size_t c = 0; c < sep.size() && mass < target; ++c) {
            const std::size_t i = sep.source[c];
            mass += static_cast<double>(mark(covered, i));
            sums.push_back(pool.sums[i]);
        }
        prefix.log_value = log_sum_exp(sums);
        prefix.centres = sums.size();
        prefix.covered_mass = mass / total;
    }
    return prefix.log_value < greedy.log_value ? prefix : greedy;
}

double katok_sn(const MapSystem& map, const Potential& phi, std::span<const double> orbit_sample, double delta,
                double eta, int n)
{
    return katok_cover(map, phi, orbit_sample, delta, eta, n).value();
}

GapReport make_gap_report(double sigma, PressureEstimate full, PressureEstimate bad)
{
    GapReport r;
    r.sigma = sigma;
    r.n_max = full.n_values.empty() ? 0 : full.n_values.back();
    r.p_full = std::move(full);
    r.p_bad = std::move(bad);
    if (r.p_bad.empty) {
        r.gap = inf;
        r.combined_uncertainty = r.p_full.rate_uncertainty;
    } else {
        r.gap = r.p_full.rate - r.p_bad.rate;
        r.combined_uncertainty = r.p_full.rate_uncertainty + r.p_bad.rate_uncertainty;
    }
    r.hypothesis_holds = !r.p_full.empty && r.gap > r.combined_uncertainty;
    return r;
}

std::vector<GapReport> gap_report(const MapSystem& map, const Potential& phi, const std::vector<double>& sigma_grid,
                                  double eps, int n_max, const PressureOptions& opts)
{
    for (double s : sigma_grid) {
        require(s > 0.0 && s < 1.0, "sigma must lie in (0,1)");
    }
    const auto full = pressure_at_scale(map, phi, SegmentCollection::full(), eps, n_max, opts);

    std::vector<std::size_t> order(sigma_grid.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return sigma_grid[a] > sigma_grid[b]; });

    std::vector<GapReport> out(sigma_grid.size());
    std::vector<CandidatePool> seeds;
    for (std::size_t idx : order) {
        const DecompositionConfig cfg(sigma_grid[idx]);
        std::vector<CandidatePool> chosen;
        auto bad = pressure_at_scale_seeded(map, phi, bad_collection(map, cfg), eps, n_max,
                                            seeds.empty() ? nullptr : &seeds, &chosen, opts);
        seeds = std::move(chosen);
        out[idx] = make_gap_report(sigma_grid[idx], full, std::move(bad));
    }
    return out;
}

HypothesisReport ct_hypothesis_check(const GapReport& gap, bool bowen_finite, bool spec_verified)
{
    HypothesisReport r;
    r.specification = spec_verified;
    r.bowen = bowen_finite;
    r.gap = gap.hypothesis_holds;
    if (!spec_verified) {
        r.blockers.emplace_back("specification");
    }
    if (!bowen_finite) {
        r.blockers.emplace_back("bowen");
    }
    if (!gap.hypothesis_holds) {
        r.blockers.emplace_back("gap");
    }
    r.pass = r.blockers.empty();
    std::ostringstream os;
    os.precision(6);
    os << "numerical evidence at eps=" << gap.p_full.eps << ", n_max=" << gap.n_max << ", sigma=" << gap.sigma
       << "; not a proof";
    r.label = os.str();
    return r;
}

} // namespace eqs
