#include "eqstates/orbit_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <tuple>
#include <unordered_map>

namespace eqs {

double birkhoff_sum(const MapSystem& map, const Potential& phi, const OrbitSegment& seg)
{
    require(seg.length >= 1, "birkhoff_sum: segment length must be >= 1");
    double sum = 0.0;
    double x = Circle::wrap(seg.start);
    for (int k = 0; k < seg.length; ++k) {
        sum += phi(x);
        x = map(x);
    }
    return sum;
}

double bowen_distance(const MapSystem& map, double x, double y, int n)
{
    require(n >= 1, "bowen_distance: n must be >= 1");
    double best = 0.0;
    x = Circle::wrap(x);
    y = Circle::wrap(y);
    for (int k = 0; k < n; ++k) {
        best = std::max(best, Circle::distance(x, y));
        x = map(x);
        y = map(y);
    }
    return best;
}

std::vector<double> cylinder_representatives(const MapSystem& map, int n, std::size_t node_cap)
{
    require(n >= 1, "cylinder_representatives: n must be >= 1");
    const auto d = static_cast<std::size_t>(map.degree());
    std::size_t count = 1;
    for (int k = 0; k < n; ++k) {
        count *= d;
        if (count > node_cap) {
            throw CapacityError("cylinder tree exceeds node cap of " + std::to_string(node_cap) +
                                " at depth " + std::to_string(n) + "; reduce n");
        }
    }

    std::vector<double> ends{0.0, 1.0};
    for (int level = 0; level < n; ++level) {
        std::vector<double> next;
        next.reserve((ends.size() - 1) * d + 1);
        for (std::size_t b = 0; b < d; ++b) {
            for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
                next.push_back(map.lifted_inverse(ends[i] + static_cast<double>(b)));
            }
        }
        next.push_back(1.0);
        ends = std::move(next);
    }

    std::vector<double> mids(ends.size() - 1);
    for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
        mids[i] = 0.5 * (ends[i] + ends[i + 1]);
    }
    return mids;
}

CandidatePool CandidatePool::from_points(const MapSystem& map, const Potential& phi, std::span<const double> points,
                                         int n)
{
    CandidatePool pool;
    pool.n = n;
    pool.points.reserve(points.size());
    pool.orbits.reserve(points.size() * static_cast<std::size_t>(n));
    pool.sums.reserve(points.size());
    for (double p : points) {
        double x = Circle::wrap(p);
        pool.points.push_back(x);
        double s = 0.0;
        for (int k = 0; k < n; ++k) {
            pool.orbits.push_back(x);
            s += phi(x);
            x = map(x);
        }
        pool.sums.push_back(s);
    }
    return pool;
}

CandidatePool CandidatePool::cylinders(const MapSystem& map, const Potential& phi, const SegmentCollection& coll,
                                       int n, const GeometryOptions& opts)
{
    auto reps = cylinder_representatives(map, n, opts.node_cap);
    if (coll.contains) {
        std::erase_if(reps, [&](double x) { return !coll.test(x, n); });
    }
    return from_points(map, phi, reps, n);
}

namespace {

/// Spatial hash on the time-0 coordinate. Two points with d_n < eps are
/// within eps at time 0, so only neighbouring buckets need checking.
class BucketIndex {
public:
    explicit BucketIndex(double eps)
        : buckets_(std::max<long>(1, std::min<long>(static_cast<long>(std::floor(1.0 / eps)), 1L << 20)))
    {
    }

    long key(double x) const
    {
        return std::min(static_cast<long>(x * static_cast<double>(buckets_)), buckets_ - 1);
    }

    void insert(double x, std::size_t id) { table_[key(x)].push_back(id); }

    template <class Fn>
    bool any_near(double x, Fn&& fn) const
    {
        const long k = key(x);
        long seen[3];
        int count = 0;
        for (long dk = -1; dk <= 1; ++dk) {
            const long kk = ((k + dk) % buckets_ + buckets_) % buckets_;
            if (std::find(seen, seen + count, kk) != seen + count) {
                continue;
            }
            seen[count++] = kk;
            const auto it = table_.find(kk);
            if (it == table_.end()) {
                continue;
            }
            for (std::size_t id : it->second) {
                if (fn(id)) {
                    return true;
                }
            }
        }
        return false;
    }

private:
    long buckets_;
    std::unordered_map<long, std::vector<std::size_t>> table_;
};

bool within(std::span<const double> a, std::span<const double> b, double eps, bool closed)
{
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = Circle::distance(a[k], b[k]);
        if (closed ? d > eps : d >= eps) {
            return false;
        }
    }
    return true;
}

void append(CandidatePool& dst, const CandidatePool& src, std::size_t i)
{
    dst.points.push_back(src.points[i]);
    const auto o = src.orbit(i);
    dst.orbits.insert(dst.orbits.end(), o.begin(), o.end());
    dst.sums.push_back(src.sums[i]);
}

} // namespace

double log_sum_exp(std::span<const double> values)
{
    if (values.empty()) {
        return -std::numeric_limits<double>::infinity();
    }
    const double top = *std::max_element(values.begin(), values.end());
    double acc = 0.0;
    for (double v : values) {
        acc += std::exp(v - top);
    }
    return top + std::log(acc);
}

SeparatedSet greedy_separated(const CandidatePool& pool, double eps, const CandidatePool* seed)
{
    require(eps > 0.0, "separated set: eps must be positive");
    SeparatedSet out;
    out.chosen.n = pool.n;
    out.candidates = pool.size();
    BucketIndex index(eps);

    auto conflicts = [&](std::span<const double> orbit) {
        return index.any_near(orbit[0], [&](std::size_t id) { return within(orbit, out.chosen.orbit(id), eps, false); });
    };

    if (seed != nullptr) {
        require(seed->n == pool.n, "separated set: seed segment length differs from pool");
        for (std::size_t i = 0; i < seed->size(); ++i) {
            require(!conflicts(seed->orbit(i)), "separated set: seed points are not (n, eps)-separated");
            index.insert(seed->points[i], out.chosen.size());
            append(out.chosen, *seed, i);
            out.source.push_back(SeparatedSet::npos);
        }
    }

    std::vector<std::size_t> order(pool.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pool.sums[a] > pool.sums[b]; });

    for (std::size_t i : order) {
        if (conflicts(pool.orbit(i))) {
            continue;
        }
        index.insert(pool.points[i], out.chosen.size());
        append(out.chosen, pool, i);
        out.source.push_back(i);
    }
    out.log_partition_sum = log_sum_exp(out.chosen.sums);
    return out;
}

std::vector<std::vector<std::size_t>> neighbour_lists(const CandidatePool& pool, double eps, bool closed)
{
    BucketIndex index(eps);
    for (std::size_t i = 0; i < pool.size(); ++i) {
        index.insert(pool.points[i], i);
    }
    std::vector<std::vector<std::size_t>> out(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
        const auto oi = pool.orbit(i);
        index.any_near(pool.points[i], [&](std::size_t j) {
            if (j != i && within(oi, pool.orbit(j), eps, closed)) {
                out[i].push_back(j);
            }
            return false;
        });
    }
    return out;
}

double log_partition_sum_span(const CandidatePool& pool, double eps)
{
    require(eps > 0.0, "spanning set: eps must be positive");
    if (pool.size() == 0) {
        return -std::numeric_limits<double>::infinity();
    }
    const auto nbrs = neighbour_lists(pool, eps, false);
    std::vector<char> covered(pool.size(), 0);
    std::vector<std::size_t> gain(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
        gain[i] = nbrs[i].size() + 1;
    }

    // Lazy greedy set cover: most newly covered points, then lighter weight, then address.
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
        heap.emplace(gain[i], pool.sums[i], i);
    }

    std::size_t remaining = pool.size();
    std::vector<double> centre_sums;
    while (remaining > 0 && !heap.empty()) {
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
        centre_sums.push_back(s);
        if (!covered[i]) {
            covered[i] = 1;
            --remaining;
        }
        for (std::size_t j : nbrs[i]) {
            if (!covered[j]) {
                covered[j] = 1;
                --remaining;
            }
        }
    }
    const double cover = log_sum_exp(centre_sums);
    // A maximal separated set also spans the pool.
    const double sep = greedy_separated(pool, eps).log_partition_sum;
    return std::min(cover, sep);
}

std::vector<double> separated_set(const MapSystem& map, const SegmentCollection& coll, int n, double eps,
                                  const Potential* phi, const GeometryOptions& opts)
{
    const Potential zero = Potential::zero();
    const auto pool = CandidatePool::cylinders(map, phi ? *phi : zero, coll, n, opts);
    return greedy_separated(pool, eps).chosen.points;
}

double partition_sum_sep(const MapSystem& map, const Potential& phi, const SegmentCollection& coll, int n,
                         double eps, const GeometryOptions& opts)
{
    const auto pool = CandidatePool::cylinders(map, phi, coll, n, opts);
    return greedy_separated(pool, eps).partition_sum();
}

double partition_sum_span(const MapSystem& map, const Potential& phi, const SegmentCollection& coll, int n,
                          double eps, const GeometryOptions& opts)
{
    const auto pool = CandidatePool::cylinders(map, phi, coll, n, opts);
    return std::exp(log_partition_sum_span(pool, eps));
}

} // namespace eqs
