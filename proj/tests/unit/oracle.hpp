#pragma once

// Small independent reference computations shared by the unit tests.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

inline double bisect(const std::function<double(double)>& f, double lo, double hi, int steps = 200)
{
    double flo = f(lo);
    for (int i = 0; i < steps; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

inline double circle_dist(double x, double y)
{
    double d = std::fmod(std::fabs(x - y), 1.0);
    return std::min(d, 1.0 - d);
}

/// Exact maximum independent set size by branching on a vertex of maximum
/// degree. adjacency[i] lists neighbours of i.
class MaxIndependentSet {
public:
    explicit MaxIndependentSet(std::vector<std::vector<std::size_t>> adjacency) : adj_(std::move(adjacency)) {}

    std::size_t solve()
    {
        std::vector<char> alive(adj_.size(), 1);
        return go(alive);
    }

private:
    std::size_t go(std::vector<char>& alive)
    {
        std::size_t taken = 0;
        std::vector<std::size_t> removed;
        // isolated or degree-1 vertices can always be taken
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t v = 0; v < adj_.size(); ++v) {
                if (!alive[v]) {
                    continue;
                }
                std::size_t deg = 0;
                for (auto u : adj_[v]) {
                    deg += alive[u];
                }
                if (deg <= 1) {
                    ++taken;
                    alive[v] = 0;
                    removed.push_back(v);
                    for (auto u : adj_[v]) {
                        if (alive[u]) {
                            alive[u] = 0;
                            removed.push_back(u);
                        }
                    }
                    changed = true;
                }
            }
        }
        std::size_t best_v = adj_.size();
        std::size_t best_deg = 0;
        for (std::size_t v = 0; v < adj_.size(); ++v) {
            if (!alive[v]) {
                continue;
            }
            std::size_t deg = 0;
            for (auto u : adj_[v]) {
                deg += alive[u];
            }
            if (best_v == adj_.size() || deg > best_deg) {
                best_v = v;
                best_deg = deg;
            }
        }
        std::size_t result = taken;
        if (best_v != adj_.size()) {
            // branch 1: drop v
            alive[best_v] = 0;
            const std::size_t without = go(alive);
            // branch 2: take v, drop its neighbours
            std::vector<std::size_t> nb;
            for (auto u : adj_[best_v]) {
                if (alive[u]) {
                    alive[u] = 0;
                    nb.push_back(u);
                }
            }
            const std::size_t with = 1 + go(alive);
            for (auto u : nb) {
                alive[u] = 1;
            }
            alive[best_v] = 1;
            result += std::max(without, with);
        }
        for (auto v : removed) {
            alive[v] = 1;
        }
        return result;
    }

    std::vector<std::vector<std::size_t>> adj_;
};

} // namespace oracle
