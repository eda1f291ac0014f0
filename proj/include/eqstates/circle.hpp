#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace eqs {

/// Raised when a numerical routine cannot deliver its contract (root solve,
/// eigen iteration, gluing search). Validation problems use std::invalid_argument.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Enumeration outgrew its configured node cap.
class CapacityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// The circle R/Z represented by [0,1) with the wraparound metric.
struct Circle {
    static constexpr double diameter = 0.5;

    static double wrap(double x)
    {
        double r = x - std::floor(x);
        // floor can leave r == 1.0 for tiny negative x
        return r >= 1.0 ? 0.0 : r;
    }

    /// Signed displacement from `from` to `to`, in [-1/2, 1/2).
    static double delta(double from, double to)
    {
        double d = to - from;
        d -= std::floor(d + 0.5);
        return d;
    }

    static double distance(double x, double y)
    {
        double d = std::fabs(x - y);
        d -= std::floor(d);
        return d > 0.5 ? 1.0 - d : d;
    }

    /// Representative of x on the real line closest to `ref`.
    static double unwrap(double x, double ref) { return ref + delta(ref, x); }
};

/// A closed arc stored as a real interval [lo, hi] of lift coordinates.
struct Arc {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool empty() const { return hi < lo; }
};

inline void require(bool ok, const std::string& what)
{
    if (!ok) {
        throw std::invalid_argument(what);
    }
}

} // namespace eqs
