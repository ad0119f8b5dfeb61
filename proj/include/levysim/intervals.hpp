#pragma once

#include <cmath>
#include <limits>
#include <vector>

namespace levysim {

/// One-dimensional interval with explicit endpoint conventions.
/// Endpoints may be +-infinity; an infinite endpoint is always treated as open.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_open = false;
    bool hi_open = true;

    static Interval closed_open(double lo, double hi) { return {lo, hi, false, true}; }
    static Interval open_closed(double lo, double hi) { return {lo, hi, true, false}; }
    static Interval closed(double lo, double hi) { return {lo, hi, false, false}; }
    static Interval open(double lo, double hi) { return {lo, hi, true, true}; }

    bool contains(double x) const {
        if (x < lo || (x == lo && lo_open)) return false;
        if (x > hi || (x == hi && hi_open)) return false;
        return true;
    }

    bool empty() const {
        if (lo > hi) return true;
        return lo == hi && (lo_open || hi_open);
    }

    bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }

    /// True if the two intervals share at least one point.
    bool overlaps(const Interval& other) const {
        if (empty() || other.empty()) return false;
        const Interval& a = lo <= other.lo ? *this : other;
        const Interval& b = lo <= other.lo ? other : *this;
        if (b.lo > a.hi) return false;
        if (b.lo == a.hi) return !b.lo_open && !a.hi_open;
        return true;
    }
};

/// Finite union of intervals. Not required to be disjoint or sorted; membership
/// is the union of the members' membership.
using IntervalUnion = std::vector<Interval>;

inline bool contains(const IntervalUnion& u, double x) {
    for (const auto& iv : u) {
        if (iv.contains(x)) return true;
    }
    return false;
}

inline bool overlaps(const IntervalUnion& a, const IntervalUnion& b) {
    for (const auto& ia : a) {
        for (const auto& ib : b) {
            if (ia.overlaps(ib)) return true;
        }
    }
    return false;
}

/// Time-size rectangle [t_lo, t_hi) x A. Time intervals are half-open so that
/// rectangles tile cleanly; the size component is a general interval union.
struct Rect {
    double t_lo = 0.0;
    double t_hi = 0.0;
    IntervalUnion sizes;

    bool contains(double t, double x) const {
        return t >= t_lo && t < t_hi && levysim::contains(sizes, x);
    }

    bool contains_zero_size() const { return levysim::contains(sizes, 0.0); }

    bool overlaps(const Rect& other) const {
        const bool times = t_lo < other.t_hi && other.t_lo < t_hi;
        return times && levysim::overlaps(sizes, other.sizes);
    }
};

/// Convenience: [t_lo,t_hi) x (x_lo, x_hi].
inline Rect make_rect(double t_lo, double t_hi, double x_lo, double x_hi) {
    return Rect{t_lo, t_hi, {Interval::open_closed(x_lo, x_hi)}};
}

}  // namespace levysim
