#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "levysim/intervals.hpp"
#include "levysim/rng.hpp"

namespace levysim {

/// Finite list of weighted atoms: nu = sum_i rate_i * delta_{x_i}.
struct FiniteDiscreteMeasure {
    struct Atom {
        double size = 0.0;  // x_i != 0
        double rate = 0.0;  // nu({x_i}) > 0

        friend bool operator==(const Atom&, const Atom&) = default;
    };
    std::vector<Atom> atoms;

    friend bool operator==(const FiniteDiscreteMeasure&, const FiniteDiscreteMeasure&) = default;
};

/// Two-sided exponential jump law:
///   nu(dx) = rate_plus/scale_plus * exp(-x/scale_plus) dx        on x > 0
///          + rate_minus/scale_minus * exp(x/scale_minus) dx      on x < 0.
/// Total mass rate_plus + rate_minus (finite activity).
struct TwoSidedExponentialMeasure {
    double rate_plus = 0.0;
    double scale_plus = 1.0;
    double rate_minus = 0.0;
    double scale_minus = 1.0;

    friend bool operator==(const TwoSidedExponentialMeasure&,
                           const TwoSidedExponentialMeasure&) = default;
};

/// Symmetric stable-like density truncated away from zero and at max_size:
///   nu(dx) = scale * |x|^(-1-alpha) dx   on cutoff <= |x| <= max_size.
struct TruncatedStableMeasure {
    double alpha = 0.5;   // in (0, 2)
    double scale = 1.0;   // the constant c
    double cutoff = 1e-2; // inner truncation epsilon > 0
    double max_size = 100.0;

    friend bool operator==(const TruncatedStableMeasure&, const TruncatedStableMeasure&) = default;
};

using JumpMeasureSpec =
    std::variant<FiniteDiscreteMeasure, TwoSidedExponentialMeasure, TruncatedStableMeasure>;

/// Throws std::invalid_argument on malformed parameters; also checks the
/// integrability condition int min(1,x^2) nu(dx) < infinity numerically.
void validate(const JumpMeasureSpec& spec);

double total_mass(const JumpMeasureSpec& spec);

/// Lebesgue density of nu at x (zero off the support). Undefined for
/// FiniteDiscreteMeasure, which has no density; callers must not ask.
double density(const JumpMeasureSpec& spec, double x);

/// nu(A). Exact atom summation for FiniteDiscreteMeasure, adaptive quadrature
/// of the density for the continuous families (relative error <= 1e-10).
/// Throws NonIntegrable if A touches 0 while nu has infinite total mass.
double nu_mass(const JumpMeasureSpec& spec, const IntervalUnion& A);

/// int_A x^p nu(dx) for p in {0,1,2}, via the closed-form antiderivatives each
/// parametric family carries. Used internally wherever exactness matters; the
/// quadrature route below cross-checks it.
double nu_moment_closed(const JumpMeasureSpec& spec, const IntervalUnion& A, int p);

inline double nu_mass_closed(const JumpMeasureSpec& spec, const IntervalUnion& A) {
    return nu_moment_closed(spec, A, 0);
}
inline double nu_first_moment(const JumpMeasureSpec& spec, const IntervalUnion& A) {
    return nu_moment_closed(spec, A, 1);
}
inline double nu_second_moment(const JumpMeasureSpec& spec, const IntervalUnion& A) {
    return nu_moment_closed(spec, A, 2);
}

/// int_A x^p nu(dx) by adaptive quadrature (atom summation for the discrete
/// family, where quadrature is meaningless).
double nu_moment_quadrature(const JumpMeasureSpec& spec, const IntervalUnion& A, int p);

/// Levy triplet (gamma, sigma, nu).
struct LevyTriplet {
    double gamma = 0.0;
    double sigma = 0.0;  // >= 0; the difference-operator module requires 0
    JumpMeasureSpec nu = FiniteDiscreteMeasure{};

    friend bool operator==(const LevyTriplet&, const LevyTriplet&) = default;
};

void validate(const LevyTriplet& triplet);

/// One element S_k of the partition of R\{0}: the set {lo <= |x| < hi},
/// with cached nu-moments. The big-jump sector {|x| >= 1} is uncompensated.
struct Sector {
    double abs_lo = 0.0;
    double abs_hi = 0.0;
    bool compensated = true;
    double mass = 0.0;   // nu(S_k)
    double drift = 0.0;  // int_{S_k} x nu(dx)
    double quad = 0.0;   // int_{S_k} x^2 nu(dx)

    bool contains(double x) const {
        const double a = std::abs(x);
        return a >= abs_lo && a < abs_hi;
    }

    IntervalUnion as_intervals() const {
        return {Interval::open_closed(-abs_hi, -abs_lo), Interval::closed_open(abs_lo, abs_hi)};
    }
};

/// The sector partition (S_k): the big-jump sector {|x| >= 1} followed by
/// dyadic shells of {eps_min <= |x| < 1}. Sectors with nu(S_k) = 0 are
/// removed and the numbering corrected. Immutable after construction.
class SectorPartition {
  public:
    SectorPartition() = default;

    /// Builds the partition for `spec` with at most `num_sectors` sectors.
    /// Shells halve geometrically down to eps_min; the innermost shell is
    /// floored at eps_min so the shells always cover {eps_min <= |x| < 1}.
    /// Throws EmptyPartition when nu has no mass on {|x| >= eps_min}.
    static SectorPartition build(const JumpMeasureSpec& spec, int num_sectors,
                                 double eps_min = 1e-3);

    const std::vector<Sector>& sectors() const { return sectors_; }
    bool empty() const { return sectors_.empty(); }
    std::size_t size() const { return sectors_.size(); }
    double eps_min() const { return eps_min_; }

    /// Variance of the discarded small jumps, int_{|x| < eps_min} x^2 nu(dx);
    /// the user-facing bound on the truncation bias.
    double small_jump_variance() const { return small_jump_variance_; }

    /// Total nu-mass over the covered support.
    double covered_mass() const;

    /// Sum of compensator drifts over the compensated sectors.
    double compensator_drift() const;

    /// Index of the sector containing x, or -1 if none covers it.
    int sector_index_of(double x) const;

    const JumpMeasureSpec& measure() const { return measure_; }

  private:
    std::vector<Sector> sectors_;
    JumpMeasureSpec measure_;
    double eps_min_ = 0.0;
    double small_jump_variance_ = 0.0;
};

/// Draws a jump size from the normalized sector law Q_k = nu(. cap S_k)/nu(S_k).
double sample_size_in_sector(const JumpMeasureSpec& spec, const Sector& sector, Rng& rng);

/// Quantile q in [0,1] of Q_k, taken along ascending x over the sector's
/// two-sided support.
double sector_quantile(const JumpMeasureSpec& spec, const Sector& sector, double q);

/// Draws a size from nu restricted to the covered support (sector chosen
/// proportionally to mass, then the sector law).
double sample_supported_size(const SectorPartition& partition, Rng& rng);

/// Deterministic control measure m = lambda (x) mu with
/// mu(dx) = sigma^2 delta_0(dx) + x^2 nu(dx), on [0, horizon] x R.
struct ControlMeasure {
    LevyTriplet triplet;
    double horizon = 1.0;
};

/// m([t_lo,t_hi) x A). Requires 0 <= t_lo <= t_hi <= horizon.
double control_measure(const ControlMeasure& cm, const Rect& rect);

}  // namespace levysim
