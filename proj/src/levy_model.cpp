#include "levysim/levy_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "levysim/errors.hpp"
#include "levysim/quadrature.hpp"

namespace levysim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ipow(double x, int p) {
    switch (p) {
        case 0: return 1.0;
        case 1: return x;
        case 2: return x * x;
        default: return std::pow(x, p);
    }
}

// --- closed-form one-sided moments -----------------------------------------
// All take a band 0 <= a <= b on |x| and integrate x^p nu(dx) over the
// positive-side (or mirrored negative-side) restriction.

double exp_band_moment(double rate, double scale, double a, double b, int p) {
    if (rate == 0.0 || a >= b) return 0.0;
    const double ea = std::exp(-a / scale);
    const double eb = std::isinf(b) ? 0.0 : std::exp(-b / scale);
    switch (p) {
        case 0: return rate * (ea - eb);
        case 1: {
            const double fa = (a + scale) * ea;
            const double fb = std::isinf(b) ? 0.0 : (b + scale) * eb;
            return rate * (fa - fb);
        }
        case 2: {
            const double fa = (a * a + 2.0 * scale * a + 2.0 * scale * scale) * ea;
            const double fb = std::isinf(b) ? 0.0 : (b * b + 2.0 * scale * b + 2.0 * scale * scale) * eb;
            return rate * (fa - fb);
        }
        default: throw std::invalid_argument("moment order must be 0, 1 or 2");
    }
}

double stable_band_moment(const TruncatedStableMeasure& m, double a, double b, int p) {
    a = std::max(a, m.cutoff);
    b = std::min(b, m.max_size);
    if (a >= b) return 0.0;
    const double expo = static_cast<double>(p) - m.alpha;
    if (std::abs(expo) < 1e-14) return m.scale * std::log(b / a);
    return m.scale * (std::pow(b, expo) - std::pow(a, expo)) / expo;
}

// Splits an interval into nonnegative bands (pos_band on x>0, neg_band on the
// mirrored |x| axis for x<0). Endpoint openness is irrelevant for densities.
struct Bands {
    double pos_lo = 0.0, pos_hi = 0.0;
    double neg_lo = 0.0, neg_hi = 0.0;  // on |x|
};

Bands to_bands(const Interval& iv) {
    Bands b;
    b.pos_lo = std::max(iv.lo, 0.0);
    b.pos_hi = std::max(iv.hi, 0.0);
    b.neg_lo = std::max(-iv.hi, 0.0);
    b.neg_hi = std::max(-iv.lo, 0.0);
    return b;
}

double continuous_interval_moment(const JumpMeasureSpec& spec, const Interval& iv, int p) {
    const Bands b = to_bands(iv);
    const double sign = p % 2 == 0 ? 1.0 : -1.0;
    if (const auto* e = std::get_if<TwoSidedExponentialMeasure>(&spec)) {
        return exp_band_moment(e->rate_plus, e->scale_plus, b.pos_lo, b.pos_hi, p) +
               sign * exp_band_moment(e->rate_minus, e->scale_minus, b.neg_lo, b.neg_hi, p);
    }
    const auto& s = std::get<TruncatedStableMeasure>(spec);
    return stable_band_moment(s, b.pos_lo, b.pos_hi, p) +
           sign * stable_band_moment(s, b.neg_lo, b.neg_hi, p);
}

// Smooth support pieces of the continuous families, used to keep the
// quadrature integrand free of interior kinks.
std::vector<Interval> support_pieces(const JumpMeasureSpec& spec) {
    if (const auto* e = std::get_if<TwoSidedExponentialMeasure>(&spec)) {
        std::vector<Interval> out;
        if (e->rate_minus > 0.0) out.push_back(Interval::open(-kInf, 0.0));
        if (e->rate_plus > 0.0) out.push_back(Interval::open(0.0, kInf));
        return out;
    }
    const auto& s = std::get<TruncatedStableMeasure>(spec);
    return {Interval::closed(-s.max_size, -s.cutoff), Interval::closed(s.cutoff, s.max_size)};
}

double discrete_moment(const FiniteDiscreteMeasure& m, const IntervalUnion& A, int p) {
    double sum = 0.0;
    for (const auto& atom : m.atoms) {
        if (contains(A, atom.size)) sum += atom.rate * ipow(atom.size, p);
    }
    return sum;
}

}  // namespace

void validate(const JumpMeasureSpec& spec) {
    if (const auto* d = std::get_if<FiniteDiscreteMeasure>(&spec)) {
        for (const auto& atom : d->atoms) {
            if (atom.size == 0.0) throw std::invalid_argument("atom size must be nonzero");
            if (!(atom.rate > 0.0) || !std::isfinite(atom.rate)) {
                throw std::invalid_argument("atom rate must be positive and finite");
            }
            if (!std::isfinite(atom.size)) throw std::invalid_argument("atom size must be finite");
        }
    } else if (const auto* e = std::get_if<TwoSidedExponentialMeasure>(&spec)) {
        if (e->rate_plus < 0.0 || e->rate_minus < 0.0) {
            throw std::invalid_argument("exponential rates must be nonnegative");
        }
        if (!(e->scale_plus > 0.0) || !(e->scale_minus > 0.0)) {
            throw std::invalid_argument("exponential scales must be positive");
        }
    } else {
        const auto& s = std::get<TruncatedStableMeasure>(spec);
        if (!(s.alpha > 0.0) || !(s.alpha < 2.0)) {
            throw std::invalid_argument("stable alpha must lie in (0, 2)");
        }
        if (!(s.scale > 0.0)) throw std::invalid_argument("stable scale must be positive");
        if (!(s.cutoff > 0.0) || !(s.cutoff < s.max_size) || !std::isfinite(s.max_size)) {
            throw std::invalid_argument("stable truncation must satisfy 0 < cutoff < max_size < inf");
        }
    }

    // int min(1, x^2) nu(dx) < inf, checked numerically.
    const IntervalUnion inner = {Interval::closed(-1.0, 1.0)};
    const IntervalUnion outer = {Interval::open(-kInf, -1.0), Interval::open(1.0, kInf)};
    const double check = nu_moment_closed(spec, inner, 2) + nu_moment_closed(spec, outer, 0);
    if (!std::isfinite(check)) throw std::invalid_argument("nu fails the integrability condition");
}

double total_mass(const JumpMeasureSpec& spec) {
    const IntervalUnion all = {Interval::open(-kInf, 0.0), Interval::open(0.0, kInf)};
    return nu_moment_closed(spec, all, 0);
}

double density(const JumpMeasureSpec& spec, double x) {
    if (std::holds_alternative<FiniteDiscreteMeasure>(spec)) {
        throw std::invalid_argument("discrete measure has no density");
    }
    if (x == 0.0) return 0.0;
    if (const auto* e = std::get_if<TwoSidedExponentialMeasure>(&spec)) {
        if (x > 0.0) return e->rate_plus / e->scale_plus * std::exp(-x / e->scale_plus);
        return e->rate_minus / e->scale_minus * std::exp(x / e->scale_minus);
    }
    const auto& s = std::get<TruncatedStableMeasure>(spec);
    const double a = std::abs(x);
    if (a < s.cutoff || a > s.max_size) return 0.0;
    return s.scale * std::pow(a, -1.0 - s.alpha);
}

double nu_moment_closed(const JumpMeasureSpec& spec, const IntervalUnion& A, int p) {
    if (const auto* d = std::get_if<FiniteDiscreteMeasure>(&spec)) {
        return discrete_moment(*d, A, p);
    }
    double sum = 0.0;
    for (const auto& iv : A) {
        if (!iv.empty()) sum += continuous_interval_moment(spec, iv, p);
    }
    return sum;
}

double nu_moment_quadrature(const JumpMeasureSpec& spec, const IntervalUnion& A, int p) {
    if (const auto* d = std::get_if<FiniteDiscreteMeasure>(&spec)) {
        return discrete_moment(*d, A, p);
    }
    const auto pieces = support_pieces(spec);
    double sum = 0.0;
    for (const auto& iv : A) {
        if (iv.empty()) continue;
        for (const auto& piece : pieces) {
            const double lo = std::max(iv.lo, piece.lo);
            const double hi = std::min(iv.hi, piece.hi);
            if (lo >= hi) continue;
            sum += integrate([&spec, p](double x) { return ipow(x, p) * density(spec, x); }, lo, hi);
        }
    }
    return sum;
}

double nu_mass(const JumpMeasureSpec& spec, const IntervalUnion& A) {
    if (std::holds_alternative<FiniteDiscreteMeasure>(spec)) {
        return nu_moment_closed(spec, A, 0);
    }
    if (!std::isfinite(total_mass(spec)) && contains(A, 0.0)) {
        throw NonIntegrable("nu(A) diverges: A touches 0 for an infinite-activity measure");
    }
    return nu_moment_quadrature(spec, A, 0);
}

void validate(const LevyTriplet& triplet) {
    if (!(triplet.sigma >= 0.0)) throw std::invalid_argument("sigma must be nonnegative");
    if (!std::isfinite(triplet.gamma)) throw std::invalid_argument("gamma must be finite");
    validate(triplet.nu);
}

SectorPartition SectorPartition::build(const JumpMeasureSpec& spec, int num_sectors,
                                       double eps_min) {
    validate(spec);
    if (num_sectors < 1) throw std::invalid_argument("need at least one sector");
    if (!(eps_min > 0.0) || eps_min >= 1.0) {
        throw std::invalid_argument("eps_min must lie in (0, 1)");
    }

    // Candidate layout: S_1 = {|x| >= 1}, then dyadic shells on |x| down to
    // eps_min; the innermost requested shell is floored at eps_min so the
    // shells cover {eps_min <= |x| < 1} regardless of num_sectors.
    std::vector<Sector> candidates;
    candidates.push_back(Sector{1.0, kInf, /*compensated=*/false, 0, 0, 0});
    double hi = 1.0;
    for (int k = 2; k <= num_sectors && hi > eps_min; ++k) {
        double lo = std::max(hi / 2.0, eps_min);
        if (k == num_sectors) lo = eps_min;
        candidates.push_back(Sector{lo, hi, /*compensated=*/true, 0, 0, 0});
        hi = lo;
    }

    SectorPartition out;
    out.measure_ = spec;
    out.eps_min_ = eps_min;
    for (auto& sector : candidates) {
        const IntervalUnion set = sector.as_intervals();
        sector.mass = nu_moment_closed(spec, set, 0);
        if (sector.mass <= 0.0) continue;  // removed, numbering corrected
        sector.drift = nu_moment_closed(spec, set, 1);
        sector.quad = nu_moment_closed(spec, set, 2);
        out.sectors_.push_back(sector);
    }
    if (out.sectors_.empty()) {
        throw EmptyPartition("jump measure carries no mass on {|x| >= eps_min}");
    }

    const IntervalUnion small = {Interval::open(-eps_min, eps_min)};
    out.small_jump_variance_ = nu_moment_closed(spec, small, 2);
    return out;
}

double SectorPartition::covered_mass() const {
    double sum = 0.0;
    for (const auto& s : sectors_) sum += s.mass;
    return sum;
}

double SectorPartition::compensator_drift() const {
    double sum = 0.0;
    for (const auto& s : sectors_) {
        if (s.compensated) sum += s.drift;
    }
    return sum;
}

int SectorPartition::sector_index_of(double x) const {
    for (std::size_t i = 0; i < sectors_.size(); ++i) {
        if (sectors_[i].contains(x)) return static_cast<int>(i);
    }
    return -1;
}

namespace {

// Quantile along ascending x within one sector band. The negative side is
// traversed first (from -abs_hi up to -abs_lo), then the positive side.
double exp_side_quantile_from_above(double rate, double scale, double hi, double target) {
    // |x| such that nu_side([|x|, hi)) = target, i.e. descending from hi.
    const double ehi = std::isinf(hi) ? 0.0 : std::exp(-hi / scale);
    const double e = target / rate + ehi;
    return -scale * std::log(e);
}

double exp_side_quantile_from_below(double rate, double scale, double lo, double target) {
    const double elo = std::exp(-lo / scale);
    const double e = elo - target / rate;
    return -scale * std::log(e);
}

double stable_side_quantile_from_above(const TruncatedStableMeasure& m, double lo, double hi,
                                       double target) {
    lo = std::max(lo, m.cutoff);
    hi = std::min(hi, m.max_size);
    // nu_side([u, hi]) = c (u^-a - hi^-a)/a = target
    const double u = target * m.alpha / m.scale + std::pow(hi, -m.alpha);
    return std::pow(u, -1.0 / m.alpha);
}

double stable_side_quantile_from_below(const TruncatedStableMeasure& m, double lo, double hi,
                                       double target) {
    lo = std::max(lo, m.cutoff);
    hi = std::min(hi, m.max_size);
    const double u = std::pow(lo, -m.alpha) - target * m.alpha / m.scale;
    return std::pow(u, -1.0 / m.alpha);
}

}  // namespace

double sector_quantile(const JumpMeasureSpec& spec, const Sector& sector, double q) {
    q = std::clamp(q, 0.0, 1.0);
    if (const auto* d = std::get_if<FiniteDiscreteMeasure>(&spec)) {
        std::vector<FiniteDiscreteMeasure::Atom> atoms;
        for (const auto& atom : d->atoms) {
            if (sector.contains(atom.size)) atoms.push_back(atom);
        }
        if (atoms.empty()) throw std::invalid_argument("sector carries no atoms");
        std::sort(atoms.begin(), atoms.end(),
                  [](const auto& a, const auto& b) { return a.size < b.size; });
        const double target = q * sector.mass;
        double cum = 0.0;
        for (const auto& atom : atoms) {
            cum += atom.rate;
            if (target <= cum) return atom.size;
        }
        return atoms.back().size;
    }

    const Interval neg = Interval::open_closed(-sector.abs_hi, -sector.abs_lo);
    const double mass_neg = nu_moment_closed(spec, {neg}, 0);
    double target = q * sector.mass;

    if (target <= mass_neg && mass_neg > 0.0) {
        // Negative side: mass of (-abs_hi, x] equals the side mass of [|x|, abs_hi).
        if (const auto* e = std::get_if<TwoSidedExponentialMeasure>(&spec)) {
            return -exp_side_quantile_from_above(e->rate_minus, e->scale_minus, sector.abs_hi,
                                                 target);
        }
        const auto& s = std::get<TruncatedStableMeasure>(spec);
        return -stable_side_quantile_from_above(s, sector.abs_lo, sector.abs_hi, target);
    }

    const double pos_target = target - mass_neg;
    if (const auto* e = std::get_if<TwoSidedExponentialMeasure>(&spec)) {
        return exp_side_quantile_from_below(e->rate_plus, e->scale_plus, sector.abs_lo, pos_target);
    }
    const auto& s = std::get<TruncatedStableMeasure>(spec);
    return stable_side_quantile_from_below(s, sector.abs_lo, sector.abs_hi, pos_target);
}

double sample_size_in_sector(const JumpMeasureSpec& spec, const Sector& sector, Rng& rng) {
    return sector_quantile(spec, sector, rng.uniform());
}

double sample_supported_size(const SectorPartition& partition, Rng& rng) {
    const double total = partition.covered_mass();
    const double target = rng.uniform() * total;
    double cum = 0.0;
    for (const auto& sector : partition.sectors()) {
        cum += sector.mass;
        if (target <= cum || &sector == &partition.sectors().back()) {
            return sample_size_in_sector(partition.measure(), sector, rng);
        }
    }
    throw std::logic_error("unreachable: empty partition");
}

double control_measure(const ControlMeasure& cm, const Rect& rect) {
    if (rect.t_lo < 0.0 || rect.t_lo > rect.t_hi) {
        throw std::invalid_argument("rectangle time interval must satisfy 0 <= t_lo <= t_hi");
    }
    if (rect.t_hi > cm.horizon + 1e-12) {
        throw HorizonExceeded("rectangle extends past the horizon");
    }
    const double sigma_part =
        rect.contains_zero_size() ? cm.triplet.sigma * cm.triplet.sigma : 0.0;
    const double jump_part = nu_second_moment(cm.triplet.nu, rect.sizes);
    return (rect.t_hi - rect.t_lo) * (sigma_part + jump_part);
}

}  // namespace levysim
