#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "levysim/errors.hpp"
#include "levysim/levy_model.hpp"
#include "levysim/quadrature.hpp"
#include "levysim/rng.hpp"

using namespace levysim;

namespace {

JumpMeasureSpec unit_atom_rate2() {
    return FiniteDiscreteMeasure{{{1.0, 2.0}}};
}

JumpMeasureSpec two_atoms() {
    return FiniteDiscreteMeasure{{{1.0, 2.0}, {-0.5, 3.0}}};
}

JumpMeasureSpec exp_measure() {
    return TwoSidedExponentialMeasure{1.5, 0.8, 0.7, 1.2};
}

JumpMeasureSpec stable_measure() {
    return TruncatedStableMeasure{0.5, 1.0, 0.01, 100.0};
}

}  // namespace

TEST_CASE("nu_mass on atoms") {
    const auto spec = unit_atom_rate2();
    CHECK(nu_mass(spec, {Interval::open_closed(0.5, 1.5)}) == 2.0);
    CHECK(nu_mass(spec, {Interval::open_closed(2.0, 3.0)}) == 0.0);
}

TEST_CASE("nu_mass of the truncated stable family against the antiderivative") {
    const auto spec = stable_measure();
    // int_{0.01}^{1} x^{-1.5} dx = (0.01^{-0.5} - 1^{-0.5}) / 0.5 = 18.
    const double expected = (std::pow(0.01, -0.5) - 1.0) / 0.5;
    CHECK(expected == doctest::Approx(18.0).epsilon(1e-14));
    const double via_quadrature = nu_mass(spec, {Interval::closed(0.01, 1.0)});
    CHECK(via_quadrature == doctest::Approx(expected).epsilon(1e-9));
    CHECK(nu_mass_closed(spec, {Interval::closed(0.01, 1.0)}) ==
          doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("closed-form moments agree with quadrature for continuous families") {
    Rng rng(11);
    for (const auto& spec : {exp_measure(), stable_measure()}) {
        for (int i = 0; i < 20; ++i) {
            double a = rng.uniform(-4.0, 4.0);
            double b = rng.uniform(-4.0, 4.0);
            if (a > b) std::swap(a, b);
            const IntervalUnion set = {Interval::open_closed(a, b)};
            for (int p = 0; p <= 2; ++p) {
                const double closed = nu_moment_closed(spec, set, p);
                const double quad = nu_moment_quadrature(spec, set, p);
                CHECK(quad == doctest::Approx(closed).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("control measure over rectangles") {
    const ControlMeasure cm{LevyTriplet{0.0, 0.0, unit_atom_rate2()}, 2.0};
    CHECK(control_measure(cm, make_rect(0.0, 1.0, 0.5, 1.5)) == doctest::Approx(2.0));
    CHECK(control_measure(cm, make_rect(0.0, 1.0, 2.0, 3.0)) == 0.0);

    const ControlMeasure cm2{LevyTriplet{0.0, 0.0, two_atoms()}, 2.0};
    const Rect rect{0.0, 2.0, {Interval::closed(-1.0, -0.1)}};
    CHECK(control_measure(cm2, rect) == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("control measure includes the Brownian atom at zero") {
    const ControlMeasure cm{LevyTriplet{0.0, 0.5, unit_atom_rate2()}, 1.0};
    const Rect with_zero{0.0, 1.0, {Interval::closed(-0.1, 0.1)}};
    CHECK(control_measure(cm, with_zero) == doctest::Approx(0.25));
    const Rect without_zero{0.0, 1.0, {Interval::open_closed(0.5, 1.5)}};
    CHECK(control_measure(cm, without_zero) == doctest::Approx(2.0));
}

TEST_CASE("control measure is additive over refinements") {
    Rng rng(3);
    const ControlMeasure cm{LevyTriplet{0.0, 0.3, exp_measure()}, 1.0};
    for (int trial = 0; trial < 50; ++trial) {
        double t0 = rng.uniform(0.0, 1.0), t1 = rng.uniform(0.0, 1.0);
        if (t0 > t1) std::swap(t0, t1);
        double x0 = rng.uniform(-3.0, 3.0), x1 = rng.uniform(-3.0, 3.0);
        if (x0 > x1) std::swap(x0, x1);
        const Rect whole{t0, t1, {Interval::open_closed(x0, x1)}};

        const double tm = rng.uniform(t0, t1);
        const double xm = rng.uniform(x0, x1);
        const Rect q1{t0, tm, {Interval::open_closed(x0, xm)}};
        const Rect q2{t0, tm, {Interval::open_closed(xm, x1)}};
        const Rect q3{tm, t1, {Interval::open_closed(x0, xm)}};
        const Rect q4{tm, t1, {Interval::open_closed(xm, x1)}};

        const double total = control_measure(cm, whole);
        const double parts = control_measure(cm, q1) + control_measure(cm, q2) +
                             control_measure(cm, q3) + control_measure(cm, q4);
        CHECK(parts == doctest::Approx(total).epsilon(1e-12));
    }
}

TEST_CASE("control measure rejects rectangles past the horizon") {
    const ControlMeasure cm{LevyTriplet{0.0, 0.0, unit_atom_rate2()}, 1.0};
    CHECK_THROWS_AS(control_measure(cm, make_rect(0.0, 1.5, 0.5, 1.5)), HorizonExceeded);
}

TEST_CASE("build_partition keeps a single surviving sector for one big atom") {
    const auto partition = SectorPartition::build(FiniteDiscreteMeasure{{{1.5, 2.0}}}, 3);
    REQUIRE(partition.size() == 1);
    const Sector& s = partition.sectors()[0];
    CHECK_FALSE(s.compensated);
    CHECK(s.mass == doctest::Approx(2.0));
    CHECK(s.drift == doctest::Approx(3.0));
    CHECK(s.quad == doctest::Approx(4.5));
}

TEST_CASE("build_partition locates shells for small atoms") {
    const auto partition =
        SectorPartition::build(FiniteDiscreteMeasure{{{0.3, 1.0}, {2.0, 1.0}}}, 4);
    REQUIRE(partition.size() == 2);
    CHECK_FALSE(partition.sectors()[0].compensated);
    CHECK(partition.sectors()[0].mass == doctest::Approx(1.0));
    CHECK(partition.sectors()[1].compensated);
    CHECK(partition.sectors()[1].mass == doctest::Approx(1.0));
    // 0.3 lives in the shell [0.25, 0.5).
    CHECK(partition.sectors()[1].abs_lo == doctest::Approx(0.25));
    CHECK(partition.sectors()[1].abs_hi == doctest::Approx(0.5));
    CHECK(partition.sector_index_of(0.3) == 1);
    CHECK(partition.sector_index_of(2.0) == 0);
    CHECK(partition.sector_index_of(0.7) == -1);  // empty shell was removed
}

TEST_CASE("partition of unity: sector masses sum to the full mass") {
    const auto spec = stable_measure();
    const auto partition = SectorPartition::build(spec, 8);
    const IntervalUnion support = {Interval::closed(-100.0, -0.001),
                                   Interval::closed(0.001, 100.0)};
    const double total = nu_mass(spec, support);
    CHECK(partition.covered_mass() == doctest::Approx(total).epsilon(1e-10));

    double quad_sum = 0.0;
    for (const auto& s : partition.sectors()) quad_sum += s.quad;
    CHECK(quad_sum == doctest::Approx(nu_second_moment(spec, support)).epsilon(1e-10));
}

TEST_CASE("compensator drifts obey the size bound") {
    const auto partition = SectorPartition::build(exp_measure(), 6);
    for (const auto& s : partition.sectors()) {
        if (!s.compensated) continue;
        CHECK(std::abs(s.drift) <= s.abs_hi * s.mass + 1e-12);
    }
}

TEST_CASE("empty measures yield EmptyPartition") {
    CHECK_THROWS_AS(SectorPartition::build(FiniteDiscreteMeasure{}, 4), EmptyPartition);
    // All mass below the truncation threshold.
    CHECK_THROWS_AS(SectorPartition::build(FiniteDiscreteMeasure{{{1e-4, 1.0}}}, 4, 1e-3),
                    EmptyPartition);
}

TEST_CASE("small-jump variance reports the discarded mass") {
    const auto partition = SectorPartition::build(exp_measure(), 8, 1e-2);
    const IntervalUnion small = {Interval::open(-1e-2, 1e-2)};
    CHECK(partition.small_jump_variance() ==
          doctest::Approx(nu_second_moment(exp_measure(), small)).epsilon(1e-12));
    CHECK(partition.small_jump_variance() > 0.0);
}

TEST_CASE("validate rejects malformed measures") {
    CHECK_THROWS_AS(validate(JumpMeasureSpec(FiniteDiscreteMeasure{{{0.0, 1.0}}})),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(JumpMeasureSpec(FiniteDiscreteMeasure{{{1.0, -1.0}}})),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(JumpMeasureSpec(TruncatedStableMeasure{2.5, 1.0, 0.01, 10.0})),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(JumpMeasureSpec(TwoSidedExponentialMeasure{1.0, -1.0, 1.0, 1.0})),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(LevyTriplet{0.0, -0.1, unit_atom_rate2()}), std::invalid_argument);
    CHECK_NOTHROW(validate(LevyTriplet{0.5, 0.2, exp_measure()}));
}

TEST_CASE("sector quantiles invert the sector law") {
    for (const auto& spec : {exp_measure(), stable_measure()}) {
        const auto partition = SectorPartition::build(spec, 5);
        for (const auto& sector : partition.sectors()) {
            double prev = -std::numeric_limits<double>::infinity();
            for (double q : {0.05, 0.25, 0.5, 0.75, 0.95}) {
                const double x = sector_quantile(spec, sector, q);
                CHECK(sector.contains(x));
                CHECK(x >= prev);  // monotone along ascending x
                prev = x;
                // CDF inversion: nu(sector cap (-inf, x]) / mass == q.
                double mass_below = 0.0;
                if (x < 0.0) {
                    mass_below = nu_mass_closed(
                        spec, {Interval::open_closed(-sector.abs_hi, x)});
                } else {
                    mass_below =
                        nu_mass_closed(spec, {Interval::open_closed(-sector.abs_hi, -sector.abs_lo),
                                              Interval::closed_open(sector.abs_lo, x)});
                }
                CHECK(mass_below / sector.mass == doctest::Approx(q).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("sampled sector sizes stay in the sector and match the law") {
    const auto spec = exp_measure();
    const auto partition = SectorPartition::build(spec, 4);
    Rng rng(17);
    const Sector& sector = partition.sectors()[1];
    const double median = sector_quantile(spec, sector, 0.5);
    int below = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double x = sample_size_in_sector(spec, sector, rng);
        REQUIRE(sector.contains(x));
        if (x <= median) ++below;
    }
    const double frac = static_cast<double>(below) / n;
    CHECK(std::abs(frac - 0.5) < 3.0 * std::sqrt(0.25 / n));
}

TEST_CASE("adaptive quadrature handles semi-infinite ranges") {
    const double inf = std::numeric_limits<double>::infinity();
    const double got = integrate([](double x) { return std::exp(-x); }, 0.0, inf);
    CHECK(got == doctest::Approx(1.0).epsilon(1e-10));
    const double gauss = integrate([](double x) { return std::exp(-x * x); }, -inf, inf);
    CHECK(gauss == doctest::Approx(std::sqrt(std::acos(-1.0))).epsilon(1e-10));
}
