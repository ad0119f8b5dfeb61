#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "levysim/mc.hpp"
#include "levysim/rng.hpp"

using namespace levysim;

TEST_CASE("derive_seed separates streams and indices") {
    const auto s = derive_seed(42, streams::kCanonicalSampler, 0);
    CHECK(s == derive_seed(42, streams::kCanonicalSampler, 0));
    CHECK(s != derive_seed(42, streams::kCanonicalSampler, 1));
    CHECK(s != derive_seed(42, streams::kIncrementSampler, 0));
    CHECK(s != derive_seed(43, streams::kCanonicalSampler, 0));
}

TEST_CASE("Rng is deterministic per seed") {
    Rng a(123), b(123), c(124);
    bool all_equal = true;
    bool any_diff_c = false;
    for (int i = 0; i < 100; ++i) {
        const double x = a.uniform();
        all_equal = all_equal && x == b.uniform();
        any_diff_c = any_diff_c || x != c.uniform();
    }
    CHECK(all_equal);
    CHECK(any_diff_c);
}

TEST_CASE("uniform lands in [0,1) with the right mean") {
    Rng rng(7);
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    const double mean = sum / n;
    const double se = 1.0 / std::sqrt(12.0 * n);
    CHECK(std::abs(mean - 0.5) < 3.0 * se);
}

TEST_CASE("accumulator merge matches sequential accumulation") {
    Rng rng(5);
    Accumulator whole, left, right;
    std::vector<double> xs(2000);
    for (auto& x : xs) x = rng.normal(1.0, 2.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        whole.add(xs[i]);
        (i < xs.size() / 2 ? left : right).add(xs[i]);
    }
    left.merge(right);
    CHECK(left.count == whole.count);
    CHECK(left.mean == doctest::Approx(whole.mean).epsilon(1e-13));
    CHECK(left.variance() == doctest::Approx(whole.variance()).epsilon(1e-12));
}

TEST_CASE("monte carlo results do not depend on the thread count") {
    auto fn = [](std::uint64_t, Rng& rng, std::span<double> out) {
        out[0] = rng.uniform();
        out[1] = rng.normal();
    };
    const auto one = run_monte_carlo(20000, 2, 99, 17, 1, fn);
    const auto two = run_monte_carlo(20000, 2, 99, 17, 2, fn);
    const auto four = run_monte_carlo(20000, 2, 99, 17, 4, fn);
    for (std::size_t j = 0; j < 2; ++j) {
        CHECK(one[j].mean == two[j].mean);
        CHECK(one[j].m2 == two[j].m2);
        CHECK(two[j].mean == four[j].mean);
        CHECK(two[j].m2 == four[j].m2);
        CHECK(one[j].count == 20000);
    }
}
