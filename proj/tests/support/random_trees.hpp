#pragma once

// Test-only generators: random scalar expressions, cylindrical functionals
// and path-functional trees with controlled magnitudes, so that pathwise
// identities can be asserted at absolute tolerances of 1e-12 / 1e-10.

#include <vector>

#include "levysim/functionals.hpp"
#include "levysim/rng.hpp"

namespace levysim::testing {

/// Random smooth scalar expression over `arity` arguments, depth-limited.
/// At most `mul_budget` multiplications along any root-to-leaf path keeps
/// values and Lipschitz constants O(10).
inline ScalarExpr random_scalar_expr(Rng& rng, int arity, int depth, int mul_budget = 1) {
    const double roll = rng.uniform();
    if (depth <= 0 || roll < 0.25) {
        if (rng.uniform() < 0.5 && arity > 0) {
            return ScalarExpr::arg(static_cast<int>(rng.uniform() * arity));
        }
        return ScalarExpr::constant(rng.uniform(-2.0, 2.0));
    }
    if (roll < 0.45) {
        return ScalarExpr::add(random_scalar_expr(rng, arity, depth - 1, mul_budget),
                               random_scalar_expr(rng, arity, depth - 1, mul_budget));
    }
    if (roll < 0.6) {
        return ScalarExpr::sub(random_scalar_expr(rng, arity, depth - 1, mul_budget),
                               random_scalar_expr(rng, arity, depth - 1, mul_budget));
    }
    if (roll < 0.72 && mul_budget > 0) {
        return ScalarExpr::mul(random_scalar_expr(rng, arity, depth - 1, mul_budget - 1),
                               random_scalar_expr(rng, arity, depth - 1, mul_budget - 1));
    }
    if (roll < 0.8) return ScalarExpr::sin(random_scalar_expr(rng, arity, depth - 1, mul_budget));
    if (roll < 0.88) return ScalarExpr::tanh(random_scalar_expr(rng, arity, depth - 1, mul_budget));
    if (roll < 0.94) {
        // Scaled bump keeps the cutoff active for |x| up to ~8.
        return ScalarExpr::bump(ScalarExpr::mul(
            ScalarExpr::constant(0.125), random_scalar_expr(rng, arity, depth - 1, mul_budget)));
    }
    return ScalarExpr::cos(random_scalar_expr(rng, arity, depth - 1, mul_budget));
}

/// Random cylindrical functional with up to four coordinate times in (0, T].
inline PathFunctional random_cylindrical(Rng& rng, double horizon, int max_depth = 4) {
    const int m = 1 + static_cast<int>(rng.uniform() * 4);
    std::vector<double> times(static_cast<std::size_t>(m));
    for (auto& t : times) t = rng.uniform(0.0, horizon);
    return PathFunctional(
        Functional::cylindrical(random_scalar_expr(rng, m, max_depth), std::move(times)));
}

namespace detail {

inline Functional random_tree(Rng& rng, double horizon, int depth, int mul_budget,
                              bool allow_param) {
    const double roll = rng.uniform();
    if (depth <= 0 || roll < 0.3) {
        const double leaf = rng.uniform();
        if (allow_param && leaf < 0.35) return Functional::param();
        if (leaf < 0.6) return Functional::coordinate(rng.uniform(0.0, horizon));
        return Functional::constant(rng.uniform(-2.0, 2.0));
    }
    if (roll < 0.5) {
        return Functional::add(random_tree(rng, horizon, depth - 1, mul_budget, allow_param),
                               random_tree(rng, horizon, depth - 1, mul_budget, allow_param));
    }
    if (roll < 0.62) {
        return Functional::sub(random_tree(rng, horizon, depth - 1, mul_budget, allow_param),
                               random_tree(rng, horizon, depth - 1, mul_budget, allow_param));
    }
    if (roll < 0.74 && mul_budget > 0) {
        return Functional::mul(
            random_tree(rng, horizon, depth - 1, mul_budget - 1, allow_param),
            random_tree(rng, horizon, depth - 1, mul_budget - 1, allow_param));
    }
    if (roll < 0.84) {
        return Functional::compose(random_scalar_expr(rng, 1, 2, 1),
                                   random_tree(rng, horizon, depth - 1, mul_budget, allow_param));
    }
    if (roll < 0.92) {
        const int m = 1 + static_cast<int>(rng.uniform() * 3);
        std::vector<double> times(static_cast<std::size_t>(m));
        for (auto& t : times) t = rng.uniform(0.0, horizon);
        return Functional::cylindrical(random_scalar_expr(rng, m, 2, 1), std::move(times));
    }
    if (roll < 0.96) return Functional::time_integral(rng.uniform(0.0, horizon));
    return Functional::running_sup(rng.uniform(0.0, horizon));
}

}  // namespace detail

inline PathFunctional random_path_functional(Rng& rng, double horizon, int max_depth = 4,
                                             int mul_budget = 1) {
    return PathFunctional(detail::random_tree(rng, horizon, max_depth, mul_budget, false));
}

/// Random parametric functional guaranteed to contain the free slot.
inline ParametricFunctional random_parametric_functional(Rng& rng, double horizon,
                                                         int max_depth = 4, int mul_budget = 1) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        Functional tree = detail::random_tree(rng, horizon, max_depth, mul_budget, true);
        if (tree.has_param()) return ParametricFunctional(std::move(tree));
    }
    // Force the slot in: G = F0 + param.
    return ParametricFunctional(
        Functional::add(detail::random_tree(rng, horizon, max_depth - 1, mul_budget, false),
                        Functional::param()));
}

}  // namespace levysim::testing
