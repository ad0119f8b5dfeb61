#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "levysim/chaos.hpp"
#include "levysim/functionals.hpp"
#include "levysim/mc.hpp"
#include "levysim/sampler.hpp"

namespace levysim {

/// Canonical-space increment quotient Psi:
///   (F(omega_{r,v}) - F(omega)) / v,
/// i.e. [F((X_t + v 1_{[0,t]}(r))_t) - F(X)] / v realized through add_jump.
/// Requires a pure-jump triplet (sigma = 0) and v != 0.
double psi_derivative(const PathFunctional& f, const JumpList& omega, const LevyTriplet& triplet,
                      double r, double v);

/// Cylindrical shift quotient Phi: shifts the arguments of a cylindrical
/// functional by v 1_{[0,t_i]}(r) and differences, never touching omega.
/// Throws NotCylindrical unless the functional is a single cylindrical node.
double phi_derivative(const PathFunctional& f, const JumpList& omega, const LevyTriplet& triplet,
                      double r, double v);

struct FieldPoint {
    double r = 0.0;
    double v = 0.0;
};

/// Monte Carlo view of the field (r, v) -> D_{r,v}F on a finite grid.
struct DerivativeField {
    std::vector<FieldPoint> grid;
    std::vector<Accumulator> stats;  // one per grid point
};

/// Per grid point, mean and standard error of D_{r,v}F over n_samples
/// independent canonical paths. Deterministic per seed.
DerivativeField derivative_field(const PathFunctional& f, const LevyTriplet& triplet,
                                 std::shared_ptr<const SectorPartition> partition, double horizon,
                                 std::span<const FieldPoint> grid, std::uint64_t n_samples,
                                 std::uint64_t seed, unsigned n_threads = 0);

/// Default field grid: uniform midpoint times crossed with nu-supported jump
/// sizes (atoms for the discrete family, sector medians otherwise).
std::vector<FieldPoint> default_field_grid(const SectorPartition& partition, double horizon,
                                           int n_times);

struct ChainRuleRow {
    std::uint64_t sample_id = 0;
    double r = 0.0;
    double v = 0.0;
    double lhs = 0.0;
    double rhs_term1 = 0.0;
    double rhs_term2 = 0.0;
    double abs_err = 0.0;
};

struct ChainRuleReport {
    std::vector<ChainRuleRow> rows;
    double max_abs_err = 0.0;
};

/// One chain-rule sample: with Y = F(X) and y* = Y + v D_{r,v}Y,
///   lhs  = D_{r,v} G(X, F(X))
///   rhs1 = [G(X(omega_{r,v}), y*) - G(X(omega), y*)] / v
///   rhs2 = [G(X(omega), y*) - G(X(omega), Y)] / v.
/// Throws ToleranceExceeded (carrying omega, r, v) if |lhs - rhs1 - rhs2|
/// exceeds `tolerance`.
ChainRuleRow chain_rule_check(const ParametricFunctional& g, const PathFunctional& f,
                              const JumpList& omega, const LevyTriplet& triplet, double r,
                              double v, double tolerance = 1e-10);

/// Runs chain_rule_check over randomly drawn (omega, r, v).
ChainRuleReport chain_rule_suite(const ParametricFunctional& g, const PathFunctional& f,
                                 const LevyTriplet& triplet,
                                 std::shared_ptr<const SectorPartition> partition, double horizon,
                                 std::uint64_t n_samples, std::uint64_t seed,
                                 double tolerance = 1e-10);

/// Truncated D_{1,2} norm from box-averaged coefficient estimates:
///   ||Y||^2 = sum_n (n+1)! ||f_n||^2,
/// where each sorted tuple contributes its block n! times (one per ordered
/// arrangement; diagonal blocks are not covered by disjoint-box estimates).
struct D12Estimate {
    double norm_sq = 0.0;
    double std_error = 0.0;
};

D12Estimate d12_norm_estimate(std::span<const ChaosCoefficientEstimate> coefficients,
                              const RectBasis& basis);

}  // namespace levysim
