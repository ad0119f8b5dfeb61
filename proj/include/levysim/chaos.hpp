#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "levysim/functionals.hpp"
#include "levysim/intervals.hpp"
#include "levysim/levy_model.hpp"
#include "levysim/mc.hpp"
#include "levysim/sampler.hpp"

namespace levysim {

/// A list of time-size rectangles with cached control-measure values and a
/// pairwise-disjointness flag.
struct RectBasis {
    std::vector<Rect> boxes;
    std::vector<double> measures;  // m(B_i)
    bool pairwise_disjoint = false;

    static RectBasis make(std::vector<Rect> boxes, const ControlMeasure& cm);
};

/// M(B): compensated jump sum over B plus the Brownian part when B's size
/// component contains the atom x = 0 and sigma > 0. Pathwise deterministic;
/// E M(B) = 0 and E M(B)^2 = m(B) hold in distribution.
double random_measure(const JumpList& omega, const LevyTriplet& triplet, const Rect& box);

/// I_n(1_{B_1 x ... x B_n}) realized pathwise as the product of M(B_j) over a
/// pairwise disjoint box tuple. Throws OverlappingBoxes otherwise.
double multiple_integral(const JumpList& omega, const LevyTriplet& triplet,
                         std::span<const Rect> boxes);

/// Monte Carlo estimate of the box-average of the order-n chaos integrand:
///   c = E[F(X) prod_j M(B_j)] / (n! prod_j m(B_j)).
/// The box tuple is canonicalized (sorted ids), making the estimate exactly
/// permutation invariant.
struct ChaosCoefficientEstimate {
    int order = 0;
    std::vector<int> box_ids;  // sorted indices into the basis
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t n_samples = 0;
};

/// Estimates one coefficient using the given backend; `box_ids` index into
/// `basis`. Order 0 (empty tuple) returns the mean of F.
ChaosCoefficientEstimate estimate_chaos_coefficient(const PathFunctional& f,
                                                    const PathSampler& sampler,
                                                    const RectBasis& basis,
                                                    std::vector<int> box_ids,
                                                    std::uint64_t n_samples,
                                                    unsigned n_threads = 0);

/// Convenience: canonical backend from (triplet, partition, horizon, seed).
ChaosCoefficientEstimate estimate_chaos_coefficient(const PathFunctional& f,
                                                    const RectBasis& basis,
                                                    std::vector<int> box_ids,
                                                    const LevyTriplet& triplet,
                                                    std::shared_ptr<const SectorPartition> partition,
                                                    double horizon, std::uint64_t n_samples,
                                                    std::uint64_t seed, unsigned n_threads = 0);

/// Estimates several coefficients in one pass over the samples.
std::vector<ChaosCoefficientEstimate> estimate_chaos_coefficients(
    const PathFunctional& f, const PathSampler& sampler, const RectBasis& basis,
    const std::vector<std::vector<int>>& tuples, std::uint64_t n_samples,
    unsigned n_threads = 0);

/// Core estimator over an arbitrary pathwise random variable Y(omega); the
/// PathFunctional overloads delegate here.
using SampleFunctional = std::function<double(const JumpList&, const LevyTriplet&)>;
std::vector<ChaosCoefficientEstimate> estimate_chaos_coefficients(
    const SampleFunctional& y, const PathSampler& sampler, const RectBasis& basis,
    const std::vector<std::vector<int>>& tuples, std::uint64_t n_samples,
    unsigned n_threads = 0);

/// All sorted tuples of distinct box ids with the given order (0 -> the empty
/// tuple, 1 -> each box, 2 -> each unordered pair, ...).
std::vector<std::vector<int>> coefficient_tuples(std::size_t n_boxes, int order);

}  // namespace levysim
