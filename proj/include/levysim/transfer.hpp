#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "levysim/chaos.hpp"
#include "levysim/malliavin.hpp"
#include "levysim/sampler.hpp"

namespace levysim {

/// Second, independently coded backend: per sector, paths are produced by
/// exponential inter-arrival times (size drawn immediately after each
/// arrival) on a disjoint RNG stream layout. Carries the same triplet as the
/// canonical backend, nothing else in common.
///
/// `rate_scale` deliberately corrupts the sector intensities; it exists for
/// the negative-control test and must be 1.0 for honest runs.
class IncrementSampler final : public PathSampler {
  public:
    IncrementSampler(LevyTriplet triplet, std::shared_ptr<const SectorPartition> partition,
                     double horizon, std::uint64_t seed, double rate_scale = 1.0,
                     double brownian_step = 0.0);

    JumpList sample(std::uint64_t sample_index) const override;
    const LevyTriplet& triplet() const override { return triplet_; }
    double horizon() const override { return horizon_; }
    const std::shared_ptr<const SectorPartition>& partition() const override { return partition_; }

  private:
    LevyTriplet triplet_;
    std::shared_ptr<const SectorPartition> partition_;
    double horizon_;
    std::uint64_t seed_;
    double rate_scale_;
    double brownian_step_;
};

struct TransferRow {
    int order = 0;
    std::vector<int> box_ids;
    double c1 = 0.0, se1 = 0.0;
    double c2 = 0.0, se2 = 0.0;
    double z = 0.0;
    bool pass = false;
};

struct TransferReport {
    std::vector<TransferRow> rows;
    std::size_t pass_count = 0;
    bool pass = false;  // at least 99% of rows within 3 sigma
};

/// Estimates the chaos coefficients of F on both backends for every tuple of
/// the requested orders and compares them at 3 combined standard errors.
/// Throws BackendMismatch when the backends disagree on the triplet.
TransferReport run_transfer_test(const PathFunctional& f, const PathSampler& backend1,
                                 const PathSampler& backend2, const RectBasis& basis,
                                 std::span<const int> orders, std::uint64_t n_samples,
                                 unsigned n_threads = 0);

/// An (r, v)-indexed family of path functionals, evaluated pathwise.
using FieldFunctional =
    std::function<double(const JumpList&, const LevyTriplet&, double r, double v)>;

/// The derivative field of F as a functional family F_{r,v}.
FieldFunctional derivative_family(PathFunctional f);

struct FieldTransferPoint {
    FieldPoint point;
    TransferReport report;
};

struct FieldTransferReport {
    std::vector<FieldTransferPoint> points;
    std::size_t row_count = 0;
    std::size_t pass_count = 0;
    bool pass = false;
};

/// Runs a transfer report per grid point for the field family; empty grids
/// pass vacuously.
FieldTransferReport run_field_transfer_test(const FieldFunctional& family,
                                            const PathSampler& backend1,
                                            const PathSampler& backend2, const RectBasis& basis,
                                            std::span<const FieldPoint> grid,
                                            std::span<const int> orders, std::uint64_t n_samples,
                                            unsigned n_threads = 0);

}  // namespace levysim
