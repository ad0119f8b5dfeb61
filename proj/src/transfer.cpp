#include "levysim/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "levysim/errors.hpp"

namespace levysim {

IncrementSampler::IncrementSampler(LevyTriplet triplet,
                                   std::shared_ptr<const SectorPartition> partition,
                                   double horizon, std::uint64_t seed, double rate_scale,
                                   double brownian_step)
    : triplet_(std::move(triplet)),
      partition_(std::move(partition)),
      horizon_(horizon),
      seed_(seed),
      rate_scale_(rate_scale),
      brownian_step_(brownian_step) {
    if (!(horizon_ > 0.0)) throw std::invalid_argument("horizon must be positive");
    if (!(rate_scale_ > 0.0)) throw std::invalid_argument("rate scale must be positive");
    if (triplet_.sigma > 0.0 && !(brownian_step_ > 0.0)) {
        throw std::invalid_argument("sigma > 0 requires a positive Brownian grid step");
    }
}

JumpList IncrementSampler::sample(std::uint64_t sample_index) const {
    std::vector<std::vector<Jump>> sector_jumps(partition_ ? partition_->size() : 0);
    if (partition_) {
        for (std::size_t k = 0; k < partition_->size(); ++k) {
            // One stream per (sample, sector): a layout the canonical backend
            // does not use.
            Rng rng(derive_seed(seed_ ^ (0x5bd1e995u + k), streams::kIncrementSampler,
                                sample_index));
            const Sector& sector = partition_->sectors()[k];
            const double rate = sector.mass * rate_scale_;
            auto& jumps = sector_jumps[k];
            double t = rng.exponential(rate);
            while (t < horizon_) {
                jumps.push_back(Jump{t, sample_size_in_sector(partition_->measure(), sector, rng)});
                t += rng.exponential(rate);
            }
        }
    }
    JumpList jumps(partition_, horizon_, std::move(sector_jumps));
    if (triplet_.sigma > 0.0) {
        Rng brownian_rng(derive_seed(seed_ ^ 0x7f4a7c15u, streams::kIncrementSampler, sample_index));
        return JumpList(partition_, horizon_, jumps.sector_jumps(),
                        sample_brownian(horizon_, brownian_step_, brownian_rng));
    }
    return jumps;
}

namespace {

TransferRow compare_estimates(const ChaosCoefficientEstimate& a,
                              const ChaosCoefficientEstimate& b) {
    TransferRow row;
    row.order = a.order;
    row.box_ids = a.box_ids;
    row.c1 = a.estimate;
    row.se1 = a.std_error;
    row.c2 = b.estimate;
    row.se2 = b.std_error;
    const double diff = std::abs(a.estimate - b.estimate);
    const double combined = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
    if (combined > 0.0) {
        row.z = diff / combined;
    } else {
        row.z = diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    row.pass = row.z <= 3.0;
    return row;
}

void check_backends(const PathSampler& b1, const PathSampler& b2) {
    if (!(b1.triplet() == b2.triplet()) || b1.horizon() != b2.horizon()) {
        throw BackendMismatch("transfer backends must share triplet and horizon");
    }
}

TransferReport finalize(std::vector<TransferRow> rows) {
    TransferReport report;
    report.rows = std::move(rows);
    for (const auto& row : report.rows) report.pass_count += row.pass ? 1 : 0;
    // 3 sigma with a 1% multiple-testing allowance.
    report.pass = static_cast<double>(report.pass_count) + 1e-9 >=
                  0.99 * static_cast<double>(report.rows.size());
    return report;
}

}  // namespace

TransferReport run_transfer_test(const PathFunctional& f, const PathSampler& backend1,
                                 const PathSampler& backend2, const RectBasis& basis,
                                 std::span<const int> orders, std::uint64_t n_samples,
                                 unsigned n_threads) {
    check_backends(backend1, backend2);

    std::vector<std::vector<int>> tuples;
    for (int order : orders) {
        auto t = coefficient_tuples(basis.boxes.size(), order);
        tuples.insert(tuples.end(), t.begin(), t.end());
    }

    const auto est1 = estimate_chaos_coefficients(f, backend1, basis, tuples, n_samples, n_threads);
    const auto est2 = estimate_chaos_coefficients(f, backend2, basis, tuples, n_samples, n_threads);

    std::vector<TransferRow> rows;
    rows.reserve(est1.size());
    for (std::size_t i = 0; i < est1.size(); ++i) {
        rows.push_back(compare_estimates(est1[i], est2[i]));
    }
    return finalize(std::move(rows));
}

FieldFunctional derivative_family(PathFunctional f) {
    return [f = std::move(f)](const JumpList& omega, const LevyTriplet& triplet, double r,
                              double v) { return psi_derivative(f, omega, triplet, r, v); };
}

FieldTransferReport run_field_transfer_test(const FieldFunctional& family,
                                            const PathSampler& backend1,
                                            const PathSampler& backend2, const RectBasis& basis,
                                            std::span<const FieldPoint> grid,
                                            std::span<const int> orders, std::uint64_t n_samples,
                                            unsigned n_threads) {
    check_backends(backend1, backend2);

    std::vector<std::vector<int>> tuples;
    for (int order : orders) {
        auto t = coefficient_tuples(basis.boxes.size(), order);
        tuples.insert(tuples.end(), t.begin(), t.end());
    }

    FieldTransferReport report;
    for (const auto& point : grid) {
        // Per grid point the field value is an ordinary random variable; the
        // coefficient machinery applies unchanged.
        const SampleFunctional y = [&family, &point](const JumpList& omega,
                                                     const LevyTriplet& triplet) {
            return family(omega, triplet, point.r, point.v);
        };
        const auto est1 = estimate_chaos_coefficients(y, backend1, basis, tuples, n_samples,
                                                      n_threads);
        const auto est2 = estimate_chaos_coefficients(y, backend2, basis, tuples, n_samples,
                                                      n_threads);
        std::vector<TransferRow> rows;
        for (std::size_t i = 0; i < est1.size(); ++i) {
            rows.push_back(compare_estimates(est1[i], est2[i]));
        }
        FieldTransferPoint entry{point, finalize(std::move(rows))};
        report.row_count += entry.report.rows.size();
        report.pass_count += entry.report.pass_count;
        report.points.push_back(std::move(entry));
    }
    report.pass = static_cast<double>(report.pass_count) + 1e-9 >=
                  0.99 * static_cast<double>(report.row_count);
    return report;
}

}  // namespace levysim
