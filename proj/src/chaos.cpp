#include "levysim/chaos.hpp"

#include <algorithm>
#include <cmath>

#include "levysim/errors.hpp"

namespace levysim {

RectBasis RectBasis::make(std::vector<Rect> boxes, const ControlMeasure& cm) {
    RectBasis basis;
    basis.boxes = std::move(boxes);
    basis.measures.reserve(basis.boxes.size());
    for (const auto& box : basis.boxes) {
        basis.measures.push_back(control_measure(cm, box));
    }
    basis.pairwise_disjoint = true;
    for (std::size_t i = 0; i < basis.boxes.size() && basis.pairwise_disjoint; ++i) {
        for (std::size_t j = i + 1; j < basis.boxes.size(); ++j) {
            if (basis.boxes[i].overlaps(basis.boxes[j])) {
                basis.pairwise_disjoint = false;
                break;
            }
        }
    }
    return basis;
}

double random_measure(const JumpList& omega, const LevyTriplet& triplet, const Rect& box) {
    if (box.t_lo < 0.0 || box.t_hi > omega.horizon() + 1e-12) {
        throw HorizonExceeded("rectangle extends past the path horizon");
    }
    double sum = 0.0;
    for (const auto& jumps : omega.sector_jumps()) {
        for (const auto& j : jumps) {
            if (box.contains(j.time, j.size)) sum += j.size;
        }
    }
    // Compensator of the jump part over the full measure nu.
    sum -= (box.t_hi - box.t_lo) * nu_first_moment(triplet.nu, box.sizes);

    if (triplet.sigma > 0.0 && omega.brownian() && box.contains_zero_size()) {
        sum += triplet.sigma * (omega.brownian()->value(box.t_hi) - omega.brownian()->value(box.t_lo));
    }
    return sum;
}

double multiple_integral(const JumpList& omega, const LevyTriplet& triplet,
                         std::span<const Rect> boxes) {
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        for (std::size_t j = i + 1; j < boxes.size(); ++j) {
            if (boxes[i].overlaps(boxes[j])) {
                throw OverlappingBoxes("multiple integral requires pairwise disjoint boxes");
            }
        }
    }
    double prod = 1.0;
    for (const auto& box : boxes) prod *= random_measure(omega, triplet, box);
    return prod;
}

std::vector<std::vector<int>> coefficient_tuples(std::size_t n_boxes, int order) {
    std::vector<std::vector<int>> out;
    if (order == 0) {
        out.push_back({});
        return out;
    }
    // Sorted tuples of distinct ids: enumerate combinations.
    std::vector<int> tuple(static_cast<std::size_t>(order));
    const int n = static_cast<int>(n_boxes);
    auto recurse = [&](auto&& self, int start, int depth) -> void {
        if (depth == order) {
            out.push_back(tuple);
            return;
        }
        for (int i = start; i < n; ++i) {
            tuple[static_cast<std::size_t>(depth)] = i;
            self(self, i + 1, depth + 1);
        }
    };
    recurse(recurse, 0, 0);
    return out;
}

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

void validate_tuple(const RectBasis& basis, const std::vector<int>& ids) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const int id = ids[i];
        if (id < 0 || static_cast<std::size_t>(id) >= basis.boxes.size()) {
            throw std::invalid_argument("box id out of range");
        }
        if (basis.measures[static_cast<std::size_t>(id)] <= 0.0) {
            throw ZeroMeasureBox("coefficient estimate over a box with m(B) = 0");
        }
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            if (basis.boxes[static_cast<std::size_t>(id)].overlaps(
                    basis.boxes[static_cast<std::size_t>(ids[j])])) {
                throw OverlappingBoxes("coefficient box tuple must be pairwise disjoint");
            }
        }
    }
}

}  // namespace

std::vector<ChaosCoefficientEstimate> estimate_chaos_coefficients(
    const SampleFunctional& y_of, const PathSampler& sampler, const RectBasis& basis,
    const std::vector<std::vector<int>>& tuples, std::uint64_t n_samples, unsigned n_threads) {
    std::vector<std::vector<int>> canonical(tuples);
    for (auto& ids : canonical) {
        std::sort(ids.begin(), ids.end());
        validate_tuple(basis, ids);
    }

    const LevyTriplet& triplet = sampler.triplet();
    const std::size_t n_out = canonical.size();
    auto accs = run_monte_carlo(
        n_samples, n_out, /*master_seed=*/0, streams::kChaosEstimator, n_threads,
        [&](std::uint64_t i, Rng&, std::span<double> out) {
            // Randomness comes entirely from the backend's own streams.
            const JumpList omega = sampler.sample(i);
            const double y = y_of(omega, triplet);
            std::vector<double> m_values(basis.boxes.size());
            for (std::size_t b = 0; b < basis.boxes.size(); ++b) {
                m_values[b] = random_measure(omega, triplet, basis.boxes[b]);
            }
            for (std::size_t t = 0; t < n_out; ++t) {
                double prod = y;
                for (int id : canonical[t]) prod *= m_values[static_cast<std::size_t>(id)];
                out[t] = prod;
            }
        });

    std::vector<ChaosCoefficientEstimate> out;
    out.reserve(n_out);
    for (std::size_t t = 0; t < n_out; ++t) {
        const auto& ids = canonical[t];
        const int order = static_cast<int>(ids.size());
        double denom = factorial(order);
        for (int id : ids) denom *= basis.measures[static_cast<std::size_t>(id)];
        ChaosCoefficientEstimate est;
        est.order = order;
        est.box_ids = ids;
        est.estimate = accs[t].mean / denom;
        est.std_error = accs[t].stderr_of_mean() / denom;
        est.n_samples = n_samples;
        out.push_back(std::move(est));
    }
    return out;
}

std::vector<ChaosCoefficientEstimate> estimate_chaos_coefficients(
    const PathFunctional& f, const PathSampler& sampler, const RectBasis& basis,
    const std::vector<std::vector<int>>& tuples, std::uint64_t n_samples, unsigned n_threads) {
    return estimate_chaos_coefficients(
        [&f](const JumpList& omega, const LevyTriplet& triplet) {
            return eval_functional(f, omega, triplet);
        },
        sampler, basis, tuples, n_samples, n_threads);
}

ChaosCoefficientEstimate estimate_chaos_coefficient(const PathFunctional& f,
                                                    const PathSampler& sampler,
                                                    const RectBasis& basis,
                                                    std::vector<int> box_ids,
                                                    std::uint64_t n_samples, unsigned n_threads) {
    return estimate_chaos_coefficients(f, sampler, basis, {{std::move(box_ids)}}, n_samples,
                                       n_threads)[0];
}

ChaosCoefficientEstimate estimate_chaos_coefficient(
    const PathFunctional& f, const RectBasis& basis, std::vector<int> box_ids,
    const LevyTriplet& triplet, std::shared_ptr<const SectorPartition> partition, double horizon,
    std::uint64_t n_samples, std::uint64_t seed, unsigned n_threads) {
    const CanonicalSampler sampler(triplet, std::move(partition), horizon, seed);
    return estimate_chaos_coefficient(f, sampler, basis, std::move(box_ids), n_samples, n_threads);
}

}  // namespace levysim
