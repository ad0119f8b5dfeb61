#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include <json.hpp>

#include "levysim/levy_model.hpp"
#include "levysim/rng.hpp"

namespace levysim {

struct Jump {
    double time = 0.0;
    double size = 0.0;

    friend bool operator==(const Jump&, const Jump&) = default;
};

/// Grid Brownian component: i.i.d. centered Gaussian increments of variance
/// `step`, with linear interpolation between grid points (documented
/// approximation). W(0) = 0.
struct BrownianComponent {
    double step = 0.0;
    std::vector<double> cumulative;  // W at grid points 0, step, 2*step, ...

    double value(double t) const;

    friend bool operator==(const BrownianComponent&, const BrownianComponent&) = default;
};

BrownianComponent sample_brownian(double horizon, double step, Rng& rng);

/// A canonical sample point: per sector, the finite sorted list of
/// (time, size) pairs on [0, horizon). The empty list is the element alpha.
/// Immutable; perturbations return fresh values.
class JumpList {
  public:
    JumpList() = default;
    JumpList(std::shared_ptr<const SectorPartition> partition, double horizon,
             std::vector<std::vector<Jump>> sector_jumps,
             std::optional<BrownianComponent> brownian = std::nullopt);

    double horizon() const { return horizon_; }
    const std::shared_ptr<const SectorPartition>& partition() const { return partition_; }
    const std::vector<std::vector<Jump>>& sector_jumps() const { return sector_jumps_; }
    const std::optional<BrownianComponent>& brownian() const { return brownian_; }

    std::size_t total_jump_count() const;
    bool empty() const { return total_jump_count() == 0; }

    /// Wire format: {"horizon": T, "sectors": [{"k": 1, "jumps": [[t, x], ...]}, ...]}.
    nlohmann::json to_json() const;
    static JumpList from_json(const nlohmann::json& doc,
                              std::shared_ptr<const SectorPartition> partition);

    friend bool operator==(const JumpList& a, const JumpList& b) {
        return a.horizon_ == b.horizon_ && a.sector_jumps_ == b.sector_jumps_ &&
               a.brownian_ == b.brownian_;
    }

  private:
    std::shared_ptr<const SectorPartition> partition_;
    double horizon_ = 0.0;
    std::vector<std::vector<Jump>> sector_jumps_;  // one list per sector, sorted by time
    std::optional<BrownianComponent> brownian_;
};

/// Samples a canonical jump list: per sector k, a Poisson(mass_k * T) count,
/// i.i.d. Uniform[0, T) times and i.i.d. Q_k sizes. Deterministic per seed.
/// Colliding times within a sector are re-drawn to keep strict ordering.
JumpList sample_jump_list(std::shared_ptr<const SectorPartition> partition, double horizon,
                          Rng& rng);
JumpList sample_jump_list(std::shared_ptr<const SectorPartition> partition, double horizon,
                          std::uint64_t seed);

/// X_t(omega): gamma*t + sigma*W_t + compensated small-jump sums + raw big-jump
/// sum. Right-continuous; a jump at time s contributes for all t >= s.
/// Throws HorizonExceeded for t outside [0, horizon].
double evaluate_path(const JumpList& omega, const LevyTriplet& triplet, double t);

/// omega_{r,v}: a fresh jump list with the extra jump (r, v) inserted in time
/// order into the sector containing v. For every t,
///   evaluate_path(omega_{r,v}, t) = evaluate_path(omega, t) + v * 1_{[0,t]}(r).
JumpList add_jump(const JumpList& omega, double r, double v);

/// Merged path evaluator for repeated queries against one (omega, triplet)
/// pair. The path is affine between consecutive events (jump times and, when
/// present, Brownian grid points), which makes sups and time integrals exact.
class Path {
  public:
    Path(const JumpList& omega, const LevyTriplet& triplet);

    double value(double t) const;
    double running_sup(double tau) const;
    double time_integral(double tau) const;
    double horizon() const { return horizon_; }

  private:
    double slope_ = 0.0;  // gamma minus the total compensator drift
    double horizon_ = 0.0;
    double sigma_ = 0.0;
    std::vector<double> times_;    // sorted jump times
    std::vector<double> cumsums_;  // cumulative jump sums after each time
    const BrownianComponent* brownian_ = nullptr;

    double jump_sum_at(double t) const;
    void check_time(double t) const;
};

}  // namespace levysim
