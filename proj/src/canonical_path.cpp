#include "levysim/canonical_path.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "levysim/errors.hpp"

namespace levysim {

double BrownianComponent::value(double t) const {
    if (cumulative.empty() || t <= 0.0) return 0.0;
    const double pos = t / step;
    const std::size_t idx = static_cast<std::size_t>(pos);
    if (idx + 1 >= cumulative.size()) return cumulative.back();
    const double frac = pos - static_cast<double>(idx);
    return cumulative[idx] + frac * (cumulative[idx + 1] - cumulative[idx]);
}

BrownianComponent sample_brownian(double horizon, double step, Rng& rng) {
    const std::size_t n = static_cast<std::size_t>(std::ceil(horizon / step));
    BrownianComponent out;
    out.step = step;
    out.cumulative.resize(n + 1);
    out.cumulative[0] = 0.0;
    const double sd = std::sqrt(step);
    for (std::size_t i = 1; i <= n; ++i) {
        out.cumulative[i] = out.cumulative[i - 1] + rng.normal(0.0, sd);
    }
    return out;
}

JumpList::JumpList(std::shared_ptr<const SectorPartition> partition, double horizon,
                   std::vector<std::vector<Jump>> sector_jumps,
                   std::optional<BrownianComponent> brownian)
    : partition_(std::move(partition)),
      horizon_(horizon),
      sector_jumps_(std::move(sector_jumps)),
      brownian_(std::move(brownian)) {
    if (partition_ && sector_jumps_.size() != partition_->size()) {
        sector_jumps_.resize(partition_->size());
    }
}

std::size_t JumpList::total_jump_count() const {
    std::size_t n = 0;
    for (const auto& jumps : sector_jumps_) n += jumps.size();
    return n;
}

nlohmann::json JumpList::to_json() const {
    nlohmann::json sectors = nlohmann::json::array();
    for (std::size_t k = 0; k < sector_jumps_.size(); ++k) {
        nlohmann::json jumps = nlohmann::json::array();
        for (const auto& j : sector_jumps_[k]) {
            jumps.push_back({j.time, j.size});
        }
        sectors.push_back({{"k", k + 1}, {"jumps", std::move(jumps)}});
    }
    return {{"horizon", horizon_}, {"sectors", std::move(sectors)}};
}

JumpList JumpList::from_json(const nlohmann::json& doc,
                             std::shared_ptr<const SectorPartition> partition) {
    const double horizon = doc.at("horizon").get<double>();
    std::vector<std::vector<Jump>> sector_jumps(partition ? partition->size() : 0);
    for (const auto& sector : doc.at("sectors")) {
        const std::size_t k = sector.at("k").get<std::size_t>();
        if (k == 0 || k > sector_jumps.size()) {
            sector_jumps.resize(std::max(sector_jumps.size(), k));
        }
        auto& jumps = sector_jumps[k - 1];
        for (const auto& pair : sector.at("jumps")) {
            jumps.push_back(Jump{pair.at(0).get<double>(), pair.at(1).get<double>()});
        }
    }
    return JumpList(std::move(partition), horizon, std::move(sector_jumps));
}

JumpList sample_jump_list(std::shared_ptr<const SectorPartition> partition, double horizon,
                          Rng& rng) {
    if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
    std::vector<std::vector<Jump>> sector_jumps(partition ? partition->size() : 0);
    if (!partition || partition->empty()) {
        return JumpList(std::move(partition), horizon, std::move(sector_jumps));
    }
    for (std::size_t k = 0; k < partition->size(); ++k) {
        const Sector& sector = partition->sectors()[k];
        const std::int64_t count = rng.poisson(sector.mass * horizon);

        std::set<double> times;
        while (static_cast<std::int64_t>(times.size()) < count) {
            // std::set insertion rejects duplicates, re-drawing the collision.
            times.insert(rng.uniform(0.0, horizon));
        }
        auto& jumps = sector_jumps[k];
        jumps.reserve(times.size());
        for (double t : times) jumps.push_back(Jump{t, 0.0});
        for (auto& j : jumps) j.size = sample_size_in_sector(partition->measure(), sector, rng);
    }
    return JumpList(std::move(partition), horizon, std::move(sector_jumps));
}

JumpList sample_jump_list(std::shared_ptr<const SectorPartition> partition, double horizon,
                          std::uint64_t seed) {
    Rng rng(seed);
    return sample_jump_list(std::move(partition), horizon, rng);
}

double evaluate_path(const JumpList& omega, const LevyTriplet& triplet, double t) {
    if (t < 0.0 || t > omega.horizon() + 1e-12) {
        throw HorizonExceeded("path evaluation time outside [0, horizon]");
    }
    double value = triplet.gamma * t;
    const auto& partition = omega.partition();
    for (std::size_t k = 0; k < omega.sector_jumps().size(); ++k) {
        for (const auto& j : omega.sector_jumps()[k]) {
            if (j.time <= t) value += j.size;
        }
        if (partition && k < partition->size() && partition->sectors()[k].compensated) {
            value -= t * partition->sectors()[k].drift;
        }
    }
    if (triplet.sigma > 0.0 && omega.brownian()) {
        value += triplet.sigma * omega.brownian()->value(t);
    }
    return value;
}

JumpList add_jump(const JumpList& omega, double r, double v) {
    if (v == 0.0) throw ZeroJump("perturbation size must be nonzero");
    if (r < 0.0 || r >= omega.horizon()) {
        throw HorizonExceeded("perturbation time must lie in [0, horizon)");
    }
    const auto& partition = omega.partition();
    const int k = partition ? partition->sector_index_of(v) : -1;
    if (k < 0) {
        throw UnsupportedJumpSize("jump size outside the partition's covered support");
    }
    std::vector<std::vector<Jump>> sector_jumps = omega.sector_jumps();
    auto& jumps = sector_jumps[static_cast<std::size_t>(k)];
    const auto pos = std::upper_bound(jumps.begin(), jumps.end(), r,
                                      [](double t, const Jump& j) { return t < j.time; });
    jumps.insert(pos, Jump{r, v});
    return JumpList(partition, omega.horizon(), std::move(sector_jumps), omega.brownian());
}

Path::Path(const JumpList& omega, const LevyTriplet& triplet) {
    horizon_ = omega.horizon();
    sigma_ = triplet.sigma;
    slope_ = triplet.gamma;
    const auto& partition = omega.partition();
    if (partition) slope_ -= partition->compensator_drift();

    std::vector<Jump> merged;
    merged.reserve(omega.total_jump_count());
    for (const auto& jumps : omega.sector_jumps()) {
        merged.insert(merged.end(), jumps.begin(), jumps.end());
    }
    std::sort(merged.begin(), merged.end(),
              [](const Jump& a, const Jump& b) { return a.time < b.time; });

    times_.reserve(merged.size());
    cumsums_.reserve(merged.size());
    double sum = 0.0;
    for (const auto& j : merged) {
        sum += j.size;
        times_.push_back(j.time);
        cumsums_.push_back(sum);
    }
    if (sigma_ > 0.0 && omega.brownian()) brownian_ = &*omega.brownian();
}

void Path::check_time(double t) const {
    if (t < 0.0 || t > horizon_ + 1e-12) {
        throw HorizonExceeded("path evaluation time outside [0, horizon]");
    }
}

double Path::jump_sum_at(double t) const {
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    if (it == times_.begin()) return 0.0;
    return cumsums_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

double Path::value(double t) const {
    check_time(t);
    double v = slope_ * t + jump_sum_at(t);
    if (brownian_) v += sigma_ * brownian_->value(t);
    return v;
}

double Path::running_sup(double tau) const {
    check_time(tau);
    // Between events the path is affine, so the sup is attained at an event
    // time, at a left limit just before one, or at an endpoint.
    double best = value(0.0);
    auto consider_segment = [&](double a, double b, double jump_sum) {
        // Path on [a, b): slope_ * t + jump_sum (+ Brownian, affine between
        // its own grid points which are appended below when present).
        const double at_a = slope_ * a + jump_sum + (brownian_ ? sigma_ * brownian_->value(a) : 0.0);
        const double at_b = slope_ * b + jump_sum + (brownian_ ? sigma_ * brownian_->value(b) : 0.0);
        best = std::max({best, at_a, at_b});
    };

    std::vector<double> events;
    events.push_back(0.0);
    for (double t : times_) {
        if (t <= tau) events.push_back(t);
    }
    if (brownian_) {
        for (double g = brownian_->step; g < tau; g += brownian_->step) events.push_back(g);
    }
    events.push_back(tau);
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());

    for (std::size_t i = 0; i + 1 < events.size(); ++i) {
        const double a = events[i];
        const double b = events[i + 1];
        consider_segment(a, b, jump_sum_at(a));
    }
    best = std::max(best, value(tau));
    return best;
}

double Path::time_integral(double tau) const {
    check_time(tau);
    std::vector<double> events;
    events.push_back(0.0);
    for (double t : times_) {
        if (t < tau) events.push_back(t);
    }
    if (brownian_) {
        for (double g = brownian_->step; g < tau; g += brownian_->step) events.push_back(g);
    }
    events.push_back(tau);
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());

    // Exact trapezoid per affine segment [e_i, e_{i+1}): the right endpoint
    // uses the left limit, i.e. the same jump sum as the left endpoint.
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < events.size(); ++i) {
        const double a = events[i];
        const double b = events[i + 1];
        const double jump_sum = jump_sum_at(a);
        const double at_a = slope_ * a + jump_sum + (brownian_ ? sigma_ * brownian_->value(a) : 0.0);
        const double at_b = slope_ * b + jump_sum + (brownian_ ? sigma_ * brownian_->value(b) : 0.0);
        integral += 0.5 * (at_a + at_b) * (b - a);
    }
    return integral;
}

}  // namespace levysim
