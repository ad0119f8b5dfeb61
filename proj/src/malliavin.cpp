#include "levysim/malliavin.hpp"

#include <algorithm>
#include <cmath>

#include "levysim/errors.hpp"

namespace levysim {

namespace {

void require_pure_jump(const LevyTriplet& triplet) {
    if (triplet.sigma != 0.0) {
        throw SigmaNotZero("difference-operator calculus requires sigma = 0");
    }
}

void require_valid_perturbation(const JumpList& omega, double r, double v) {
    if (v == 0.0) throw ZeroJump("derivative direction v must be nonzero");
    if (r < 0.0 || r >= omega.horizon()) {
        throw HorizonExceeded("derivative time r must lie in [0, horizon)");
    }
}

}  // namespace

double psi_derivative(const PathFunctional& f, const JumpList& omega, const LevyTriplet& triplet,
                      double r, double v) {
    require_pure_jump(triplet);
    require_valid_perturbation(omega, r, v);
    const double base = eval_functional(f, omega, triplet);
    const double shifted = eval_functional(f, add_jump(omega, r, v), triplet);
    return (shifted - base) / v;
}

double phi_derivative(const PathFunctional& f, const JumpList& omega, const LevyTriplet& triplet,
                      double r, double v) {
    require_pure_jump(triplet);
    require_valid_perturbation(omega, r, v);
    if (!f.is_cylindrical()) {
        throw NotCylindrical("shift quotient is defined on cylindrical functionals only");
    }
    const ScalarExpr& phi = f.tree().cylindrical_phi();
    const std::vector<double>& times = f.tree().cylindrical_times();

    const Path path(omega, triplet);
    std::vector<double> args(times.size());
    std::vector<double> shifted(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        args[i] = path.value(times[i]);
        shifted[i] = args[i] + (r <= times[i] ? v : 0.0);
    }
    return (phi.eval(shifted) - phi.eval(args)) / v;
}

DerivativeField derivative_field(const PathFunctional& f, const LevyTriplet& triplet,
                                 std::shared_ptr<const SectorPartition> partition, double horizon,
                                 std::span<const FieldPoint> grid, std::uint64_t n_samples,
                                 std::uint64_t seed, unsigned n_threads) {
    require_pure_jump(triplet);
    for (const auto& p : grid) {
        if (p.v == 0.0) throw ZeroJump("derivative grid contains v = 0");
        if (p.r < 0.0 || p.r >= horizon) {
            throw HorizonExceeded("derivative grid contains r outside [0, horizon)");
        }
        if (partition && partition->sector_index_of(p.v) < 0) {
            throw UnsupportedJumpSize("derivative grid contains v outside the covered support");
        }
    }

    DerivativeField field;
    field.grid.assign(grid.begin(), grid.end());
    field.stats = run_monte_carlo(
        n_samples, grid.size(), seed, streams::kDerivativeField, n_threads,
        [&](std::uint64_t, Rng& rng, std::span<double> out) {
            const JumpList omega = sample_jump_list(partition, horizon, rng);
            const double base = eval_functional(f, omega, triplet);
            for (std::size_t i = 0; i < field.grid.size(); ++i) {
                const FieldPoint& p = field.grid[i];
                const double shifted = eval_functional(f, add_jump(omega, p.r, p.v), triplet);
                out[i] = (shifted - base) / p.v;
            }
        });
    return field;
}

std::vector<FieldPoint> default_field_grid(const SectorPartition& partition, double horizon,
                                           int n_times) {
    std::vector<double> sizes;
    if (const auto* d = std::get_if<FiniteDiscreteMeasure>(&partition.measure())) {
        for (const auto& atom : d->atoms) {
            if (partition.sector_index_of(atom.size) >= 0) sizes.push_back(atom.size);
        }
    } else {
        for (const auto& sector : partition.sectors()) {
            sizes.push_back(sector_quantile(partition.measure(), sector, 0.5));
        }
    }
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

    std::vector<FieldPoint> grid;
    for (int i = 0; i < n_times; ++i) {
        const double r = (static_cast<double>(i) + 0.5) * horizon / static_cast<double>(n_times);
        for (double v : sizes) grid.push_back(FieldPoint{r, v});
    }
    return grid;
}

ChainRuleRow chain_rule_check(const ParametricFunctional& g, const PathFunctional& f,
                              const JumpList& omega, const LevyTriplet& triplet, double r,
                              double v, double tolerance) {
    require_pure_jump(triplet);
    require_valid_perturbation(omega, r, v);

    const PathFunctional composite = bind(g, f);
    const JumpList perturbed = add_jump(omega, r, v);
    const Path base_path(omega, triplet);
    const Path shifted_path(perturbed, triplet);

    const double y = eval_functional(f, base_path);
    const double dy = (eval_functional(f, shifted_path) - y) / v;
    const double y_star = y + v * dy;

    ChainRuleRow row;
    row.r = r;
    row.v = v;
    row.lhs = (eval_functional(composite, shifted_path) - eval_functional(composite, base_path)) / v;
    row.rhs_term1 =
        (parametric_eval(g, shifted_path, y_star) - parametric_eval(g, base_path, y_star)) / v;
    row.rhs_term2 = (parametric_eval(g, base_path, y_star) - parametric_eval(g, base_path, y)) / v;
    row.abs_err = std::abs(row.lhs - row.rhs_term1 - row.rhs_term2);

    if (row.abs_err > tolerance) {
        throw ToleranceExceeded("chain rule identity exceeded tolerance",
                                omega.to_json().dump(), r, v);
    }
    return row;
}

ChainRuleReport chain_rule_suite(const ParametricFunctional& g, const PathFunctional& f,
                                 const LevyTriplet& triplet,
                                 std::shared_ptr<const SectorPartition> partition, double horizon,
                                 std::uint64_t n_samples, std::uint64_t seed, double tolerance) {
    require_pure_jump(triplet);
    ChainRuleReport report;
    report.rows.reserve(n_samples);
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        Rng rng(derive_seed(seed, streams::kChainRule, i));
        const JumpList omega = sample_jump_list(partition, horizon, rng);
        const double r = rng.uniform(0.0, horizon);
        const double v = sample_supported_size(*partition, rng);
        ChainRuleRow row = chain_rule_check(g, f, omega, triplet, r, v, tolerance);
        row.sample_id = i;
        report.max_abs_err = std::max(report.max_abs_err, row.abs_err);
        report.rows.push_back(row);
    }
    return report;
}

D12Estimate d12_norm_estimate(std::span<const ChaosCoefficientEstimate> coefficients,
                              const RectBasis& basis) {
    double norm_sq = 0.0;
    double var = 0.0;
    for (const auto& est : coefficients) {
        const int n = est.order;
        double block = 1.0;  // m^{(x)n} measure of the box block
        for (int id : est.box_ids) block *= basis.measures[static_cast<std::size_t>(id)];
        double weight = block;
        for (int i = 2; i <= n + 1; ++i) weight *= i;  // (n+1)!
        for (int i = 2; i <= n; ++i) weight *= i;      // n! ordered arrangements of the tuple
        norm_sq += weight * est.estimate * est.estimate;
        // Delta method: se(c^2) ~ 2 |c| se(c).
        const double se = weight * 2.0 * std::abs(est.estimate) * est.std_error;
        var += se * se;
    }
    return D12Estimate{norm_sq, std::sqrt(var)};
}

}  // namespace levysim
