#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "levysim/chaos.hpp"
#include "levysim/config.hpp"
#include "levysim/errors.hpp"
#include "levysim/malliavin.hpp"
#include "levysim/transfer.hpp"

namespace levysim {

namespace {

using nlohmann::json;

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string ids_to_string(const std::vector<int>& ids) {
    if (ids.empty()) return "-";
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out += ';';
        out += std::to_string(ids[i]);
    }
    return out;
}

class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, const ExperimentConfig& cfg,
              const std::string& suite, const std::string& header) {
        out_.open(path);
        if (!out_) throw Error("cannot write artifact: " + path.string());
        out_ << "# suite=" << suite << " config_hash=" << cfg.hash() << " seed=" << cfg.seed
             << "\n";
        out_ << header << "\n";
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << "\n";
    }

  private:
    std::ofstream out_;
};

std::shared_ptr<const SectorPartition> make_partition(const ExperimentConfig& cfg) {
    if (total_mass(cfg.triplet.nu) <= 0.0) {
        // Degenerate measure: the sample space only contains the empty list.
        return std::make_shared<const SectorPartition>();
    }
    return std::make_shared<const SectorPartition>(
        SectorPartition::build(cfg.triplet.nu, cfg.partition_sectors, cfg.partition_eps_min));
}

double brownian_step_of(const ExperimentConfig& cfg) {
    if (cfg.triplet.sigma <= 0.0) return 0.0;
    return cfg.brownian_step > 0.0 ? cfg.brownian_step : cfg.horizon / 1024.0;
}

SuiteResult finish(const ExperimentConfig& cfg, const std::string& out_dir,
                   const std::string& suite, bool pass, json metrics) {
    SuiteResult result;
    result.pass = pass;
    result.summary = {{"suite", suite},
                      {"pass", pass},
                      {"metrics", std::move(metrics)},
                      {"config_hash", cfg.hash()},
                      {"seed", cfg.seed}};
    std::ofstream out(std::filesystem::path(out_dir) / "summary.json");
    out << result.summary.dump(2) << "\n";
    return result;
}

const PathFunctional& require_functional(const ExperimentConfig& cfg, const std::string& suite) {
    if (!cfg.functional) {
        throw ConfigInvalid("missing key 'functional' in config (required by " + suite + ")");
    }
    return *cfg.functional;
}

}  // namespace

SuiteResult run_simulate_suite(const ExperimentConfig& cfg, const std::string& out_dir,
                               unsigned threads) {
    (void)threads;  // path emission is sequential by construction
    if (!cfg.simulate) throw ConfigInvalid("missing key 'simulate' in config");
    std::filesystem::create_directories(out_dir);

    const auto partition = make_partition(cfg);
    const CanonicalSampler sampler(cfg.triplet, partition, cfg.horizon, cfg.seed,
                                   brownian_step_of(cfg));
    const int grid_points = cfg.simulate->grid_points;

    CsvWriter csv(std::filesystem::path(out_dir) / "paths.csv", cfg, "simulate",
                  "sample,t,value");
    Accumulator terminal;
    for (std::uint64_t i = 0; i < cfg.simulate->n_paths; ++i) {
        const JumpList omega = sampler.sample(i);
        const Path path(omega, cfg.triplet);
        for (int g = 0; g <= grid_points; ++g) {
            const double t = cfg.horizon * static_cast<double>(g) / grid_points;
            csv.row({std::to_string(i), fmt(t), fmt(path.value(t))});
        }
        terminal.add(path.value(cfg.horizon));
    }

    json metrics{{"n_paths", cfg.simulate->n_paths},
                 {"grid_points", grid_points},
                 {"terminal_mean", terminal.mean},
                 {"small_jump_variance", partition->empty() ? 0.0 : partition->small_jump_variance()}};
    return finish(cfg, out_dir, "simulate", true, std::move(metrics));
}

SuiteResult run_derivative_suite(const ExperimentConfig& cfg, const std::string& out_dir,
                                 unsigned threads) {
    if (!cfg.derivative) throw ConfigInvalid("missing key 'derivative' in config");
    const PathFunctional& f = require_functional(cfg, "derivative");
    std::filesystem::create_directories(out_dir);

    const auto partition = make_partition(cfg);
    std::vector<FieldPoint> grid;
    if (!cfg.derivative->r_values.empty() || !cfg.derivative->v_values.empty()) {
        std::vector<double> rs = cfg.derivative->r_values;
        if (rs.empty()) {
            for (int i = 0; i < cfg.derivative->r_count; ++i) {
                rs.push_back((i + 0.5) * cfg.horizon / cfg.derivative->r_count);
            }
        }
        std::vector<double> vs = cfg.derivative->v_values;
        if (vs.empty()) {
            for (const auto& p : default_field_grid(*partition, cfg.horizon, 1)) {
                vs.push_back(p.v);
            }
        }
        for (double r : rs) {
            for (double v : vs) grid.push_back(FieldPoint{r, v});
        }
    } else {
        grid = default_field_grid(*partition, cfg.horizon, cfg.derivative->r_count);
    }

    const DerivativeField field = derivative_field(f, cfg.triplet, partition, cfg.horizon, grid,
                                                   cfg.derivative->n_samples, cfg.seed, threads);

    CsvWriter csv(std::filesystem::path(out_dir) / "derivative_field.csv", cfg, "derivative",
                  "r,v,mean,stderr,n_samples");
    double max_stderr = 0.0;
    for (std::size_t i = 0; i < field.grid.size(); ++i) {
        const auto& acc = field.stats[i];
        max_stderr = std::max(max_stderr, acc.stderr_of_mean());
        csv.row({fmt(field.grid[i].r), fmt(field.grid[i].v), fmt(acc.mean),
                 fmt(acc.stderr_of_mean()), std::to_string(acc.count)});
    }

    json metrics{{"n_points", field.grid.size()},
                 {"n_samples", cfg.derivative->n_samples},
                 {"max_stderr", max_stderr}};
    return finish(cfg, out_dir, "derivative", true, std::move(metrics));
}

SuiteResult run_chain_check_suite(const ExperimentConfig& cfg, const std::string& out_dir,
                                  unsigned threads) {
    (void)threads;  // row loop is already cheap; kept sequential for replayability
    if (!cfg.chain_check) throw ConfigInvalid("missing key 'chain_check' in config");
    const PathFunctional& f = require_functional(cfg, "chain_check");
    std::filesystem::create_directories(out_dir);

    const auto partition = make_partition(cfg);
    json metrics{{"n_samples", cfg.chain_check->n_samples},
                 {"tolerance", cfg.chain_check->tolerance}};
    try {
        const ChainRuleReport report =
            chain_rule_suite(cfg.chain_check->g, f, cfg.triplet, partition, cfg.horizon,
                             cfg.chain_check->n_samples, cfg.seed, cfg.chain_check->tolerance);
        CsvWriter csv(std::filesystem::path(out_dir) / "chain_rule.csv", cfg, "chain-check",
                      "sample_id,r,v,lhs,rhs1,rhs2,abs_err");
        for (const auto& row : report.rows) {
            csv.row({std::to_string(row.sample_id), fmt(row.r), fmt(row.v), fmt(row.lhs),
                     fmt(row.rhs_term1), fmt(row.rhs_term2), fmt(row.abs_err)});
        }
        metrics["max_abs_err"] = report.max_abs_err;
        return finish(cfg, out_dir, "chain-check", true, std::move(metrics));
    } catch (const ToleranceExceeded& e) {
        metrics["failing_row"] = {{"r", e.r()}, {"v", e.v()}, {"omega", e.omega_json()}};
        return finish(cfg, out_dir, "chain-check", false, std::move(metrics));
    }
}

SuiteResult run_chaos_suite(const ExperimentConfig& cfg, const std::string& out_dir,
                            unsigned threads) {
    if (!cfg.chaos) throw ConfigInvalid("missing key 'chaos' in config");
    const PathFunctional& f = require_functional(cfg, "chaos");
    std::filesystem::create_directories(out_dir);

    const auto partition = make_partition(cfg);
    const RectBasis basis = RectBasis::make(cfg.chaos->boxes, ControlMeasure{cfg.triplet, cfg.horizon});
    std::vector<std::vector<int>> tuples;
    for (int order : cfg.chaos->orders) {
        auto t = coefficient_tuples(basis.boxes.size(), order);
        tuples.insert(tuples.end(), t.begin(), t.end());
    }

    const CanonicalSampler sampler(cfg.triplet, partition, cfg.horizon, cfg.seed,
                                   brownian_step_of(cfg));
    const auto estimates =
        estimate_chaos_coefficients(f, sampler, basis, tuples, cfg.chaos->n_samples, threads);

    CsvWriter csv(std::filesystem::path(out_dir) / "chaos_coefficients.csv", cfg, "chaos",
                  "order,box_ids,estimate,stderr,n_samples");
    for (const auto& est : estimates) {
        csv.row({std::to_string(est.order), ids_to_string(est.box_ids), fmt(est.estimate),
                 fmt(est.std_error), std::to_string(est.n_samples)});
    }

    json metrics{{"n_estimates", estimates.size()}, {"n_samples", cfg.chaos->n_samples}};
    return finish(cfg, out_dir, "chaos", true, std::move(metrics));
}

SuiteResult run_transfer_suite(const ExperimentConfig& cfg, const std::string& out_dir,
                               unsigned threads) {
    if (!cfg.transfer) throw ConfigInvalid("missing key 'transfer' in config");
    const PathFunctional& f = require_functional(cfg, "transfer");
    std::filesystem::create_directories(out_dir);

    const auto partition = make_partition(cfg);
    const RectBasis basis =
        RectBasis::make(cfg.transfer->boxes, ControlMeasure{cfg.triplet, cfg.horizon});

    const CanonicalSampler canonical(cfg.triplet, partition, cfg.horizon,
                                     derive_seed(cfg.seed, streams::kTransfer, 1),
                                     brownian_step_of(cfg));
    const IncrementSampler increment(cfg.triplet, partition, cfg.horizon,
                                     derive_seed(cfg.seed, streams::kTransfer, 2),
                                     cfg.transfer->rate_corruption, brownian_step_of(cfg));

    const TransferReport report = run_transfer_test(f, canonical, increment, basis,
                                                    cfg.transfer->orders,
                                                    cfg.transfer->n_samples, threads);

    CsvWriter csv(std::filesystem::path(out_dir) / "transfer.csv", cfg, "transfer",
                  "order,box_ids,c1,se1,c2,se2,z,pass");
    double z_max = 0.0;
    for (const auto& row : report.rows) {
        z_max = std::max(z_max, row.z);
        csv.row({std::to_string(row.order), ids_to_string(row.box_ids), fmt(row.c1), fmt(row.se1),
                 fmt(row.c2), fmt(row.se2), fmt(row.z), row.pass ? "1" : "0"});
    }

    bool pass = report.pass;
    json metrics{{"rows", report.rows.size()},
                 {"pass_count", report.pass_count},
                 {"z_max", z_max}};

    if (cfg.transfer->field_times > 0) {
        const auto grid = default_field_grid(*partition, cfg.horizon, cfg.transfer->field_times);
        const FieldTransferReport field =
            run_field_transfer_test(derivative_family(f), canonical, increment, basis, grid,
                                    cfg.transfer->orders, cfg.transfer->n_samples, threads);
        CsvWriter field_csv(std::filesystem::path(out_dir) / "field_transfer.csv", cfg, "transfer",
                            "r,v,order,box_ids,c1,se1,c2,se2,z,pass");
        for (const auto& point : field.points) {
            for (const auto& row : point.report.rows) {
                field_csv.row({fmt(point.point.r), fmt(point.point.v), std::to_string(row.order),
                               ids_to_string(row.box_ids), fmt(row.c1), fmt(row.se1), fmt(row.c2),
                               fmt(row.se2), fmt(row.z), row.pass ? "1" : "0"});
            }
        }
        metrics["field_rows"] = field.row_count;
        metrics["field_pass_count"] = field.pass_count;
        pass = pass && field.pass;
    }

    return finish(cfg, out_dir, "transfer", pass, std::move(metrics));
}

}  // namespace levysim
